"""Deterministic input generators for tests, benchmarks, and verification.

Everything is seeded through numpy's Generator, so the same arguments always
produce the same bytes on every platform.
"""
from __future__ import annotations

from typing import Iterator

import numpy as np

_WORDS = (
    b"the quick brown fox jumps over a lazy dog while rain falls on "
    b"green hills and small rivers carry cold water past old stone walls"
).split()


def random_bytes(n: int, seed: int = 0) -> bytes:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, n, dtype=np.uint8).tobytes()


def unary_run(n: int, symbol: int = 97) -> bytes:
    return bytes([symbol]) * n


def periodic(n: int, period: int = 7, alphabet: int = 4, seed: int = 0) -> bytes:
    rng = np.random.default_rng(seed)
    unit = rng.integers(97, 97 + alphabet, max(period, 1), dtype=np.uint8)
    reps = n // max(period, 1) + 1
    return np.tile(unit, reps)[:n].tobytes()


def sparse_bytes(n: int, density: float = 0.02, seed: int = 0) -> bytes:
    """Mostly zero bytes with occasional random values."""
    rng = np.random.default_rng(seed)
    out = np.zeros(n, dtype=np.uint8)
    hits = rng.random(n) < density
    out[hits] = rng.integers(1, 256, int(hits.sum()), dtype=np.uint8)
    return out.tobytes()


def text_like(n: int, seed: int = 0) -> bytes:
    rng = np.random.default_rng(seed)
    parts: list[bytes] = []
    size = 0
    while size < n:
        w = _WORDS[int(rng.integers(0, len(_WORDS)))]
        parts.append(w)
        parts.append(b" ")
        size += len(w) + 1
    return b"".join(parts)[:n]


def mutate(data: bytes, rate: float, rng: np.random.Generator) -> bytes:
    """Copy of data with i.i.d. byte substitutions at the given rate."""
    arr = np.frombuffer(data, dtype=np.uint8).copy()
    hits = np.nonzero(rng.random(len(arr)) < rate)[0]
    if len(hits):
        arr[hits] = rng.integers(0, 256, len(hits), dtype=np.uint8)
    return arr.tobytes()


def mutated_copies_stream(
    seed_data: bytes, copies: int, rate: float, seed: int = 0
) -> Iterator[bytes]:
    """Yield `copies` independently mutated copies of seed_data."""
    rng = np.random.default_rng(seed)
    for _ in range(copies):
        yield mutate(seed_data, rate, rng)


def mutated_copies(
    seed_data: bytes, copies: int, rate: float, seed: int = 0
) -> bytes:
    return b"".join(mutated_copies_stream(seed_data, copies, rate, seed))


_KINDS = ("random", "unary", "periodic", "sparse", "text", "mutated")


def _case_bytes(kind: str, n: int, seed: int) -> bytes:
    if kind == "random":
        return random_bytes(n, seed)
    if kind == "unary":
        return unary_run(n, 97 + seed % 26)
    if kind == "periodic":
        return periodic(n, period=2 + seed % 11, alphabet=2 + seed % 5, seed=seed)
    if kind == "sparse":
        return sparse_bytes(n, density=0.01 + 0.04 * ((seed % 7) / 7.0), seed=seed)
    if kind == "text":
        return text_like(n, seed)
    if kind == "mutated":
        unit = max(n // 8, 1)
        base = text_like(unit, seed) if seed % 2 else random_bytes(unit, seed)
        rng = np.random.default_rng(seed + 1)
        return mutated_copies(base, 8, 1e-3, seed)[:n] if n else b""
    raise ValueError(f"unknown kind {kind!r}")


def standard_cases(
    count: int, seed: int = 0, max_length: int = 1_000_000
) -> Iterator[tuple[str, bytes]]:
    """Yield (name, data) pairs skewed toward short inputs.

    The first cases are fixed edge shapes (empty, single bytes, tiny runs,
    lengths straddling common window sizes); the rest mix generator kinds
    with lengths drawn log-uniformly up to max_length.
    """
    fixed: list[tuple[str, bytes]] = [
        ("empty", b""),
        ("one", b"a"),
        ("two-eq", b"aa"),
        ("two-ne", b"ab"),
        ("abab", b"abab"),
        ("aaaa", b"aaaa"),
        ("run-3", b"x" * 3),
        ("run-65", b"q" * 65),
        ("bytes-0-255", bytes(range(256))),
    ]
    for w in (4, 16, 64):
        for d in (-1, 0, 1):
            n = max(w + d, 0)
            fixed.append((f"len-{n}", bytes((i * 37 + 11) % 256 for i in range(n))))
    emitted = 0
    for name, data in fixed:
        if emitted >= count:
            return
        yield name, data
        emitted += 1
    rng = np.random.default_rng(seed)
    while emitted < count:
        kind = _KINDS[int(rng.integers(0, len(_KINDS)))]
        # log-uniform lengths, clipped; most cases stay small
        exp = rng.uniform(0, np.log10(max(max_length, 10)))
        n = int(10**exp)
        if rng.random() < 0.70:
            n = int(rng.integers(0, 2000))
        n = min(n, max_length)
        case_seed = int(rng.integers(0, 2**31 - 1))
        yield f"{kind}-{n}-{case_seed}", _case_bytes(kind, n, case_seed)
        emitted += 1
