"""Content-triggered piecewise chunking.

A rolling polynomial hash slides over the input; whenever the hash of the
last w symbols is 0 modulo p, the current block ends at that position.  A
trigger is only eligible once the current block holds at least w symbols, so
block boundaries depend solely on local content: identical regions in two
different strings chunk identically except near the region edges, which is
what makes the parse useful for deduplication.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence

import numpy as np

DEFAULT_WINDOW = 64
DEFAULT_MODULUS = 64
HASH_BASE = 256
HASH_PRIME = 1_000_000_007

# Internal chunk for the vectorized engine; small enough that scratch arrays
# stay well under the streaming memory contract.
_ENGINE_CHUNK = 1 << 18

# Split exponents into low/high 16-bit halves for table-driven modular powers.
_POW_TABLE_BITS = 16


@dataclass(frozen=True)
class CtphConfig:
    """Chunker parameters: window length w and trigger modulus p."""

    w: int = DEFAULT_WINDOW
    p: int = DEFAULT_MODULUS
    hash_base: int = HASH_BASE
    hash_modulus: int = HASH_PRIME

    def __post_init__(self) -> None:
        if self.w < 1:
            raise ValueError("window length must be >= 1")
        if self.p < 1:
            raise ValueError("trigger modulus must be >= 1")
        if not (1 < self.hash_base < self.hash_modulus):
            raise ValueError("need 1 < hash_base < hash_modulus")
        if self.hash_modulus > (1 << 31):
            raise ValueError("hash_modulus must fit 31 bits")


@dataclass
class Dictionary:
    """Distinct blocks in first-appearance order."""

    blocks: list[bytes] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def total_length(self) -> int:
        return sum(len(b) for b in self.blocks)


@dataclass
class RsyncParse:
    """Block-ID sequence plus the [start, end) span of each block in S."""

    ids: np.ndarray
    starts: np.ndarray
    ends: np.ndarray

    def __len__(self) -> int:
        return len(self.ids)


def window_hash(window: Sequence[int], config: CtphConfig) -> int:
    """Polynomial hash of one full window, computed from scratch.

    h = sum(window[i] * base^(w-1-i)) mod M.  The window must have exactly
    w symbols.
    """
    if len(window) != config.w:
        raise ValueError("window length does not match config.w")
    h = 0
    for v in window:
        h = (h * config.hash_base + int(v)) % config.hash_modulus
    return h


class RollingWindowHash:
    """Incremental form of window_hash: push one symbol, drop the oldest.

    Maintains the hash of the last w pushed symbols in O(1) per push.
    """

    def __init__(self, config: CtphConfig):
        self.config = config
        self._buf = [0] * config.w
        self._idx = 0
        self._count = 0
        self._hash = 0
        self._msb = pow(config.hash_base, config.w - 1, config.hash_modulus)

    @property
    def full(self) -> bool:
        return self._count >= self.config.w

    @property
    def value(self) -> int:
        if not self.full:
            raise ValueError("window not yet full")
        return self._hash

    def push(self, symbol: int) -> None:
        m = self.config.hash_modulus
        old = self._buf[self._idx]
        if self.full:
            self._hash = (self._hash - old * self._msb) % m
        self._hash = (self._hash * self.config.hash_base + symbol) % m
        self._buf[self._idx] = symbol
        self._idx = (self._idx + 1) % self.config.w
        self._count += 1

    def reset(self) -> None:
        self._buf = [0] * self.config.w
        self._idx = 0
        self._count = 0
        self._hash = 0


# ---------------------------------------------------------------------------
# vectorized trigger scan
# ---------------------------------------------------------------------------


class _PowerTables:
    """base^i mod M for arbitrary i via two lookup tables."""

    def __init__(self, base: int, modulus: int):
        self.modulus = modulus
        n = 1 << _POW_TABLE_BITS
        lo = np.empty(n, dtype=np.int64)
        lo[0] = 1
        for i in range(1, n):
            lo[i] = lo[i - 1] * base % modulus
        step = int(lo[n - 1]) * base % modulus
        hi = np.empty(n, dtype=np.int64)
        hi[0] = 1
        for i in range(1, n):
            hi[i] = hi[i - 1] * step % modulus
        self.lo = lo
        self.hi = hi

    def powers(self, exponents: np.ndarray) -> np.ndarray:
        lo = self.lo[exponents & ((1 << _POW_TABLE_BITS) - 1)]
        hi = self.hi[exponents >> _POW_TABLE_BITS]
        return lo * hi % self.modulus


_table_cache: dict[tuple[int, int], _PowerTables] = {}


def _tables_for(base: int, modulus: int) -> _PowerTables:
    key = (base, modulus)
    if key not in _table_cache:
        _table_cache[key] = _PowerTables(base, modulus)
    return _table_cache[key]


def _window_hashes(values: np.ndarray, config: CtphConfig) -> np.ndarray:
    """Hashes of every full window of values; entry e covers values[e-w+1..e].

    Entries below w-1 are set to -1 (no full window ends there).  Uses prefix
    polynomial sums so the whole scan is a handful of numpy passes:
    pre[j] = poly(values[:j]) = cumsum(values[t] * ib^(t+1)) * base^j, and
    h(i..i+w-1) = pre[i+w] - pre[i] * base^w.
    """
    w, m, base = config.w, config.hash_modulus, config.hash_base
    n = len(values)
    out = np.full(n, -1, dtype=np.int64)
    if n < w:
        return out
    pt = _tables_for(base, m)
    ipt = _tables_for(pow(base, -1, m), m)
    idx = np.arange(1, n + 1, dtype=np.int64)
    terms = (values % m) * ipt.powers(idx) % m
    # cumsum stays < n * m < 2^63 for n <= 2^32, then reduce once.
    csum = np.cumsum(terms) % m
    pre = np.empty(n + 1, dtype=np.int64)
    pre[0] = 0
    pre[1:] = csum * pt.powers(idx) % m
    bw = pow(base, w, m)
    out[w - 1 :] = (pre[w:] - pre[: n - w + 1] * bw) % m
    return out


# ---------------------------------------------------------------------------
# chunking engine
# ---------------------------------------------------------------------------


class _Chunker:
    """Streaming boundary scanner; feed value arrays, collect blocks.

    Works on integer sequences so the same engine serves byte inputs and
    block-ID sequences (recursive parses).  Boundaries are a pure function of
    the input values: feeding the same data in different chunk sizes yields
    identical output.
    """

    def __init__(self, config: CtphConfig, as_bytes: bool):
        self.config = config
        self.as_bytes = as_bytes
        self.pos = 0
        self.block_start = 0
        self.tail = None  # last w-1 values, for windows straddling feeds
        self.pending: list[np.ndarray] = []  # pieces of the current block
        self.table: dict = {}
        self.blocks: list = []
        self.ids: list[int] = []
        self.starts: list[int] = []

    def _emit(self, content: np.ndarray, start: int) -> None:
        if self.as_bytes:
            blk = content.astype(np.uint8).tobytes()
            key = blk
        else:
            blk = None
            key = content.tobytes()
        bid = self.table.get(key)
        if bid is None:
            bid = len(self.blocks)
            self.table[key] = bid
            self.blocks.append(blk if self.as_bytes else content.copy())
        self.ids.append(bid)
        self.starts.append(start)

    def feed(self, values: np.ndarray) -> None:
        cfg = self.config
        w = cfg.w
        n = len(values)
        if n == 0:
            return
        g0 = self.pos
        if self.tail is not None and len(self.tail):
            ext = np.concatenate([self.tail, values])
        else:
            ext = values
        ext_start = g0 - (len(ext) - n)
        hashes = _window_hashes(ext, cfg)
        trig_local = np.nonzero((hashes >= 0) & (hashes % cfg.p == 0))[0]
        # global end positions of triggering windows inside this feed
        trig = trig_local + ext_start
        trig = trig[trig >= g0]

        cuts = []
        bs = self.block_start
        lo = 0
        while True:
            lo = int(np.searchsorted(trig, bs + w - 1, side="left"))
            if lo == len(trig):
                break
            t = int(trig[lo])
            cuts.append(t)
            bs = t + 1
        self.block_start = bs

        if cuts:
            pieces = self.pending + [values]
            whole = pieces[0] if len(pieces) == 1 else np.concatenate(pieces)
            base = g0 - sum(len(p) for p in self.pending)
            prev = base
            start = base
            for t in cuts:
                self._emit(whole[prev - base : t + 1 - base], start)
                prev = t + 1
                start = t + 1
            rest = whole[prev - base :]
            self.pending = [rest.copy()] if len(rest) else []
        else:
            self.pending.append(values)

        self.pos = g0 + n
        if w > 1:
            self.tail = ext[-(w - 1) :].copy() if len(ext) >= w - 1 else ext.copy()

    def finish(self) -> None:
        if self.pending:
            whole = (
                self.pending[0]
                if len(self.pending) == 1
                else np.concatenate(self.pending)
            )
            self._emit(whole, self.block_start)
            self.pending = []


def _finalize(ch: _Chunker):
    ids = np.asarray(ch.ids, dtype=np.int64)
    starts = np.asarray(ch.starts, dtype=np.int64)
    lens = np.asarray([len(ch.blocks[i]) for i in ch.ids], dtype=np.int64)
    parse = RsyncParse(ids=ids, starts=starts, ends=starts + lens)
    if ch.as_bytes:
        return Dictionary(blocks=ch.blocks), parse
    return list(ch.blocks), parse


def parse_values(values: np.ndarray, config: CtphConfig):
    """Chunk an integer sequence; returns (blocks: list[np.ndarray], RsyncParse)."""
    values = np.ascontiguousarray(values, dtype=np.int64)
    ch = _Chunker(config, as_bytes=False)
    for off in range(0, len(values), _ENGINE_CHUNK):
        ch.feed(values[off : off + _ENGINE_CHUNK])
    ch.finish()
    return _finalize(ch)


def ctph_parse(data: bytes, config: CtphConfig | None = None):
    """Chunk a byte string into (Dictionary, RsyncParse)."""
    config = config or CtphConfig()
    return ctph_parse_stream(io.BytesIO(data), config, chunk_size=_ENGINE_CHUNK)


def ctph_parse_stream(
    stream: BinaryIO, config: CtphConfig | None = None, chunk_size: int = _ENGINE_CHUNK
):
    """Chunk a binary stream without materializing it.

    Memory is proportional to the dictionary plus the parse, not the input:
    only the distinct blocks, the ID sequence, and one in-flight block are
    held.  Output is identical to ctph_parse of the whole stream for any
    chunk_size >= 1.
    """
    config = config or CtphConfig()
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    ch = _Chunker(config, as_bytes=True)
    while True:
        piece = stream.read(chunk_size)
        if not piece:
            break
        arr = np.frombuffer(piece, dtype=np.uint8).astype(np.int64)
        for off in range(0, len(arr), _ENGINE_CHUNK):
            ch.feed(arr[off : off + _ENGINE_CHUNK])
    ch.finish()
    return _finalize(ch)


def build_dictionary_string(
    blocks: Iterable[Sequence[int] | bytes], num_terminals: int = 256
) -> np.ndarray:
    """Concatenate blocks with a unique separator after each one.

    Block i is followed by symbol num_terminals + i, so no separator ever
    repeats and no copy can span two blocks in any left-to-right parse.
    """
    parts: list[np.ndarray] = []
    count = 0
    for i, blk in enumerate(blocks):
        if isinstance(blk, (bytes, bytearray)):
            arr = np.frombuffer(bytes(blk), dtype=np.uint8).astype(np.int64)
        else:
            arr = np.ascontiguousarray(blk, dtype=np.int64)
        parts.append(arr)
        parts.append(np.array([num_terminals + i], dtype=np.int64))
        count += 1
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)
