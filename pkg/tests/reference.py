"""Small, slow, independent reference implementations used as test oracles.

Everything here is written directly from the operational definitions, with
no code shared with the package: list-based scans, full recounts per round,
quadratic searches.
"""
from __future__ import annotations


def ref_window_hash(window, base: int, modulus: int) -> int:
    h = 0
    for v in window:
        h = (h * base + v) % modulus
    return h


def ref_ctph(values, w: int, p: int, base: int, modulus: int):
    """Scalar chunker: cut after positions where the window hash triggers.

    A position e is eligible only once the current block spans a full
    window (e >= block_start + w - 1).  The final partial block is kept.
    Returns (blocks, ids, starts): distinct blocks in first-appearance
    order, the block-ID sequence, and each occurrence's start offset.
    """
    values = list(values)
    n = len(values)
    blocks: list[tuple] = []
    index: dict[tuple, int] = {}
    ids: list[int] = []
    starts: list[int] = []
    bs = 0
    for e in range(n):
        if e - bs + 1 < w:
            continue
        h = ref_window_hash(values[e - w + 1 : e + 1], base, modulus)
        if h % p == 0:
            blk = tuple(values[bs : e + 1])
            if blk not in index:
                index[blk] = len(blocks)
                blocks.append(blk)
            ids.append(index[blk])
            starts.append(bs)
            bs = e + 1
    if bs < n:
        blk = tuple(values[bs:n])
        if blk not in index:
            index[blk] = len(blocks)
            blocks.append(blk)
        ids.append(index[blk])
        starts.append(bs)
    return blocks, ids, starts


def ref_repair(values, num_terminals: int):
    """Pair replacement with a full recount every round.

    Non-overlapping left-to-right pair counting; the winner is the highest
    count, ties broken by earliest first counted occurrence, then by the
    smaller (left, right) pair.  Stops when no pair occurs twice.
    Returns (rules, top) with rule i named num_terminals + i.
    """
    seq = list(values)
    rules: list[tuple[int, int]] = []
    while True:
        counts: dict[tuple[int, int], int] = {}
        first: dict[tuple[int, int], int] = {}
        i = 0
        while i + 1 < len(seq):
            pair = (seq[i], seq[i + 1])
            counts[pair] = counts.get(pair, 0) + 1
            if pair not in first:
                first[pair] = i
            if seq[i] == seq[i + 1]:
                # non-overlapping: a run "aaa" counts (a,a) once
                j = i
                while j + 1 < len(seq) and seq[j + 1] == seq[i]:
                    j += 1
                run = j - i + 1
                extra = run // 2 - 1
                if extra > 0:
                    counts[pair] += extra
                i = j
            else:
                i += 1
        best = None
        for pair, cnt in counts.items():
            if cnt < 2:
                continue
            key = (-cnt, first[pair], pair)
            if best is None or key < best[0]:
                best = (key, pair)
        if best is None:
            break
        (a, b) = best[1]
        sym = num_terminals + len(rules)
        rules.append((a, b))
        out: list[int] = []
        i = 0
        while i < len(seq):
            if i + 1 < len(seq) and seq[i] == a and seq[i + 1] == b:
                out.append(sym)
                i += 2
            else:
                out.append(seq[i])
                i += 1
        seq = out
    return rules, seq


def ref_expand(rules, top, num_terminals: int) -> list[int]:
    memo: dict[int, list[int]] = {}

    def grow(s: int) -> list[int]:
        if s < num_terminals:
            return [s]
        if s not in memo:
            left, right = rules[s - num_terminals]
            memo[s] = grow(left) + grow(right)
        return memo[s]

    out: list[int] = []
    for s in top:
        out.extend(grow(s))
    return out


def ref_lzss(values) -> list[tuple]:
    """Greedy left-to-right overlap parse; ('lit', ch) or ('copy', len, src).

    At each position take the longest prefix of the rest that also occurs
    starting strictly earlier (overlap with the current position allowed),
    preferring the leftmost source; a first-occurrence character is a
    literal.  0-based sources.
    """
    s = list(values)
    n = len(s)
    out: list[tuple] = []
    i = 0
    while i < n:
        best_len = 0
        best_src = -1
        for j in range(i):
            m = 0
            while i + m < n and s[j + m] == s[i + m]:
                m += 1
            if m > best_len:
                best_len = m
                best_src = j
        if best_len == 0:
            out.append(("lit", s[i]))
            i += 1
        else:
            out.append(("copy", best_len, best_src))
            i += best_len
    return out


def ref_lz77(values) -> list[tuple]:
    """Longest previous factor plus one mismatch; final phrase may lack it.

    ('lit', ch) for factor length 0, else ('copy', len, src, mismatch) with
    mismatch None only when the factor reaches the end.  0-based sources.
    """
    s = list(values)
    n = len(s)
    out: list[tuple] = []
    i = 0
    while i < n:
        best_len = 0
        best_src = -1
        for j in range(i):
            m = 0
            while i + m < n and s[j + m] == s[i + m]:
                m += 1
            if m > best_len:
                best_len = m
                best_src = j
        if best_len == 0:
            out.append(("lit", s[i]))
            i += 1
        elif i + best_len < n:
            out.append(("copy", best_len, best_src, s[i + best_len]))
            i += best_len + 1
        else:
            out.append(("copy", best_len, best_src, None))
            i += best_len
    return out
