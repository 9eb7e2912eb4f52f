"""Left-to-right factorizations and the chunked-parse mapping.

Two greedy parsers over integer sequences:

- lzss_parse: each phrase is either the first occurrence of a distinct
  symbol (a literal) or the longest prefix S[i..j] that also occurs starting
  before i (the source may overlap the phrase but ends strictly before it).
- lz77_parse: longest previous factor plus one mismatch symbol; the final
  phrase may lack the mismatch.  Phrase count is the classic z.

Copy sources are tie-broken to the leftmost occurrence, so both the
suffix-array path and the quadratic reference path produce identical output.

rparse builds an LZSS-like parse of S without ever factorizing S itself: it
chunks S, factorizes the much smaller dictionary string and block-ID
sequence, and maps those phrases onto S.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import njit
from .ctph import CtphConfig, build_dictionary_string, ctph_parse

SA_THRESHOLD = 10_000


@dataclass(frozen=True)
class Literal:
    """One explicit symbol at 1-based position pos."""

    pos: int
    char: int


@dataclass(frozen=True)
class Copy:
    """length symbols at pos copied from the earlier occurrence at src
    (1-based; the source may overlap the phrase).  lz77_parse appends the
    mismatching symbol that follows the copied part, stored in mismatch."""

    pos: int
    length: int
    src: int
    mismatch: int | None = None


Phrase = Literal | Copy


@dataclass
class ParseList:
    phrases: list
    n: int
    discarded: int = 0

    def __len__(self) -> int:
        return len(self.phrases)

    def __iter__(self):
        return iter(self.phrases)


def _as_values(seq) -> np.ndarray:
    if isinstance(seq, (bytes, bytearray)):
        return np.frombuffer(bytes(seq), dtype=np.uint8).astype(np.int64)
    return np.ascontiguousarray(seq, dtype=np.int64)


# ---------------------------------------------------------------------------
# suffix machinery
# ---------------------------------------------------------------------------


def suffix_array(vals: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling over np.lexsort."""
    n = len(vals)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    _, rank = np.unique(vals, return_inverse=True)
    rank = rank.astype(np.int64)
    k = 1
    while True:
        if int(rank.max()) == n - 1:
            break
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r1 = rank[order]
        r2 = second[order]
        bump = np.empty(n, dtype=np.int64)
        bump[0] = 0
        bump[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        newrank = np.empty(n, dtype=np.int64)
        newrank[order] = np.cumsum(bump)
        rank = newrank
        k *= 2
    sa = np.empty(n, dtype=np.int64)
    sa[rank] = np.arange(n, dtype=np.int64)
    return sa


@njit(cache=True)
def _kasai(vals, sa):
    n = sa.shape[0]
    rank = np.empty(n, np.int64)
    for i in range(n):
        rank[sa[i]] = i
    lcp = np.zeros(n, np.int64)
    h = 0
    for i in range(n):
        k = rank[i]
        if k > 0:
            j = sa[k - 1]
            while i + h < n and j + h < n and vals[i + h] == vals[j + h]:
                h += 1
            lcp[k] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return rank, lcp


@njit(cache=True)
def _psv_nsv(sa):
    """Nearest SA neighbors with smaller text position, each side."""
    n = sa.shape[0]
    psv = np.full(n, -1, np.int64)
    nsv = np.full(n, -1, np.int64)
    stack = np.empty(n + 1, np.int64)
    sp = 0
    for k in range(n):
        while sp > 0 and sa[stack[sp - 1]] > sa[k]:
            nsv[stack[sp - 1]] = k
            sp -= 1
        psv[k] = stack[sp - 1] if sp > 0 else -1
        stack[sp] = k
        sp += 1
    return psv, nsv


@njit(cache=True)
def _match_len(vals, i, j):
    # longest common prefix of suffixes i and j by direct comparison;
    # j < i, and the match may run past i (overlapping source).
    n = vals.shape[0]
    l = 0
    while i + l < n and vals[j + l] == vals[i + l]:
        l += 1
    return l


@njit(cache=True)
def _factorize_sa(vals, sa, rank, lcp, psv, nsv, mode77):
    n = vals.shape[0]
    cap = 64
    kind = np.empty(cap, np.int8)
    pos = np.empty(cap, np.int64)
    ln = np.empty(cap, np.int64)
    src = np.empty(cap, np.int64)
    mis = np.empty(cap, np.int64)
    m = 0
    i = 0
    while i < n:
        k = rank[i]
        ell = 0
        if psv[k] != -1:
            l1 = _match_len(vals, i, sa[psv[k]])
            if l1 > ell:
                ell = l1
        if nsv[k] != -1:
            l2 = _match_len(vals, i, sa[nsv[k]])
            if l2 > ell:
                ell = l2
        s = -1
        if ell > 0:
            # all sources matching >= ell sit in the maximal lcp-interval
            # around rank k; the leftmost is the smallest text position < i.
            lo = k
            while lo > 0 and lcp[lo] >= ell:
                lo -= 1
            hi = k
            while hi + 1 < n and lcp[hi + 1] >= ell:
                hi += 1
            s = n
            for t in range(lo, hi + 1):
                if sa[t] < i and sa[t] < s:
                    s = sa[t]
        if m + 1 > cap:
            cap *= 2
            kind2 = np.empty(cap, np.int8)
            pos2 = np.empty(cap, np.int64)
            ln2 = np.empty(cap, np.int64)
            src2 = np.empty(cap, np.int64)
            mis2 = np.empty(cap, np.int64)
            kind2[:m] = kind[:m]
            pos2[:m] = pos[:m]
            ln2[:m] = ln[:m]
            src2[:m] = src[:m]
            mis2[:m] = mis[:m]
            kind, pos, ln, src, mis = kind2, pos2, ln2, src2, mis2
        if ell == 0:
            kind[m] = 0
            pos[m] = i
            ln[m] = 1
            src[m] = -1
            mis[m] = vals[i]
            m += 1
            i += 1
        elif mode77 == 0:
            kind[m] = 1
            pos[m] = i
            ln[m] = ell
            src[m] = s
            mis[m] = -1
            m += 1
            i += ell
        else:
            kind[m] = 1
            pos[m] = i
            ln[m] = ell
            src[m] = s
            if i + ell < n:
                mis[m] = vals[i + ell]
                i += ell + 1
            else:
                mis[m] = -1
                i += ell
            m += 1
    return kind[:m], pos[:m], ln[:m], src[:m], mis[:m]


@njit(cache=True)
def _factorize_brute(vals, mode77):
    n = vals.shape[0]
    cap = 64
    kind = np.empty(cap, np.int8)
    pos = np.empty(cap, np.int64)
    ln = np.empty(cap, np.int64)
    src = np.empty(cap, np.int64)
    mis = np.empty(cap, np.int64)
    m = 0
    i = 0
    while i < n:
        ell = 0
        s = -1
        for j in range(i):
            l = 0
            while i + l < n and vals[j + l] == vals[i + l]:
                l += 1
            if l > ell:
                ell = l
                s = j
        if m + 1 > cap:
            cap *= 2
            kind2 = np.empty(cap, np.int8)
            pos2 = np.empty(cap, np.int64)
            ln2 = np.empty(cap, np.int64)
            src2 = np.empty(cap, np.int64)
            mis2 = np.empty(cap, np.int64)
            kind2[:m] = kind[:m]
            pos2[:m] = pos[:m]
            ln2[:m] = ln[:m]
            src2[:m] = src[:m]
            mis2[:m] = mis[:m]
            kind, pos, ln, src, mis = kind2, pos2, ln2, src2, mis2
        if ell == 0:
            kind[m] = 0
            pos[m] = i
            ln[m] = 1
            src[m] = -1
            mis[m] = vals[i]
            m += 1
            i += 1
        elif mode77 == 0:
            kind[m] = 1
            pos[m] = i
            ln[m] = ell
            src[m] = s
            mis[m] = -1
            m += 1
            i += ell
        else:
            kind[m] = 1
            pos[m] = i
            ln[m] = ell
            src[m] = s
            if i + ell < n:
                mis[m] = vals[i + ell]
                i += ell + 1
            else:
                mis[m] = -1
                i += ell
            m += 1
    return kind[:m], pos[:m], ln[:m], src[:m], mis[:m]


def _factorize(vals: np.ndarray, mode77: int, engine: str):
    if engine == "auto":
        engine = "brute" if len(vals) <= SA_THRESHOLD else "sa"
    if engine == "brute":
        return _factorize_brute(vals, mode77)
    if engine != "sa":
        raise ValueError("engine must be auto, sa, or brute")
    sa = suffix_array(vals)
    rank, lcp = _kasai(vals, sa)
    psv, nsv = _psv_nsv(sa)
    return _factorize_sa(vals, sa, rank, lcp, psv, nsv, mode77)


def _wrap(arrays, n: int, lz77: bool) -> ParseList:
    kind, pos, ln, src, mis = arrays
    phrases: list = []
    for t in range(len(kind)):
        if kind[t] == 0:
            phrases.append(Literal(pos=int(pos[t]) + 1, char=int(mis[t])))
        elif lz77:
            phrases.append(
                Copy(
                    pos=int(pos[t]) + 1,
                    length=int(ln[t]),
                    src=int(src[t]) + 1,
                    mismatch=int(mis[t]) if mis[t] >= 0 else None,
                )
            )
        else:
            phrases.append(
                Copy(pos=int(pos[t]) + 1, length=int(ln[t]), src=int(src[t]) + 1)
            )
    return ParseList(phrases=phrases, n=n)


def lzss_parse(seq, engine: str = "auto") -> ParseList:
    """Greedy maximal parse into first-occurrence literals and copies."""
    vals = _as_values(seq)
    if len(vals) == 0:
        return ParseList(phrases=[], n=0)
    return _wrap(_factorize(vals, 0, engine), len(vals), lz77=False)


def lz77_parse(seq, engine: str = "auto") -> ParseList:
    """Longest-previous-factor-plus-mismatch parse; len() of it is z."""
    vals = _as_values(seq)
    if len(vals) == 0:
        return ParseList(phrases=[], n=0)
    return _wrap(_factorize(vals, 1, engine), len(vals), lz77=True)


def decode_parse(parse: ParseList) -> np.ndarray:
    """Rebuild the sequence a parse describes (copies may self-overlap)."""
    out = np.empty(parse.n, dtype=np.int64)
    at = 0
    for ph in parse.phrases:
        if isinstance(ph, Literal):
            if ph.pos != at + 1:
                raise ValueError("phrases are not contiguous")
            out[at] = ph.char
            at += 1
        else:
            if ph.pos != at + 1:
                raise ValueError("phrases are not contiguous")
            s = ph.src - 1
            for k in range(ph.length):
                out[at + k] = out[s + k]
            at += ph.length
            if ph.mismatch is not None:
                out[at] = ph.mismatch
                at += 1
    if at != parse.n:
        raise ValueError("parse does not cover the sequence")
    return out


def validate_lzss_like(seq, parse: ParseList) -> bool:
    """Check that parse is a valid LZSS-like parse of seq.

    Malformed structure (gaps, overlap-of-coverage, zero-length copies, lz77
    mismatch fields) raises ValueError; a well-formed parse that fails the
    semantic conditions (literal not a first occurrence, copy not matching an
    earlier source) returns False.
    """
    vals = _as_values(seq)
    n = len(vals)
    at = 1
    uniq, uidx = np.unique(vals, return_index=True)
    first_seen = dict(zip(uniq.tolist(), (uidx + 1).tolist()))
    for ph in parse.phrases:
        if isinstance(ph, Literal):
            if ph.pos != at:
                raise ValueError("phrases are not contiguous")
            if ph.pos > n:
                raise ValueError("phrase past end of sequence")
            if vals[ph.pos - 1] != ph.char:
                return False
            if first_seen.get(ph.char) != ph.pos:
                return False
            at += 1
        elif isinstance(ph, Copy):
            if ph.mismatch is not None:
                raise ValueError("mismatch phrases are not LZSS-like")
            if ph.pos != at:
                raise ValueError("phrases are not contiguous")
            if ph.length < 1:
                raise ValueError("copy length must be >= 1")
            if ph.pos + ph.length - 1 > n:
                raise ValueError("phrase past end of sequence")
            if not (1 <= ph.src < ph.pos):
                return False
            a = ph.src - 1
            b = ph.pos - 1
            # static slice equality is exactly sequential-copy consistency,
            # overlapping sources included
            if not np.array_equal(vals[a : a + ph.length], vals[b : b + ph.length]):
                return False
            at += ph.length
        else:
            raise ValueError("unknown phrase type")
    if at != n + 1:
        raise ValueError("parse does not cover the sequence")
    return True


# ---------------------------------------------------------------------------
# chunked-parse mapping
# ---------------------------------------------------------------------------


def rparse(data: bytes, config: CtphConfig | None = None, engine: str = "auto"):
    """LZSS-like parse of data assembled from its chunked representation.

    Chunks data, factorizes the dictionary string (blocks joined by unique
    separators) and the block-ID sequence, then maps both phrase lists onto
    data: dictionary phrases land on each block's first occurrence, ID-level
    phrases become long copies between repeats.  Separator literals and
    first-occurrence ID literals have no image and are discarded (exactly 2b
    items).  The result covers data completely and validates as LZSS-like.
    """
    config = config or CtphConfig()
    if len(data) == 0:
        return ParseList(phrases=[], n=0)
    vals = np.frombuffer(bytes(data), dtype=np.uint8).astype(np.int64)
    dictionary, parse = ctph_parse(bytes(data), config)
    blocks = dictionary.blocks
    b = len(blocks)
    ids = parse.ids
    starts = parse.starts
    ends = parse.ends

    dvals = build_dictionary_string(blocks, num_terminals=256)
    # content offset of each block inside the dictionary string
    lens = np.asarray([len(x) for x in blocks], dtype=np.int64)
    dstarts = np.zeros(b, dtype=np.int64)
    if b > 1:
        dstarts[1:] = np.cumsum(lens[:-1] + 1)

    # S-position of the first occurrence of each block
    first_occ = np.full(b, -1, dtype=np.int64)
    for idx in range(len(ids) - 1, -1, -1):
        first_occ[ids[idx]] = starts[idx]

    # first occurrence of each byte value in S
    uniq, uidx = np.unique(vals, return_index=True)
    first_char = dict(zip(uniq.tolist(), uidx.tolist()))

    def map_dpos(j: int) -> int:
        k = int(np.searchsorted(dstarts, j, side="right")) - 1
        return int(first_occ[k]) + (j - int(dstarts[k]))

    phrases: list = []
    discarded = 0

    dparse = lzss_parse(dvals, engine=engine)
    for ph in dparse.phrases:
        if isinstance(ph, Literal):
            if ph.char >= 256:
                discarded += 1  # separator: occurs nowhere in S
                continue
            phrases.append(Literal(pos=first_char[ph.char] + 1, char=ph.char))
        else:
            j = ph.pos - 1
            i = ph.src - 1
            phrases.append(
                Copy(
                    pos=map_dpos(j) + 1,
                    length=ph.length,
                    src=map_dpos(i) + 1,
                )
            )

    pparse = lzss_parse(ids, engine=engine)
    for ph in pparse.phrases:
        if isinstance(ph, Literal):
            discarded += 1  # first occurrence of a block: covered by D's map
            continue
        j = ph.pos - 1
        i = ph.src - 1
        length = int(ends[j + ph.length - 1] - starts[j])
        src_len = int(ends[i + ph.length - 1] - starts[i])
        if src_len != length:
            raise AssertionError("mapped source and phrase lengths differ")
        phrases.append(
            Copy(pos=int(starts[j]) + 1, length=length, src=int(starts[i]) + 1)
        )

    phrases.sort(key=lambda ph: ph.pos)
    out = ParseList(phrases=phrases, n=len(vals), discarded=discarded)
    # cheap structural check: the mapping must tile S exactly
    at = 1
    for ph in out.phrases:
        if ph.pos != at:
            raise AssertionError("mapped parse does not tile the input")
        at += 1 if isinstance(ph, Literal) else ph.length
    if at != len(vals) + 1:
        raise AssertionError("mapped parse does not tile the input")
    return out
