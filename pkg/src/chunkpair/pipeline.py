"""End-to-end compressor: chunk, build grammars, splice, serialize.

compress() runs the full pipeline: content-defined chunking of the input,
a pair-replacement grammar for the dictionary string, surgery into one
symbol per block, a grammar for the block-ID sequence (optionally fed back
through the chunker for very long ID sequences), and a bit-packed container.

The grammar payload is a preorder forest encoding: each top-level item is
either a leaf code or, at the first use of a rule, that rule's whole
subtree.  Internal nodes cost two topology bits (does each child start a
new, not-yet-seen rule?) and every leaf costs one fixed-width code.  With r
rules and a top length of c there are exactly r internal nodes and r + c
leaves, so the payload is 2*r + (r + c)*W bits with W = max(1, ceil(log2 r)).
Terminal leaves borrow the code space above the rule ranks; terminals that
do not fit are written as header exceptions with a zero placeholder code.
"""
from __future__ import annotations

import io
import struct
import time
import tracemalloc
from dataclasses import dataclass, field
from hashlib import blake2b
from typing import BinaryIO, Callable, Iterator

import numpy as np

from ._kernels import njit
from .ctph import CtphConfig, _Chunker, _finalize, build_dictionary_string, parse_values
from .repair import (
    Grammar,
    expand_bytes,
    expansion_lengths,
    repair_build,
)
from .repair import expand_stream as _grammar_stream
from .slp_core import combine, make_block_rules, prune_and_reroot, split_sublists

_MAGIC = b"CHUNKPAIRFMT"  # with the u16 version + u16 flags: a 16-byte prelude
_VERSION = 1
_HEADER = struct.Struct("<12sHHII QQ II QQQQQ B3x IIIQ")
_EXC = struct.Struct("<QI")


class CorruptArtifactError(ValueError):
    """The artifact bytes are inconsistent with their own framing or checksum."""


@dataclass(frozen=True)
class PipelineConfig:
    ctph: CtphConfig = field(default_factory=CtphConfig)
    recurse_depth: int = 1
    # Only re-chunk the block-ID sequence when it is longer than this; short
    # ID sequences compress fine directly and the extra level just adds rules.
    recurse_threshold: int = 1 << 22
    grammar_builder: Callable[..., Grammar] = repair_build

    def __post_init__(self) -> None:
        if self.recurse_depth < 0:
            raise ValueError("recurse_depth must be >= 0")
        if self.recurse_threshold < 1:
            raise ValueError("recurse_threshold must be >= 1")


def _checksum(data: bytes) -> int:
    return int.from_bytes(blake2b(data, digest_size=8).digest(), "little")


# ---------------------------------------------------------------------------
# bit packing


@njit(cache=True)
def _pack_bits(values, width, buf, bit_off):
    pos = bit_off
    for i in range(len(values)):
        v = values[i]
        for k in range(width - 1, -1, -1):
            if (v >> k) & 1:
                buf[pos >> 3] |= np.uint8(1 << (7 - (pos & 7)))
            pos += 1
    return pos


@njit(cache=True)
def _unpack_bits(buf, bit_off, count, width):
    out = np.empty(count, dtype=np.int64)
    pos = bit_off
    for i in range(count):
        v = 0
        for _ in range(width):
            v = (v << 1) | ((buf[pos >> 3] >> (7 - (pos & 7))) & 1)
            pos += 1
        out[i] = v
    return out


# ---------------------------------------------------------------------------
# grammar <-> bits


@dataclass
class EncodedGrammar:
    """Bit-packed grammar plus the header tables needed to invert it."""

    num_terminals: int
    rule_count: int
    top_length: int
    width: int
    payload: bytes
    payload_bits: int
    bitmap: bytes  # bit k set: top item k is the first use of a rule
    alphabet: np.ndarray  # terminals coded inline, ascending
    exceptions: np.ndarray  # (leaf index, terminal) pairs, leaf order


def _code_width(rule_count: int, num_terminals: int) -> int:
    if rule_count == 0:
        return max(1, (num_terminals - 1).bit_length())
    return max(1, (rule_count - 1).bit_length())


def encode_grammar(grammar: Grammar) -> EncodedGrammar:
    """Serialize a grammar whose rules are all reachable from the top."""
    nt = grammar.num_terminals
    r = grammar.r
    c = grammar.c
    rules = grammar.rules
    width = _code_width(r, nt)

    rank = np.full(r, -1, dtype=np.int64)
    next_rank = 0
    bitmap = np.zeros(c, dtype=np.uint8)
    topo = np.zeros(2 * r, dtype=np.uint8)
    topo_n = 0
    leaf_kind = np.zeros(r + c, dtype=np.uint8)  # 0 backref, 1 terminal
    leaf_val = np.zeros(r + c, dtype=np.int64)
    leaf_n = 0

    def emit_leaf(s: int) -> None:
        nonlocal leaf_n
        if s >= nt:
            leaf_val[leaf_n] = rank[s - nt]
        else:
            leaf_kind[leaf_n] = 1
            leaf_val[leaf_n] = s
        leaf_n += 1

    for k, s in enumerate(grammar.top.tolist()):
        if s >= nt and rank[s - nt] < 0:
            bitmap[k] = 1
            i = s - nt
            rank[i] = next_rank
            next_rank += 1
            stack = [(i, 0)]
            while stack:
                i, phase = stack.pop()
                if phase == 2:
                    continue
                child = int(rules[i, phase])
                stack.append((i, phase + 1))
                if child >= nt and rank[child - nt] < 0:
                    topo[topo_n] = 1
                    topo_n += 1
                    j = child - nt
                    rank[j] = next_rank
                    next_rank += 1
                    stack.append((j, 0))
                else:
                    topo[topo_n] = 0
                    topo_n += 1
                    emit_leaf(child)
        else:
            emit_leaf(s)

    if next_rank != r:
        raise ValueError("grammar has rules unreachable from the top")
    assert topo_n == 2 * r and leaf_n == r + c

    term_mask = leaf_kind == 1
    alphabet = np.unique(leaf_val[term_mask])
    spare = (1 << width) - r
    inline = alphabet[: max(spare, 0)]
    codes = leaf_val.copy()
    exc: list[tuple[int, int]] = []
    if term_mask.any():
        idx = np.searchsorted(inline, leaf_val)
        ok = term_mask.copy()
        ok[term_mask] = (idx[term_mask] < len(inline)) & (
            inline[np.minimum(idx[term_mask], max(len(inline) - 1, 0))]
            == leaf_val[term_mask]
        ) if len(inline) else False
        codes[ok] = r + idx[ok]
        for t in np.nonzero(term_mask & ~ok)[0].tolist():
            codes[t] = 0
            exc.append((t, int(leaf_val[t])))

    payload_bits = 2 * r + (r + c) * width
    buf = np.zeros((payload_bits + 7) // 8, dtype=np.uint8)
    pos = _pack_bits(topo[: 2 * r], 1, buf, 0)
    pos = _pack_bits(codes, width, buf, pos)
    assert pos == payload_bits
    return EncodedGrammar(
        num_terminals=nt,
        rule_count=r,
        top_length=c,
        width=width,
        payload=buf.tobytes(),
        payload_bits=payload_bits,
        bitmap=np.packbits(bitmap).tobytes() if c else b"",
        alphabet=inline.astype(np.int64),
        exceptions=np.asarray(exc, dtype=np.int64).reshape(-1, 2),
    )


def decode_grammar(enc: EncodedGrammar) -> Grammar:
    """Rebuild a grammar from its bit payload, validating as it goes."""
    nt = enc.num_terminals
    r = enc.rule_count
    c = enc.top_length
    width = enc.width
    if width != _code_width(r, nt):
        raise CorruptArtifactError("code width does not match rule count")
    need = 2 * r + (r + c) * width
    if enc.payload_bits != need or len(enc.payload) != (need + 7) // 8:
        raise CorruptArtifactError("payload size mismatch")
    buf = np.frombuffer(enc.payload, dtype=np.uint8)
    topo = _unpack_bits(buf, 0, 2 * r, 1) if r else np.empty(0, dtype=np.int64)
    codes = _unpack_bits(buf, 2 * r, r + c, width)
    if c:
        raw = np.frombuffer(enc.bitmap, dtype=np.uint8)
        if len(raw) != (c + 7) // 8:
            raise CorruptArtifactError("bitmap size mismatch")
        bits = np.unpackbits(raw)
        if bits[c:].any():
            raise CorruptArtifactError("bitmap has bits past the top length")
        bitmap = bits[:c]
    else:
        bitmap = np.empty(0, dtype=np.uint8)

    exc: dict[int, int] = {}
    for pos_, sym in enc.exceptions.tolist():
        if not (0 <= pos_ < r + c) or not (0 <= sym < nt) or pos_ in exc:
            raise CorruptArtifactError("bad exception entry")
        exc[int(pos_)] = int(sym)
    alphabet = enc.alphabet
    if len(alphabet) and (
        alphabet.min() < 0
        or alphabet.max() >= nt
        or np.any(np.diff(alphabet) <= 0)
    ):
        raise CorruptArtifactError("bad alphabet table")

    rules = np.full((r, 2), -1, dtype=np.int64)
    top = np.empty(c, dtype=np.int64)
    state = {"ti": 0, "ci": 0, "rank": 0}

    def read_leaf() -> int:
        t = state["ci"]
        if t >= r + c:
            raise CorruptArtifactError("leaf stream overrun")
        v = int(codes[t])
        state["ci"] = t + 1
        if t in exc:
            return exc[t]
        if v < r:
            if v >= state["rank"]:
                raise CorruptArtifactError("backreference to an unseen rule")
            return nt + v
        idx = v - r
        if idx >= len(alphabet):
            raise CorruptArtifactError("terminal code outside the alphabet")
        return int(alphabet[idx])

    def build() -> int:
        my = state["rank"]
        state["rank"] = my + 1
        stack = [(my, 0)]
        while stack:
            i, phase = stack.pop()
            if phase == 2:
                continue
            t = state["ti"]
            if t >= 2 * r:
                raise CorruptArtifactError("topology stream overrun")
            state["ti"] = t + 1
            stack.append((i, phase + 1))
            if topo[t]:
                j = state["rank"]
                if j >= r:
                    raise CorruptArtifactError("more rules than declared")
                state["rank"] = j + 1
                rules[i, phase] = nt + j
                stack.append((j, 0))
            else:
                rules[i, phase] = read_leaf()
        return my

    for k in range(c):
        if bitmap[k]:
            if state["rank"] >= r:
                raise CorruptArtifactError("more rules than declared")
            top[k] = nt + build()
        else:
            top[k] = read_leaf()

    if state["rank"] != r or state["ti"] != 2 * r or state["ci"] != r + c:
        raise CorruptArtifactError("payload streams not fully consumed")
    return Grammar(num_terminals=nt, rules=rules, top=top)


# ---------------------------------------------------------------------------
# container


@dataclass
class CompressedArtifact:
    """A self-contained compressed representation of one byte string."""

    window: int
    modulus_selector: int
    hash_base: int
    hash_modulus: int
    block_count: int
    depth_used: int
    input_length: int
    checksum: int
    encoded: EncodedGrammar

    @property
    def payload_bits(self) -> int:
        return self.encoded.payload_bits

    def to_bytes(self) -> bytes:
        e = self.encoded
        head = _HEADER.pack(
            _MAGIC,
            _VERSION,
            0,
            self.window,
            self.modulus_selector,
            self.hash_base,
            self.hash_modulus,
            e.num_terminals,
            self.depth_used,
            self.block_count,
            e.rule_count,
            e.top_length,
            self.input_length,
            self.checksum,
            e.width,
            len(e.alphabet),
            len(e.exceptions),
            len(e.bitmap),
            e.payload_bits,
        )
        parts = [head]
        parts.append(e.alphabet.astype("<u4").tobytes())
        for pos, sym in e.exceptions.tolist():
            parts.append(_EXC.pack(pos, sym))
        parts.append(e.bitmap)
        parts.append(e.payload)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedArtifact":
        if len(data) < _HEADER.size:
            raise CorruptArtifactError("truncated header")
        (
            magic,
            version,
            _flags,
            window,
            selector,
            hash_base,
            hash_modulus,
            num_terminals,
            depth_used,
            block_count,
            rule_count,
            top_length,
            input_length,
            checksum,
            width,
            alpha_n,
            exc_n,
            bitmap_n,
            payload_bits,
        ) = _HEADER.unpack_from(data, 0)
        if magic != _MAGIC:
            raise CorruptArtifactError("bad magic")
        if version != _VERSION:
            raise CorruptArtifactError("unsupported version")
        off = _HEADER.size
        end = off + 4 * alpha_n
        payload_n = (payload_bits + 7) // 8
        total = end + _EXC.size * exc_n + bitmap_n + payload_n
        if len(data) != total:
            raise CorruptArtifactError("artifact length mismatch")
        alphabet = np.frombuffer(data[off:end], dtype="<u4").astype(np.int64)
        off = end
        exc = np.empty((exc_n, 2), dtype=np.int64)
        for i in range(exc_n):
            pos, sym = _EXC.unpack_from(data, off)
            exc[i, 0] = pos
            exc[i, 1] = sym
            off += _EXC.size
        bitmap = data[off : off + bitmap_n]
        off += bitmap_n
        payload = data[off : off + payload_n]
        enc = EncodedGrammar(
            num_terminals=num_terminals,
            rule_count=rule_count,
            top_length=top_length,
            width=width,
            payload=payload,
            payload_bits=payload_bits,
            bitmap=bitmap,
            alphabet=alphabet,
            exceptions=exc,
        )
        return cls(
            window=window,
            modulus_selector=selector,
            hash_base=hash_base,
            hash_modulus=hash_modulus,
            block_count=block_count,
            depth_used=depth_used,
            input_length=input_length,
            checksum=checksum,
            encoded=enc,
        )

    def save(self, path: str) -> None:
        with open(path, "wb") as f:
            f.write(self.to_bytes())

    @classmethod
    def load(cls, path: str) -> "CompressedArtifact":
        with open(path, "rb") as f:
            return cls.from_bytes(f.read())


# ---------------------------------------------------------------------------
# pipeline


def _grammar_for_ids(
    values: np.ndarray, num_ids: int, cfg: PipelineConfig, depth_left: int, used: list
) -> Grammar:
    """Grammar for an integer sequence, optionally via another chunking level."""
    if depth_left <= 0 or len(values) <= cfg.recurse_threshold:
        return cfg.grammar_builder(values, num_ids)
    blocks, parse = parse_values(values, cfg.ctph)
    if len(parse.ids) >= len(values):
        # chunking did not shrink the sequence; another level cannot help
        return cfg.grammar_builder(values, num_ids)
    used[0] += 1
    b = len(blocks)
    dstr = build_dictionary_string(blocks, num_ids)
    g_dict = cfg.grammar_builder(dstr, num_ids + b)
    roots = prune_and_reroot(g_dict, separator_min=num_ids)
    sublists = split_sublists(roots, [len(x) for x in blocks], g_dict)
    block_rules = make_block_rules(sublists, g_dict)
    g_ids = _grammar_for_ids(parse.ids, b, cfg, depth_left - 1, used)
    return combine(g_dict, roots, block_rules, g_ids, num_ids)


def compress(
    data: bytes | bytearray | memoryview | BinaryIO,
    config: PipelineConfig | None = None,
) -> CompressedArtifact:
    """Compress a byte string or binary stream into an artifact.

    Streams are consumed incrementally; memory tracks the dictionary and the
    block-ID sequence rather than the input.
    """
    cfg = config or PipelineConfig()
    stream = io.BytesIO(bytes(data)) if isinstance(data, (bytes, bytearray, memoryview)) else data

    hasher = blake2b(digest_size=8)
    chunker = _Chunker(cfg.ctph, as_bytes=False)
    total = 0
    while True:
        piece = stream.read(1 << 20)
        if not piece:
            break
        hasher.update(piece)
        total += len(piece)
        arr = np.frombuffer(piece, dtype=np.uint8).astype(np.int64)
        for off in range(0, len(arr), 1 << 18):
            chunker.feed(arr[off : off + (1 << 18)])
    chunker.finish()
    blocks, parse = _finalize(chunker)
    checksum = int.from_bytes(hasher.digest(), "little")

    if total == 0:
        grammar = Grammar(
            num_terminals=256,
            rules=np.empty((0, 2), dtype=np.int64),
            top=np.empty(0, dtype=np.int64),
        )
        return CompressedArtifact(
            window=cfg.ctph.w,
            modulus_selector=cfg.ctph.p,
            hash_base=cfg.ctph.hash_base,
            hash_modulus=cfg.ctph.hash_modulus,
            block_count=0,
            depth_used=0,
            input_length=0,
            checksum=checksum,
            encoded=encode_grammar(grammar),
        )

    b = len(blocks)
    dstr = build_dictionary_string(blocks, 256)
    g_dict = cfg.grammar_builder(dstr, 256 + b)
    roots = prune_and_reroot(g_dict, separator_min=256)
    sublists = split_sublists(roots, [len(x) for x in blocks], g_dict)
    block_rules = make_block_rules(sublists, g_dict)
    used = [0]
    g_ids = _grammar_for_ids(parse.ids, b, cfg, cfg.recurse_depth, used)
    grammar = combine(g_dict, roots, block_rules, g_ids, 256)

    return CompressedArtifact(
        window=cfg.ctph.w,
        modulus_selector=cfg.ctph.p,
        hash_base=cfg.ctph.hash_base,
        hash_modulus=cfg.ctph.hash_modulus,
        block_count=b,
        depth_used=used[0],
        input_length=total,
        checksum=checksum,
        encoded=encode_grammar(grammar),
    )


def _decode_checked(artifact: CompressedArtifact) -> Grammar:
    grammar = decode_grammar(artifact.encoded)
    if grammar.r:
        lens = expansion_lengths(grammar)
    else:
        lens = np.empty(0, dtype=np.int64)
    nt = grammar.num_terminals
    total = 0
    for s in grammar.top.tolist():
        total += 1 if s < nt else int(lens[s - nt])
    if total != artifact.input_length:
        raise CorruptArtifactError("expansion length disagrees with the header")
    return grammar


def decompress(artifact: CompressedArtifact | bytes) -> bytes:
    """Expand an artifact back to the original bytes, verifying the checksum."""
    if isinstance(artifact, (bytes, bytearray, memoryview)):
        artifact = CompressedArtifact.from_bytes(bytes(artifact))
    grammar = _decode_checked(artifact)
    out = expand_bytes(grammar, total=artifact.input_length)
    if _checksum(out) != artifact.checksum:
        raise CorruptArtifactError("checksum mismatch")
    return out


def decompress_stream(
    artifact: CompressedArtifact | bytes, chunk_size: int = 1 << 20
) -> Iterator[bytes]:
    """Yield the original bytes in chunks without materializing the output.

    Working memory is the decoded grammar plus one chunk.  The checksum can
    only be verified once everything has streamed; a mismatch raises from
    the final iteration, so consumers must drain the iterator fully.
    """
    if isinstance(artifact, (bytes, bytearray, memoryview)):
        artifact = CompressedArtifact.from_bytes(bytes(artifact))
    grammar = _decode_checked(artifact)
    hasher = blake2b(digest_size=8)
    n = 0
    for chunk in _grammar_stream(grammar, chunk_size=chunk_size):
        hasher.update(chunk)
        n += len(chunk)
        yield chunk
    if n != artifact.input_length:
        raise CorruptArtifactError("expansion length disagrees with the header")
    if int.from_bytes(hasher.digest(), "little") != artifact.checksum:
        raise CorruptArtifactError("checksum mismatch")


# ---------------------------------------------------------------------------
# stats


@dataclass
class StatsReport:
    input_length: int
    block_count: int
    rule_count: int
    top_length: int
    payload_bits: int
    container_bytes: int
    ratio_percent: float | None
    seconds: float
    seconds_per_gb: float | None
    peak_mb: float
    peak_mb_per_gb: float | None
    depth_used: int
    lz77_phrases: int | None = None
    lzss_phrases: int | None = None
    rparse_phrases: int | None = None
    rules_per_lz77: float | None = None

    def lines(self) -> list[tuple[str, str]]:
        def fmt(v):
            if v is None:
                return "-"
            if isinstance(v, float):
                return f"{v:.4g}"
            return str(v)

        keys = [
            ("input_bytes", self.input_length),
            ("blocks", self.block_count),
            ("rules", self.rule_count),
            ("top_length", self.top_length),
            ("payload_bits", self.payload_bits),
            ("container_bytes", self.container_bytes),
            ("ratio_percent", self.ratio_percent),
            ("seconds", self.seconds),
            ("seconds_per_gb", self.seconds_per_gb),
            ("peak_mb", self.peak_mb),
            ("peak_mb_per_gb", self.peak_mb_per_gb),
            ("depth_used", self.depth_used),
            ("lz77_phrases", self.lz77_phrases),
            ("lzss_phrases", self.lzss_phrases),
            ("rparse_phrases", self.rparse_phrases),
            ("rules_per_lz77", self.rules_per_lz77),
        ]
        return [(k, fmt(v)) for k, v in keys]


def stats(
    data: bytes,
    config: PipelineConfig | None = None,
    oracle_cap: int = 1_000_000,
) -> StatsReport:
    """Compress and report size, normalized time, and tracked peak memory.

    Peak memory covers allocations tracemalloc can see (Python and numpy);
    buffers allocated inside compiled kernels are not tracked.  Inputs no
    longer than oracle_cap also get exact parser phrase counts.
    """
    cfg = config or PipelineConfig()
    started_here = not tracemalloc.is_tracing()
    if started_here:
        tracemalloc.start()
    tracemalloc.reset_peak()
    t0 = time.perf_counter()
    art = compress(data, cfg)
    seconds = time.perf_counter() - t0
    _, peak = tracemalloc.get_traced_memory()
    if started_here:
        tracemalloc.stop()

    container = len(art.to_bytes())
    n = len(data)
    gb = n / float(1 << 30)
    report = StatsReport(
        input_length=n,
        block_count=art.block_count,
        rule_count=art.encoded.rule_count,
        top_length=art.encoded.top_length,
        payload_bits=art.payload_bits,
        container_bytes=container,
        ratio_percent=(art.payload_bits / 8.0) / n * 100.0 if n else None,
        seconds=seconds,
        seconds_per_gb=seconds / gb if n else None,
        peak_mb=peak / float(1 << 20),
        peak_mb_per_gb=(peak / float(1 << 20)) / gb if n else None,
        depth_used=art.depth_used,
    )
    if 0 < n <= oracle_cap:
        from .lz_parse import lz77_parse, lzss_parse, rparse

        report.lz77_phrases = len(lz77_parse(data))
        report.lzss_phrases = len(lzss_parse(data))
        report.rparse_phrases = len(rparse(data, cfg.ctph))
        if report.lz77_phrases:
            report.rules_per_lz77 = art.encoded.rule_count / report.lz77_phrases
    return report
