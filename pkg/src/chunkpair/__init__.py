"""chunkpair: grammar compression for repetitive byte streams.

The pipeline chunks the input with a content-triggered rolling hash, builds a
pair-replacement grammar over the small dictionary-plus-parse representation,
and splices the pieces back into one straight-line program for the original
string.
"""
from .ctph import (
    CtphConfig,
    Dictionary,
    RollingWindowHash,
    RsyncParse,
    build_dictionary_string,
    ctph_parse,
    ctph_parse_stream,
    window_hash,
)
from .repair import Grammar, expand, expansion_lengths, repair_build
from .slp_core import (
    BlockRuleSet,
    RootList,
    combine,
    make_block_rules,
    occurrence_counts,
    prune_and_reroot,
    split_sublists,
)
from .lz_parse import (
    Copy,
    Literal,
    ParseList,
    Phrase,
    decode_parse,
    lz77_parse,
    lzss_parse,
    rparse,
    validate_lzss_like,
)
from .pipeline import (
    CompressedArtifact,
    CorruptArtifactError,
    PipelineConfig,
    StatsReport,
    compress,
    decode_grammar,
    decompress,
    decompress_stream,
    encode_grammar,
    stats,
)

__version__ = "0.1.0"

__all__ = [
    "CtphConfig",
    "Dictionary",
    "RsyncParse",
    "RollingWindowHash",
    "window_hash",
    "ctph_parse",
    "ctph_parse_stream",
    "build_dictionary_string",
    "Grammar",
    "repair_build",
    "expand",
    "expansion_lengths",
    "RootList",
    "BlockRuleSet",
    "occurrence_counts",
    "prune_and_reroot",
    "split_sublists",
    "make_block_rules",
    "combine",
    "Phrase",
    "Literal",
    "Copy",
    "ParseList",
    "lzss_parse",
    "lz77_parse",
    "rparse",
    "validate_lzss_like",
    "decode_parse",
    "PipelineConfig",
    "CompressedArtifact",
    "CorruptArtifactError",
    "StatsReport",
    "compress",
    "decompress",
    "decompress_stream",
    "encode_grammar",
    "decode_grammar",
    "stats",
]
