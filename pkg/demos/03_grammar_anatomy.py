"""Watch the grammar construction stage by stage on a toy input.

Stages: chunk -> dictionary string with separators -> pair-replacement
grammar -> prune separator ancestors -> per-block rules -> merged program.
"""
import numpy as np

from chunkpair.ctph import CtphConfig, build_dictionary_string, ctph_parse
from chunkpair.repair import expand, repair_build
from chunkpair.slp_core import (
    make_block_rules,
    prune_and_reroot,
    split_sublists,
)


def show(sym, nt, b):
    if sym < 256:
        return repr(chr(sym))
    if sym < nt:
        return f"SEP{sym - 256}"
    return f"R{sym - nt}"


data = b"ab ab ab ab cd cd ab ab cd cd " * 6
cfg = CtphConfig(w=4, p=4)

d, parse = ctph_parse(data, cfg)
print(f"1. chunking: {len(parse)} blocks, {len(d)} distinct")
for i, blk in enumerate(d.blocks):
    print(f"   block {i}: {blk!r}")
print(f"   ID sequence: {parse.ids.tolist()}")

b = len(d)
nt = 256 + b
dstr = build_dictionary_string(d.blocks, 256)
print(f"\n2. dictionary string: {len(dstr)} symbols "
      f"({b} separators keep blocks copy-proof)")

g = repair_build(dstr, num_terminals=nt)
print(f"\n3. pair replacement: r={g.r} rules, top length c={g.c}")
for i, (l, r) in enumerate(g.rules.tolist()):
    print(f"   R{i} -> {show(l, nt, b)} {show(r, nt, b)}")

roots = prune_and_reroot(g, 256)
kept = int(roots.kept.sum())
print(f"\n4. pruning: {kept} of {g.r} rules survive "
      f"(the rest contained a separator or occurred once)")
print(f"   root list: {[show(s, nt, b) for s in roots.symbols.tolist()]}")

subs = split_sublists(roots, [len(x) for x in d.blocks], g)
bs = make_block_rules(subs, g)
print(f"\n5. block rules: {len(bs.rules)} new rules bind "
      f"{sum(len(s) for s in subs)} roots into {b} block symbols")

ext_rules = np.concatenate([g.rules, bs.rules]) if len(bs.rules) else g.rules
from chunkpair.repair import Grammar

ext = Grammar(nt, ext_rules, np.asarray(bs.block_symbols, dtype=np.int64))
for i in range(b):
    sym = int(bs.block_symbols[i])
    got = bytes([sym]) if sym < 256 else bytes(expand(ext, sym).astype(np.uint8))
    marker = "==" if got == d.blocks[i] else "!="
    print(f"   expand(block {i}) {marker} {got!r}")
