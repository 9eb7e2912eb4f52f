"""The phrase-count guarantees, measured on live inputs.

The chunked parse is provably within 5x of the exact greedy parse, the
greedy parse within 2x of the classic mismatch parse, and the number of
distinct blocks within 2z+2. Run a few input shapes and watch the slack.
"""
import numpy as np

from chunkpair.corpus import mutated_copies, random_bytes, text_like
from chunkpair.ctph import CtphConfig, ctph_parse
from chunkpair.lz_parse import lz77_parse, lzss_parse, rparse

cfg = CtphConfig(w=16, p=16)
rng = np.random.default_rng(1)

inputs = {
    "random 50K": random_bytes(50_000, seed=2),
    "text-like 50K": text_like(50_000, seed=3),
    "doubled 2x25K": (lambda t: t + t)(random_bytes(25_000, seed=4)),
    "20 mutated copies": mutated_copies(random_bytes(2_500, seed=5), 20, 1e-3, seed=6),
    "periodic": (b"abcde" * 10_000),
}

print(f"{'input':>18} {'z':>7} {'lzss':>7} {'rparse':>7} {'r/l':>6} {'b':>6} {'2z+2':>7}")
for name, data in inputs.items():
    z = len(lz77_parse(data))
    zss = len(lzss_parse(data))
    rp = len(rparse(data, cfg))
    b = len(ctph_parse(data, cfg)[0])
    print(f"{name:>18} {z:>7} {zss:>7} {rp:>7} {rp/zss:>6.2f} {b:>6} {2*z+2:>7}")
    assert rp <= 5 * zss and zss <= 2 * z and b <= 2 * z + 2

print("\nall three inequalities hold (rparse <= 5*lzss, lzss <= 2z, b <= 2z+2)")
