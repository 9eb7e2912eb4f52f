"""Self-check harness: run the pipeline and its parsers over generated inputs.

Each case checks the end-to-end roundtrip, the payload-size formula, and,
for inputs small enough to afford the exact parsers, the parse validity and
size bounds that the construction promises:

- the mapped parse is a valid left-to-right parse of the input,
- it has at most five times the phrases of the exact overlap parse,
- the exact overlap parse has at most twice the phrases of the
  mismatch-appending parse,
- the number of chunker blocks is at most twice that plus two.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .corpus import standard_cases
from .ctph import ctph_parse
from .lz_parse import lz77_parse, lzss_parse, rparse, validate_lzss_like
from .pipeline import PipelineConfig, compress, decompress


@dataclass
class VerificationReport:
    cases: int = 0
    roundtrips: int = 0
    formula_checks: int = 0
    parse_checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_verification(
    cases: int = 200,
    seed: int = 0,
    oracle_cap: int = 200_000,
    max_length: int = 100_000,
    config: PipelineConfig | None = None,
    rparse_fn: Callable = rparse,
    progress: Callable[[str], None] | None = None,
) -> VerificationReport:
    cfg = config or PipelineConfig()
    report = VerificationReport()
    for name, data in standard_cases(cases, seed=seed, max_length=max_length):
        report.cases += 1
        if progress:
            progress(name)
        try:
            art = compress(data, cfg)
            back = decompress(art)
            if back != data:
                report.failures.append(f"{name}: roundtrip mismatch")
            else:
                report.roundtrips += 1
            r = art.encoded.rule_count
            c = art.encoded.top_length
            if r >= 2:
                want = 2 * r + (r + c) * max(1, (r - 1).bit_length())
                if art.payload_bits != want:
                    report.failures.append(
                        f"{name}: payload bits {art.payload_bits} != {want}"
                    )
                else:
                    report.formula_checks += 1
        except Exception as exc:  # noqa: BLE001 - report, keep going
            report.failures.append(f"{name}: pipeline raised {exc!r}")
            continue

        if not data or len(data) > oracle_cap:
            continue
        try:
            z = len(lz77_parse(data))
            zss = len(lzss_parse(data))
            mapped = rparse_fn(data, cfg.ctph)
            blocks, _ = ctph_parse(data, cfg.ctph)
            b = len(blocks)
            if not validate_lzss_like(data, mapped):
                report.failures.append(f"{name}: mapped parse invalid")
            if len(mapped) > 5 * zss:
                report.failures.append(
                    f"{name}: mapped parse {len(mapped)} > 5*{zss}"
                )
            if zss > 2 * z:
                report.failures.append(f"{name}: overlap parse {zss} > 2*{z}")
            # block-count charge needs content-decided boundaries; p=1 cuts
            # at a fixed stride and the bound does not hold there
            if cfg.ctph.p >= 2 and b > 2 * z + 2:
                report.failures.append(f"{name}: {b} blocks > 2*{z}+2")
            if not report.failures or not report.failures[-1].startswith(name):
                report.parse_checks += 1
        except Exception as exc:  # noqa: BLE001
            report.failures.append(f"{name}: parse checks raised {exc!r}")
    return report
