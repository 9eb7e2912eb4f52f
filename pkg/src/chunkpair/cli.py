"""Command-line interface.

Subcommands: compress, decompress, stats, verify, gen-corpus.  Defaults for
the knobs can come from CHUNKPAIR_* environment variables; explicit flags
always win.  Output files are written to a temporary sibling and renamed, so
a failed run never leaves a partial artifact behind.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Iterable

from .corpus import (
    mutated_copies_stream,
    periodic,
    random_bytes,
    sparse_bytes,
    text_like,
)
from .ctph import CtphConfig
from .pipeline import (
    CompressedArtifact,
    CorruptArtifactError,
    PipelineConfig,
    compress,
    decompress_stream,
    stats,
)
from .verify import run_verification

_ENV = "CHUNKPAIR_"


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(_ENV + name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError as exc:
        raise SystemExit(f"chunkpair: bad {_ENV}{name}={raw!r}: {exc}")


def _env_str(name: str, fallback: str) -> str:
    return os.environ.get(_ENV + name, fallback)


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    ctph = CtphConfig(w=args.window, p=args.modulus)
    return PipelineConfig(
        ctph=ctph,
        recurse_depth=args.recurse_depth,
        recurse_threshold=getattr(args, "recurse_threshold", 1 << 22),
    )


def _add_knobs(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "-w",
        "--window",
        type=int,
        default=_env_int("W", 64),
        help="rolling hash window length (env CHUNKPAIR_W)",
    )
    p.add_argument(
        "-p",
        "--modulus",
        type=int,
        default=_env_int("P", 64),
        help="block trigger modulus (env CHUNKPAIR_P)",
    )
    p.add_argument(
        "--recurse-depth",
        type=int,
        default=_env_int("RECURSE_DEPTH", 1),
        help="extra chunking levels for the block-ID sequence",
    )


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def _write_atomic(path: str, chunks: Iterable[bytes]) -> int:
    if path == "-":
        n = 0
        for ch in chunks:
            sys.stdout.buffer.write(ch)
            n += len(ch)
        sys.stdout.buffer.flush()
        return n
    tmp = f"{path}.tmp.{os.getpid()}"
    n = 0
    try:
        with open(tmp, "wb") as f:
            for ch in chunks:
                f.write(ch)
                n += len(ch)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return n


def _cmd_compress(args: argparse.Namespace) -> int:
    cfg = _pipeline_config(args)
    if args.input == "-":
        art = compress(sys.stdin.buffer, cfg)
    else:
        with open(args.input, "rb") as f:
            art = compress(f, cfg)
    blob = art.to_bytes()
    _write_atomic(args.output, [blob])
    if args.parse_report:
        lines = [
            f"input_bytes={art.input_length}",
            f"blocks={art.block_count}",
            f"rules={art.encoded.rule_count}",
            f"top_length={art.encoded.top_length}",
            f"payload_bits={art.payload_bits}",
            f"container_bytes={len(blob)}",
            f"depth_used={art.depth_used}",
            f"window={art.window}",
            f"modulus={art.modulus_selector}",
        ]
        _write_atomic(args.parse_report, [("\n".join(lines) + "\n").encode()])
    if not args.quiet:
        pct = 100.0 * len(blob) / art.input_length if art.input_length else 0.0
        print(
            f"{args.input}: {art.input_length} -> {len(blob)} bytes"
            f" ({pct:.2f}%), {art.encoded.rule_count} rules,"
            f" {art.block_count} blocks",
            file=sys.stderr,
        )
    return 0


def _cmd_decompress(args: argparse.Namespace) -> int:
    data = _read_input(args.input)
    art = CompressedArtifact.from_bytes(data)
    _write_atomic(args.output, decompress_stream(art))
    return 0


def _format_report(name: str, report, fmt: str) -> str:
    pairs = report.lines()
    if fmt == "kv":
        return "\n".join(f"{name}\t{k}={v}" for k, v in pairs)
    width = max(len(k) for k, _ in pairs)
    body = "\n".join(f"  {k.ljust(width)}  {v}" for k, v in pairs)
    return f"{name}\n{body}"


def _cmd_stats(args: argparse.Namespace) -> int:
    cfg = _pipeline_config(args)
    for path in args.inputs:
        data = _read_input(path)
        report = stats(data, cfg, oracle_cap=args.oracle_cap)
        print(_format_report(path, report, args.format))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _pipeline_config(args)
    progress = None
    if args.verbose:
        progress = lambda name: print(f"case {name}", file=sys.stderr)  # noqa: E731
    report = run_verification(
        cases=args.cases,
        seed=args.seed,
        oracle_cap=args.oracle_cap,
        max_length=args.max_length,
        config=cfg,
        progress=progress,
    )
    if args.format == "kv":
        print(f"cases={report.cases}")
        print(f"roundtrips={report.roundtrips}")
        print(f"formula_checks={report.formula_checks}")
        print(f"parse_checks={report.parse_checks}")
        print(f"failures={len(report.failures)}")
    else:
        print(
            f"{report.cases} cases: {report.roundtrips} roundtrips,"
            f" {report.formula_checks} formula checks,"
            f" {report.parse_checks} parse-bound checks,"
            f" {len(report.failures)} failures"
        )
    for line in report.failures:
        print(f"FAIL {line}", file=sys.stderr)
    return 0 if report.ok else 1


def _cmd_gen_corpus(args: argparse.Namespace) -> int:
    n = args.size
    seed = args.seed
    if args.kind == "mutated":
        base_n = args.seed_length or max(n // max(args.copies, 1), 1)
        base = random_bytes(base_n, seed)
        chunks = mutated_copies_stream(base, args.copies, args.rate, seed + 1)

        def clipped() -> Iterable[bytes]:
            left = n
            for ch in chunks:
                if left <= 0:
                    break
                yield ch[:left]
                left -= min(len(ch), left)

        wrote = _write_atomic(args.output, clipped())
    else:
        maker = {
            "random": random_bytes,
            "text": text_like,
            "periodic": periodic,
            "sparse": sparse_bytes,
        }[args.kind]
        wrote = _write_atomic(args.output, [maker(n, seed=seed)])
    if not args.quiet:
        print(f"{args.output}: {wrote} bytes", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chunkpair",
        description="Grammar compression for repetitive byte streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compress", help="compress a file or stdin ('-')")
    pc.add_argument("input", help="input path, or - for stdin")
    pc.add_argument("-o", "--output", required=True, help="artifact path, or -")
    _add_knobs(pc)
    pc.add_argument(
        "--recurse-threshold",
        type=int,
        default=_env_int("RECURSE_THRESHOLD", 1 << 22),
        help="minimum ID-sequence length before another chunking level",
    )
    pc.add_argument(
        "--parse-report",
        metavar="PATH",
        default=None,
        help="also write a key=value sidecar describing the parse",
    )
    pc.add_argument("-q", "--quiet", action="store_true")
    pc.set_defaults(func=_cmd_compress)

    pd = sub.add_parser("decompress", help="expand an artifact")
    pd.add_argument("input", help="artifact path, or - for stdin")
    pd.add_argument("-o", "--output", required=True, help="output path, or -")
    pd.set_defaults(func=_cmd_decompress)

    ps = sub.add_parser("stats", help="compress and report size/time/space")
    ps.add_argument("inputs", nargs="+", help="input paths, or - for stdin")
    _add_knobs(ps)
    ps.add_argument(
        "--oracle-cap",
        type=int,
        default=_env_int("ORACLE_CAP", 1_000_000),
        help="run exact parsers when input is at most this long",
    )
    ps.add_argument(
        "--format",
        choices=("text", "kv"),
        default=_env_str("FORMAT", "text"),
    )
    ps.set_defaults(func=_cmd_stats)

    pv = sub.add_parser("verify", help="run self-checks on generated inputs")
    pv.add_argument("--cases", type=int, default=200)
    pv.add_argument("--seed", type=int, default=_env_int("SEED", 0))
    pv.add_argument("--oracle-cap", type=int, default=_env_int("ORACLE_CAP", 200_000))
    pv.add_argument("--max-length", type=int, default=100_000)
    pv.add_argument(
        "--format",
        choices=("text", "kv"),
        default=_env_str("FORMAT", "text"),
    )
    pv.add_argument("-v", "--verbose", action="store_true")
    _add_knobs(pv)
    pv.set_defaults(func=_cmd_verify)

    pg = sub.add_parser("gen-corpus", help="write a deterministic test input")
    pg.add_argument("-o", "--output", required=True)
    pg.add_argument("--size", type=int, required=True)
    pg.add_argument("--seed", type=int, default=_env_int("SEED", 0))
    pg.add_argument(
        "--kind",
        choices=("mutated", "random", "text", "periodic", "sparse"),
        default="mutated",
    )
    pg.add_argument("--copies", type=int, default=1000)
    pg.add_argument("--rate", type=float, default=1e-3)
    pg.add_argument("--seed-length", type=int, default=None)
    pg.add_argument("-q", "--quiet", action="store_true")
    pg.set_defaults(func=_cmd_gen_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CorruptArtifactError as exc:
        print(f"chunkpair: corrupt artifact: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"chunkpair: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"chunkpair: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 1


if __name__ == "__main__":
    sys.exit(main())
