"""Command-line entry point: ``skelcodec {encode,decode,stats,gen}``."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import document
from .codec import Scheme, decode_sequence, direct_baseline_bytes, encode_sequence
from .errors import SkeletonCodecError
from .report import build_row, reduction, resample, to_csv, to_markdown
from .synth import MOTIONS, GenConfig, generate


class UsageError(Exception):
    pass


def bundled_samples() -> list[Path]:
    root = resources.files("skelcodec") / "samples"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {value}")
    return value


def cmd_encode(args: argparse.Namespace) -> int:
    seq = resample(document.load_sequence(args.input), args.frame_skip)
    data = encode_sequence(seq, Scheme.parse(args.scheme))
    Path(args.output).write_bytes(data)
    direct = direct_baseline_bytes(seq)
    print(
        f"{args.output}: {len(data)} bytes, {args.scheme.upper()}, {len(seq.frames)} frames "
        f"(direct {direct} bytes, reduction {reduction(len(data), direct):.1f}%)"
    )
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    seq = decode_sequence(Path(args.input).read_bytes())
    text = document.dumps(seq)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    paths = [Path(p) for p in args.inputs]
    if args.bundled:
        paths += bundled_samples()
    if not paths:
        raise UsageError("no inputs (give paths or --bundled)")
    rows = []
    for path in paths:
        seq = document.load_sequence(path)
        for skip in args.frame_skip:
            rows.append(build_row(path.stem, seq, skip, args.source))
    text = to_csv(rows) if args.format == "csv" else to_markdown(rows)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    cfg = GenConfig(
        persons=args.persons,
        frames=args.frames,
        seed=args.seed,
        width=args.width,
        height=args.height,
        motion=args.motion,
        noise=args.noise,
        churn=args.churn,
        respawn=args.respawn,
        dropout=args.dropout,
    )
    try:
        cfg.check()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    document.save_sequence(generate(cfg), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skelcodec", description="Lossless skeleton sequence codec.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a JSON sequence to an SKC1 bitstream")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--scheme", choices=["cm1", "cm2", "cm3", "cm4"], default="cm4", type=str.lower)
    p.add_argument("--frame-skip", type=_non_negative, default=0, metavar="N")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode an SKC1 bitstream to JSON")
    p.add_argument("input")
    p.add_argument("output", help="output path, or - for stdout")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("stats", help="compare direct coding with CM1..CM4")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--bundled", action="store_true", help="include the bundled sample sequences")
    p.add_argument("--frame-skip", type=_non_negative, nargs="+", default=[0], metavar="N")
    p.add_argument("--format", choices=["csv", "markdown"], default="markdown")
    p.add_argument("--source", default="GT", help="source tag copied into every row (e.g. GT, ES)")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("gen", help="generate a seeded synthetic sequence")
    p.add_argument("output")
    p.add_argument("--persons", type=_non_negative, required=True)
    p.add_argument("--frames", type=_non_negative, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--width", type=int, default=1280)
    p.add_argument("--height", type=int, default=720)
    p.add_argument("--motion", choices=MOTIONS, default="constant-velocity")
    p.add_argument("--noise", type=_non_negative, default=0)
    p.add_argument("--churn", type=_probability, default=0.0)
    p.add_argument("--respawn", type=_probability, default=0.5)
    p.add_argument("--dropout", type=_probability, default=0.0, help="per-frame chance a person's joint mask changes")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(f"{args.command}: {exc}")
    except (SkeletonCodecError, OSError) as exc:
        print(f"skelcodec {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
