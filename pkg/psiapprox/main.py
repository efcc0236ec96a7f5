import argparse
from pathlib import Path
from typing import Sequence

from dotenv import dotenv_values

from .extremal import FlatnessError
from .harness import (
    check_bounds,
    dump_witnesses,
    reports_frame,
    run_sweep,
    write_report,
)
from .utils.models import ApproxMethod, SweepConfig

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def load_config(path: Path) -> SweepConfig:
    """Read a flat `key=value` config file."""
    path = Path(path)
    if not path.exists():
        raise ValueError(f"config file not found: {path}")
    return SweepConfig.from_dict(dict(dotenv_values(path)))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, required=True, help="key=value config file")
    parser.add_argument("--out", type=Path, help="CSV output path (overrides `output`)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--seed-count", type=int)
    parser.add_argument("--oversample", type=int, help="grid oversampling factor")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--max-iter", type=int)
    parser.add_argument("--psi", help="power:r, log:eps or table:path")
    parser.add_argument("--beta", type=float)
    parser.add_argument(
        "--method",
        type=ApproxMethod,
        choices=[ApproxMethod.IRLS, ApproxMethod.LINPROG],
        help="E_n solver at s != 2",
    )
    parser.add_argument("--dump-dir", type=Path, help="write f1/f2 coefficient files here")
    parser.add_argument(
        "--corrupt-signs",
        action="store_true",
        default=None,
        help="use all-ones signs in f2 (negative control)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psiapprox",
        description="Best and best orthogonal trigonometric approximation of (psi, beta)-classes.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    _add_common(commands.add_parser("sweep", help="tabulate deviations over (n, s)"))
    _add_common(commands.add_parser("check", help="evaluate the explicit inequalities"))
    return parser


def _resolve(args: argparse.Namespace) -> SweepConfig:
    config = load_config(args.config).with_overrides(
        output=args.out,
        seed=args.seed,
        seed_count=args.seed_count,
        grid_oversample=args.oversample,
        tol=args.tol,
        max_iter=args.max_iter,
        psi=args.psi,
        beta=args.beta,
        method=args.method,
        dump_dir=args.dump_dir,
        corrupt_signs=args.corrupt_signs,
    )
    if config.output is None:
        raise ValueError("no output path: pass --out or set `output` in the config")
    return config


def _sweep(config: SweepConfig) -> int:
    frame = run_sweep(config)
    write_report(frame, config.output)
    print(f"✅ Wrote {len(frame)} sweep rows to {config.output}")
    return EXIT_OK


def _check(config: SweepConfig) -> int:
    reports = check_bounds(config)
    write_report(reports_frame(reports), config.output)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        s = "-" if r.s is None else f"{r.s:g}"
        print(f"❌ {r.inequality} n={r.n} s={s}: {r.lhs:.6g} > {r.rhs:.6g}")
    if failed:
        print(f"❌ {len(failed)} of {len(reports)} inequalities failed ({config.output})")
        return EXIT_FAILED
    print(f"✅ All {len(reports)} inequalities hold ({config.output})")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolve(args)
        if config.dump_dir is not None:
            written = dump_witnesses(config, config.dump_dir)
            print(f"💾 Dumped {len(written)} coefficient files to {config.dump_dir}")
        if args.command == "sweep":
            return _sweep(config)
        return _check(config)
    except (ValueError, IndexError) as e:
        print(f"❌ Configuration error: {e}")
        return EXIT_CONFIG
    except FlatnessError as e:
        print(f"❌ {e}")
        return EXIT_FAILED
    except OSError as e:
        print(f"❌ I/O error: {e}")
        return EXIT_CONFIG
