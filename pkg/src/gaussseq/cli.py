"""Command-line entry point: construct, analyze, gauss, verify, sweep."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .analysis import ambiguity_profile, delta_tolerances, theta_tolerances, welch_bound
from .export import canonical_json, emit_profile, emit_report, write_set
from .gauss import GaussSumInput, gauss_sum_direct, paris_decompose, reduction_remainder
from .harness import DEFAULT_SIZE_CAP, SweepConfig, Target, run_sweep
from .sequences import ConstructionError, LazRegion, SearchError, build_set, find_C1_modulus, find_C2_modulus


def _add_set_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("kind", choices=["C1", "C2", "A1", "A2"])
    p.add_argument("--K", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--L-min", dest="L_min", type=int, help="search for the smallest admissible L >= L_MIN")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="output file (or directory for construct)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--no-cap", action="store_true", help="lift the default 20000 size cap")

    parser = argparse.ArgumentParser(prog="gaussseq", description="Gauss sum bounds and Chu/Alltop sequence-set verification.")
    parser.add_argument("--version", action="version", version=f"gaussseq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a sequence set and export it")
    _add_set_args(p)

    p = sub.add_parser("analyze", parents=[common], help="correlation / ambiguity tolerances of a set")
    _add_set_args(p)
    p.add_argument("--zx", type=int, help="delay half-width of the ambiguity window")
    p.add_argument("--zy", type=int, help="Doppler half-width of the ambiguity window")
    p.add_argument("--engine", choices=["fast", "direct"], default="fast")
    p.add_argument("--profile", nargs=2, type=int, metavar=("ROOT1", "ROOT2"),
                   help="with --format csv: write the profile of this pair")
    p.add_argument("--nu", type=int, default=0, help="Doppler index for --profile")

    p = sub.add_parser("gauss", parents=[common], help="evaluate one sum S_N(x, theta)")
    p.add_argument("N", type=int)
    p.add_argument("x", help="slope, e.g. 3/7 or 0.25")
    p.add_argument("theta", nargs="?", default="0")
    p.add_argument("--decompose", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run one verification target")
    p.add_argument("target", choices=[t.value for t in Target])
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="target parameter; VALUE is parsed as JSON when possible")
    p.add_argument("--rng", default="pcg64")

    p = sub.add_parser("sweep", parents=[common], help="run the targets listed in a JSON config file")
    p.add_argument("config", type=Path)
    return parser


def _number(text: str):
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _param_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _set_from(args) -> Any:
    params = {k: getattr(args, k) for k in ("K", "m", "L", "p") if getattr(args, k) is not None}
    if "L" not in params and args.L_min is not None:
        if args.kind == "C1":
            params["L"] = find_C1_modulus(params.get("K", 0), args.L_min)
        elif args.kind == "C2":
            params["L"] = find_C2_modulus(params.get("K", 0), params.get("m", 0), args.L_min)
    if not args.no_cap:
        for name in ("L", "p"):
            if params.get(name, 0) > DEFAULT_SIZE_CAP:
                raise ValueError(f"{name} = {params[name]} exceeds the size cap {DEFAULT_SIZE_CAP}; pass --no-cap")
    return build_set(args.kind, **params)


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def _cmd_construct(args) -> int:
    sset = _set_from(args)
    if args.out is not None and args.format == "csv":
        for path in write_set(sset, args.out):
            print(path)
        return 0
    payload = {
        "kind": sset.kind.value,
        "params": sset.params,
        "roots": sset.roots,
        "laz": None if sset.laz is None else {"z_x": sset.laz.z_x, "z_y": sset.laz.z_y},
        "small_modulus": sset.small_modulus,
    }
    if args.out is not None:
        payload["samples"] = {
            str(s.root): [[float(v.real), float(v.imag)] for v in s.samples] for s in sset.members
        }
    _write(canonical_json(payload), args.out)
    return 0


def _tol_dict(tol) -> dict[str, Any]:
    w = tol.witness
    return {
        "auto": tol.auto_tol,
        "cross": tol.cross_tol,
        "max": tol.max_tol,
        "witness": None if w is None else dict(zip(("root1", "root2", "tau", "nu"), w)),
    }


def _cmd_analyze(args) -> int:
    sset = _set_from(args)
    if args.format == "csv":
        if not args.profile:
            raise ValueError("--format csv needs --profile ROOT1 ROOT2")
        by_root = {s.root: s for s in sset.members}
        try:
            a, b = (by_root[r] for r in args.profile)
        except KeyError as exc:
            raise ValueError(f"root {exc} is not in the set (roots {sset.roots})") from None
        values = ambiguity_profile(a, b, args.nu)
        L = sset.length
        rows = [(tau, args.nu, v) for tau, v in zip(range(-(L - 1), L), values)]
        if args.out is None:
            raise ValueError("--format csv needs --out")
        emit_profile(rows, args.out)
        return 0

    result: dict[str, Any] = {
        "kind": sset.kind.value,
        "params": sset.params,
        "welch_bound": welch_bound(sset.length, len(sset)),
        "delta": _tol_dict(delta_tolerances(sset, engine=args.engine, workers=args.workers)),
    }
    laz = sset.laz
    if args.zx is not None or args.zy is not None:
        base = laz or LazRegion(1, 1)
        laz = LazRegion(args.zx or base.z_x, args.zy or base.z_y)
        laz.check_length(sset.length)
    if laz is not None:
        result["laz"] = {"z_x": laz.z_x, "z_y": laz.z_y}
        result["theta"] = _tol_dict(theta_tolerances(sset, laz, engine=args.engine, workers=args.workers))
    _write(canonical_json(result), args.out)
    return 0


def _cmd_gauss(args) -> int:
    inp = GaussSumInput(args.N, _number(args.x), _number(args.theta))
    value = gauss_sum_direct(inp)
    result: dict[str, Any] = {
        "N": inp.N,
        "x": str(inp.x),
        "theta": str(inp.theta),
        "re": value.real,
        "im": value.imag,
        "abs": abs(value),
    }
    if args.decompose:
        d = paris_decompose(inp)
        result["decomposition"] = {
            "M": d.M,
            "epsilon": d.epsilon,
            **{
                name: [getattr(d, name).real, getattr(d, name).imag]
                for name in ("main_term", "mu_term", "E_term", "g_term", "residual_R")
            },
            "abs_residual_R": abs(d.residual_R),
            "reduction_remainder": reduction_remainder(inp),
        }
    _write(canonical_json(result), args.out)
    return 0


def _emit(reports, args) -> int:
    if args.out is not None:
        emit_report(reports if len(reports) > 1 else reports[0], args.out)
    else:
        payload = [r.to_dict() for r in reports]
        sys.stdout.write(canonical_json(payload if len(payload) > 1 else payload[0]))
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.target}: observed {r.observed_max:.6g} vs {r.bound_name} = {r.bound_value:.6g}"
              f" witness {r.witness}", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_verify(args) -> int:
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--param expects KEY=VALUE, got {item!r}")
        params[key] = _param_value(value)
    cfg = SweepConfig(args.target, params, seed=args.seed, workers=args.workers, rng=args.rng,
                      size_cap=None if args.no_cap else DEFAULT_SIZE_CAP)
    return _emit([run_sweep(cfg)], args)


def _cmd_sweep(args) -> int:
    try:
        data = json.loads(args.config.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read {args.config}: {exc.strerror or exc}") from exc
    entries = data.get("targets", [data]) if isinstance(data, dict) else data
    reports = []
    for entry in entries:
        entry = dict(entry)
        entry.setdefault("seed", args.seed)
        entry.setdefault("workers", args.workers)
        if args.no_cap:
            entry["size_cap"] = None
        reports.append(run_sweep(SweepConfig.from_dict(entry)))
    if not reports:
        raise ValueError(f"{args.config}: no targets")
    return _emit(reports, args)


_COMMANDS = {
    "construct": _cmd_construct,
    "analyze": _cmd_analyze,
    "gauss": _cmd_gauss,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConstructionError as exc:
        print(f"error: construction precondition failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, SearchError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
