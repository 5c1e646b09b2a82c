"""Command-line front end.

Exit codes: 0 certified orthogonal or check passed, 1 certified not
orthogonal or check failed, 2 consistent at tolerance or inconclusive,
64 usage error, 66 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .column_orth import ColumnFamily, check_column_orthonormal
from .core_linalg import ToleranceConfig
from .errors import MatrixFormatError, OrthokitError, ZeroOperator
from .generators import FAMILIES, generate
from .matrix_io import load_family, load_matrix, save_family, save_matrix, to_jsonable
from .normal_pairs import check_normal_pair, cone_points_csv, cone_refuter, joint_spectrum
from .pythagoras import GridSpec, check_pythagoras, defect_profile
from .range_orth import (
    check_range_orthogonal,
    majorization_test,
    metric_inequality_test,
    pythagoras_via_state,
)
from .rank1 import decompose_rank1, rank1_certify
from .verdict import OrthoVerdict, Reason, Status

EX_OK, EX_NO, EX_UNSURE, EX_USAGE, EX_NOINPUT = 0, 1, 2, 64, 66

_EXIT = {
    Status.CERTIFIED_ORTHOGONAL: EX_OK,
    Status.CERTIFIED_NOT_ORTHOGONAL: EX_NO,
    Status.CONSISTENT_AT_TOLERANCE: EX_UNSURE,
    Status.INCONCLUSIVE: EX_UNSURE,
    Status.NOT_REFUTED: EX_UNSURE,
    Status.NOT_APPLICABLE: EX_UNSURE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _cfg(args) -> ToleranceConfig:
    kw = {"rng_seed": args.seed}
    if args.tol is not None:
        kw["rel_tol"] = args.tol
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    try:
        return ToleranceConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grid(args) -> GridSpec:
    if args.radii is None and args.angles is None:
        return GridSpec()
    try:
        return GridSpec.sized(args.radii or 32, args.angles or 64)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _header(args, cfg: ToleranceConfig) -> dict:
    return {
        "command": args.command,
        "version": __version__,
        "seed": cfg.rng_seed,
        "rel_tol": cfg.rel_tol,
        "abs_tol": cfg.abs_tol,
    }


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    _emit(args, json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _trivial_zero() -> OrthoVerdict:
    return OrthoVerdict(Status.CERTIFIED_ORTHOGONAL, Reason.TRIVIAL_ZERO_MEMBER, None)


def _pair(args):
    return load_matrix(args.A), load_matrix(args.B)


def cmd_check_pythagoras(args) -> int:
    cfg = _cfg(args)
    a, b = _pair(args)
    grid = _grid(args)
    try:
        v = check_pythagoras(a, b, cfg, grid)
    except ZeroOperator:
        v = _trivial_zero()
    if args.format == "csv":
        _emit(args, v.profile.to_csv() if v.profile is not None else "re_lambda,im_lambda,defect\n")
    else:
        _emit_json(args, {"header": _header(args, cfg), "verdict": v})
    return _EXIT[v.status]


def cmd_check_column(args) -> int:
    cfg = _cfg(args)
    members = []
    for path in args.members:
        members.extend(load_family(path))
    fam = ColumnFamily.from_members(members, cfg, row=args.row)
    report = check_column_orthonormal(fam, trials=args.trials, cfg=cfg)
    _emit_json(args, {"header": {**_header(args, cfg), "row": args.row, "members": len(members)}, "report": report})
    return _EXIT[report.verdict.status]


def cmd_check_range(args) -> int:
    cfg = _cfg(args)
    a, b = _pair(args)
    orth = check_range_orthogonal(a, b, cfg)
    payload = {"header": _header(args, cfg), "range_orthogonal": orth}
    if a.shape[0] == b.shape[0]:
        m = metric_inequality_test(a, b, args.trials, cfg)
        payload["metric_inequality"] = {"all_hold": m.all_hold, "worst_slack": m.worst_slack}
    if a.shape[1] == b.shape[1]:
        try:
            mj = majorization_test(a, b, args.trials, cfg)
            payload["majorization"] = {"holds": mj.verdict, "gap": mj.gap, "t": mj.t, "witness": mj.witness}
        except OrthokitError as exc:
            payload["majorization"] = {"error": str(exc)}
    if orth and a.shape == b.shape:
        try:
            payload["pythagoras"] = pythagoras_via_state(a, b, cfg)
        except ZeroOperator:
            payload["pythagoras"] = _trivial_zero()
    _emit_json(args, payload)
    return EX_OK if orth else EX_NO


def cmd_check_normal(args) -> int:
    cfg = _cfg(args)
    a, b = _pair(args)
    v = check_normal_pair(a, b, cfg)
    if args.format == "csv":
        _emit(args, joint_spectrum(a, b, cfg).to_csv())
        return _EXIT[v.status]
    payload = {"header": _header(args, cfg), "verdict": v, "joint_spectrum": joint_spectrum(a, b, cfg).points}
    na, nb = np.linalg.norm(a, 2), np.linalg.norm(b, 2)
    if na > 0 and nb > 0:
        cone, pts = cone_refuter(a / na, b / nb, args.trials, cfg)
        payload["cone"] = {"status": cone.status, "n_points": len(pts)}
    _emit_json(args, payload)
    return _EXIT[v.status]


def cmd_check_rank1(args) -> int:
    cfg = _cfg(args)
    a, b = _pair(args)
    v = rank1_certify(a, b, cfg)
    payload = {"header": _header(args, cfg), "verdict": v}
    if v.reason != Reason.CORNER_ENTRY_NONZERO:
        payload["decomposition"] = decompose_rank1(a / np.linalg.norm(a, 2), b, cfg).to_dict()
    _emit_json(args, payload)
    return _EXIT[v.status]


def _parse_value(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null"):
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse parameter value {text!r}") from exc


def cmd_gen(args) -> int:
    if args.list or not args.family:
        lines = []
        for name, spec in FAMILIES.items():
            params = ", ".join(f"{k}={v}" for k, v in spec.params.items()) or "(none)"
            lines.append(f"{name:18s} {spec.family_id:20s} {params}\n    {spec.doc}  [{spec.provenance}]\n")
        sys.stdout.write("".join(lines))
        return EX_OK if args.list else EX_USAGE
    params = {}
    for item in args.param:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = _parse_value(v.strip())
    try:
        mats = generate(args.family, conjugate_seed=args.conjugate_seed, **params)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    except OrthokitError as exc:
        sys.stderr.write(f"orthokit gen: {exc}\n")
        return EX_USAGE
    names = ["A", "B"] if len(mats) == 2 and args.family != "column-canonical" else [f"C{j}" for j in range(len(mats))]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, m in zip(names, mats):
            save_matrix(out / f"{name}.json", m)
        if names[0] == "C0":
            save_family(out / "family.json", mats)
    else:
        sys.stdout.write(json.dumps(to_jsonable(dict(zip(names, mats))), sort_keys=True, indent=2) + "\n")
    return EX_OK


def cmd_sweep(args) -> int:
    cfg = _cfg(args)
    a, b = _pair(args)
    prof = defect_profile(a, b, _grid(args), cfg)
    if args.format == "json":
        _emit_json(args, {"header": _header(args, cfg), "profile": prof.summary()})
    else:
        _emit(args, prof.to_csv())
    return EX_OK if prof.violations().size == 0 else EX_NO


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(echo=lambda line: print(line, flush=True))
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    return EX_OK if n_pass == len(results) else EX_NO


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, help="relative tolerance (default 1e-8)")
    common.add_argument("--abs-tol", type=float, help="absolute tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized stages (default 0)")
    common.add_argument("--out", help="write the report here instead of stdout")

    grid = _Parser(add_help=False)
    grid.add_argument("--radii", type=int, help="number of log-spaced radii in [1e-3, 10] (default 32)")
    grid.add_argument("--angles", type=int, help="angles per radius (default 64)")

    p = _Parser(prog="orthokit", description="Orthogonality certificates and refuters for complex matrices.")
    p.add_argument("--version", action="version", version=f"orthokit {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("check-pythagoras", parents=[common, grid], help="decide A _|_P B")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.set_defaults(func=cmd_check_pythagoras)

    s = sub.add_parser("check-column", parents=[common], help="column orthonormality of a family")
    s.add_argument("members", nargs="+", help="family file(s): JSON array of matrices or single matrices")
    s.add_argument("--row", action="store_true", help="test row orthonormality (adjoints of the inputs)")
    s.add_argument("--trials", type=int, default=100, help="coefficient identity trials per n (0 to skip)")
    s.set_defaults(func=cmd_check_column)

    s = sub.add_parser("check-range", parents=[common], help="range orthogonality A*B = 0 and its metric tests")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--trials", type=int, default=1000)
    s.set_defaults(func=cmd_check_range)

    s = sub.add_parser("check-normal", parents=[common], help="commuting normal pair: joint spectrum test")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--trials", type=int, default=200, help="sampled states for the cone refuter")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.set_defaults(func=cmd_check_normal)

    s = sub.add_parser("check-rank1", parents=[common], help="A against a rank-one projection B")
    s.add_argument("A")
    s.add_argument("B")
    s.set_defaults(func=cmd_check_rank1)

    s = sub.add_parser("gen", help="generate a known orthogonal pair or family")
    s.add_argument("family", nargs="?")
    s.add_argument("--list", action="store_true", help="list families and their parameters")
    s.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    s.add_argument("--seed", dest="conjugate_seed", type=int, default=None, help="apply a seeded unitary equivalence")
    s.add_argument("--out", help="directory for A.json/B.json (or C0.json, ... and family.json)")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("sweep", parents=[common, grid], help="defect profile over the lambda grid")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--format", choices=["json", "csv"], default="csv")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("selftest", help="run the acceptance criteria")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EX_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"orthokit: {exc}\n")
        return EX_USAGE
    except (OSError, MatrixFormatError) as exc:
        sys.stderr.write(f"orthokit: cannot read input: {exc}\n")
        return EX_NOINPUT
    except OrthokitError as exc:
        sys.stderr.write(f"orthokit: invalid input: {type(exc).__name__}: {exc}\n")
        return EX_NOINPUT


if __name__ == "__main__":
    sys.exit(main())
