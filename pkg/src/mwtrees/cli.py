"""Command line interface.

Subcommands build the block matrices of a graph file, invert or take the
determinant of a tree distance matrix with closed-form/factorization
cross-checks, run the verification suites, emit random instances, and find
rank-deficient weightings of non-tree graphs.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 parse or
validation failure, 3 precondition failure (not a tree, not SPD, ...),
4 matrix not invertible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .closedforms import (
    SUITES,
    VerificationReport,
    distance_determinant_sign_log,
    distance_inverse,
    rank_deficient_weighting,
    reweighted_scalar_laplacian,
    verification_suite,
)
from .errors import (
    GraphFileError,
    MWTreesError,
    NotInvertibleError,
)
from .formats import (
    check_record,
    dump_graph,
    input_digest,
    loads_graph,
    make_report,
)
from .generators import GenConfig, WeightKind, random_connected_nontree, random_tree
from .graphs import MatrixWeightedGraph
from .linalg import numerical_rank, sign_log_determinant
from .operators import LaplacianMode, distance_matrix, incidence_matrix, laplacian

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NOT_INVERTIBLE = 4


def _read_input(path: str) -> tuple[MatrixWeightedGraph, str]:
    """Load a graph from a file path or stdin ('-'); return it with the
    sha256 digest of the raw text."""
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise GraphFileError(f"cannot read {path}: {exc}") from None
    return loads_graph(text), input_digest(text.encode("utf-8"))


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2))
        return
    print(f"# {report['command']}  input {report['input_digest']}")
    for extra in sorted(report):
        if extra in ("schema", "version", "command", "input_digest",
                     "checks", "matrices"):
            continue
        print(f"{extra}: {report[extra]}")
    for check in report["checks"]:
        if check["status"] == "SKIPPED":
            print(f"{check['name']:24s} SKIPPED   ({check['detail']})")
        else:
            print(
                f"{check['name']:24s} {check['status']:8s} "
                f"residual {check['residual']:.3e}  "
                f"tolerance {check['tolerance']:.3e}"
            )
    for name, rows in report.get("matrices", {}).items():
        print(f"{name} =")
        print(np.array2string(np.asarray(rows), precision=6, suppress_small=True))


def _exit_from_checks(checks: list[dict]) -> int:
    failed = any(c["status"] == "FAIL" for c in checks)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_build(args) -> int:
    g, digest = _read_input(args.input)
    mode = LaplacianMode(args.mode)
    if args.which == "D":
        block = distance_matrix(g)
    elif args.which == "L":
        block = laplacian(g, mode)
    else:
        block = incidence_matrix(g)
    extras = {
        "which": args.which,
        "mode": mode.value if args.which == "L" else None,
        "n": g.n,
        "s": g.s,
        "shape": list(block.data.shape),
    }
    report = make_report("build", digest, [], extras,
                         {args.which: block.data})
    _emit(report, args.format)
    return EXIT_OK


def cmd_invert(args) -> int:
    g, digest = _read_input(args.input)
    inv = distance_inverse(g)
    dist = distance_matrix(g)
    residual = float(
        np.max(np.abs(dist.data @ inv.data - np.eye(g.n * g.s)))
    )
    tolerance = args.tolerance
    if tolerance is None:
        tolerance = 1e-8 * g.n * g.s
    rep = VerificationReport(
        name="inverse_residual",
        status="PASS" if residual <= tolerance else "FAIL",
        residual=residual,
        tolerance=float(tolerance),
        n=g.n,
        s=g.s,
        detail="max |entry| of D @ D_inverse - I",
    )
    checks = [check_record(rep)]
    matrices = None
    if args.emit_matrices:
        matrices = {"D": dist.data, "D_inverse": inv.data}
    report = make_report("invert", digest, checks,
                         {"n": g.n, "s": g.s}, matrices)
    _emit(report, args.format)
    return _exit_from_checks(checks)


def cmd_det(args) -> int:
    g, digest = _read_input(args.input)
    sign_cf, log_cf = distance_determinant_sign_log(g)
    sign_lu, log_lu = sign_log_determinant(distance_matrix(g).data)
    reports = [
        VerificationReport(
            name="determinant_sign",
            status="PASS" if sign_cf == sign_lu else "FAIL",
            residual=abs(sign_cf - sign_lu),
            tolerance=0.0,
            n=g.n,
            s=g.s,
            detail=f"closed form {sign_cf:+.0f}, factorization {sign_lu:+.0f}",
        )
    ]
    if sign_cf == 0.0 or sign_lu == 0.0:
        reports.append(VerificationReport(
            name="determinant_logmag", status="SKIPPED", residual=None,
            tolerance=None, n=g.n, s=g.s,
            detail="determinant is zero, no magnitude to compare",
        ))
    else:
        residual = abs(log_cf - log_lu) / max(1.0, abs(log_lu))
        reports.append(VerificationReport(
            name="determinant_logmag",
            status="PASS" if residual <= args.tolerance else "FAIL",
            residual=residual,
            tolerance=args.tolerance,
            n=g.n,
            s=g.s,
            detail="relative gap between closed-form and factorization "
                   "log-magnitudes",
        ))
    checks = [check_record(r) for r in reports]
    value = 0.0 if sign_cf == 0.0 else sign_cf * float(np.exp(log_cf))
    extras = {
        "n": g.n,
        "s": g.s,
        "sign": sign_cf,
        "log_abs_determinant": None if sign_cf == 0.0 else log_cf,
        "determinant": value,
    }
    report = make_report("det", digest, checks, extras)
    _emit(report, args.format)
    return _exit_from_checks(checks)


def cmd_verify(args) -> int:
    g, digest = _read_input(args.input)
    reports = verification_suite(
        g,
        suite=args.suite,
        seed=args.seed,
        trials=args.trials,
        rel_tol=args.tolerance,
    )
    checks = [check_record(r) for r in reports]
    matrices = None
    if args.emit_matrices:
        matrices = {}
        try:
            matrices["D"] = distance_matrix(g).data
        except MWTreesError:
            pass
        try:
            matrices["L"] = laplacian(g, LaplacianMode.INVERTED).data
        except MWTreesError:
            pass
    extras = {"suite": args.suite, "seed": args.seed, "n": g.n, "s": g.s}
    report = make_report("verify", digest, checks, extras, matrices)
    _emit(report, args.format)
    return _exit_from_checks(checks)


def cmd_random(args) -> int:
    kind = WeightKind(args.kind)
    os.makedirs(args.out, exist_ok=True)
    files = []
    for i in range(args.count):
        seed = args.seed + i
        config = GenConfig(
            n_range=(args.n, args.n),
            s_range=(args.s, args.s),
            kind=kind,
            condition_cap=args.condition_cap,
            seed=seed,
        )
        if args.topology == "tree":
            g = random_tree(config)
        else:
            g = random_connected_nontree(config)
        path = os.path.join(args.out, f"graph-{i:04d}.json")
        dump_graph(g, path)
        files.append({"path": path, "seed": seed, "n": g.n, "s": g.s,
                      "edges": g.m})
    manifest = {
        "schema": "mwtrees/manifest/v1",
        "kind": kind.value,
        "topology": args.topology,
        "count": args.count,
        "files": files,
    }
    print(json.dumps(manifest, indent=2))
    return EXIT_OK


def cmd_deficient(args) -> int:
    g, digest = _read_input(args.input)
    witness = rank_deficient_weighting(g)
    lap = reweighted_scalar_laplacian(g, witness.edge_index, witness.w)
    rank = numerical_rank(lap)
    rep = VerificationReport(
        name="rank_deficiency",
        status="PASS" if rank < g.n - 1 else "FAIL",
        residual=float(rank),
        tolerance=float(g.n - 2),
        n=g.n,
        s=g.s,
        detail=f"scalar Laplacian rank with weight {witness.w:g} on edge "
               f"{witness.endpoints}",
    )
    checks = [check_record(rep)]
    extras = {
        "n": g.n,
        "s": g.s,
        "edge_index": witness.edge_index,
        "endpoints": list(witness.endpoints),
        "w": witness.w,
        "trees_with_edge": witness.trees_with_edge,
        "trees_without_edge": witness.trees_without_edge,
        "achieved_rank": rank,
        "full_rank": g.n - 1,
    }
    report = make_report("deficient", digest, checks, extras)
    _emit(report, args.format)
    return _exit_from_checks(checks)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwtrees",
        description="Distance matrices, block Laplacians and spectral "
                    "checks for matrix-weighted graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="graph JSON file, or - for stdin")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("build", help="assemble D, L or Q for a graph file")
    add_common(p)
    p.add_argument("--which", choices=("D", "L", "Q"), required=True)
    p.add_argument("--mode", choices=("raw", "inverted"), default="inverted",
                   help="Laplacian blocks use weights or their inverses")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("invert",
                       help="closed-form inverse of the tree distance matrix")
    add_common(p)
    p.add_argument("--tolerance", type=float, default=None,
                   help="max-entry residual bound (default 1e-8 * n * s)")
    p.add_argument("--emit-matrices", action="store_true")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("det",
                       help="closed-form determinant, cross-checked against "
                            "a factorization")
    add_common(p)
    p.add_argument("--tolerance", type=float, default=1e-7,
                   help="relative log-magnitude gap bound")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("verify", help="run a verification suite")
    add_common(p)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5,
                   help="reweighting trials in the rank suite")
    p.add_argument("--tolerance", type=float, default=1e-8,
                   help="relative tolerance for the identity residuals")
    p.add_argument("--emit-matrices", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="write random instance files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--kind", choices=[k.value for k in WeightKind],
                   default="spd")
    p.add_argument("--topology", choices=("tree", "nontree"), default="tree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--condition-cap", type=float, default=1e4)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("deficient",
                       help="rank-deficient scalar weighting of a non-tree")
    add_common(p)
    p.set_defaults(func=cmd_deficient)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except GraphFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_PARSE
    except NotInvertibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_INVERTIBLE
    except MWTreesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
