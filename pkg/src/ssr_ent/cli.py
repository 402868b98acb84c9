"""``ssr-ent`` command line.

Exit codes: 0 possible / pass, 1 impossible, 2 input error, 3 undecidable,
4 catalyst search exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import demo
from .catalysis import build_catalyst, search_catalyst, wedge_density
from .fock import catalyst_layout
from .majorization import ProbabilityVector, majorizes, partial_sums_desc
from .operators import purity
from .ssr import SsrKind, decompose
from .statefile import StateFileError, load_state, mixed_to_dict, save_state, state_to_dict
from .transform import ImpureSectorError, TransformationReport, Verdict, decide, schmidt_vector

EXIT_OK = 0
EXIT_IMPOSSIBLE = 1
EXIT_INPUT = 2
EXIT_UNDECIDABLE = 3
EXIT_EXHAUSTED = 4

VERDICT_EXIT = {
    Verdict.POSSIBLE: EXIT_OK,
    Verdict.IMPOSSIBLE: EXIT_IMPOSSIBLE,
    Verdict.UNDECIDABLE: EXIT_UNDECIDABLE,
}


def _fmt(vec) -> str:
    return "-" if vec is None else "{" + ", ".join(f"{v:.6g}" for v in vec) + "}"


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _print_report(report: TransformationReport) -> None:
    print(f"verdict: {report.verdict.value}")
    if report.failing_step is not None:
        print(f"failing step: {report.step} ({report.failing_step.value})")
    print(f"chi distance: {report.chi_distance:.3g}")
    for s in report.per_sector:
        print(f"sector {s.label}: weight {s.weight_rho:.6g} -> {s.weight_sigma:.6g}")
        for tag, vec in (("initial", s.schmidt_rho), ("target", s.schmidt_sigma)):
            if vec is not None:
                print(f"  {tag:7s} schmidt {_fmt(vec.sorted_desc())}  partial sums {_fmt(partial_sums_desc(vec))}")
        if s.majorization_ok is not None:
            print(f"  majorized: {s.majorization_ok}")
    for note in report.notes:
        print(f"note: {note}")


def cmd_sectors(args) -> int:
    rho = load_state(args.state)
    dec = decompose(rho, args.ssr)
    rows = []
    for sector in dec.sectors:
        row = {"sector": str(sector.label), "weight": sector.weight, "purity": None, "pure": None, "schmidt": None}
        if sector.projection is not None:
            row["purity"] = purity(sector.projection)
            try:
                row["schmidt"] = list(schmidt_vector(sector.projection, args.keep).sorted_desc())
                row["pure"] = True
            except ImpureSectorError:
                row["pure"] = False
        rows.append(row)
    out = {"ssr": dec.ssr.value, "chi_zero": dec.chi_is_zero, "sectors": rows}
    if args.json:
        _dump(out)
        return EXIT_OK
    print(f"ssr: {dec.ssr.value}   chi = 0: {dec.chi_is_zero}")
    for row in rows:
        line = f"sector {row['sector']}: weight {row['weight']:.6g}"
        if row["purity"] is not None:
            line += f", purity {row['purity']:.6g}"
            line += f", schmidt {_fmt(row['schmidt'])}" if row["pure"] else " (mixed)"
        print(line)
    return EXIT_OK


def cmd_check(args) -> int:
    rho, sigma = load_state(args.rho), load_state(args.sigma)
    if rho.layout != sigma.layout:
        raise StateFileError("initial and target states declare different layouts", args.sigma)
    report = decide(rho, sigma, args.ssr)
    if args.json:
        _dump(report.to_dict())
    else:
        _print_report(report)
    return VERDICT_EXIT[report.verdict]


def cmd_catalyze(args) -> int:
    rho, sigma = load_state(args.rho), load_state(args.sigma)
    if rho.layout != sigma.layout:
        raise StateFileError("initial and target states declare different layouts", args.sigma)
    result = search_catalyst(
        rho, sigma, args.ssr, args.grid_step, phase_points=args.phase_points, collect_all=args.all
    )
    if args.json:
        _dump(result.to_dict())
    else:
        print(f"examined {result.examined} catalysts")
        for step, count in sorted(result.rejections.items()):
            print(f"  rejected ({step}): {count}")
        if result.found:
            c = result.catalyst
            print(f"found catalyst: R={c.R:g} r1={c.r1:g} r2={c.r2:g} phase1={complex(c.phase1):g} phase2={complex(c.phase2):g}")
            if args.all:
                print(f"{len(result.solutions)} lattice catalysts succeed")
            _print_report(result.joint_report)
        else:
            print("no catalyst in the family succeeds on this lattice")
    if result.found:
        tau_doc = mixed_to_dict(result.catalyst.pure_components(), catalyst_layout())
        if args.emit_catalyst:
            save_state(tau_doc, args.emit_catalyst)
        if args.apply:
            out = Path(args.apply)
            out.mkdir(parents=True, exist_ok=True)
            tau = build_catalyst(result.catalyst)
            save_state(state_to_dict(wedge_density(rho, tau)), out / "rho_joint.json")
            save_state(state_to_dict(wedge_density(sigma, tau)), out / "sigma_joint.json")
            save_state(tau_doc, out / "catalyst.json")
        return EXIT_OK
    return EXIT_EXHAUSTED


def _parse_vector(text: str) -> ProbabilityVector:
    try:
        return ProbabilityVector(float(v) for v in text.replace("{", "").replace("}", "").split(","))
    except ValueError as exc:
        raise StateFileError(f"bad probability vector {text!r}: {exc}") from None


def cmd_majorize(args) -> int:
    x, y = _parse_vector(args.x), _parse_vector(args.y)
    ok = majorizes(y, x)
    out = {
        "x": list(x.sorted_desc()),
        "y": list(y.sorted_desc()),
        "partial_sums_x": list(partial_sums_desc(x)),
        "partial_sums_y": list(partial_sums_desc(y)),
        "x_majorized_by_y": ok,
    }
    if args.json:
        _dump(out)
    else:
        print(f"x = {_fmt(out['x'])}  partial sums {_fmt(out['partial_sums_x'])}")
        print(f"y = {_fmt(out['y'])}  partial sums {_fmt(out['partial_sums_y'])}")
        print(f"x ≺ y: {ok}")
    return EXIT_OK if ok else EXIT_IMPOSSIBLE


def cmd_demo(args) -> int:
    if args.name == "example1":
        checks = demo.no_go_walkthrough(seed=args.seed, grid_step=args.grid_step)
    else:
        checks = demo.catalysis_walkthrough()
    passed = all(c.ok for c in checks)
    if args.json:
        _dump({
            "demo": args.name,
            "pass": passed,
            "checks": [{"name": c.name, "computed": str(c.computed), "expected": str(c.expected), "ok": c.ok} for c in checks],
        })
    else:
        for c in checks:
            print(c.line())
        print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_IMPOSSIBLE


def _grid_step(text: str) -> float:
    value = float(text)
    if not 0 < value <= 0.5:
        raise argparse.ArgumentTypeError("grid step must lie in (0, 0.5]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssr-ent",
        description="Fermionic mode-entanglement conversions under local superselection rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ssr=True):
        if ssr:
            p.add_argument("--ssr", type=SsrKind.parse, default=SsrKind.LOCAL_PARITY, help="parity (default) or number")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("sectors", help="sector weights, purities and Schmidt vectors of a state")
    p.add_argument("state")
    p.add_argument("--keep", default=None, help="party kept by the partial trace (default: first)")
    common(p)
    p.set_defaults(func=cmd_sectors)

    p = sub.add_parser("check", help="decide whether RHO converts to SIGMA")
    p.add_argument("rho")
    p.add_argument("sigma")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalyze", help="search the catalyst family for RHO -> SIGMA")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.add_argument("--grid-step", type=_grid_step, default=0.05)
    p.add_argument("--phase-points", type=int, default=1, help="phase lattice size per coherence")
    p.add_argument("--all", action="store_true", help="scan the whole lattice and count every success")
    p.add_argument("--emit-catalyst", metavar="PATH", help="write the found catalyst as a state file")
    p.add_argument("--apply", metavar="DIR", help="write the joint initial/target states and catalyst to DIR")
    common(p)
    p.set_defaults(func=cmd_catalyze)

    p = sub.add_parser("majorize", help="test x ≺ y for comma-separated probability vectors")
    p.add_argument("x")
    p.add_argument("y")
    common(p, ssr=False)
    p.set_defaults(func=cmd_majorize)

    p = sub.add_parser("demo", help="annotated walkthrough of a worked example")
    p.add_argument("name", choices=sorted(demo.DEMOS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-step", type=_grid_step, default=0.05)
    common(p, ssr=False)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except StateFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
