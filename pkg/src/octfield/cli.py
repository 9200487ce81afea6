"""Batch command line front end.

Subcommands:

- ``classify``: invariants, classification, Delta, infimum energy, prism bounds
- ``spelling``: spelling length of a word, or the free-group energy bound of a class
- ``construct``: build a representative, verify it, write reports and grids
- ``sweep``: run construct over a family of kink triples
- ``verify``: the construct pipeline without artifacts, exit code only

Exit codes: 0 success, 2 invalid topology, 3 unsupported kink sign pattern,
4 unsupported class for construction, 5 invariant failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from pathlib import Path

from . import numerics, reports
from .patchwork import (
    NotApplicableError,
    UnsupportedClassError,
    assemble_patchwork,
    measure_map_wrapping,
    rational_map,
    select_case,
)
from .rational import ConstructionError, realize
from .topology import (
    InvalidTopologyError,
    InvalidWrappingError,
    OctantTopology,
    UnsupportedSignPatternError,
    classify,
    infimum_energy,
    normalize_edge_signs,
    prism_bounds,
    spelling_lower_bound_check,
    wrapping_from_invariants,
)
from .words import (
    format_word,
    generator_degrees,
    optimal_pairing,
    parse_word,
    spelling_length,
)

EXIT_INVALID_TOPOLOGY = 2
EXIT_UNSUPPORTED_SIGNS = 3
EXIT_UNSUPPORTED_CLASS = 4
EXIT_INVARIANT_FAILURE = 5


def _load_class(args):
    if args.json:
        data = json.loads(args.json)
    elif args.path:
        data = json.loads(Path(args.path).read_text())
    else:
        raise ValueError("provide a class via --json or a file path")
    return reports.class_from_dict(data)


def _emit(args, name: str, text: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args) -> int:
    try:
        t, w = _load_class(args)
    except (InvalidTopologyError, InvalidWrappingError, ValueError, KeyError) as e:
        print(f"invalid topology: {e}", file=sys.stderr)
        return EXIT_INVALID_TOPOLOGY
    report = reports.classification_report(t)
    if args.prism:
        lx, ly, lz = args.prism
        c = classify(w, t)
        lo, hi = prism_bounds(w, c, lx, ly, lz)
        report["prism_bounds"] = {"lower": lo, "upper": hi,
                                  "lengths": [lx, ly, lz]}
    print(f"{report['kind']}, Delta={report['delta']}, energy={report['energy_text']}")
    _emit(args, "classify.json", reports.dump_json(report))
    return 0


def cmd_spelling(args) -> int:
    if args.word is not None:
        u = parse_word(args.word, alphabet_size=args.alphabet)
        lam = spelling_length(u)
        pairing = sorted(tuple(sorted(p)) for p in optimal_pairing(u))
        degs = generator_degrees(u)
        report = {
            "word": format_word(u),
            "spelling_length": lam,
            "optimal_pairing": [list(p) for p in pairing],
            "generator_degrees": list(degs),
        }
        print(f"lambda={lam}, pairing={pairing}, degrees={list(degs)}")
        _emit(args, "spelling.json", reports.dump_json(report))
        return 0
    try:
        t, w = _load_class(args)
    except (InvalidTopologyError, InvalidWrappingError, ValueError, KeyError) as e:
        print(f"invalid topology: {e}", file=sys.stderr)
        return EXIT_INVALID_TOPOLOGY
    try:
        bound = spelling_lower_bound_check(t, d0_budget=args.d0, budget=args.budget)
    except UnsupportedSignPatternError as e:
        print(f"unsupported kink sign pattern: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED_SIGNS
    c = classify(w, t)
    energy = infimum_energy(w, c)
    report = {
        "class": reports.class_to_dict(t, w),
        "spelling_bound_pi_units": bound,
        "energy_pi_units": energy,
        "certified": bound <= energy,
        "tight": bound == energy,
    }
    print(f"spelling bound = {bound} pi (energy formula {energy} pi)")
    _emit(args, "spelling.json", reports.dump_json(report))
    return 0


def _max_seam_jump(sm) -> float:
    """Chordal discontinuity across all subdomain seams, sampled both sides."""
    import numpy as np

    from .geometry import chordal_distance, relocate

    spec = getattr(sm, "metadata", None)
    stacks = getattr(spec, "stacks", None) if spec is not None else None
    if not stacks:
        return 0.0
    worst = 0.0
    phis = np.linspace(0.01, math.pi / 2 - 0.01, 333)
    for axis, st in stacks.items():
        for radius in list(st.seams()) + [spec.epsilon, 2 * spec.epsilon]:
            w_in = relocate(axis, radius * (1 - 1e-9) * np.exp(1j * phis))
            w_out = relocate(axis, radius * (1 + 1e-9) * np.exp(1j * phis))
            jump = chordal_distance(sm.evaluate(w_in), sm.evaluate(w_out))
            worst = max(worst, float(np.max(jump)))
    return worst


def _construct_and_verify(t, w, args):
    """Build a representative, run the invariant battery, return a report."""
    c = classify(w, t)
    energy_units = infimum_energy(w, c)
    report = {
        "class": reports.class_to_dict(t, w),
        "kind": c.kind,
        "energy_pi_units": energy_units,
        "epsilon": args.epsilon,
        "grid_level": args.grid_level,
    }
    checks = {}
    if c.kind == "nonconformal":
        t_norm, flips = normalize_edge_signs(t)
        if t_norm != t:
            report["normalized_class"] = reports.class_to_dict(t_norm)
            report["reflections"] = list(flips)
        spec = select_case(t_norm, epsilon=args.epsilon)
        report["patchwork"] = spec.as_dict()
        sm = assemble_patchwork(spec)
        w_check = wrapping_from_invariants(t_norm)
        coverage = (
            wrapping_from_invariants(spec.H0).total_absolute() + 2 * sum(spec.M)
        )
        checks["lemma2_identity"] = coverage == energy_units
    else:
        spec = realize(t)
        report["rational"] = {
            "sign": spec.sign,
            "power": 2 * spec.m + 1,
            "real_factors": [[r, e] for r, e in spec.real_factors],
            "imaginary_factors": [[s, e] for s, e in spec.imag_factors],
            "complex_factors": [[[tt.real, tt.imag], e] for tt, e in spec.complex_factors],
            "orientation": spec.orientation,
        }
        sm = rational_map(spec)
        w_check = w
        checks["lemma2_identity"] = True

    w_meas = measure_map_wrapping(sm, level=min(args.grid_level, 3))
    checks["degrees_match"] = w_meas.values == w_check.values
    residual = numerics.boundary_residual(sm)
    checks["boundary_conditions"] = residual < 1e-9
    report["boundary_residual"] = residual
    seam_jump = _max_seam_jump(sm)
    checks["seam_continuity"] = seam_jump < 1e-6
    report["seam_jump"] = seam_jump
    energy = numerics.dirichlet_energy(sm, level=args.grid_level)
    report["energy_quadrature"] = energy
    report["energy_gap"] = energy - energy_units * math.pi
    report["energy_gap_relative"] = (
        (energy - energy_units * math.pi) / (energy_units * math.pi)
        if energy_units
        else 0.0
    )
    omega, omega_res = numerics.trapped_area(sm, level=min(args.grid_level, 3))
    checks["trapped_area"] = (
        round(omega / (math.pi / 2)) == t.omega_units and omega_res < 0.25
    )
    report["trapped_area"] = omega
    report["trapped_area_residual"] = omega_res
    report["measured_wrapping"] = w_meas.as_dict()
    try:
        degree_report = numerics.degree_count(sm, level=min(args.grid_level, 3))
        report["degree_report"] = degree_report.as_dict()
        report["lemma1_lower_bound"] = numerics.lemma1_lower_bound(degree_report)
    except Exception:
        # multi-stack maps have no exact single-chart mesh; windings above
        # already established the signed degrees
        report["degree_report"] = None
    report["checks"] = checks
    return report, sm, checks


def cmd_construct(args, verify_only: bool = False) -> int:
    try:
        t, w = _load_class(args)
    except (InvalidTopologyError, InvalidWrappingError, ValueError, KeyError) as e:
        print(f"invalid topology: {e}", file=sys.stderr)
        return EXIT_INVALID_TOPOLOGY
    try:
        report, sm, checks = _construct_and_verify(t, w, args)
    except (UnsupportedClassError, NotApplicableError, ConstructionError) as e:
        print(f"unsupported class: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED_CLASS
    ok = all(checks.values())
    gap_pct = 100 * report["energy_gap_relative"]
    print(
        f"energy {report['energy_quadrature'] / math.pi:.4f} pi "
        f"(formula {report['energy_pi_units']} pi, gap {gap_pct:+.2f}%), "
        f"checks: {'pass' if ok else 'FAIL'}"
    )
    if not verify_only:
        formats = args.format.split(",") if args.format else ["json"]
        if "json" in formats:
            _emit(args, "construct.json", reports.dump_json(report))
        if "csv" in formats:
            _emit(args, "field.csv", reports.field_grid_csv(sm))
        if "svg" in formats:
            _emit(args, "domain.svg", reports.domain_svg(sm))
    if not ok:
        failing = [k for k, v in checks.items() if not v]
        print(f"invariant failure: {failing}", file=sys.stderr)
        return EXIT_INVARIANT_FAILURE
    return 0


def cmd_sweep(args) -> int:
    results = []
    unsupported = []
    triples = list(
        itertools.combinations_with_replacement(range(1, args.kmax + 1), 3)
    )
    for k in triples:
        s = sum(k)
        for n in range(1, s - 1):
            t = OctantTopology((1, 1, 1), k, 8 * n + 7 - 4 * s)
            w = wrapping_from_invariants(t)
            row_args = argparse.Namespace(
                epsilon=args.epsilon, grid_level=args.grid_level
            )
            try:
                report, _, checks = _construct_and_verify(t, w, row_args)
                row = {
                    "k": list(k),
                    "n": n,
                    "case": report.get("patchwork", {}).get("case_id"),
                    "energy_pi_units": report["energy_pi_units"],
                    "energy_gap_relative": report["energy_gap_relative"],
                    "checks": checks,
                }
                results.append(row)
                print(
                    f"k={k} n={n} case={row['case']}: gap "
                    f"{100 * row['energy_gap_relative']:+.2f}% "
                    f"{'pass' if all(checks.values()) else 'FAIL'}"
                )
            except (UnsupportedClassError, NotApplicableError, ConstructionError) as e:
                unsupported.append({"k": list(k), "n": n, "reason": str(e)})
                print(f"k={k} n={n}: unsupported ({e})")
    _emit(args, "sweep.json", reports.dump_json(
        {"results": results, "unsupported": unsupported}
    ))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="octfield",
        description="Energies and homotopy invariants of tangent fields on the octant",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_class_io(p):
        p.add_argument("path", nargs="?", help="class JSON file")
        p.add_argument("--json", help="inline class JSON")
        p.add_argument("--out", help="output directory")

    p_cls = sub.add_parser("classify", help="invariants, Delta, infimum energy")
    add_class_io(p_cls)
    p_cls.add_argument("--prism", nargs=3, type=float, metavar=("LX", "LY", "LZ"),
                       help="prism edge lengths Lx >= Ly >= Lz")
    p_cls.set_defaults(func=cmd_classify)

    p_sp = sub.add_parser("spelling", help="spelling length or class bound")
    add_class_io(p_sp)
    p_sp.add_argument("--word", help="word text, e.g. \"a b a' b'\"")
    p_sp.add_argument("--alphabet", type=int, default=None)
    p_sp.add_argument("--d0", type=int, default=3, help="preimage budget at s0")
    p_sp.add_argument("--budget", type=int, default=3, choices=range(0, 6))
    p_sp.set_defaults(func=cmd_spelling)

    def add_numeric_opts(p):
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--grid-level", type=int, default=3, choices=range(1, 6),
                       dest="grid_level")

    p_con = sub.add_parser("construct", help="build and verify a representative")
    add_class_io(p_con)
    add_numeric_opts(p_con)
    p_con.add_argument("--format", default="json", help="json,csv,svg")
    p_con.set_defaults(func=cmd_construct)

    p_ver = sub.add_parser("verify", help="construct without artifacts")
    add_class_io(p_ver)
    add_numeric_opts(p_ver)
    p_ver.set_defaults(func=lambda a: cmd_construct(a, verify_only=True))

    p_sw = sub.add_parser("sweep", help="construct a family of classes")
    p_sw.add_argument("--kmax", type=int, default=2)
    p_sw.add_argument("--out", help="output directory")
    add_numeric_opts(p_sw)
    p_sw.set_defaults(func=cmd_sweep)

    args = parser.parse_args(argv)
    if hasattr(args, "epsilon") and not 0 < args.epsilon < 0.125:
        parser.error("epsilon must lie in (0, 1/8)")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
