"""Command-line surface.

Subcommands: spectrum, critical, invariants, verify.  Every command renders
the same payload as text or JSON (--output json), validated against the
shipped schema; numeric payloads are identical in both formats.  Exit codes:
0 pass, 1 check failure, 2 usage or domain error, 3 declared capacity limit.

Monte-Carlo streams use numpy's PCG64 (default_rng) with the configured
seed; the algorithm name is part of the report so numbers are reproducible
across platforms.  Subgroup lattices are cached under --cache-dir (or
$SYMBREAK_CACHE_DIR, default ~/.cache/symbreak) in a versioned, checksummed
text format.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import burnside as bb
from . import spectrum as sp
from .degrees import MAX_EXACT_K, all_invariants, leading_coefficient_check, bifurcation_report
from .errors import CapacityError, ConsistencyError, DomainError
from .golden import compare_character_table, compare_k5
from .report import dumps, format_float, resolve_tolerances, validate_report
from .verify import VerifyConfig, run_verify

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

RNG_DESCRIPTION = "numpy PCG64 via numpy.random.default_rng(seed)"


# ---------------------------------------------------------------------------
# lattice cache
# ---------------------------------------------------------------------------

def default_cache_dir() -> Path:
    env = os.environ.get("SYMBREAK_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "symbreak"


def get_lattice(k: int, cache_dir: Path) -> bb.SubgroupLattice:
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"lattice_k{k}.txt"
    if path.exists():
        return bb.load_lattice(path.read_bytes())
    lattice = bb.build_lattice(k)
    path.write_bytes(bb.serialize_lattice(lattice))
    return lattice


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _render_text(report: dict, stream) -> None:
    def fmt(v):
        if isinstance(v, float):
            return format_float(v)
        if isinstance(v, (list, tuple)):
            return "[" + ", ".join(fmt(x) for x in v) + "]"
        if isinstance(v, dict):
            return "{" + ", ".join(f"{k}: {fmt(x)}" for k, x in v.items()) + "}"
        return str(v)

    print(f"command: {report['command']}", file=stream)
    print(f"status:  {report['status']}", file=stream)
    if "rng" in report:
        print(f"rng:     {report['rng']}", file=stream)
    print("config:  " + fmt(report["config"]), file=stream)

    def walk(node, indent: int):
        pad = "  " * indent
        if isinstance(node, dict):
            for key, val in node.items():
                if isinstance(val, (dict, list)) and val and not _is_flat(val):
                    print(f"{pad}{key}:", file=stream)
                    walk(val, indent + 1)
                else:
                    print(f"{pad}{key}: {fmt(val)}", file=stream)
        elif isinstance(node, list):
            for val in node:
                if isinstance(val, (dict, list)) and val and not _is_flat(val):
                    print(f"{pad}-", file=stream)
                    walk(val, indent + 1)
                else:
                    print(f"{pad}- {fmt(val)}", file=stream)

    def _is_flat(val) -> bool:
        if isinstance(val, dict):
            return all(not isinstance(v, (dict, list)) for v in val.values())
        return all(not isinstance(v, (dict, list)) for v in val)

    print("results:", file=stream)
    walk(report["results"], 1)
    print("checks:", file=stream)
    for chk in report["checks"]:
        mark = "PASS" if chk["passed"] else "FAIL"
        kind = "hard" if chk.get("hard", True) else "info"
        print(f"  [{mark}] ({kind}) {chk['name']}", file=stream)
        if not chk["passed"] and chk.get("detail") is not None:
            print(f"         {fmt(chk['detail'])}", file=stream)


def emit(report: dict, output: str, stream=None) -> None:
    stream = stream or sys.stdout
    problems = validate_report(report)
    if problems:
        raise ConsistencyError(f"report fails its own schema: {problems}")
    if output == "json":
        stream.write(dumps(report))
    else:
        _render_text(report, stream)


def _finish(report: dict, checks: list[dict], capacity: bool = False) -> int:
    hard_fail = any(not c["passed"] for c in checks if c.get("hard", True))
    if capacity:
        report["status"] = "capacity"
        report["exit_code"] = EXIT_CAPACITY
    elif hard_fail:
        report["status"] = "fail"
        report["exit_code"] = EXIT_FAIL
    else:
        report["status"] = "pass"
        report["exit_code"] = EXIT_PASS
    report["checks"] = checks
    return report["exit_code"]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(args, tol: dict[str, float]) -> tuple[dict, int]:
    if args.k < 4:
        raise DomainError("spectrum requires k >= 4")
    alphas = _alpha_list(args)
    per_alpha = []
    all_ok = True
    worst = 0.0
    for alpha in alphas:
        entries = sp.analytic_spectrum(args.k, alpha)
        match = sp.numerical_spectrum_match(args.k, alpha, tolerance=tol["spectrum_match"])
        all_ok &= match.ok
        worst = max(worst, match.max_deviation)
        per_alpha.append({
            "alpha": alpha,
            "entries": [
                {"family": e.formula_id, "value": e.value,
                 "multiplicity": e.multiplicity, "label": list(e.label)}
                for e in entries
            ],
            "value_groups": [
                {"value": v, "multiplicity": m}
                for v, m in sp.merged_view(entries, tol=1e-12)
            ],
            "match": {
                "ok": match.ok,
                "max_deviation": match.max_deviation,
                "multiplicities_agree": match.multiplicities_agree,
                "clusters": [
                    {"value": c.numeric_value, "multiplicity": c.numeric_multiplicity,
                     "deviation": c.deviation, "dominant_label": c.dominant_label}
                    for c in match.clusters
                ],
            },
        })
    report = {
        "command": "spectrum",
        "config": {"k": args.k, "alphas": alphas,
                   "tolerance": tol["spectrum_match"]},
        "results": {"per_alpha": per_alpha},
    }
    checks = [{"name": "spectrum_match", "passed": all_ok, "hard": True,
               "detail": {"max_deviation": worst}}]
    return report, _finish(report, checks)


def cmd_critical(args, tol: dict[str, float]) -> tuple[dict, int]:
    if args.k < 4:
        raise DomainError("critical requires k >= 4")
    crit = sp.critical_set(args.k)
    ordering = sp.critical_ordering(args.k)
    # closed-form roots are exact to machine precision relative to the
    # eigenvalue scale ~ k/2; the absolute residual criterion applies at
    # moderate widths while huge-k probes are judged on the scaled residual
    scale = max(1.0, args.k / 2.0)
    results = {
        "values": list(crit.values),
        "labels": [[",".join(map(str, eta)) for eta in group] for group in crit.labels],
        "residuals": list(crit.residuals),
        "scaled_residuals": [r / scale for r in crit.residuals],
        "ordering_chain": list(ordering.chain),
        "degenerate_at_zero": [",".join(map(str, eta))
                               for eta in ordering.degenerate_components_at_zero],
        "trivial_family_also_zero_at_origin": crit.trivial_zero_at_origin,
        "asymptote_distance": [abs(v - 2.0) for v in crit.values[1:]],
        "subcritical_regime": ordering.subcritical_regime,
    }
    if args.k <= 64:
        scan = sp.root_scan(args.k)
        results["root_scan"] = {fam: roots for fam, roots in scan.items()}
    report = {
        "command": "critical",
        "config": {"k": args.k, "tolerance": tol["critical_residual"]},
        "results": results,
    }
    checks = [
        {"name": "root_residuals", "hard": True,
         "passed": max(crit.residuals) / scale <= tol["critical_residual"],
         "detail": {"max_residual": max(crit.residuals),
                    "max_scaled_residual": max(crit.residuals) / scale}},
        {"name": "ordering_chain", "passed": ordering.ok, "hard": True, "detail": None},
    ]
    return report, _finish(report, checks)


def cmd_invariants(args, tol: dict[str, float], cache_dir: Path) -> tuple[dict, int]:
    if args.k < 4:
        raise DomainError("invariants requires k >= 4")
    if args.k > MAX_EXACT_K:
        report = {
            "command": "invariants",
            "config": {"k": args.k},
            "results": {
                "capacity_notice": (
                    f"exact Burnside-ring computation is declared up to k={MAX_EXACT_K}; "
                    "use 'critical' for the width-independent spectral conclusions"
                ),
                "spectral_summary": bifurcation_report(args.k),
            },
        }
        return report, _finish(report, [], capacity=True)

    lattice = get_lattice(args.k, cache_dir)
    degrees, invariants = all_invariants(args.k, lattice)
    one = bb.BurnsideElement.one(lattice)

    degree_block = {}
    involution_ok = True
    leading_ok = True
    for eta, bd in degrees.items():
        square_ok = (bd.element * bd.element) == one
        involution_ok &= square_ok
        lead = leading_coefficient_check(bd, lattice)
        leading_ok &= lead.ok
        degree_block["/".join(map(str, eta))] = {
            "expansion": bd.labels(),
            "maximal_types": [lattice.classes[i].label for i in bd.maximal_types],
            "squares_to_identity": square_ok,
            "leading_coefficients_ok": lead.ok,
            "leading_entries": lead.entries,
        }
    invariant_block = []
    for inv in invariants:
        invariant_block.append({
            "critical_value": inv.critical_value,
            "degenerating": ["/".join(map(str, eta)) for eta in inv.labels],
            "expansion": {lattice.classes[i].label: c
                          for i, c in sorted(inv.element.coeffs.items())},
            "maximal_types": [lattice.classes[i].label for i in inv.maximal_types],
            "nonzero": inv.nonzero(),
        })

    results = {
        "lattice": {
            "classes": len(lattice.classes),
            "total_subgroups": lattice.total_subgroups(),
            "class_table": [
                {"label": c.label, "order": c.order,
                 "normalizer_order": c.normalizer_order, "weyl_order": c.weyl_order,
                 "conjugates": c.n_conjugates}
                for c in lattice.classes
            ],
        },
        "basic_degrees": degree_block,
        "invariants": invariant_block,
    }
    checks = [
        {"name": "involution", "passed": involution_ok, "hard": True, "detail": None},
        {"name": "leading_coefficients", "passed": leading_ok, "hard": True, "detail": None},
        {"name": "invariants_nonzero",
         "passed": all(inv.nonzero() for inv in invariants), "hard": True, "detail": None},
    ]
    if args.k == 5:
        comparison = compare_k5(lattice, degrees, invariants)
        table_cmp = compare_character_table()
        results["reference_comparison"] = comparison
        results["character_table_comparison"] = {
            k2: v for k2, v in table_cmp.items() if k2 != "mismatches"
        }
        checks.append({"name": "reference_expansions", "passed": comparison["ok"],
                       "hard": True, "detail": {"name_map": comparison["name_map"]}})
        checks.append({"name": "reference_character_table", "passed": table_cmp["ok"],
                       "hard": True, "detail": None})
    report = {
        "command": "invariants",
        "config": {"k": args.k, "cache_dir": str(cache_dir)},
        "results": results,
    }
    return report, _finish(report, checks)


def cmd_verify(args, tol_overrides: dict[str, float], cache_dir: Path) -> tuple[dict, int]:
    config = VerifyConfig(
        ks=tuple(args.k) if args.k else (4, 5),
        seed=args.seed,
        mc_trials=args.mc_trials,
        mc_samples=args.mc_samples,
        fd_points=args.fd_points,
        tolerances=tol_overrides,
        perturb_hessian=args.perturb_hessian,
        lattice_provider=lambda k: get_lattice(k, cache_dir),
    )
    checks, results = run_verify(config)
    report = {
        "command": "verify",
        "rng": RNG_DESCRIPTION,
        "config": {
            "ks": list(config.ks), "seed": config.seed,
            "mc_trials": config.mc_trials, "mc_samples": config.mc_samples,
            "fd_points": config.fd_points,
            "perturb_hessian": config.perturb_hessian,
        },
        "results": results,
    }
    return report, _finish(report, checks)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _alpha_list(args) -> list[float]:
    if args.alpha_grid is not None:
        start, stop, points = args.alpha_grid
        n = int(points)
        if n < 2:
            raise DomainError("alpha grid needs at least 2 points")
        return [start + (stop - start) * i / (n - 1) for i in range(n)]
    if args.alpha is None:
        raise DomainError("provide --alpha or --alpha-grid")
    return [args.alpha]


def _parse_tol(pairs: list[str] | None) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise DomainError(f"--tol expects NAME=VALUE, got {pair!r}")
        name, _, value = pair.partition("=")
        out[name.strip()] = float(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted both before and after the subcommand; the
    # SUPPRESS default keeps an unset subcommand-level flag from shadowing a
    # value given at the top level
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--output", choices=("text", "json"),
                        default=argparse.SUPPRESS)
    shared.add_argument("--cache-dir", type=Path, default=argparse.SUPPRESS,
                        help="lattice cache directory (default $SYMBREAK_CACHE_DIR "
                             "or ~/.cache/symbreak)")
    shared.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        default=argparse.SUPPRESS,
                        help="override a named tolerance (repeatable)")

    parser = argparse.ArgumentParser(
        prog="symbreak",
        parents=[shared],
        description=(
            "Analytic Hessian spectrum, critical leaky parameters, and exact "
            "equivariant bifurcation invariants of the shallow leaky-ReLU "
            "teacher-student landscape, with built-in numerical oracles."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", parents=[shared],
                            help="analytic vs numerical Hessian spectrum")
    p_spec.add_argument("--k", type=int, required=True)
    group = p_spec.add_mutually_exclusive_group()
    group.add_argument("--alpha", type=float, default=None)
    group.add_argument("--alpha-grid", nargs=3, type=float, default=None,
                       metavar=("START", "STOP", "POINTS"))

    p_crit = sub.add_parser("critical", parents=[shared],
                            help="critical leaky-parameter set")
    p_crit.add_argument("--k", type=int, required=True)

    p_inv = sub.add_parser("invariants", parents=[shared],
                           help="basic degrees and bifurcation invariants")
    p_inv.add_argument("--k", type=int, required=True)

    p_ver = sub.add_parser("verify", parents=[shared], help="full oracle suite")
    p_ver.add_argument("--k", type=int, action="append",
                       help="widths for the spectral sweeps (repeatable; default 4 and 5)")
    p_ver.add_argument("--seed", type=int, default=20240901)
    p_ver.add_argument("--mc-trials", type=int, default=1000)
    p_ver.add_argument("--mc-samples", type=int, default=100_000)
    p_ver.add_argument("--fd-points", type=int, default=100)
    p_ver.add_argument("--perturb-hessian", type=float, default=None,
                       help="inject a symmetric off-diagonal perturbation into the "
                            "spectral sweep (negative-control fixture; makes it fail)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    args.output = getattr(args, "output", "text")
    args.tol = getattr(args, "tol", None)
    cache_dir = getattr(args, "cache_dir", None) or default_cache_dir()
    try:
        tol = resolve_tolerances(_parse_tol(args.tol))
        if args.command == "spectrum":
            report, code = cmd_spectrum(args, tol)
        elif args.command == "critical":
            report, code = cmd_critical(args, tol)
        elif args.command == "invariants":
            report, code = cmd_invariants(args, tol, cache_dir)
        elif args.command == "verify":
            report, code = cmd_verify(args, _parse_tol(args.tol), cache_dir)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
            return EXIT_USAGE
    except (DomainError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        # corrupted cache or inconsistent input data
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    emit(report, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
