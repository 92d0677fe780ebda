"""Command-line interface.

Subcommands:
  analyze  - invariants, singularity class, and identity residuals at a point
  contour  - trace the contour of a projection to CSV and/or SVG
  verify   - identity residual summary over a spec file or a seeded sweep
  figures  - write the four standard projection figures as SVG

Exit codes: 0 success, 1 spec parse errors, 2 inapplicable configuration
(e.g. an asymptotic direction requested where curvature is positive),
3 tracing failure (partial output is still written).
"""

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import load_spec_file, patch_from_spec, random_cubic_monge
from .contour import contour_curvature, contour_line, find_contour_cusps, trace_singular_set
from .errors import ContractError, NotApplicableError, ParabolicPointError, PlanarPointError
from .identities import (
    DEADZONE_HI,
    DEADZONE_LO,
    check_asymptotic_identities,
    check_cusp_formulas,
    check_theorem_equivalences,
    full_report,
)
from .projection import TOL_SING, build_projection, classify_singularity, view_map
from .surface import (
    TangentDirection,
    asymptotic_directions,
    curvature_data,
    mannheim_radius,
    monge_normal_form,
    normal_curvature,
)

REPORT_SCHEMA = "contourgeom/invariant-report#1"


def _parse_pair(text, label):
    try:
        a, b = (float(part) for part in text.split(","))
    except ValueError:
        raise ContractError(f"{label} must be 'a,b', got {text!r}") from None
    return a, b


def _load_patch(path):
    spec = load_spec_file(path)
    return patch_from_spec(spec), spec


def _resolve_direction(patch, point, args):
    """The tangent direction from --direction or --asymptotic."""
    if args.direction is not None:
        a, b = _parse_pair(args.direction, "--direction")
        return TangentDirection(point, (a, b)), "given"
    index = args.asymptotic
    try:
        dirs = asymptotic_directions(patch, point)
    except PlanarPointError as exc:
        raise NotApplicableError(str(exc)) from exc
    if not dirs:
        K = curvature_data(patch, point).K
        raise NotApplicableError(f"no asymptotic direction: K = {K:.6g} > 0")
    if not 1 <= index <= len(dirs):
        raise NotApplicableError(
            f"asymptotic index {index} out of range: {len(dirs)} direction(s)"
        )
    return dirs[index - 1], f"asymptotic_{index}"


def _value(v, unit, reason=None):
    if v is None:
        return {"value": None, "unit": unit, "reason": reason or "not applicable"}
    return {"value": float(v), "unit": unit, "reason": None}


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _analyze_payload(patch, spec, point, direction, source, args):
    data = curvature_data(patch, point)
    kappa = normal_curvature(patch, direction)
    scale = max(abs(data.lambda1), abs(data.lambda2), 1e-300)
    asymptotic = abs(kappa) <= 1e-8 * scale

    inv = {
        "K": _value(data.K, "1/length^2"),
        "H": _value(data.H, "1/length"),
        "lambda1": _value(data.lambda1, "1/length"),
        "lambda2": _value(data.lambda2, "1/length"),
        "normal_curvature": _value(kappa, "1/length"),
    }
    try:
        inv["contour_radius"] = _value(mannheim_radius(patch, direction), "length")
    except (NotApplicableError, ZeroDivisionError) as exc:
        inv["contour_radius"] = _value(None, "length", str(exc))

    if asymptotic and data.K < 0.0:
        frame = monge_normal_form(patch, direction)
        from .asymptotic import asymptotic_invariants_closed_form
        from .identities import closed_form_cusp_curvature

        try:
            a = asymptotic_invariants_closed_form(frame)
            inv["alpha"] = _value(a.alpha, "1/length")
            inv["beta"] = _value(a.beta, "1/length")
            inv["delta"] = _value(a.delta, "1/length")
            inv["rho"] = _value(a.rho, "1/length^2")
        except ParabolicPointError as exc:
            for name, unit in (
                ("alpha", "1/length"),
                ("beta", "1/length"),
                ("delta", "1/length"),
                ("rho", "1/length^2"),
            ):
                inv[name] = _value(None, unit, str(exc))
        try:
            inv["cuspidal_curvature"] = _value(
                closed_form_cusp_curvature(frame), "1/length^(1/2)"
            )
        except NotApplicableError as exc:
            inv["cuspidal_curvature"] = _value(None, "1/length^(1/2)", str(exc))
    else:
        reason = "direction is not asymptotic" if not asymptotic else "K >= 0"
        for name, unit in (
            ("alpha", "1/length"),
            ("beta", "1/length"),
            ("delta", "1/length"),
            ("rho", "1/length^2"),
            ("cuspidal_curvature", "1/length^(1/2)"),
        ):
            inv[name] = _value(None, unit, reason)
        vm, trace = None, None
        try:
            vm = view_map(build_projection(patch, direction))
            trace = trace_singular_set(vm, point, 0.25 * patch.diameter())
            pt = contour_line(trace, vm)[trace.marked_index]
            inv["contour_curvature"] = _value(contour_curvature(pt), "1/length")
        except ContractError as exc:
            inv["contour_curvature"] = _value(None, "1/length", str(exc))

    vm = view_map(build_projection(patch, direction))
    sing = classify_singularity(vm, point, tol_sing=args.tol_sing)
    entries, verdict = full_report(patch, direction)

    return {
        "schema": REPORT_SCHEMA,
        "tool_version": __version__,
        "surface": spec,
        "point": list(point),
        "direction": [float(c) for c in direction.components],
        "direction_source": source,
        "tolerances": {
            "tol_sing": args.tol_sing,
            "tol_identity": args.tol_identity,
            "deadzone": [DEADZONE_LO, DEADZONE_HI],
        },
        "invariants": inv,
        "singularity": {"tag": sing.tag, "witness": _json_ready(sing.witness)},
        "identities": [e.as_dict() for e in entries],
        "equivalences": verdict.as_dict() if verdict is not None else None,
    }


def cmd_analyze(args):
    patch, spec = _load_patch(args.spec)
    point = _parse_pair(args.point, "--point")
    if not patch.contains(point):
        raise NotApplicableError(f"point {point} outside domain {patch.domain}")
    direction, source = _resolve_direction(patch, point, args)
    payload = _json_ready(_analyze_payload(patch, spec, point, direction, source, args))
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.json:
        Path(args.json).write_text(text + "\n")
    return 0


def cmd_contour(args):
    patch, spec = _load_patch(args.spec)
    point = _parse_pair(args.point, "--point")
    direction, _ = _resolve_direction(patch, point, args)
    vm = view_map(build_projection(patch, direction))
    budget = args.budget if args.budget is not None else 0.45 * patch.diameter()
    trace = trace_singular_set(vm, point, budget, step=args.step)
    pts = contour_line(trace, vm)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "u", "v", "x_Pi", "z_Pi", "J", "regular_flag"])
            for pt, jval in zip(pts, trace.jacobian_values):
                writer.writerow(
                    [
                        f"{pt.param:.17g}",
                        f"{pt.source[0]:.17g}",
                        f"{pt.source[1]:.17g}",
                        f"{pt.position[0]:.17g}",
                        f"{pt.position[1]:.17g}",
                        f"{jval:.17g}",
                        int(pt.regular),
                    ]
                )
    if args.svg:
        from .svgfig import render_projection_svg

        Path(args.svg).write_text(
            render_projection_svg(patch, direction, budget=budget, step=args.step)
        )
    cusps = find_contour_cusps(trace, vm)
    located = (
        f"; cusp at ({cusps[0].location[0]:.6g}, {cusps[0].location[1]:.6g})"
        if cusps
        else ""
    )
    print(f"traced {len(pts)} contour samples, {len(cusps)} cusp(s)" + located)
    if trace.truncated:
        print(f"tracing truncated: {trace.diagnostic}", file=sys.stderr)
        return 3
    return 0


def _verify_one(patch, direction, rows, traced):
    entries = check_asymptotic_identities(patch, direction, "closed")
    entries += check_cusp_formulas(patch, direction, "closed")
    if traced:
        entries += check_asymptotic_identities(patch, direction, "traced")
        entries += check_cusp_formulas(patch, direction, "traced")
    for e in entries:
        name = e.name
        if "traced" in (e.provenance or ""):
            name += " [traced]"
        rows.append((name, name != e.name, e.residual_rel if e.applicable else None))


def cmd_verify(args):
    rows = []  # (identity, traced?, rel residual or None)
    verdicts = []
    if args.random is not None:
        rng = np.random.default_rng(args.seed)
        for _ in range(args.random):
            patch, _ = random_cubic_monge(rng)
            direction = TangentDirection((0.0, 0.0), (0.0, 1.0))
            _verify_one(patch, direction, rows, traced=args.traced)
            if args.traced:
                verdicts.append(check_theorem_equivalences(patch, direction))
    else:
        if not args.spec:
            raise ContractError("verify needs a spec file or --random N")
        patch, _ = _load_patch(args.spec)
        point = _parse_pair(args.point, "--point")
        try:
            dirs = asymptotic_directions(patch, point)
        except PlanarPointError:
            dirs = []
        for d in dirs:
            K = curvature_data(patch, point).K
            if K < 0.0:
                _verify_one(patch, d, rows, traced=True)
                verdicts.append(check_theorem_equivalences(patch, d))
        for comps in ((1.0, 0.0), (0.0, 1.0)):
            d = TangentDirection(point, comps)
            from .identities import check_mdk

            for e in check_mdk(patch, d):
                rows.append(
                    (
                        e.name + " [traced]",
                        True,
                        e.residual_rel if e.applicable else None,
                    )
                )

    # aggregate worst per identity
    summary = {}
    for name, traced_entry, res in rows:
        rec = summary.setdefault(
            name, {"cases": 0, "inapplicable": 0, "worst": 0.0, "tol": args.tol_identity}
        )
        rec["cases"] += 1
        if res is None:
            rec["inapplicable"] += 1
        else:
            if traced_entry:
                rec["tol"] = max(rec["tol"], 1e-6)
            rec["worst"] = max(rec["worst"], res)

    failures = 0
    name_w = max((len(n) for n in summary), default=10)
    print(f"{'identity':<{name_w}}  {'cases':>5}  {'n/a':>4}  {'worst rel residual':>19}  status")
    for name in sorted(summary):
        rec = summary[name]
        ok = rec["worst"] <= rec["tol"]
        if not ok:
            failures += 1
        print(
            f"{name:<{name_w}}  {rec['cases']:>5}  {rec['inapplicable']:>4}  "
            f"{rec['worst']:>19.3e}  {'ok' if ok else 'FAIL'}"
        )
    disagreements = sum(1 for v in verdicts if not v.agree)
    if verdicts:
        print(f"equivalence checks: {len(verdicts)} cases, {disagreements} disagreement(s)")
        failures += disagreements
    if args.json:
        Path(args.json).write_text(
            json.dumps(
                _json_ready(
                    {
                        "summary": summary,
                        "equivalences": [v.as_dict() for v in verdicts],
                    }
                ),
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
    return 0 if failures == 0 else 2


def cmd_figures(args):
    from .svgfig import standard_figures

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"output directory not writable: {exc}", file=sys.stderr)
        return 1
    for name, svg in standard_figures():
        (out / f"{name}.svg").write_text(svg)
        print(f"wrote {out / (name + '.svg')}")
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-sing", type=float, default=TOL_SING,
                        help="zero threshold for singularity tests")
    common.add_argument("--tol-identity", type=float, default=1e-10,
                        help="pass threshold for closed-form identity residuals")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")

    parser = argparse.ArgumentParser(
        prog="contourgeom",
        description="Curvature invariants of surfaces and their apparent contours",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="invariants and identity residuals at a point")
    p.add_argument("spec", help="surface spec JSON file")
    p.add_argument("--point", default="0,0", help="parameter point 'u,v'")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--direction", help="tangent direction 'a,b'")
    g.add_argument("--asymptotic", type=int,
                   help="pick the N-th asymptotic direction (1-based)")
    p.add_argument("--json", help="also write the report to this path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("contour", parents=[common],
                       help="trace the contour to CSV/SVG")
    p.add_argument("spec")
    p.add_argument("--point", default="0,0")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--direction")
    g.add_argument("--asymptotic", type=int)
    p.add_argument("--budget", type=float, default=None, help="arclength budget")
    p.add_argument("--step", type=float, default=None, help="marching step")
    p.add_argument("--svg", help="write figure SVG here")
    p.add_argument("--csv", help="write trace CSV here")
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("verify", parents=[common],
                       help="identity residual summary")
    p.add_argument("spec", nargs="?", help="surface spec JSON file")
    p.add_argument("--point", default="0,0")
    p.add_argument("--random", type=int, default=None,
                   help="verify N seeded random cubic heights instead")
    p.add_argument("--traced", action="store_true",
                   help="include the traced pipelines in random sweeps")
    p.add_argument("--json", help="write the summary to this path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", parents=[common],
                       help="write the four standard projection figures")
    p.add_argument("--out", default="figures", help="output directory")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotApplicableError as exc:
        print(f"inapplicable configuration: {exc}", file=sys.stderr)
        return 2
    except (ContractError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
