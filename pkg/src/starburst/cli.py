"""Command-line front end: analyze, regions, verify, fixtures.

`analyze` runs the full pipeline for one scenario and writes report.json,
CSV tables, and SVG figures; `regions` emits a saddle-region diagram;
`verify` cross-checks the closed-form predictions against the numerical
census on random samples; `fixtures` reproduces the five reference
wavefronts and asserts their published cusp/saddle counts and verdicts.

Exit codes: 0 success, 1 verification/fixture failure, 2 usage error.
All file outputs are deterministic: sorted JSON keys, floats at 12
significant digits, no timestamps (timing goes to stdout only).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .caustics import (
    CausticSet,
    extract_contours,
    fertility_report,
    map_caustics,
    starburst_verdict,
    symmetry_order,
)
from .hessian import SolverOptions, build_field, find_critical_points
from .regions import (
    DEFAULT_WINDOWS,
    SUPPORTED_ORDERS,
    ABParams,
    boundary_slacks,
    predict_saddles,
    region_diagram,
)
from .svgfig import Frame, SvgCanvas, heatmap_figure
from .zernike import WaveAberration, ZernikeTerm

FIXTURE_SCENARIOS = {
    # name: (alpha, beta, gamma, n, expected cusps, saddles, points, kind)
    "3star": (0.0, 0.2, 0.2, 3, 7, 3, 3, "equally_distanced"),
    "5star": (0.2, 0.2, 0.07, 5, 11, 5, 5, "equally_distanced"),
    "4star": (0.0, 0.2, 0.15, 4, 9, 4, 4, "equally_distanced"),
    "6star": (0.0, 0.2, 0.19, 6, 7, 6, 6, "equally_distanced"),
    "8stars": (0.0, 0.2, 0.09, 4, 9, 4, 8, "non_equally_distanced"),
}


@dataclasses.dataclass
class Scenario:
    wavefront: WaveAberration
    shorthand: ABParams | None
    pupil_radius_mm: float = 3.5
    grid_resolution: int = 512
    visibility_threshold_arcmin: float = 1.0
    fertility_distance: float = 0.12
    output_dir: str = "starburst_out"

    @staticmethod
    def from_file(path: str) -> "Scenario":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        return Scenario.from_dict(raw)

    @staticmethod
    def from_dict(raw: dict) -> "Scenario":
        shorthand_keys = {"alpha", "beta", "gamma", "n"}
        has_short = shorthand_keys & raw.keys()
        has_terms = "wavefront" in raw
        if has_short and has_terms:
            raise ValueError(
                "scenario must give either the {alpha, beta, gamma, n} shorthand "
                "or an explicit wavefront term list, not both"
            )
        if not has_short and not has_terms:
            raise ValueError("scenario lacks a wavefront definition")
        pupil = float(raw.get("pupil_radius_mm", 3.5))
        shorthand = None
        if has_short:
            missing = shorthand_keys - raw.keys()
            if missing:
                raise ValueError(f"shorthand scenario missing keys: {sorted(missing)}")
            shorthand = ABParams(
                float(raw["alpha"]), float(raw["beta"]), float(raw["gamma"]),
                int(raw["n"]),
            )
            wavefront = shorthand.to_wavefront(pupil_radius=pupil)
        else:
            terms = tuple(
                ZernikeTerm(int(t["n"]), int(t["m"]), float(t["coeff_um"]))
                for t in raw["wavefront"]
            )
            wavefront = WaveAberration(terms, pupil_radius=pupil)
        return Scenario(
            wavefront=wavefront,
            shorthand=shorthand,
            pupil_radius_mm=pupil,
            grid_resolution=int(raw.get("grid_resolution", 512)),
            visibility_threshold_arcmin=float(raw.get("visibility_threshold_arcmin", 1.0)),
            fertility_distance=float(raw.get("fertility_distance", 0.12)),
            output_dir=str(raw.get("output_dir", "starburst_out")),
        )

    def echo(self) -> dict:
        out = {
            "pupil_radius_mm": self.pupil_radius_mm,
            "grid_resolution": self.grid_resolution,
            "visibility_threshold_arcmin": self.visibility_threshold_arcmin,
            "fertility_distance": self.fertility_distance,
            "wavefront": [
                {"n": t.n, "m": t.m, "coeff_um": t.coeff} for t in self.wavefront.terms
            ],
        }
        if self.shorthand is not None:
            out["shorthand"] = {
                "alpha": self.shorthand.alpha,
                "beta": self.shorthand.beta,
                "gamma": self.shorthand.gamma,
                "n": self.shorthand.n,
            }
        return out


def _round_floats(obj, digits: int = 12):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.{digits}g}") + 0.0  # normalizes -0.0
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    return obj


def write_report_json(path: Path, payload: dict) -> None:
    body = json.dumps(_round_floats(payload), sort_keys=True, indent=2)
    path.write_text(body + "\n", encoding="utf-8")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [f"{v:.12g}" if isinstance(v, float) else v for v in row]
            )


def run_analysis(scenario: Scenario, solver: SolverOptions | None = None):
    """Full pipeline for one scenario; returns (report dict, artifacts)."""
    w = scenario.wavefront
    field = build_field(w)
    search = find_critical_points(field, solver)
    contours = extract_contours(field, scenario.grid_resolution)
    caustics = map_caustics(w, contours, search.points)
    prediction = None
    if scenario.shorthand is not None and scenario.shorthand.beta > 0:
        prediction = predict_saddles(scenario.shorthand)
    fert = fertility_report(search.saddles, contours, scenario.fertility_distance)
    fertile_ids = {id(f.point) for f in fert if f.fertile}
    verdict = starburst_verdict(
        caustics, search.saddles,
        threshold_arcmin=scenario.visibility_threshold_arcmin,
    )
    sym = symmetry_order(caustics) if caustics.retina_curves else None

    cusp_rows = []
    for proj in caustics.projected_cusps:
        pt = proj.point
        cusp_rows.append(
            {
                "x": pt.x,
                "y": pt.y,
                "rho": pt.rho,
                "theta_deg": math.degrees(pt.theta),
                "class": pt.kind.value,
                "g_value": pt.g_value,
                "hess_g_det": pt.hess_g_det,
                "on_boundary": pt.on_boundary,
                "fertile": id(pt) in fertile_ids,
                "xi_arcmin": proj.xi,
                "eta_arcmin": proj.eta,
            }
        )
    report = {
        "scenario": scenario.echo(),
        "degenerate": search.degenerate,
        "degenerate_reason": search.message if search.degenerate else "",
        "solver_note": "" if search.degenerate else search.message,
        "counts": {
            "critical_points": len(search.points),
            "saddles": len(search.saddles),
            "fertile": len(fertile_ids),
            "contour_polylines": len(contours.polylines),
        },
        "critical_points": cusp_rows,
        "saddle_prediction": None,
        "starburst": {
            "p_fold": verdict.p_fold,
            "point_count": verdict.point_count,
            "kind": verdict.kind,
            "visibility_threshold_arcmin": verdict.visibility_threshold,
            "spike_tips": [
                {"radius_arcmin": t.radius_arcmin, "angle_deg": math.degrees(t.angle)}
                for t in verdict.spike_tips
            ],
            "note": verdict.note,
            "detail": verdict.detail,
            "rotation_residual": sym.residual if sym else None,
        },
        "versions": {"starburst": __version__, "report_format": 1},
    }
    if prediction is not None:
        report["saddle_prediction"] = {
            "count": prediction.count,
            "region_label": prediction.region_label,
            "boundary": prediction.boundary,
            "non_generic": prediction.non_generic,
            "rings": [
                {
                    "rho": r.rho,
                    "family": r.family,
                    "theta_offsets_deg": [math.degrees(t) for t in r.theta_offsets],
                }
                for r in prediction.rings
            ],
        }
    return report, (field, search, contours, caustics, verdict)


def _emit_analysis_files(outdir: Path, scenario: Scenario, report, artifacts) -> None:
    field, search, contours, caustics, verdict = artifacts
    outdir.mkdir(parents=True, exist_ok=True)
    write_report_json(outdir / "report.json", report)

    rows = []
    for k, poly in enumerate(contours.polylines):
        for i, (x, y) in enumerate(poly):
            rows.append([k, i, float(x), float(y)])
    _write_csv(outdir / "contours_pupil.csv", ["curve", "vertex", "x", "y"], rows)

    rows = []
    for k, poly in enumerate(caustics.retina_curves):
        for i, (xi, eta) in enumerate(poly):
            rows.append([k, i, float(xi), float(eta)])
    _write_csv(
        outdir / "contours_retina.csv",
        ["curve", "vertex", "xi_arcmin", "eta_arcmin"],
        rows,
    )

    rows = [
        [
            i,
            c["x"],
            c["y"],
            c["rho"],
            c["theta_deg"],
            c["class"],
            int(c["on_boundary"]),
            int(c["fertile"]),
            c["g_value"],
            c["hess_g_det"],
            c["xi_arcmin"],
            c["eta_arcmin"],
        ]
        for i, c in enumerate(report["critical_points"])
    ]
    _write_csv(
        outdir / "critical_points.csv",
        ["index", "x", "y", "rho", "theta_deg", "class", "on_boundary", "fertile",
         "g_value", "hess_g_det", "xi_arcmin", "eta_arcmin"],
        rows,
    )

    w = scenario.wavefront
    wpoly = w.to_polynomial()
    heatmap_figure(wpoly, "wave aberration W (um)", outdir / "wavefront.svg")
    heatmap_figure(field.G, "hessian determinant G", outdir / "hessian_full.svg")
    gmax = float(np.max(np.abs(field.G(*np.meshgrid(
        np.linspace(-1, 1, 65), np.linspace(-1, 1, 65), indexing="ij")))))
    heatmap_figure(
        field.G,
        "hessian determinant G (clipped colorbar)",
        outdir / "hessian_clipped.svg",
        clip=0.02 * gmax if gmax > 0 else None,
    )
    _retina_figure(outdir / "retina.svg", caustics, report)


def _retina_figure(path: Path, caustics: CausticSet, report) -> None:
    canvas = SvgCanvas(620, 620, "caustics at the retina plane (arcmin)")
    pts = (
        np.concatenate(caustics.retina_curves)
        if caustics.retina_curves
        else np.zeros((1, 2))
    )
    lim = max(1.0, float(np.max(np.abs(pts))) * 1.1)
    fr = Frame(canvas, -lim, lim, -lim, lim, margin=60)
    fr.frame_box("xi (arcmin)", "eta (arcmin)")
    nt = 5
    ticks = np.linspace(-lim, lim, nt)
    fr.ticks(ticks, ticks)
    for poly in caustics.retina_curves:
        fr.polyline(poly, stroke="rgb(120,30,140)", width=1.0)
    for c in report["critical_points"]:
        x, y = fr.px(c["xi_arcmin"]), fr.py(c["eta_arcmin"])
        if c["class"] == "saddle":
            canvas.circle(x, y, 3.0, fill="rgb(30,150,60)", stroke="black")
            canvas.circle(x, y, 6.0, stroke="black")
        else:
            canvas.marker_star(x, y, 5.0, "rgb(30,150,60)")
    for t in report["starburst"]["spike_tips"]:
        a = math.radians(t["angle_deg"])
        x = fr.px(t["radius_arcmin"] * math.sin(a))
        y = fr.py(t["radius_arcmin"] * math.cos(a))
        canvas.circle(x, y, 4.0, stroke="rgb(200,120,0)", width=1.5)
    canvas.save(path)


def cmd_analyze(args) -> int:
    try:
        if args.scenario:
            scenario = Scenario.from_file(args.scenario)
        else:
            if args.alpha is None or args.beta is None or args.gamma is None or args.n is None:
                raise ValueError(
                    "either --scenario FILE or all of --alpha --beta --gamma --n required"
                )
            scenario = Scenario.from_dict(
                {
                    "alpha": args.alpha,
                    "beta": args.beta,
                    "gamma": args.gamma,
                    "n": args.n,
                    "pupil_radius_mm": args.pupil_radius,
                    "grid_resolution": args.grid,
                    "visibility_threshold_arcmin": args.threshold,
                    "output_dir": args.out,
                }
            )
        if args.out:
            scenario.output_dir = args.out
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    report, artifacts = run_analysis(scenario)
    _emit_analysis_files(Path(scenario.output_dir), scenario, report, artifacts)
    elapsed = time.perf_counter() - t0
    if args.timing:
        report_path = Path(scenario.output_dir) / "report.json"
        payload = json.loads(report_path.read_text())
        payload["timing_s"] = round(elapsed, 3)
        write_report_json(report_path, payload)
    counts = report["counts"]
    star = report["starburst"]
    print(
        f"analyzed: {counts['critical_points']} cusps of Gauss, "
        f"{counts['saddles']} saddles, {counts['fertile']} fertile; "
        f"verdict: {star['point_count']} points ({star['kind']}), "
        f"p={star['p_fold']}"
    )
    if report["degenerate"]:
        print(f"degenerate field: {report['degenerate_reason']}")
    print(f"outputs in {scenario.output_dir} ({elapsed:.2f}s)")
    return 0


def cmd_regions(args) -> int:
    if args.n not in SUPPORTED_ORDERS:
        print(f"error: unsupported order n={args.n}", file=sys.stderr)
        return 2
    window = None
    if args.window:
        try:
            g0, g1, a0, a1 = (float(v) for v in args.window.split(","))
        except ValueError:
            print("error: --window expects G0,G1,A0,A1", file=sys.stderr)
            return 2
        gamma_range, alpha_range = (g0, g1), (a0, a1)
    else:
        gamma_range = alpha_range = None
    diagram = region_diagram(
        args.n, args.beta, gamma_range, alpha_range, resolution=args.res
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    family_names = {0: "none", 1: "even", 2: "odd", 3: "both"}
    for i, a in enumerate(diagram.alpha_values):
        for j, g in enumerate(diagram.gamma_values):
            rows.append(
                [float(g), float(a), int(diagram.counts[i, j]),
                 family_names[int(diagram.family_codes[i, j])]]
            )
    _write_csv(outdir / "regions_grid.csv", ["gamma", "alpha", "count", "family"], rows)
    _regions_figure(outdir / "regions.svg", diagram)
    print(f"region diagram for n={args.n}, beta={args.beta} written to {outdir}")
    return 0


def _regions_figure(path: Path, diagram) -> None:
    canvas = SvgCanvas(700, 560, f"saddle regions, n={diagram.n}, beta={diagram.beta}")
    g = diagram.gamma_values
    a = diagram.alpha_values
    fr = Frame(canvas, g[0], g[-1], a[0], a[-1], margin=60)
    cw = fr.w / len(g)
    ch = fr.h / len(a)
    colors = {1: "rgb(255,200,130)", 2: "rgb(150,190,255)", 3: "rgb(190,150,220)"}
    for i in range(len(a)):
        for j in range(len(g)):
            code = int(diagram.family_codes[i, j])
            if code:
                canvas.rect(fr.px(g[j]) - cw / 2, fr.py(a[i]) - ch / 2, cw + 0.5,
                            ch + 0.5, colors[code])
    curve_colors = {
        "alpha1_plus": "rgb(30,80,220)",
        "alpha1_minus": "rgb(110,110,20)",
        "alpha2": "rgb(230,130,20)",
        "alpha3": "rgb(200,30,30)",
        "sqrt15_beta-alpha2_plus": "rgb(0,150,150)",
        "sqrt15_beta-alpha2_minus": "rgb(200,30,160)",
    }
    for name, pts in diagram.boundary_curves.items():
        mask = (pts[:, 1] >= a[0]) & (pts[:, 1] <= a[-1])
        seg = []
        for (gv, av), ok in zip(pts, mask):
            if ok:
                seg.append((gv, av))
            else:
                if len(seg) > 1:
                    fr.polyline(seg, stroke=curve_colors.get(name, "black"), width=1.2)
                seg = []
        if len(seg) > 1:
            fr.polyline(seg, stroke=curve_colors.get(name, "black"), width=1.2)
    y0 = fr.py(a[0])
    for name, gv in diagram.ticks.items():
        if name.startswith("sqrt(15)"):
            if a[0] <= gv <= a[-1]:
                canvas.line(fr.px(g[0]), fr.py(gv), fr.px(g[-1]), fr.py(gv),
                            stroke="rgb(200,30,30)", width=0.8, dash="4,3")
                canvas.text(fr.px(g[0]) + 4, fr.py(gv) - 3, name, size=8)
        elif g[0] <= gv <= g[-1]:
            canvas.line(fr.px(gv), fr.py(a[0]), fr.px(gv), fr.py(a[-1]),
                        stroke="gray", width=0.7, dash="2,3")
            canvas.text(fr.px(gv), y0 + 26, name, size=8, anchor="middle")
    fr.frame_box("gamma (um)", "alpha (um)")
    fr.ticks(np.linspace(g[0], g[-1], 5), np.linspace(a[0], a[-1], 5))
    legend = [("even family", colors[1]), ("odd family", colors[2]), ("both (2n)", colors[3])]
    for k, (label, color) in enumerate(legend):
        canvas.rect(fr.m + 8 + 130 * k, 24, 12, 12, color, stroke="black")
        canvas.text(fr.m + 24 + 130 * k, 34, label, size=9)
    canvas.save(path)


def run_verification(
    n: int,
    beta: float,
    samples: int,
    seed: int,
    band: float = 1e-3,
    solver: SolverOptions | None = None,
):
    """Random closed-form vs numerical-census comparison.

    Draws (gamma, alpha) uniformly in the region-diagram window, skipping a
    relative band around every boundary curve, and checks saddle count,
    angular family, and ring radii (to 1e-8).  Returns a result dict.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    g0, g1, a0, a1 = DEFAULT_WINDOWS[n]
    failures = []
    max_dev = 0.0
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > 1000 * samples:
            raise RuntimeError(
                "could not draw enough samples outside the boundary band; "
                "lower --samples or the band width"
            )
        gamma = float(rng.uniform(g0, g1)) * beta
        alpha = float(rng.uniform(a0, a1)) * beta
        params = ABParams(alpha, beta, gamma, n)
        if min(boundary_slacks(params)) < band:
            continue
        done += 1
        pred = predict_saddles(params)
        census = find_critical_points(build_field(params.to_wavefront()), solver)
        saddles = census.saddles
        if census.degenerate or pred.count != len(saddles):
            failures.append(
                {
                    "gamma": gamma,
                    "alpha": alpha,
                    "reason": f"count: predicted {pred.count}, census "
                    f"{'degenerate' if census.degenerate else len(saddles)}",
                }
            )
            continue
        for ring in pred.rings:
            members = [s for s in saddles if abs(s.rho - ring.rho) < 1e-6]
            if len(members) != n:
                failures.append(
                    {
                        "gamma": gamma,
                        "alpha": alpha,
                        "reason": f"ring at rho={ring.rho:.6f}: {len(members)} members",
                    }
                )
                break
            rdev = max(abs(s.rho - ring.rho) for s in members)
            adev = max(
                min(
                    abs((s.theta - t + math.pi) % (2 * math.pi) - math.pi)
                    for t in ring.theta_offsets
                )
                for s in members
            )
            max_dev = max(max_dev, rdev, adev)
            if rdev > 1e-8 or adev > 1e-8:
                failures.append(
                    {
                        "gamma": gamma,
                        "alpha": alpha,
                        "reason": f"deviation rho={rdev:.2e} angle={adev:.2e}",
                    }
                )
                break
    return {
        "n": n,
        "beta": beta,
        "samples": samples,
        "seed": seed,
        "passed": samples - len(failures),
        "failed": len(failures),
        "max_deviation": max_dev,
        "failures": failures,
    }


def cmd_verify(args) -> int:
    if args.samples < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return 2
    if args.n not in SUPPORTED_ORDERS:
        print(f"error: unsupported order n={args.n}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    result = run_verification(args.n, args.beta, args.samples, args.seed)
    elapsed = time.perf_counter() - t0
    print(
        f"verify n={args.n} beta={args.beta}: {result['passed']}/{args.samples} agree, "
        f"max radius/angle deviation {result['max_deviation']:.3e} ({elapsed:.1f}s)"
    )
    for f in result["failures"]:
        print(
            f"  FAIL gamma={f['gamma']:.6f} alpha={f['alpha']:.6f}: {f['reason']}"
        )
    return 0 if not result["failures"] else 1


def cmd_fixtures(args) -> int:
    solver = SolverOptions()
    all_ok = True
    t0 = time.perf_counter()
    for name, (alpha, beta, gamma, n, cusps, saddles, points, kind) in FIXTURE_SCENARIOS.items():
        scenario = Scenario.from_dict(
            {"alpha": alpha, "beta": beta, "gamma": gamma, "n": n,
             "grid_resolution": args.grid}
        )
        report, _ = run_analysis(scenario, solver)
        got = (
            report["counts"]["critical_points"],
            report["counts"]["saddles"],
            report["starburst"]["point_count"],
            report["starburst"]["kind"],
        )
        want = (cusps, saddles, points, kind)
        ok = got == want
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: cusps/saddles/points/kind {got}"
              + ("" if ok else f" expected {want}"))
    print(f"fixtures {'passed' if all_ok else 'FAILED'} "
          f"({time.perf_counter() - t0:.1f}s at grid {args.grid})")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starburst",
        description="Saddle cusps of Gauss, caustics, and starburst verdicts "
        "for Zernike wave aberrations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the full pipeline for one wavefront")
    pa.add_argument("--scenario", help="scenario JSON file")
    pa.add_argument("--alpha", type=float, help="defocus coefficient (um)")
    pa.add_argument("--beta", type=float, help="spherical coefficient (um)")
    pa.add_argument("--gamma", type=float, help="Z_n^n coefficient (um)")
    pa.add_argument("--n", type=int, help="azimuthal order of the Z_n^n term")
    pa.add_argument("--pupil-radius", type=float, default=3.5, help="pupil radius (mm)")
    pa.add_argument("--grid", type=int, default=512, help="contour grid resolution")
    pa.add_argument("--threshold", type=float, default=1.0,
                    help="visibility threshold (arcmin)")
    pa.add_argument("--out", default="", help="output directory")
    pa.add_argument("--timing", action="store_true",
                    help="include wall-clock timing in report.json "
                    "(breaks byte-for-byte determinism)")
    pa.set_defaults(func=cmd_analyze)

    pr = sub.add_parser("regions", help="emit a saddle-region diagram")
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--beta", type=float, required=True)
    pr.add_argument("--window", default="", help="G0,G1,A0,A1 (um)")
    pr.add_argument("--res", type=int, default=121, help="samples per axis")
    pr.add_argument("--out", default="starburst_regions")
    pr.set_defaults(func=cmd_regions)

    pv = sub.add_parser("verify", help="closed-form vs numerical agreement check")
    pv.add_argument("--n", type=int, required=True)
    pv.add_argument("--beta", type=float, required=True)
    pv.add_argument("--samples", type=int, required=True)
    pv.add_argument("--seed", type=int, default=0)
    pv.set_defaults(func=cmd_verify)

    pf = sub.add_parser("fixtures", help="reproduce the five reference starbursts")
    pf.add_argument("--grid", type=int, default=512)
    pf.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
