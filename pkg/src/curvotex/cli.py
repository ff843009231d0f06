"""Command-line front end. Every command writes data files plus a manifest.

Exit status: 0 success, 2 usage error, 3 domain/equator/collision error,
4 numerical warning escalated by --strict.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from . import bifurcation as bf
from . import serialization as ser
from . import spectral, stability
from .errors import CollisionError, DomainError, NoRootError, NumericalWarning
from .geometry import GreensChoice
from .ring import RingSpec, omega0, ring_deviation
from .vortex import Trajectory, VortexConfig, integrate

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4


class _Outputs:
    """Collects the files one command writes and echoes the primary one."""

    def __init__(self, out_dir: Path, quiet: bool) -> None:
        self.dir = out_dir
        self.quiet = quiet
        self.paths: list[str] = []
        self._echoed = False

    def emit(self, name: str, text: str) -> None:
        ser.write_text(self.dir / name, text)
        self.paths.append(name)
        if not self.quiet and not self._echoed:
            sys.stdout.write(text)
            self._echoed = True


# --- commands ------------------------------------------------------------------


def cmd_stability(args: argparse.Namespace, out: _Outputs) -> None:
    if args.table or not args.x:
        rows = []
        for n in range(args.n_min, args.n_max + 1):
            rng = stability.stability_range(n)
            b = stability.b_n(n) if n >= 4 else None
            partner = 1.0 / b if b is not None and 0.0 < b < 1.0 else None
            bps = rng.breakpoints + [None] * (2 - len(rng.breakpoints))
            rows.append([n, b, partner, stability.threshold(n), *bps])
        header = ["n", "b_n", "reciprocal", "threshold", "log_sigma_break_1", "log_sigma_break_2"]
        out.emit("stability_table.csv", ser.csv_text(header, rows))
    if args.x:
        ns = args.n or list(range(args.n_min, args.n_max + 1))
        rows = []
        for n in ns:
            for x in args.x:
                v = stability.classify(n, x)
                rows.append([n, x, stability.is_stable(n, x), v.classification,
                             v.failing_modes, v.degenerate_modes])
        header = ["n", "x", "is_stable", "classification", "failing_modes", "degenerate_modes"]
        out.emit("stability_grid.csv", ser.csv_text(header, rows))


def cmd_bifurcations(args: argparse.Namespace, out: _Outputs) -> None:
    if args.n < 4:
        raise DomainError("bifurcations need n >= 4")
    rows = []
    for ell in range(args.n // 2, 1, -1):
        p = stability.bifurcation_value(args.n, ell)
        rows.append([args.n, ell, p.x, p.partner, bf.eigenvalue_crossing_speed(args.n, ell)])
    header = ["n", "ell", "x", "partner", "crossing_speed"]
    out.emit(f"bifurcations_n{args.n}.csv", ser.csv_text(header, rows))


def cmd_spectrum(args: argparse.Namespace, out: _Outputs) -> None:
    s = RingSpec.from_x(args.n, args.x, r0=args.r0, kappa=args.kappa)
    verdict = stability.classify(args.n, args.x, greens=args.greens)
    spec = spectral.mode_spectrum(s, args.greens)
    doc = {"greens": GreensChoice.parse(args.greens).value, "omega0": omega0(s, args.greens),
           "spectrum": spec, "verdict": verdict}
    out.emit(f"spectrum_n{args.n}.json", ser.dumps(doc))


def cmd_probe(args: argparse.Namespace, out: _Outputs) -> None:
    if args.sweep is not None:
        reports = bf.conjecture_sweep(args.sweep)
        doc = {"reports": reports,
               "all_stable": all(r.verdict is bf.Verdict.STABLE_DEGENERATE for r in reports)}
        out.emit(f"probe_sweep_{args.sweep}.json", ser.dumps(doc))
        return
    if args.n is None:
        raise DomainError("probe needs --n or --sweep")
    report = bf.degeneracy_probe(args.n, args.root, args.r0)
    doc = {"report": report}
    if args.n > 12 or (args.n % 2 and args.n not in (5, 7, 9, 11)):
        doc["note"] = "extension: no published reference values for this n"
    out.emit(f"probe_n{args.n}.json", ser.dumps(doc))


def _trajectory_rows(traj: Trajectory) -> list[list[Any]]:
    rows = []
    for t, z, h, j in zip(traj.times, traj.states, traj.energy, traj.momentum):
        row: list[Any] = [t]
        for w in z:
            row += [w.real, w.imag]
        rows.append(row + [h, *j])
    return rows


def _perturb(c: VortexConfig, ell: int, eps: float) -> VortexConfig:
    n = c.n
    if not 0 <= ell <= n // 2:
        raise DomainError(f"mode {ell} outside 0..{n // 2}")
    j = np.arange(1, n + 1)
    z = c.positions
    r = np.abs(z) + eps * np.cos(2.0 * math.pi * ell * j / n)
    return c.with_positions(r * np.exp(1j * np.angle(z)))


def cmd_simulate(args: argparse.Namespace, out: _Outputs) -> None:
    c = ser.load_config(args.config)
    if args.perturb is not None:
        c = _perturb(c, int(args.perturb[0]), float(args.perturb[1]))
    try:
        traj = integrate(c, args.t_end, args.dt)
        aborted = False
    except CollisionError as exc:
        traj, aborted = exc.trajectory, True
    header = ["t"]
    for i in range(1, c.n + 1):
        header += [f"re_{i}", f"im_{i}"]
    header += ["H", "J_re", "J_im", "J_u"]
    out.emit("trajectory.csv", ser.csv_text(header, _trajectory_rows(traj)))

    rows = []
    series = {"H": traj.energy, "J_re": traj.momentum[:, 0], "J_im": traj.momentum[:, 1],
              "J_u": traj.momentum[:, 2]}
    # components of J that start near zero are measured against |J| instead
    j_scale = float(np.linalg.norm(traj.momentum[0]))
    for name, vals in series.items():
        drift = float(np.max(np.abs(vals - vals[0])))
        ref = abs(vals[0]) if name == "H" else max(abs(vals[0]), j_scale)
        rows.append([name, vals[0], vals[-1], drift, drift / ref if ref > 0.0 else drift])
    if args.perturb is not None:
        dev = max(ring_deviation(z) for z in traj.states)
        rows.append(["ring_deviation", ring_deviation(traj.states[0]), ring_deviation(traj.states[-1]), dev, None])
    text = ser.csv_text(["quantity", "initial", "final", "max_abs_drift", "max_rel_drift"], rows)
    out.emit("invariants.csv", text)
    if aborted:
        raise CollisionError("vortices approached collision; partial trajectory written")


def cmd_normal_form(args: argparse.Namespace, out: _Outputs) -> None:
    spec = bf.NormalFormSpec(args.k, args.alpha, args.beta, args.u)
    res = bf.normal_form_contours(spec, args.grid, args.extent)
    rows = [[x, y, res.values[i, j]] for i, y in enumerate(res.ys) for j, x in enumerate(res.xs)]
    out.emit("normal_form_contours.csv", ser.csv_text(["x", "y", "f"], rows))
    crit = [[p.x, p.y, p.kind, p.value] for p in res.critical_points]
    out.emit("normal_form_critical_points.csv", ser.csv_text(["x", "y", "kind", "value"], crit))
    summary = {"spec": spec, "bifurcation_type": res.bifurcation_type,
               "branch_types": res.branch_types,
               "counts": {kind: sum(p.kind == kind for p in res.critical_points)
                          for kind in ("minimum", "maximum", "saddle", "degenerate")}}
    out.emit("normal_form_summary.json", ser.dumps(summary))


def cmd_gallery(args: argparse.Namespace, out: _Outputs) -> None:
    c = bf.perturbation_gallery(args.n, args.ell, args.eps, args.branch, args.r0, args.lam)
    out.emit(f"gallery_n{args.n}_l{args.ell}_{args.branch}.json", ser.dumps(ser.config_to_dict(c)))
    group = bf.stabilizer(args.n, args.ell, args.branch)
    err = max(float(np.max(np.abs(bf.act(g, c).positions - c.positions))) for g in group)
    g = math.gcd(args.n, args.ell)
    report = {
        "n": args.n, "ell": args.ell, "branch": args.branch, "eps": args.eps,
        "phase": bf.gallery_phase(args.n, args.ell, args.branch),
        "phase_rule": "m: phase 0; m_prime: phase -pi*ell/n (fixed by c*m)",
        "k": args.n // g, "rings": g,
        "stabilizer": [{"rotation_power": e.rotation_power, "reflected": e.reflected} for e in group],
        "max_invariance_error": err,
    }
    out.emit(f"gallery_n{args.n}_l{args.ell}_{args.branch}_symmetry.json", ser.dumps(report))


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvotex", description="Vortex rings on surfaces of constant curvature.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-o", "--out-dir", type=Path, default=Path("."), help="directory for output files")
    p.add_argument("--strict", action="store_true", help="treat numerical warnings as failures (exit 4)")
    p.add_argument("-q", "--quiet", action="store_true", help="do not echo the primary output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stability", help="b_n table, stability ranges, classification grid")
    s.add_argument("--table", action="store_true")
    s.add_argument("--n-min", type=int, default=4)
    s.add_argument("--n-max", type=int, default=13)
    s.add_argument("--n", type=int, nargs="+")
    s.add_argument("--x", type=float, nargs="+", help="values of lambda*r0^2 to classify")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("bifurcations", help="bifurcation values of every mode")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_bifurcations)

    s = sub.add_parser("spectrum", help="Hessian eigenvalues and classification")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--r0", type=float, default=1.0)
    s.add_argument("--kappa", type=float, default=1.0)
    s.add_argument("--greens", choices=["background", "pole"], default="background")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("probe", help="higher-order test at the degenerate ring")
    s.add_argument("--n", type=int)
    s.add_argument("--root", choices=["principal", "reciprocal"], default="principal")
    s.add_argument("--r0", type=float, default=1.0)
    s.add_argument("--sweep", type=int, metavar="N_MAX")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("simulate", help="integrate a vortex configuration")
    s.add_argument("config", type=Path)
    s.add_argument("--t-end", type=float, required=True)
    s.add_argument("--dt", type=float, required=True)
    s.add_argument("--perturb", nargs=2, metavar=("ELL", "EPS"))
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("normal-form", help="contour samples of the D_k normal form")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--u", type=float, required=True)
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--extent", type=float)
    s.set_defaults(func=cmd_normal_form)

    s = sub.add_parser("gallery", help="symmetry-typed perturbation of the ring")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--branch", choices=["m", "m_prime"], default="m")
    s.add_argument("--r0", type=float, default=1.0)
    s.add_argument("--lam", type=float, default=0.0)
    s.set_defaults(func=cmd_gallery)
    return p


def _parameters(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"func", "out_dir", "quiet"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = str(v) if isinstance(v, Path) else v
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Outputs(args.out_dir, args.quiet)
    func: Callable[[argparse.Namespace, _Outputs], None] = args.func
    status = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NumericalWarning)
        try:
            func(args, out)
        except (DomainError, NoRootError, CollisionError) as exc:
            print(f"curvotex: error: {exc}", file=sys.stderr)
            status = EXIT_DOMAIN
        except (ValueError, OSError) as exc:
            print(f"curvotex: error: {exc}", file=sys.stderr)
            status = EXIT_USAGE
    numerical = [w for w in caught if issubclass(w.category, NumericalWarning)]
    for w in numerical:
        print(f"curvotex: warning: {w.message}", file=sys.stderr)
    if numerical and args.strict and status == 0:
        status = EXIT_NUMERICAL
    manifest = ser.RunManifest(args.command, _parameters(args), __version__, list(out.paths))
    manifest.write(args.out_dir)
    return status


if __name__ == "__main__":
    sys.exit(main())
