"""Command-line front end.

Every command writes its tables (CSV), reports (JSON) or polylines (plain
whitespace columns, blank line between segments) into the output directory
together with ``<command>.manifest.json``.  Exit codes: 0 success,
2 a tolerance was exceeded, 3 bad parameters or no result in the domain.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .core import DomainError, WellConfig
from .oracle import oracle_reality_census, well_spectrum
from .secular import (
    find_roots_on_hyperbola,
    oval_hyperbola_crossings,
    root_diagnostics,
    root_from_k,
    trace_semi_ovals,
)
from .spectrum import CriticalCouplingError, energies, gc_sweep, t_window_for_levels
from .susy import (
    PoleError,
    SusyConstructionError,
    discontinuity_noncontinuity_certificates,
    partner_eigenfunction_value,
    partner_potential_value,
    superpotential_value,
    susy_parameters,
    verify_susy,
)
from .wavefunction import coefficients

log = logging.getLogger("ptwell")

OUTPUT_ENV = "PTWELL_OUTPUT_DIR"
EXIT_OK, EXIT_TOLERANCE, EXIT_DOMAIN = 0, 2, 3


def output_dir(args) -> Path:
    d = Path(args.out or os.environ.get(OUTPUT_ENV) or "ptwell-out")
    d.mkdir(parents=True, exist_ok=True)
    return d


def write_manifest(out: Path, command: str, parameters: dict, tolerances: dict, files: list[str]) -> Path:
    manifest = {
        "command": command,
        "parameters": parameters,
        "code_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "tolerances": tolerances,
        "files": files,
    }
    path = out / f"{command}.manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _cfg(args) -> WellConfig:
    return WellConfig(args.L, args.l, args.g)


# ---- spectrum ---------------------------------------------------------------

def spectrum_rows(cfg: WellConfig, n_levels: int) -> list[list]:
    """(n, s, t, k, E, secular residual, constraint residual) per real level."""
    if cfg.g == 0:
        rows = []
        for n, E in enumerate(energies(cfg, n_levels), start=1):
            k = math.sqrt(E)
            rows.append([n, 0.0, k, k, E, 0.0, 0.0])
        return rows
    roots = [root_from_k(cfg, math.sqrt(E), i) for i, E in enumerate(energies(cfg, n_levels))]
    rows = []
    for n, r in enumerate(roots[:n_levels], start=1):
        res, con = root_diagnostics(cfg, r)
        rows.append([n, r.s, r.t, r.k, r.E, res, con])
    return rows


SPECTRUM_HEADER = ["n", "s", "t", "k", "E", "secular_residual", "constraint_residual"]


def cmd_spectrum(args) -> int:
    cfg = _cfg(args)
    rows = spectrum_rows(cfg, args.n)
    if not rows:
        print(f"no real levels at g={cfg.g}, l={cfg.l}: PT symmetry is broken for all of them", file=sys.stderr)
        return EXIT_DOMAIN
    out = output_dir(args)
    files = []
    if args.format in ("csv", "both"):
        write_csv(out / "spectrum.csv", SPECTRUM_HEADER, rows)
        files.append("spectrum.csv")
    if args.format in ("json", "both"):
        write_json(out / "spectrum.json", [dict(zip(SPECTRUM_HEADER, r)) for r in rows])
        files.append("spectrum.json")
    write_manifest(
        out, "spectrum",
        {"L": cfg.L, "l": cfg.l, "g": cfg.g, "n": args.n},
        {"root_xtol": 1e-12, "secular_residual": "relative to term magnitudes"},
        files,
    )
    for r in rows:
        print(f"{r[0]:3d}  E = {r[4]:.12g}")
    if len(rows) < args.n:
        print(f"only {len(rows)} real levels found", file=sys.stderr)
    return EXIT_OK


# ---- ovals ------------------------------------------------------------------

def _write_polylines(path: Path, segments) -> None:
    with path.open("w") as fh:
        for i, seg in enumerate(segments):
            if i:
                fh.write("\n")
            for a, b in seg:
                fh.write(f"{a!r} {b!r}\n")


def cmd_ovals(args) -> int:
    cfg = _cfg(args)
    curves = trace_semi_ovals(cfg.L, cfg.l, args.s_max, args.t_max, grid=args.grid)
    out = output_dir(args)
    if args.coords == "st":
        segs = [[(p.s, p.t) for p in c] for c in curves]
    else:
        segs = [[(p.k, p.u) for p in c] for c in curves]
    _write_polylines(out / "ovals.dat", segs)
    hyper = []
    if cfg.g > 0:
        if args.coords == "st":
            ts = np.linspace(math.sqrt(cfg.g / 2), args.t_max, 400)
            hyper = [[(0.5 * cfg.g / t, t) for t in ts if 0.5 * cfg.g / t <= args.s_max]]
        else:
            k_max = math.sqrt(max(args.t_max**2 - (0.5 * cfg.g / args.t_max) ** 2, 0.0))
            hyper = [[(0.0, 0.5 * cfg.g), (k_max, 0.5 * cfg.g)]]
    _write_polylines(out / "hyperbola.dat", hyper)
    crossings = oval_hyperbola_crossings(curves, cfg.g) if cfg.g > 0 else []
    write_csv(out / "crossings.csv", ["index", "E"], [[i + 1, float(E)] for i, E in enumerate(crossings)])
    write_manifest(
        out, "ovals",
        {"L": cfg.L, "l": cfg.l, "g": cfg.g, "s_max": args.s_max, "t_max": args.t_max,
         "coords": args.coords, "grid": args.grid},
        {"vertex_refinement_xtol": 1e-13, "crossings": "linear interpolation, ~1e-3 relative"},
        ["ovals.dat", "hyperbola.dat", "crossings.csv"],
    )
    print(f"{len(curves)} polylines, {len(crossings)} crossings with 2st = g")
    return EXIT_OK


# ---- critical ---------------------------------------------------------------

def figure3_l_values(n: int = 50, lo: float = 1e-3, hi: float = 0.999) -> list[float]:
    return [float(v) for v in np.geomspace(lo, hi, n)]


def cmd_critical(args) -> int:
    if args.figure3:
        ls = figure3_l_values()
    else:
        ls = list(args.l or [])
        if args.l_list:
            ls += [float(v) for v in Path(args.l_list).read_text().split()]
    if not ls:
        print("give --l, --l-list or --figure3", file=sys.stderr)
        return EXIT_DOMAIN
    results = gc_sweep(args.L, ls, args.tol)
    rows = []
    for l, r in zip(ls, results):
        if isinstance(r, Exception):
            rows.append([l, "", "", "", str(r)])
        else:
            rows.append([l, r.g_c, r.merge_energy, r.bracket_width, ""])
    out = output_dir(args)
    write_csv(out / "critical.csv", ["l", "g_c", "merge_energy", "bracket_width", "error"], rows)
    write_manifest(
        out, "critical",
        {"L": args.L, "l": ls, "figure3": bool(args.figure3)},
        {"tol_rel": args.tol},
        ["critical.csv"],
    )
    for row in rows:
        print(f"l = {row[0]:.9g}  g_c = {row[1] if row[4] == '' else 'FAILED: ' + row[4]}")
    return EXIT_DOMAIN if all(row[4] for row in rows) else EXIT_OK


# ---- susy -------------------------------------------------------------------

SUSY_TOL = 1e-8


def cmd_susy(args) -> int:
    cfg = _cfg(args)
    if cfg.g == 0:
        print("the SUSY construction needs g > 0", file=sys.stderr)
        return EXIT_DOMAIN
    roots = find_roots_on_hyperbola(cfg, t_window_for_levels(cfg, args.n_levels + 1))[: args.n_levels + 1]
    if len(roots) < 2:
        print("fewer than two real levels: no partner states to build", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        p = susy_parameters(cfg, roots[0])
    except SusyConstructionError as exc:
        print(f"susy_parameters failed: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    report = verify_susy(cfg, p, roots)
    cert_l, cert_0 = discontinuity_noncontinuity_certificates(p, cfg)
    out = output_dir(args)
    params = {
        "k0": p.k0, "kappa0": p.kappa0, "E0": p.E0, "x_L2": p.x_L2, "x_R2": p.x_R2,
        "x_R1": p.x_R1, "x_L1": p.x_L1, "split_residuals": list(p.split_residuals),
        "branch_shift": p.branch_shift, "alternatives": list(p.alternatives),
        "certificates": {"x=l": cert_l, "x=0": cert_0},
        "partner_energies": [r.E - p.E0 for r in roots[1:]],
    }
    write_json(out / "susy_parameters.json", params)
    write_json(out / "susy_report.json", report.as_dict())

    margin = 1e-3 * cfg.L
    x = np.linspace(-cfg.L + margin, cfg.L - margin, args.sample_points)
    W = superpotential_value(p, cfg, x)
    Vm = partner_potential_value(p, cfg, x)
    psis = [partner_eigenfunction_value(cfg, p, r, coefficients(cfg, r), x) for r in roots[1:]]
    header = ["x", "re_W", "im_W", "re_Vminus", "im_Vminus"]
    for n in range(len(psis)):
        header += [f"re_psi{n}", f"im_psi{n}"]
    rows = []
    for i, xv in enumerate(x):
        row = [float(xv), float(W[i].real), float(W[i].imag), float(Vm[i].real), float(Vm[i].imag)]
        for ps in psis:
            row += [float(ps[i].real), float(ps[i].imag)]
        rows.append(row)
    write_csv(out / "susy_samples.csv", header, rows)
    tol = {"annihilation": args.tol, "intertwining": args.tol, "factorization": args.tol,
           "isospectral": args.tol, "matching": args.match_tol}
    write_manifest(
        out, "susy",
        {"L": cfg.L, "l": cfg.l, "g": cfg.g, "n_levels": args.n_levels, "sample_points": args.sample_points},
        tol,
        ["susy_parameters.json", "susy_report.json", "susy_samples.csv"],
    )
    checks = {
        "annihilation": report.annihilation_residual,
        "factorization": report.factorization_residual,
        "intertwining": report.intertwining_residual,
        "isospectral": report.isospectral_residual,
        "matching": max(report.partner_matching_residuals.values()),
    }
    failed = [k for k, v in checks.items() if not v < tol[k]]
    for k, v in checks.items():
        print(f"{k:14s} {v:.3e}  (tol {tol[k]:.0e})")
    for name, j in report.discontinuity_jumps.items():
        print(f"jump of V- at {name:>2s}: {j.real:+.6g} {j.imag:+.6g}i")
    if failed:
        print("tolerance exceeded: " + ", ".join(failed), file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


# ---- verify -----------------------------------------------------------------

def verify_rows(cfg: WellConfig, N: int, n_levels: int, rtol: float, imag_tol: float):
    """Secular energies beside their nearest near-real oracle levels.

    Returns (rows, census, ok).  The secular count is compared with the
    number of near-real oracle levels below the highest matched energy.
    """
    secular = energies(cfg, n_levels)
    # broken pairs also sit in the window, so size it by energy, not count
    E_top = max(secular) if secular else (n_levels * math.pi / (2 * cfg.L)) ** 2
    n_or = max(n_levels, math.ceil(2 * cfg.L * math.sqrt(1.3 * E_top) / math.pi)) + 4
    osp = well_spectrum(cfg, N, n_or, richardson=True)
    census = oracle_reality_census(cfg, N, imag_tol, n_or, spectrum=osp)
    best = osp.best
    near_real = best[np.abs(best.imag) < imag_tol]
    rows, ok = [], True
    used = set()
    for i, E in enumerate(secular, start=1):
        j = int(np.argmin(np.abs(near_real - E))) if near_real.size else -1
        if j < 0 or j in used:
            rows.append([i, E, "", "", "", False])
            ok = False
            continue
        used.add(j)
        z = complex(near_real[j])
        rel = abs(z.real - E) / abs(E)
        good = rel < rtol and abs(z.imag) < imag_tol
        ok &= good
        rows.append([i, E, z.real, z.imag, rel, good])
    if secular:
        below = int(np.sum(near_real.real <= secular[-1] * (1 + 10 * rtol)))
        ok &= below == len(secular)
    return rows, census, ok


def cmd_verify(args) -> int:
    cfg = _cfg(args)
    rows, census, ok = verify_rows(cfg, args.N, args.n_levels, args.rtol, args.imag_tol)
    out = output_dir(args)
    write_csv(out / "verify.csv", ["n", "E_secular", "E_oracle_re", "E_oracle_im", "rel_delta", "within_tol"], rows)
    write_json(out / "verify_census.json", {
        "near_real": census.near_real,
        "complex_pairs": census.complex_pairs,
        "unstable": census.unstable,
        "pt_broken": bool(census.complex_pairs),
    })
    write_manifest(
        out, "verify",
        {"L": cfg.L, "l": cfg.l, "g": cfg.g, "N": args.N, "n_levels": args.n_levels},
        {"rtol": args.rtol, "imag_tol": args.imag_tol},
        ["verify.csv", "verify_census.json"],
    )
    for r in rows:
        print(" ".join(str(v) for v in r))
    if census.complex_pairs:
        print(f"PT symmetry broken: {len(census.complex_pairs)} complex pair(s) among the low oracle levels")
    return EXIT_OK if ok else EXIT_TOLERANCE


# ---- parser -----------------------------------------------------------------

def _well_args(p, g_default=2.0, l_default=0.5):
    p.add_argument("--L", type=float, default=1.0, help="half-width of the box")
    p.add_argument("--l", type=float, default=l_default, help="half-width of the barrier")
    p.add_argument("--g", type=float, default=g_default, help="barrier strength")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptwell", description=__doc__.splitlines()[0])
    ap.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./ptwell-out)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="real energy levels")
    _well_args(p)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--format", choices=["csv", "json", "both"], default="csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("ovals", help="zero curves of the secular residual")
    _well_args(p, 650.0, 0.04)
    p.add_argument("--s-max", type=float, default=25.0)
    p.add_argument("--t-max", type=float, default=40.0)
    p.add_argument("--coords", choices=["st", "uk"], default="st")
    p.add_argument("--grid", type=int, default=600)
    p.set_defaults(func=cmd_ovals)

    p = sub.add_parser("critical", help="critical coupling g_c(l)")
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--l", type=float, action="append", help="repeatable")
    p.add_argument("--l-list", help="file of whitespace-separated l values")
    p.add_argument("--figure3", action="store_true", help="50 log-spaced l values in [1e-3, 0.999]")
    p.add_argument("--tol", type=float, default=1e-5, help="relative bisection tolerance")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("susy", help="superpotential, partner potential and states")
    _well_args(p)
    p.add_argument("--n-levels", type=int, default=4, help="partner states to build")
    p.add_argument("--sample-points", type=int, default=401)
    p.add_argument("--tol", type=float, default=SUSY_TOL)
    p.add_argument("--match-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_susy)

    p = sub.add_parser("verify", help="secular energies against the finite-difference oracle")
    _well_args(p)
    p.add_argument("--N", type=int, default=4000)
    p.add_argument("--n-levels", type=int, default=5)
    p.add_argument("--rtol", type=float, default=1e-4)
    p.add_argument("--imag-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DomainError, PoleError, CriticalCouplingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
