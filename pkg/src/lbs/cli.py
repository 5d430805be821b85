"""Command-line interface.

Subcommands: band, afuncs, consts, det, spectrum, eigenfunction, classify,
phase-diagram, curves, verify.  Output is deterministic: identical argv
and config produce byte-identical text (floats are printed with 12
significant digits).  Exit codes: 0 success, 1 numeric inconsistency or
failed verification, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import quadrature as quad
from ._output import dumps, fmt
from .determinant import CouplingPair, delta_a12, delta_s, structural_constants
from .dispersion import Quasimomentum, band_edges
from .errors import InconsistencyError
from .oracle import grid_eigenvalues, oracle_counts
from .quadrature import EDGE_DELTA, default_grid
from .regions import SCAN_HEADER, classify, critical_curve, phase_scan
from .spectrum import full_spectrum_zero_K, sector_spectrum


@dataclass
class RunConfig:
    """Shared numerical configuration, overridable per flag or config file."""

    quadrature_n: int = 64
    grid_n: int = 12
    edge_delta: float = EDGE_DELTA

    def validate(self):
        if self.quadrature_n < 8:
            raise ValueError(f"quadrature_n must be >= 8, got {self.quadrature_n}")
        if self.quadrature_n % 2 != 0:
            raise ValueError(f"quadrature_n must be even, got {self.quadrature_n}")
        if not (4 <= self.grid_n <= 24 and self.grid_n % 2 == 0):
            raise ValueError(f"grid_n must be even and in [4, 24], got {self.grid_n}")
        if not (0.0 < self.edge_delta < 0.5):
            raise ValueError(f"edge_delta must be in (0, 0.5), got {self.edge_delta}")
        return self


def _build_config(args) -> RunConfig:
    """Flags override config-file entries, which override defaults."""
    cfg = RunConfig()
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            data = json.load(fh)
        for key in ("quadrature_n", "grid_n", "edge_delta"):
            if key in data:
                setattr(cfg, key, data[key])
    if getattr(args, "n", None) is not None:
        cfg.quadrature_n = args.n
    if getattr(args, "grid", None) is not None:
        cfg.grid_n = args.grid
    if getattr(args, "edge_delta", None) is not None:
        cfg.edge_delta = args.edge_delta
    cfg.validate()
    quad.set_edge_delta(cfg.edge_delta)
    return cfg


def _parse_k(text: str) -> Quasimomentum:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"need kx,ky,kz, got {text!r}")
    try:
        return Quasimomentum(*(float(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_linscan(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"need lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"need lo:hi:n, got {text!r}") from None
    if n < 2:
        raise argparse.ArgumentTypeError(f"scan needs n >= 2, got {n}")
    return lo, hi, n


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _max_workers() -> int:
    raw = os.environ.get("LBS_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _report(inputs: dict, results: dict, diagnostics: dict) -> str:
    return dumps({"inputs": inputs, "results": results, "diagnostics": diagnostics}) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_band(args) -> int:
    band = band_edges(args.K)
    if args.json:
        sys.stdout.write(_report(
            {"K": list(args.K.components())},
            {"e_min": band.e_min, "e_max": band.e_max},
            {},
        ))
    else:
        print(f"e_min = {fmt(band.e_min)}")
        print(f"e_max = {fmt(band.e_max)}")
    return 0


def _cmd_afuncs(args) -> int:
    cfg = _build_config(args)
    grid = default_grid(cfg.quadrature_n)
    z = args.z
    z_arr = np.array([z])
    quad._check_outside_band(z_arr)
    refl = z >= 24.0
    zb = 24.0 - z if refl else z
    signs = (-1.0, 1.0, -1.0, -1.0) if refl else (1.0, 1.0, 1.0, 1.0)
    qvals = [s * float(v[0]) for s, v in
             zip(signs, quad._quadrature_a_batch(np.array([zb]), grid))]
    bvals = [s * float(v[0]) for s, v in
             zip(signs, quad._laplace_a_batch(np.array([zb])))]
    names = ("a11", "a12", "a22", "a_a12")
    if args.json:
        results = {
            name: {"quadrature": q, "bessel": b, "discrepancy": abs(q - b)}
            for name, q, b in zip(names, qvals, bvals)
        }
        sys.stdout.write(_report(
            {"z": z, "quadrature_n": cfg.quadrature_n},
            results,
            {"reflected": refl, "edge_delta": cfg.edge_delta},
        ))
    else:
        print(f"{'':6s}{'quadrature':>19s}  {'bessel':>19s}  {'discrepancy':>19s}")
        for name, q, b in zip(names, qvals, bvals):
            print(f"{name:6s}{fmt(q):>19s}  {fmt(b):>19s}  {fmt(abs(q - b)):>19s}")
    return 0


def _cmd_consts(args) -> int:
    consts = structural_constants()
    out = {
        "a11_0": consts["a11_0"],
        "a12_0": consts["a12_0"],
        "a22_0": consts["a22_0"],
        "a_a12_0": consts["a_a12_0"],
        "mu0": consts["mu0"],
        "mu2_crit": consts["mu2_crit"],
    }
    sys.stdout.write(dumps(out) + "\n")
    return 0


def _cmd_det(args) -> int:
    cfg = _build_config(args)
    grid = default_grid(cfg.quadrature_n)
    c = CouplingPair(args.mu1, args.mu2)
    ds = delta_s(c, args.z, grid)
    da = delta_a12(args.mu2, args.z, grid)
    if args.json:
        sys.stdout.write(_report(
            {"mu1": args.mu1, "mu2": args.mu2, "z": args.z},
            {"delta_s": ds, "delta_a12": da},
            {"quadrature_n": cfg.quadrature_n},
        ))
    else:
        print(f"delta_s    = {fmt(ds)}")
        print(f"delta_a12  = {fmt(da)}")
    return 0


def _sector_payload(spec) -> dict:
    return {"below": list(spec.below), "above": list(spec.above)}


def _cmd_spectrum(args) -> int:
    cfg = _build_config(args)
    grid = default_grid(cfg.quadrature_n)
    c = CouplingPair(args.mu1, args.mu2)
    full = full_spectrum_zero_K(c, grid)
    mix = sector_spectrum("MIX", c, grid)
    side_filter = args.side

    def keep(payload: dict) -> dict:
        if side_filter == "both":
            return payload
        return {side_filter: payload[side_filter]}

    if args.json:
        results = {
            "S": keep(_sector_payload(full.s)),
            "A12": keep(_sector_payload(full.a12)),
            "MIX": keep(_sector_payload(mix)),
            "full": keep({"below": list(full.below), "above": list(full.above)}),
        }
        diagnostics = {
            "coincidences": [list(t) for t in full.coincidences],
            "marginal": [list(t) for t in full.s.marginal + full.a12.marginal],
        }
        sys.stdout.write(_report(
            {"mu1": args.mu1, "mu2": args.mu2, "side": side_filter}, results, diagnostics,
        ))
    else:
        for name, spec in (("S", full.s), ("A12", full.a12), ("MIX", mix)):
            for side in ("below", "above"):
                if side_filter not in ("both", side):
                    continue
                roots = getattr(spec, side)
                mult = 1 if name == "S" else 2
                body = ", ".join(fmt(r) for r in roots) if roots else "-"
                print(f"{name:4s} {side:6s} (multiplicity {mult}): {body}")
        if full.coincidences:
            print(f"coincidences: {full.coincidences}")
        for side, zval in full.s.marginal + full.a12.marginal:
            print(f"threshold-marginal root near {side} edge: {fmt(zval)}")
    return 0


def _cmd_eigenfunction(args) -> int:
    from .spectrum import eigenfunction_a12, eigenfunction_s

    cfg = _build_config(args)
    grid = default_grid(cfg.quadrature_n)
    c = CouplingPair(args.mu1, args.mu2)
    ds = abs(delta_s(c, args.z, grid))
    da = abs(delta_a12(args.mu2, args.z, grid))
    if ds <= da:
        f = eigenfunction_s(c, args.z, grid)
    else:
        f = eigenfunction_a12(args.mu2, args.z, "A12", grid)
    n = cfg.grid_n
    h = 2.0 * math.pi / n
    axis = -math.pi + (np.arange(n) + 0.5) * h
    p1, p2, p3 = (a.ravel() for a in np.meshgrid(axis, axis, axis, indexing="ij"))
    vals = f(p1, p2, p3)
    lines = ["p1,p2,p3,f"]
    lines += [
        f"{fmt(float(a))},{fmt(float(b))},{fmt(float(cc))},{fmt(float(v))}"
        for a, b, cc, v in zip(p1, p2, p3, vals)
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_classify(args) -> int:
    rep = classify(CouplingPair(args.mu1, args.mu2))
    payload = {
        "a_minus": rep.a_minus, "a_plus": rep.a_plus,
        "b_minus": rep.b_minus, "b_plus": rep.b_plus,
        "d_minus": rep.d_minus, "d_plus": rep.d_plus,
        "g_label": list(rep.g_label) if rep.g_label is not None else None,
        "sector_sum": list(rep.sector_sum),
        "boundary": sorted(rep.boundary),
    }
    if args.json:
        sys.stdout.write(_report({"mu1": args.mu1, "mu2": args.mu2}, payload, {}))
    else:
        for key, val in payload.items():
            print(f"{key:11s}= {val}")
    return 0


def _scan_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ";".join(value)
    return fmt(value)


def _cmd_phase_diagram(args) -> int:
    cfg = _build_config(args)
    grid = default_grid(cfg.quadrature_n)
    rows = phase_scan(args.mu1, args.mu2, verify=args.verify, grid=grid,
                      max_workers=_max_workers() if args.verify else 0)
    lines = [SCAN_HEADER]
    anomalies = []
    for r in rows:
        cells = [fmt(r.mu1), fmt(r.mu2), _scan_cell(r.a_minus), _scan_cell(r.a_plus),
                 _scan_cell(r.b_minus), _scan_cell(r.b_plus), _scan_cell(r.sum_below),
                 _scan_cell(r.sum_above), _scan_cell(r.det_below),
                 _scan_cell(r.det_above), _scan_cell(r.flags)]
        lines.append(",".join(cells))
        if (r.sum_below is not None and r.sum_below > 3) or \
           (r.sum_above is not None and r.sum_above > 3):
            anomalies.append(r)
    _emit("\n".join(lines) + "\n", args.out)
    if anomalies:
        sys.stderr.write(
            f"note: {len(anomalies)} grid points carry more than 3 eigenvalues "
            "on one side; the per-side label table caps at 3 there\n"
        )
    return 0


def _cmd_curves(args) -> int:
    lo, hi, n = args.mu1
    mu1s = np.linspace(lo, hi, n)
    lines = ["mu1,mu2_curve"]
    pole = -12.0 if args.side == "minus" else 12.0
    for m1 in mu1s:
        if float(m1) == pole:
            lines.append(f"{fmt(float(m1))},")
            continue
        lines.append(f"{fmt(float(m1))},{fmt(critical_curve(args.side, float(m1)))}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    cfg = _build_config(args)
    grid = default_grid(cfg.quadrature_n)
    c = CouplingPair(args.mu1, args.mu2)
    K = args.K if args.K is not None else Quasimomentum(0.0, 0.0, 0.0)
    at_gamma = K.components() == (0.0, 0.0, 0.0)
    n = cfg.grid_n

    full = full_spectrum_zero_K(c, grid)
    det_below, det_above = len(full.below), len(full.above)
    roots = list(full.below) + list(full.above)

    # shrink the band-edge margin when the determinant places a state
    # inside the default exclusion zone, so shallow states stay countable
    margin = 10.0 / n
    if roots:
        closest = min(min(abs(r), abs(r - 24.0)) for r in roots)
        margin = max(min(margin, 0.5 * closest), 1e-6)
    orc_below, orc_above = oracle_counts(c, K, n, margin=margin)

    distances = []
    if at_gamma:
        ev = grid_eigenvalues(c, K, n)
        distances = [float(np.min(np.abs(ev - root))) for root in roots]
        ok = (det_below, det_above) == (orc_below, orc_above)
    else:
        # away from K = 0 the K = 0 counts are lower bounds
        ok = orc_below >= det_below and orc_above >= det_above

    status = "PASS" if ok else "FAIL"
    if args.json:
        sys.stdout.write(_report(
            {"mu1": args.mu1, "mu2": args.mu2, "K": list(K.components()), "grid_n": n},
            {
                "det_below": det_below, "det_above": det_above,
                "oracle_below": orc_below, "oracle_above": orc_above,
                "root_distances": distances,
                "status": status,
            },
            {"margin": margin, "comparison": "equal" if at_gamma else "lower-bound"},
        ))
    else:
        print(f"det counts    : below={det_below} above={det_above}")
        print(f"oracle counts : below={orc_below} above={orc_above} "
              f"(N={n}, margin={fmt(margin)})")
        for root, dist in zip(roots, distances):
            print(f"  root {fmt(root)} -> nearest grid eigenvalue distance {fmt(dist)}")
        print(status)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lbs",
        description="Bound states of the two-boson lattice Schrodinger operator on Z^3",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, mu=False, z=False, jsonable=True):
        p.add_argument("--config", help="JSON config file (flags take precedence)")
        p.add_argument("--n", type=int, help="quadrature nodes per axis (default 64)")
        p.add_argument("--edge-delta", dest="edge_delta", type=float,
                       help="band-edge layer half-width (default 0.01)")
        if mu:
            p.add_argument("--mu1", type=float, required=True)
            p.add_argument("--mu2", type=float, required=True)
        if z:
            p.add_argument("--z", type=float, required=True)
        if jsonable:
            p.add_argument("--json", action="store_true")

    p = sub.add_parser("band", help="essential-spectrum band edges")
    p.add_argument("--K", type=_parse_k, default=Quasimomentum(0, 0, 0),
                   help="quasi-momentum kx,ky,kz (default 0,0,0)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_band)

    p = sub.add_parser("afuncs", help="resolvent moments by both evaluation paths")
    add_common(p, z=True)
    p.set_defaults(func=_cmd_afuncs)

    p = sub.add_parser("consts", help="band-edge constants as JSON")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_consts)

    p = sub.add_parser("det", help="sector determinants at one z")
    add_common(p, mu=True, z=True)
    p.set_defaults(func=_cmd_det)

    p = sub.add_parser("spectrum", help="discrete eigenvalues per sector")
    add_common(p, mu=True)
    p.add_argument("--side", choices=("below", "above", "both"), default="both")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("eigenfunction", help="sample an eigenfunction on a p-grid")
    add_common(p, mu=True, z=True, jsonable=False)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.add_argument("--grid", type=int, help="sampling nodes per axis (default 12)")
    p.set_defaults(func=_cmd_eigenfunction)

    p = sub.add_parser("classify", help="coupling-plane region membership")
    p.add_argument("--mu1", type=float, required=True)
    p.add_argument("--mu2", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("phase-diagram", help="rectangular region scan as CSV")
    add_common(p, jsonable=False)
    p.add_argument("--mu1", type=_parse_linscan, required=True, metavar="lo:hi:n")
    p.add_argument("--mu2", type=_parse_linscan, required=True, metavar="lo:hi:n")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.add_argument("--verify", action="store_true",
                   help="also count determinant roots at every point (slow)")
    p.set_defaults(func=_cmd_phase_diagram)

    p = sub.add_parser("curves", help="critical curve samples as CSV")
    p.add_argument("--side", choices=("minus", "plus"), required=True)
    p.add_argument("--mu1", type=_parse_linscan, required=True, metavar="lo:hi:n")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("verify", help="determinant counts vs grid-oracle counts")
    add_common(p, mu=True)
    p.add_argument("--K", type=_parse_k, default=None,
                   help="quasi-momentum kx,ky,kz (default 0,0,0)")
    p.add_argument("--grid", type=int, help="oracle grid size N (default 12)")
    p.set_defaults(func=_cmd_verify)

    return parser


_VALUE_FLAGS = {"--mu1", "--mu2", "--z", "--K", "--edge-delta"}


def _merge_dash_values(argv: list[str]) -> list[str]:
    """Join flag/value pairs whose value starts with '-' (negative numbers,
    ranges like -20:20:5) into --flag=value form so argparse accepts them."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_dash_values(list(argv)))
    try:
        return args.func(args)
    except InconsistencyError as exc:
        sys.stderr.write(f"inconsistency: {exc}\n")
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main():  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
