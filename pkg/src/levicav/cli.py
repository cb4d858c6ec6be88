"""Trapping, cooling and squeezing of a dielectric sphere held in an optical cavity.

Exit codes: 0 success, 1 failed check, 2 invalid input or configuration.
Output files go to ``--outdir``, else ``$LEVICAV_OUTPUT_DIR``, else
``./levicav-output``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__, cooling, figures, mie, noise, report, sidebands, thermal, trap
from .config import ConfigError, load
from .io import output_dir
from .physcore import CavitySetup, Environment, Sphere, bulk_loss_to_im_eps, convert
from .sweep import run_sweep

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _sphere_args(p, radius=50.0):
    g = p.add_argument_group("sphere")
    g.add_argument("--radius-nm", type=float, default=radius)
    g.add_argument("--density", type=float, default=2000.0, help="kg/m^3")
    g.add_argument("--eps-real", type=float, default=None, help="omit for the high-index limit")
    g.add_argument("--loss-db-per-km", type=float, default=0.0)
    g.add_argument("--bb-factor", type=float, default=0.1)
    g.add_argument("--wavelength-nm", type=float, default=1000.0)


def _cavity_args(p, length=1.0, waist=25.0, finesse=5e4):
    g = p.add_argument_group("cavity")
    g.add_argument("--length-cm", type=float, default=length)
    g.add_argument("--waist-um", type=float, default=waist)
    g.add_argument("--finesse", type=float, default=finesse)


def _sphere(a):
    r = convert(a.radius_nm, "nm", "m")
    if a.eps_real is None:
        return Sphere.high_index(r, a.density, a.bb_factor)
    lam = convert(a.wavelength_nm, "nm", "m")
    return Sphere(r, a.density, a.eps_real, bulk_loss_to_im_eps(a.loss_db_per_km, a.eps_real, lam), a.bb_factor)


def _cavity(a):
    return CavitySetup(a.length_cm * 1e-2, convert(a.waist_um, "um", "m"), convert(a.wavelength_nm, "nm", "m"),
                       finesse=a.finesse)


def _emit(a, values):
    if getattr(a, "json", False):
        print(json.dumps(values, indent=2, default=float))
    else:
        for k, v in values.items():
            print(f"{k} = {v:.6g}" if isinstance(v, float) else f"{k} = {v}")


def cmd_trap(a):
    s, lam = _sphere(a), convert(a.wavelength_nm, "nm", "m")
    if a.freq_MHz is not None:
        tp = trap.trap_for_frequency(s, convert(a.freq_MHz, "MHz", "rad/s"), lam, _cavity(a))
    else:
        tp = trap.trap_params(s, convert(a.intensity_W_per_um2, "W/um2", "W/m2"), lam, _cavity(a))
    _emit(a, {"omega_m_over_2pi_MHz": tp.omega_m / 2e6 / math.pi, "intensity_W_per_um2": tp.intensity / 1e12,
              "depth_K": tp.depth_kelvin, "zero_point_m": tp.zero_point, "scatter_rate_per_s": tp.scatter_rate,
              "coupling_rad_s": tp.coupling, "sphere_loss_rad_s": tp.sphere_loss, "phi": tp.phi})


def cmd_noise(a):
    s, lam = _sphere(a), convert(a.wavelength_nm, "nm", "m")
    env = Environment(convert(a.pressure_torr, "Torr", "Pa"), a.temperature_K)
    tp = trap.trap_for_frequency(s, convert(a.freq_MHz, "MHz", "rad/s"), lam)
    b = noise.noise_budget(s, env, tp, _cavity(a), aspect=a.aspect)
    out = {"gamma_g_per_s": b.gamma_g, "Q_g": b.q_g, "gamma_sc_per_s": b.gamma_sc}
    out.update({f"N_osc_{k}": v for k, v in b.n_osc.items()})
    out["dominant"] = b.dominant
    out["free_molecular"] = b.free_molecular
    _emit(a, out)


def cmd_cool(a):
    s, lam, wm = _sphere(a), convert(a.wavelength_nm, "nm", "m"), convert(a.freq_MHz, "MHz", "rad/s")
    if a.best:
        pt = cooling.best_finesse(s, a.length_cm * 1e-2, convert(a.waist_um, "um", "m"), lam, wm)
    else:
        pt = cooling.optimize_point(s, _cavity(a), wm)
    _emit(a, {"finesse": float(pt.finesse), "kappa_rad_s": float(pt.kappa), "delta2_rad_s": pt.delta2,
              "zeta": float(pt.zeta), "Gamma_per_s": pt.gamma, "n_tilde": pt.n_tilde, "n_f": pt.n_f,
              "T_f_uK": cooling.final_temperature(pt.n_f, wm) * 1e6, "active_constraint": ",".join(pt.active)})


def cmd_epr(a):
    s = _sphere(a)
    phi = trap.recoil_parameter(s, convert(a.wavelength_nm, "nm", "m"))
    r = -0.5 * math.log(a.exp_minus_2R)
    dmin, x = sidebands.epr_optimum(r, phi)
    out = {"phi": phi, "delta_epr_min": dmin, "kappa_over_wm": x}
    if a.numeric:
        p = sidebands.transfer_params(x, phi)
        num = sidebands.epr_variance_numeric(sidebands.SidebandSystem(p), sidebands.SidebandSystem(p), r)
        out["delta_epr_numeric"] = num.value
    _emit(a, out)


def cmd_squeeze(a):
    s, lam, wm = _sphere(a), convert(a.wavelength_nm, "nm", "m"), convert(a.freq_MHz, "MHz", "rad/s")
    phi = trap.recoil_parameter(s, lam)
    x, v = sidebands.squeezing_optimum(phi)
    d = sidebands.squeezing_design(s, a.length_cm * 1e-2, convert(a.waist_um, "um", "m"), lam, wm,
                                   a.loss_ppm * 1e-6)
    _emit(a, {"phi": phi, "kappa_over_wm_ideal": x, "ideal_dB": -10 * math.log10(v),
              "lossy_dB": d.squeezing_db, "finesse": d.finesse, "zeta": d.zeta})


def cmd_mie(a):
    x = a.rho / math.sqrt(a.eps)
    sol = mie.mie_solve_size(x, a.eps)
    peak = mie.dipole_force_reduced(x, a.eps, math.pi / 4)
    exact = mie.standing_wave_force_reduced(sol, [a.kz0])[0] / peak
    _emit(a, {"rho_size": a.rho, "n_max": sol.n_max, "F_exact_arb": exact,
              "F_dipole_arb": float(mie.dipole_force_reduced(x, a.eps, a.kz0) / peak)})


def cmd_thermal(a):
    if a.eps_real is None:
        a.eps_real = 2.0
    s = _sphere(a)
    env = Environment(convert(a.pressure_torr, "Torr", "Pa"))
    try:
        st = thermal.equilibrium_temperature(s, env, convert(a.intensity_W_per_um2, "W/um2", "W/m2"),
                                             convert(a.wavelength_nm, "nm", "m"))
    except thermal.RunawayError as exc:
        _emit(a, {"status": "runaway", "detail": str(exc)})
        return EXIT_OK
    _emit(a, {"T_int_K": st.t_int, "P_abs_W": st.p_abs, "P_gas_W": st.p_gas, "P_bb_net_W": st.p_bb_net,
              "residual_W": st.residual})


def cmd_figure(a):
    outdir = output_dir(override=a.outdir)
    ids = list(figures.FIGURES) if a.id == "all" else [a.id]
    for fid in ids:
        for path in figures.FIGURES[fid](outdir):
            print(path)


def cmd_check(a):
    checks = report.run_all(a.only or None)
    if a.json:
        print(report.to_json(checks))
    else:
        for c in checks:
            print(c.line())
        print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def cmd_sweep(a):
    cfg = load(a.config)
    print(run_sweep(cfg, output_dir(override=a.outdir), keep_chunks=a.keep_chunks))


def build_parser():
    p = argparse.ArgumentParser(prog="levicav", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"levicav {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("figure", help="write the data behind one figure (or 'all')")
    f.add_argument("id", choices=[*figures.FIGURES, "all"])
    f.add_argument("--outdir")
    f.set_defaults(func=cmd_figure)

    c = sub.add_parser("check", help="run the acceptance checks; exit 1 on any failure")
    c.add_argument("--only", nargs="*", choices=list(report.CHECKS), metavar="AC-n")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sweep", help="evaluate a parameter sweep from an INI config")
    s.add_argument("config")
    s.add_argument("--outdir")
    s.add_argument("--keep-chunks", action="store_true")
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("trap", help="trap frequency, depth and coupling")
    _sphere_args(t)
    _cavity_args(t)
    grp = t.add_mutually_exclusive_group()
    grp.add_argument("--intensity-W-per-um2", type=float, default=1.0)
    grp.add_argument("--freq-MHz", type=float)
    t.set_defaults(func=cmd_trap)

    n = sub.add_parser("noise", help="heating channels and coherent-oscillation counts")
    _sphere_args(n)
    _cavity_args(n)
    n.add_argument("--freq-MHz", type=float, default=1.0)
    n.add_argument("--pressure-torr", type=float, default=1e-10)
    n.add_argument("--temperature-K", type=float, default=300.0)
    n.add_argument("--aspect", type=float, help="spheroid aspect ratio a/b >= 1")
    n.set_defaults(func=cmd_noise)

    k = sub.add_parser("cool", help="optimised sideband cooling at one finesse (or the best one)")
    _sphere_args(k)
    _cavity_args(k)
    k.add_argument("--freq-MHz", type=float, default=0.5)
    k.add_argument("--best", action="store_true", help="also optimise the finesse")
    k.set_defaults(func=cmd_cool)

    e = sub.add_parser("epr", help="optimised EPR variance transferred to two spheres")
    _sphere_args(e)
    e.add_argument("--exp-minus-2R", type=float, default=0.5)
    e.add_argument("--numeric", action="store_true", help="also run the sideband solver")
    e.set_defaults(func=cmd_epr)

    q = sub.add_parser("squeeze", help="squeezed output light, ideal and with cavity loss")
    _sphere_args(q, radius=35.0)
    _cavity_args(q, length=2.0, waist=10.0)
    q.add_argument("--freq-MHz", type=float, default=0.65)
    q.add_argument("--loss-ppm", type=float, default=1.0, help="round-trip loss")
    q.set_defaults(func=cmd_squeeze)

    m = sub.add_parser("mie", help="exact and dipole force at one node offset")
    m.add_argument("--rho", type=float, default=1.0, help="k sqrt(eps) r")
    m.add_argument("--eps", type=float, default=2.0)
    m.add_argument("--kz0", type=float, default=math.pi / 4)
    m.set_defaults(func=cmd_mie)

    h = sub.add_parser("thermal", help="equilibrium internal temperature")
    _sphere_args(h)
    h.add_argument("--intensity-W-per-um2", type=float, default=10.0)
    h.add_argument("--pressure-torr", type=float, default=1e-10)
    h.set_defaults(func=cmd_thermal, loss_db_per_km=10.0)

    for sp in (t, n, k, e, q, m, h):
        sp.add_argument("--json", action="store_true")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
