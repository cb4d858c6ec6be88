"""Parameter sweeps driven by a :class:`~levicav.config.RunConfig`.

Points are evaluated in fixed order and written in chunks next to the
final output, so an interrupted sweep picks up where it stopped.
"""

from __future__ import annotations

import math
import shutil
from pathlib import Path

from . import cooling, noise, sidebands, thermal, trap
from .config import RunConfig, build_inputs
from .io import provenance, render_table, sha256_text


def _trap(inp):
    if inp.intensity is not None:
        return trap.trap_params(inp.sphere, inp.intensity, inp.cavity.wavelength, inp.cavity)
    return trap.trap_for_frequency(inp.sphere, inp.omega_m, inp.cavity.wavelength, inp.cavity)


def eval_trap(inp):
    tp = _trap(inp)
    return {"omega_m_over_2pi_Hz": tp.omega_m / (2 * math.pi), "intensity_W_m2": tp.intensity,
            "depth_K": tp.depth_kelvin, "zero_point_m": tp.zero_point, "scatter_rate_per_s": tp.scatter_rate,
            "coupling_rad_s": tp.coupling, "sphere_loss_rad_s": tp.sphere_loss, "phi": tp.phi}


def eval_noise_budget(inp):
    tp = _trap(inp)
    b = noise.noise_budget(inp.sphere, inp.env, tp, inp.cavity, aspect=inp.aspect)
    row = {"gamma_g_per_s": b.gamma_g, "Q_g": b.q_g, "gamma_sc_per_s": b.gamma_sc, "gamma_bb_per_s": b.gamma_bb}
    for ch in ("gas", "recoil", "shot_noise", "blackbody", "anisotropy"):
        row[f"N_osc_{ch}"] = b.n_osc.get(ch, math.inf)
    row["dominant"] = b.dominant
    row["free_molecular"] = b.free_molecular
    return row


def eval_thermal(inp):
    intensity = inp.intensity if inp.intensity is not None else trap.intensity_for_frequency(
        inp.sphere, inp.omega_m, inp.cavity.wavelength)
    try:
        st = thermal.equilibrium_temperature(inp.sphere, inp.env, intensity, inp.cavity.wavelength)
        return {"T_int_K": st.t_int, "P_abs_W": st.p_abs, "status": "ok"}
    except thermal.RunawayError:
        return {"T_int_K": math.nan, "P_abs_W": thermal.absorbed_power(inp.sphere, intensity, inp.cavity.wavelength),
                "status": "runaway"}


def eval_cooling(inp):
    tp = _trap(inp)
    pt = cooling.optimize_point(inp.sphere, inp.cavity, tp.omega_m)
    return {"finesse": pt.finesse, "kappa_rad_s": pt.kappa, "delta2_opt": pt.delta2, "zeta_opt": pt.zeta,
            "Gamma": pt.gamma, "n_tilde": pt.n_tilde, "n_f": pt.n_f,
            "T_f_K": cooling.final_temperature(pt.n_f, tp.omega_m), "status": pt.status}


def eval_squeeze(inp):
    tp = _trap(inp)
    ideal_x, ideal = sidebands.squeezing_optimum(tp.phi)
    d = sidebands.squeezing_design(inp.sphere, inp.cavity.length, inp.cavity.waist, inp.cavity.wavelength,
                                   tp.omega_m, inp.round_trip_loss)
    return {"phi": tp.phi, "kappa_over_wm_ideal": ideal_x, "ideal_dB": -10 * math.log10(ideal),
            "lossy_dB": d.squeezing_db, "finesse": d.finesse, "zeta": d.zeta}


def eval_epr(inp):
    tp = _trap(inp)
    dmin, x = sidebands.epr_optimum(inp.squeeze_r, tp.phi)
    kappa = x * tp.omega_m
    return {"exp_minus_2R": math.exp(-2 * inp.squeeze_r), "delta_epr_min": dmin, "kappa_over_wm": x,
            "finesse_opt": inp.cavity.with_linewidth(kappa).finesse}


EVALUATE = {"trap": eval_trap, "noise_budget": eval_noise_budget, "thermal": eval_thermal,
            "cooling": eval_cooling, "squeeze": eval_squeeze, "epr": eval_epr}


def evaluate_point(cfg: RunConfig, point):
    row = EVALUATE[cfg.evaluate](build_inputs(cfg.resolved(point)))
    return {**point, **row}


def run_sweep(cfg: RunConfig, outdir, keep_chunks=False):
    """Evaluate every point and write ``outdir/<output>``; returns its path.

    Completed chunks under ``<output>.<hash>.chunks/`` are reused, which makes the
    sweep resumable.  Output bytes depend only on the config text.
    """
    outdir = Path(outdir)
    target = outdir / cfg.values["run"]["output"]
    # chunks are keyed by the config hash so a changed config never reuses stale rows
    chunk_dir = target.with_name(f"{target.name}.{sha256_text(cfg.text)[:12]}.chunks")
    chunk_dir.mkdir(parents=True, exist_ok=True)
    points = cfg.points()
    size = cfg.values["run"]["chunk_size"]
    columns = None
    bodies = []
    for start in range(0, len(points), size):
        path = chunk_dir / f"chunk_{start // size:05d}.csv"
        if path.exists():
            text = path.read_text()
        else:
            rows = [evaluate_point(cfg, p) for p in points[start:start + size]]
            cols = list(rows[0])
            text = render_table(cols, [[r[c] for c in cols] for r in rows])
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_text(text)
            tmp.replace(path)
        head, _, body = text.partition("\n")
        columns = columns or head.split(",")
        bodies.append(body)
    meta = provenance(cfg.text, {"scenario": cfg.scenario, "evaluate": cfg.evaluate,
                                 "mode": cfg.mode, "points": len(points)})
    header = render_table(columns, [], meta)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_text(header + "".join(bodies))
    tmp.replace(target)
    if not keep_chunks:
        shutil.rmtree(chunk_dir)
    return target

