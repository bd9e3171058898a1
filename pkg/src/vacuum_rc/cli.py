"""``vacuum-rc`` command-line front end.

Subcommands::

    vacuum-rc rc-now        # R_c, V_c, dE/dt, t_dec today
    vacuum-rc evolve        # background history and V_c(t)
    vacuum-rc mc-verify     # Monte Carlo check of the <v^2> growth law
    vacuum-rc sweep         # R_c over a grid of delta, mass or H0
    vacuum-rc consistency   # filling fraction of characteristic volumes

Exit status: 0 success/PASS, 1 verification or consistency FAIL, 2 config
error, 3 domain error (e.g. NO_DECAY), 4 integration failure, 5 resource
limit. Expected errors print a single ``vacuum-rc: error code=<CODE>: ...``
line on stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .config import KEYS, RunConfig, load_config
from .cosmology import (
    CosmoParams,
    continuity_residual,
    eps_vac_rate,
    evolve_background,
    friedmann_residual,
)
from .errors import ConfigError, VacuumRcError
from .output import OutputRecord
from .reduction import budget_terms, characteristic_length_now, rc_history
from .stochastic import (
    RNG_ALGORITHM,
    NoiseConfig,
    history_scales,
    profile_from_history,
    simulate_ensemble,
    verify_energy_growth,
)
from .units import CONSTANTS, Quantity, time_to_seconds

TOOL = "vacuum-rc"

DEFAULT_GRIDS = {
    "delta": (0.01, 0.02, 0.04, 0.06, 0.08, 0.12, 0.16),
    "mass": (0.000511, 0.938, 10.0),
    "h0": (0.5e-42, 0.769e-42, 1.5e-42),
}

RESULT_COLUMNS = [
    "m_gev", "V_c_gev-3", "R_c_gev-1", "dE_dt_gev2", "t_dec_gev-1",
    "vc_cm3", "rc_cm", "t_dec_s",
]


def _clean(value):
    """Make metadata JSON-safe: NaN/inf become None, numpy scalars become Python."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def params_from(cfg: RunConfig, **changes) -> CosmoParams:
    kwargs = dict(
        H0=Quantity(cfg.h0_gev, 1),
        omega_d0=cfg.omega_d0,
        omega_b0=cfg.omega_b0,
        omega_vac0=cfg.omega_vac0,
        delta=cfg.delta,
    )
    kwargs.update(changes)
    return CosmoParams(**kwargs)


def _metadata(command: str, cfg: RunConfig, **extra) -> dict:
    meta = {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "rng_algorithm": RNG_ALGORITHM,
        "order_of_magnitude": True,
        "config": cfg.resolved(),
    }
    meta.update(extra)
    return _clean(meta)


def cmd_rc_now(cfg: RunConfig) -> OutputRecord:
    p = params_from(cfg)
    res = characteristic_length_now(p, Quantity(cfg.mass_gev, 1))
    d = res.to_dict()
    columns = ["delta", "h0_gev"] + RESULT_COLUMNS + ["closed_form_rel_diff"]
    row = [p.delta, p.H0.value] + [d[c] for c in RESULT_COLUMNS] + [res.closed_form_rel_diff]
    return OutputRecord(
        metadata=_metadata("rc-now", cfg, closed_form_rel_diff=res.closed_form_rel_diff),
        columns=columns,
        rows=[row],
        summary=[
            f"R_c(t0) = {res.rc_cm:.4e} cm  ({res.R_c.value:.4e} GeV^-1)",
            f"V_c(t0) = {d['vc_cm3']:.4e} cm^3",
            f"dE/dt   = {res.dE_dt.value:.4e} GeV^2",
            f"t_dec   = {res.t_dec_s:.4e} s (order of magnitude)",
            f"closed form vs pipeline: relative gap {res.closed_form_rel_diff:.2e}",
        ],
    )


def _history(cfg: RunConfig):
    p = params_from(cfg)
    traj = evolve_background(p, cfg.a_start, cfg.a_end, cfg.n_samples)
    hist = rc_history(traj, p, Quantity(cfg.mass_gev, 1))
    return p, traj, hist


def cmd_evolve(cfg: RunConfig) -> OutputRecord:
    p, traj, hist = _history(cfg)
    columns = [
        "t_gev-1", "t_s", "a", "H_gev", "eps_d_gev4", "eps_vac_gev4", "eps_vac_rate_gev5",
        "V_c_gev-3", "R_c_gev-1", "rc_cm",
    ]
    rows = []
    for s, (_, res) in zip(traj, hist):
        rows.append([
            s.t.value, time_to_seconds(s.t), s.a, s.H.value, s.eps_d.value, s.eps_vac.value,
            eps_vac_rate(s.a, s.H, p).value, res.V_c.value, res.R_c.value, res.rc_cm,
        ])
    vc = np.array([res.V_c.value for _, res in hist])
    max_cont = max(continuity_residual(s, p) for s in traj)
    max_fried = max(friedmann_residual(s, p) for s in traj)
    monotone = bool(np.all(np.diff(vc) > 0))
    return OutputRecord(
        metadata=_metadata(
            "evolve", cfg,
            max_continuity_residual=max_cont,
            max_friedmann_residual=max_fried,
            vc_strictly_increasing=monotone,
        ),
        columns=columns,
        rows=rows,
        summary=[
            f"{len(rows)} samples over a in [{cfg.a_start}, {cfg.a_end}]",
            f"R_c from {hist[0][1].rc_cm:.4e} cm to {hist[-1][1].rc_cm:.4e} cm",
            f"V_c strictly increasing: {monotone}",
            f"max continuity residual {max_cont:.2e}, max Friedmann residual {max_fried:.2e}",
        ],
    )


def _noise_config(cfg: RunConfig):
    """Noise configuration plus metadata on how scaled units map to physical ones."""
    scales = {}
    mode = cfg.vc_profile.strip().lower()
    if mode == "from-evolve":
        _, _, hist = _history(cfg)
        times = [t.value for t, _ in hist]
        volumes = [res.V_c.value for _, res in hist]
        profile = profile_from_history(times, volumes, cfg.n_steps, cfg.dt)
        t_scale, v_ref = history_scales(times, volumes, cfg.n_steps, cfg.dt)
        scales = {
            "profile": "from-evolve",
            "time_unit_gev-1": t_scale,
            "vc_unit_gev-3": v_ref,
            # <v^2>_physical = msv_to_physical * <v^2>_scaled
            "msv_to_physical": CONSTANTS.G.value * t_scale / v_ref,
        }
    else:
        if mode == "constant":
            profile = 1.0
        else:
            try:
                profile = float(mode)
            except ValueError:
                raise ConfigError(
                    f"vc_profile must be 'constant', 'from-evolve' or a positive number, got {cfg.vc_profile!r}"
                ) from None
        scales = {"profile": "constant", "vc_scaled": profile}
    noise = NoiseConfig(
        n_traj=cfg.n_traj,
        n_steps=cfg.n_steps,
        dt=cfg.dt,
        vc_profile=profile,
        master_seed=cfg.seed,
    )
    return noise, scales


def cmd_mc_verify(cfg: RunConfig, workers: int = 1) -> OutputRecord:
    noise, scales = _noise_config(cfg)
    stats = simulate_ensemble(noise, workers=workers)
    report = verify_energy_growth(stats, noise.vc_profile)
    rows = [
        [t, m, se, a, z]
        for t, m, se, a, z in zip(stats.t, stats.msv, stats.stderr, report.analytic, report.z)
    ]
    verdict = "PASS" if report.passed else "FAIL"
    summary = [
        f"{verdict}: slope {report.slope:.5f} +/- {report.slope_stderr:.5f}, "
        f"{100 * report.fraction_outliers:.2f}% of steps with |z| > {report.z_threshold:g}",
    ]
    if report.insufficient_statistics:
        summary.append("insufficient statistics: need at least two trajectories")
    return OutputRecord(
        metadata=_metadata("mc-verify", cfg, report=report.summary(), scaling=scales),
        columns=["t_scaled", "msv", "stderr", "analytic", "z"],
        rows=rows,
        summary=summary,
        exit_status=0 if report.passed else 1,
    )


def _fit_slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def cmd_sweep(cfg: RunConfig) -> OutputRecord:
    axis = cfg.sweep_axis
    if axis not in DEFAULT_GRIDS:
        raise ConfigError(f"sweep_axis must be one of {sorted(DEFAULT_GRIDS)}, got {axis!r}")
    grid = cfg.sweep_grid or DEFAULT_GRIDS[axis]
    if len(grid) < 2:
        raise ConfigError("sweep grid needs at least two points")
    if any(not (g > 0) for g in grid):
        raise ConfigError(f"sweep grid must be strictly positive, got {list(grid)}")
    if not cfg.sweep_grid:
        cfg = RunConfig(**{**cfg.resolved(), "sweep_grid": tuple(grid)})

    rows = []
    rc, tdec = [], []
    for g in grid:
        mass = g if axis == "mass" else cfg.mass_gev
        changes = {"delta": g} if axis == "delta" else {"H0": Quantity(g, 1)} if axis == "h0" else {}
        p = params_from(cfg, **changes)
        res = characteristic_length_now(p, Quantity(mass, 1))
        d = res.to_dict()
        rows.append([g, p.delta, p.H0.value] + [d[c] for c in RESULT_COLUMNS])
        rc.append(res.R_c.value)
        tdec.append(res.t_dec.value)
    slopes = {"dlnRc_dlnx": _fit_slope(grid, rc), "dlnTdec_dlnx": _fit_slope(grid, tdec)}
    return OutputRecord(
        metadata=_metadata("sweep", cfg, axis=axis, fitted_slopes=slopes),
        columns=[axis, "delta", "h0_gev"] + RESULT_COLUMNS,
        rows=rows,
        summary=[
            f"sweep over {axis}: {len(grid)} points",
            f"d ln R_c / d ln {axis} = {slopes['dlnRc_dlnx']:.12f}",
            f"d ln t_dec / d ln {axis} = {slopes['dlnTdec_dlnx']:.12f}",
        ],
    )


def cmd_consistency(cfg: RunConfig) -> OutputRecord:
    p = params_from(cfg)
    m_b = Quantity(cfg.mass_gev, 1)
    m_d = Quantity(cfg.dark_mass_gev, 1)
    baryon, dark = budget_terms(p, m_b, m_d)
    fraction = baryon + dark
    traj = evolve_background(p, cfg.a_start, cfg.a_end, cfg.n_samples)
    max_cont = max(continuity_residual(s, p) for s in traj)
    consistent = fraction < 1
    return OutputRecord(
        metadata=_metadata(
            "consistency", cfg,
            filling_fraction=fraction,
            max_continuity_residual=max_cont,
            budget_consistent=consistent,
        ),
        columns=["filling_fraction", "baryon_term", "dark_term", "max_continuity_residual"],
        rows=[[fraction, baryon, dark, max_cont]],
        summary=[
            f"filling fraction of characteristic volumes: {fraction:.4e}",
            "budget consistent" if consistent else "budget VIOLATED: fraction >= 1",
            f"max continuity residual: {max_cont:.2e}",
        ],
        exit_status=0 if consistent else 1,
    )


COMMANDS: dict[str, Callable[..., OutputRecord]] = {
    "rc-now": cmd_rc_now,
    "evolve": cmd_evolve,
    "mc-verify": cmd_mc_verify,
    "sweep": cmd_sweep,
    "consistency": cmd_consistency,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description="Characteristic length of dynamical reduction from vacuum decay.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", metavar="PATH", help="key = value configuration file")
        sp.add_argument("--out", dest="out_path", metavar="PATH", help="payload destination (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        for key in KEYS:
            if key in ("out_path", "format"):
                continue
            flag = "--" + key.replace("_", "-")
            names = [flag] if flag == f"--{key}" else [flag, f"--{key}"]
            sp.add_argument(*names, dest=key, metavar="VALUE")
        if name == "mc-verify":
            sp.add_argument("--workers", type=int, default=1, help="threads (does not change results)")
    return parser


def _fail(err: VacuumRcError) -> int:
    message = str(err).replace("\n", " ")
    print(f"{TOOL}: error code={err.code}: {message}", file=sys.stderr)
    return err.exit_status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in KEYS if getattr(args, k, None) is not None}
    try:
        cfg = load_config(args.config, overrides)
        if args.command == "mc-verify":
            record = cmd_mc_verify(cfg, workers=args.workers)
        else:
            record = COMMANDS[args.command](cfg)
    except VacuumRcError as err:
        return _fail(err)

    text = record.render(cfg.format)
    if cfg.out_path:
        try:
            Path(cfg.out_path).write_text(text, encoding="utf-8")
        except OSError as exc:
            return _fail(ConfigError(f"cannot write {cfg.out_path!r}: {exc.strerror}"))
        summary_stream = sys.stdout
    else:
        sys.stdout.write(text)
        summary_stream = sys.stderr
    for line in record.summary:
        print(line, file=summary_stream)
    return record.exit_status


if __name__ == "__main__":
    sys.exit(main())
