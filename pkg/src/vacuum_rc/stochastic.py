"""Monte Carlo ensembles of particles kicked by delta-correlated acceleration noise.

Units are scaled so that ``G = 1`` and the characteristic volume is of
order one. Velocity starts at zero; over a step ``[t_k, t_k + dt]`` each of
the three components receives an independent Gaussian kick with variance
``dt / (3 V_c(t_k))``. For additive white noise this Euler-Maruyama update
is exact in distribution, and the ensemble mean of ``|v|**2`` should track

    <v**2>(t) = integral_0^t dt' / V_c(t').

Random streams
--------------
Trajectory ``i`` draws from ``numpy.random.Philox`` with key
``master_seed`` and starting counter ``[0, 0, i, 0]``; every trajectory owns
a disjoint block of ``2**128`` counter values. Normals come from numpy's
``Generator.standard_normal``. Trajectories are grouped into at most
:data:`N_BATCHES` contiguous index ranges and reduced in index order, so the
statistics are bit-identical whatever the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import ConfigError, ConsistencyError, DomainError, ResourceLimitError

RNG_ALGORITHM = "philox4x64-10:key=master_seed:counter=[0,0,traj,0]:numpy-standard_normal:v1"
N_BATCHES = 32
CHUNK = 64
MAX_KICKS = 10**9
# Output channels: |v|^2 then vx^2, vy^2, vz^2.
_N_CHANNELS = 4


@dataclass(frozen=True)
class SampledProfile:
    """Characteristic volume sampled at increasing times (linear in between)."""

    t: np.ndarray
    vc: np.ndarray
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        vc = np.asarray(self.vc, dtype=float)
        if t.ndim != 1 or t.shape != vc.shape or t.size < 2:
            raise ConfigError("profile needs matching 1-D time and value arrays of length >= 2")
        if not np.all(np.diff(t) > 0):
            raise ConfigError("profile times must be strictly increasing")
        if not np.all(vc > 0) or np.any(np.isnan(vc)):
            raise ConfigError("profile values must be strictly positive")
        inv = 1.0 / vc
        cum = np.concatenate(([0.0], np.cumsum(0.5 * np.diff(t) * (inv[1:] + inv[:-1]))))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "vc", vc)
        object.__setattr__(self, "_cum", cum)

    def value_at(self, t):
        return np.interp(t, self.t, self.vc)

    def integral(self, t):
        """Trapezoidal integral of ``1 / V_c`` from the first sample to ``t``."""
        t = np.asarray(t, dtype=float)
        if np.any(t < self.t[0]) or np.any(t > self.t[-1]):
            raise DomainError(f"t outside profile domain [{self.t[0]!r}, {self.t[-1]!r}]")
        i = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, self.t.size - 2)
        inv_left = 1.0 / self.vc[i]
        inv_t = 1.0 / self.value_at(t)
        out = self._cum[i] + 0.5 * (t - self.t[i]) * (inv_left + inv_t)
        return out if out.ndim else float(out)


VcProfile = Union[float, SampledProfile]


def _check_profile(profile: VcProfile):
    if isinstance(profile, SampledProfile):
        return
    if isinstance(profile, bool) or not isinstance(profile, (int, float)):
        raise ConfigError(f"vc_profile must be a number or SampledProfile, got {profile!r}")
    if not profile > 0:
        raise ConfigError(f"constant vc_profile must be positive, got {profile!r}")


def _vc_at(profile: VcProfile, t: np.ndarray) -> np.ndarray:
    if isinstance(profile, SampledProfile):
        return profile.value_at(t)
    return np.full_like(t, float(profile))


def analytic_msv(t, vc_profile: VcProfile):
    """Expected ``<v**2>`` at time ``t`` (scaled units, ``G = 1``).

    Exact for a constant profile, trapezoidal for a sampled one.

    Raises:
        DomainError: if ``t`` lies outside the profile's domain.
    """
    _check_profile(vc_profile)
    if isinstance(vc_profile, SampledProfile):
        return vc_profile.integral(t)
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"t must be non-negative, got {t!r}")
    out = arr / float(vc_profile)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class NoiseConfig:
    n_traj: int
    n_steps: int
    dt: float
    vc_profile: VcProfile = 1.0
    master_seed: int = 0
    max_kicks: int = MAX_KICKS

    def __post_init__(self):
        if self.n_traj < 1 or self.n_steps < 1:
            raise ConfigError(f"n_traj and n_steps must be >= 1, got {self.n_traj}, {self.n_steps}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}")
        if self.n_traj * self.n_steps > self.max_kicks:
            raise ResourceLimitError(
                f"{self.n_traj} x {self.n_steps} kicks exceeds the cap of {self.max_kicks}"
            )
        _check_profile(self.vc_profile)
        if isinstance(self.vc_profile, SampledProfile):
            t_end = self.n_steps * self.dt
            if self.vc_profile.t[0] > 0 or self.vc_profile.t[-1] < t_end * (1 - 1e-12):
                raise ConfigError(f"sampled profile must cover [0, {t_end!r}]")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True)
class EnsembleStats:
    """Per-step ensemble statistics; ``batch_msv`` holds each batch's mean."""

    t: np.ndarray
    msv: np.ndarray
    stderr: np.ndarray
    component_msv: np.ndarray
    component_stderr: np.ndarray
    batch_sizes: np.ndarray
    batch_msv: np.ndarray
    n_traj: int
    master_seed: int
    rng_algorithm: str = RNG_ALGORITHM

    def scaled(self, factor: float) -> "EnsembleStats":
        """Copy with ``msv`` (only) multiplied by ``factor``."""
        return EnsembleStats(
            t=self.t,
            msv=self.msv * factor,
            stderr=self.stderr,
            component_msv=self.component_msv,
            component_stderr=self.component_stderr,
            batch_sizes=self.batch_sizes,
            batch_msv=self.batch_msv,
            n_traj=self.n_traj,
            master_seed=self.master_seed,
            rng_algorithm=self.rng_algorithm,
        )


def trajectory_rng(master_seed: int, index: int) -> np.random.Generator:
    """Generator for trajectory ``index``; see the module docstring."""
    return np.random.Generator(np.random.Philox(key=master_seed, counter=[0, 0, index, 0]))


def _merge(acc, count, mean, m2):
    """Chan et al. pairwise merge of (count, mean, M2) accumulators."""
    if acc is None:
        return count, mean, m2
    n_a, mean_a, m2_a = acc
    n = n_a + count
    delta = mean - mean_a
    return n, mean_a + delta * (count / n), m2_a + m2 + delta**2 * (n_a * count / n)


def _simulate_batch(indices: np.ndarray, cfg: NoiseConfig, kick_std: np.ndarray):
    acc = None
    n_steps = cfg.n_steps
    for start in range(0, indices.size, CHUNK):
        chunk = indices[start:start + CHUNK]
        data = np.zeros((chunk.size, _N_CHANNELS, n_steps + 1))
        for row, i in enumerate(chunk):
            kicks = trajectory_rng(cfg.master_seed, int(i)).standard_normal((n_steps, 3))
            v = np.cumsum(kicks * kick_std[:, None], axis=0)
            v2 = v * v
            data[row, 1:, 1:] = v2.T
            data[row, 0, 1:] = v2.sum(axis=1)
        mean = data.mean(axis=0)
        m2 = ((data - mean) ** 2).sum(axis=0)
        acc = _merge(acc, chunk.size, mean, m2)
    return acc


def simulate_ensemble(cfg: NoiseConfig, workers: int = 1) -> EnsembleStats:
    """Simulate ``cfg.n_traj`` independent velocity trajectories.

    Args:
        cfg: noise configuration.
        workers: number of threads; has no effect on the result.

    Returns:
        EnsembleStats with ``msv[0] == 0`` exactly.
    """
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers!r}")
    t = cfg.times
    vc = _vc_at(cfg.vc_profile, t[:-1])
    kick_std = np.sqrt(cfg.dt / vc / 3.0)
    batches = np.array_split(np.arange(cfg.n_traj), min(N_BATCHES, cfg.n_traj))

    if workers == 1:
        results = [_simulate_batch(b, cfg, kick_std) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: _simulate_batch(b, cfg, kick_std), batches))

    acc = None
    for res in results:
        acc = _merge(acc, *res)
    n, mean, m2 = acc
    if n > 1:
        stderr = np.sqrt(m2 / (n - 1) / n)
    else:
        stderr = np.zeros_like(mean)

    return EnsembleStats(
        t=t,
        msv=mean[0],
        stderr=stderr[0],
        component_msv=mean[1:],
        component_stderr=stderr[1:],
        batch_sizes=np.array([b.size for b in batches]),
        batch_msv=np.array([res[1][0] for res in results]),
        n_traj=cfg.n_traj,
        master_seed=cfg.master_seed,
    )


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    slope: float
    slope_stderr: float
    fraction_outliers: float
    max_abs_z: float
    n_steps_tested: int
    insufficient_statistics: bool
    z: np.ndarray = field(repr=False)
    analytic: np.ndarray = field(repr=False)
    z_threshold: float = 3.0
    max_outlier_fraction: float = 0.01

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "fraction_outliers": self.fraction_outliers,
            "max_abs_z": self.max_abs_z,
            "n_steps_tested": self.n_steps_tested,
            "insufficient_statistics": self.insufficient_statistics,
            "z_threshold": self.z_threshold,
            "max_outlier_fraction": self.max_outlier_fraction,
        }


def _origin_slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.dot(x, y) / np.dot(x, x))


def verify_energy_growth(
    stats: EnsembleStats,
    vc_profile: VcProfile,
    z_threshold: float = 3.0,
    max_outlier_fraction: float = 0.01,
) -> VerificationReport:
    """Compare simulated ``<v**2>`` growth with the analytic integral.

    Two checks, both required to pass:

    * the least-squares slope (through the origin) of ``msv`` against the
      analytic prediction is within ``z_threshold`` standard errors of 1;
    * fewer than ``max_outlier_fraction`` of the steps have
      ``|msv - analytic| / stderr > z_threshold``.

    ``msv`` at different steps shares the same random walk, so per-step
    errors are strongly correlated and a textbook regression error would be
    far too small. The slope error is instead taken from the spread of the
    slopes fitted to each independent trajectory batch.

    Raises:
        ConsistencyError: if ``n_traj > 1`` but every standard error is zero.
    """
    analytic = np.asarray(analytic_msv(stats.t, vc_profile), dtype=float)
    k = slice(1, None)
    x, y, se = analytic[k], stats.msv[k], stats.stderr[k]
    slope = _origin_slope(x, y)
    z = np.zeros_like(stats.msv)

    insufficient = stats.n_traj < 2 or len(stats.batch_sizes) < 2
    if insufficient:
        return VerificationReport(
            passed=False,
            slope=slope,
            slope_stderr=math.nan,
            fraction_outliers=math.nan,
            max_abs_z=math.nan,
            n_steps_tested=0,
            insufficient_statistics=True,
            z=z,
            analytic=analytic,
            z_threshold=z_threshold,
            max_outlier_fraction=max_outlier_fraction,
        )
    if not np.any(se > 0):
        raise ConsistencyError("all standard errors are zero with more than one trajectory")

    ok = se > 0
    z_steps = np.zeros_like(y)
    z_steps[ok] = (y[ok] - x[ok]) / se[ok]
    z[1:] = z_steps
    outliers = float(np.mean(np.abs(z_steps[ok]) > z_threshold))

    w = stats.batch_sizes / stats.batch_sizes.sum()
    b = np.array([_origin_slope(x, bm[k]) for bm in stats.batch_msv])
    b_mean = float(np.dot(w, b))
    n_b = len(b)
    slope_stderr = math.sqrt(float(np.sum(w**2 * (b - b_mean) ** 2)) * n_b / (n_b - 1))

    passed = abs(slope - 1.0) < z_threshold * slope_stderr and outliers < max_outlier_fraction
    return VerificationReport(
        passed=bool(passed),
        slope=slope,
        slope_stderr=slope_stderr,
        fraction_outliers=outliers,
        max_abs_z=float(np.max(np.abs(z_steps))),
        n_steps_tested=int(ok.sum()),
        insufficient_statistics=False,
        z=z,
        analytic=analytic,
        z_threshold=z_threshold,
        max_outlier_fraction=max_outlier_fraction,
    )


def profile_from_history(times: Sequence[float], volumes: Sequence[float], n_steps: int, dt: float) -> SampledProfile:
    """Rescale a physical ``V_c(t)`` history onto the simulation grid.

    Time is mapped affinely onto ``[0, n_steps * dt]`` and volumes are
    divided by their first value. The analytic ``<v**2>`` transforms by the
    constant factor returned from :func:`history_scales`.
    """
    times = np.asarray(times, dtype=float)
    volumes = np.asarray(volumes, dtype=float)
    t_scale, v_scale = history_scales(times, volumes, n_steps, dt)
    sim_t = np.arange(n_steps + 1) * dt
    phys_t = times[0] + sim_t * t_scale
    phys_t[-1] = min(phys_t[-1], times[-1])
    vc = np.interp(phys_t, times, volumes) / v_scale
    return SampledProfile(sim_t, vc)


def history_scales(times, volumes, n_steps: int, dt: float) -> tuple[float, float]:
    """Physical time per scaled time unit and the reference volume."""
    times = np.asarray(times, dtype=float)
    span = times[-1] - times[0]
    if not span > 0:
        raise ConfigError("history must span a positive time interval")
    return span / (n_steps * dt), float(np.asarray(volumes, dtype=float)[0])
