"""Flat FRW background in which the vacuum decays into cold dark matter.

Dark matter dilutes as ``a**-(3 - delta)`` instead of ``a**-3``; the vacuum
energy density loses exactly what the dark matter gains, so

    eps_vac(a) = eps_vac_tilde + delta / (3 - delta) * eps_d(a)

with ``eps_vac_tilde`` fixed by requiring ``eps_vac(a0)`` to equal the
observed vacuum fraction of the critical density. Ordinary matter dilutes
as ``a**-3`` and takes no energy from the vacuum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, IntegrationError
from .units import CONSTANTS, Quantity

FLATNESS_TOL = 1e-12
DEFAULT_RTOL = 1e-10
MAX_STEPS = 10_000_000


def critical_density(H: Quantity) -> Quantity:
    """Critical energy density ``3 H**2 / (8 pi G)`` (GeV^4)."""
    H.require(1, "Hubble rate")
    if not H.value > 0:
        raise DomainError(f"Hubble rate must be positive, got {H.value!r}")
    return 3 * H**2 / (8 * math.pi * CONSTANTS.G)


@dataclass(frozen=True)
class CosmoParams:
    """Model configuration: Hubble rate today, density fractions and delta.

    ``delta == 0`` is accepted (standard LambdaCDM, no vacuum decay) and
    reported through :attr:`no_decay`; the reduction layer rejects it.
    """

    H0: Quantity = CONSTANTS.H0
    omega_d0: float = 0.27
    omega_b0: float = 0.03
    omega_vac0: float = 0.70
    delta: float = 0.06
    a0: float = 1.0
    eps_crit0: float = field(init=False, repr=False)
    eps_d0_value: float = field(init=False, repr=False)
    eps_b0_value: float = field(init=False, repr=False)
    eps_vac_tilde_value: float = field(init=False, repr=False)

    def __post_init__(self):
        self.H0.require(1, "H0")
        if not self.H0.value > 0:
            raise DomainError(f"H0 must be positive, got {self.H0.value!r}")
        for name in ("omega_d0", "omega_b0", "omega_vac0"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise DomainError(f"{name} must lie in (0, 1), got {v!r}")
        total = self.omega_d0 + self.omega_b0 + self.omega_vac0
        if abs(total - 1.0) > FLATNESS_TOL:
            raise DomainError(f"density fractions must sum to 1 (flat universe), got {total!r}")
        if not 0 <= self.delta < 3:
            raise DomainError(f"delta must lie in [0, 3), got {self.delta!r}")
        if not self.a0 > 0:
            raise DomainError(f"a0 must be positive, got {self.a0!r}")

        eps_crit0 = critical_density(self.H0).value
        eps_d0 = self.omega_d0 * eps_crit0
        vac_tilde = self.omega_vac0 * eps_crit0 - self.delta / (3 - self.delta) * eps_d0
        object.__setattr__(self, "eps_crit0", eps_crit0)
        object.__setattr__(self, "eps_d0_value", eps_d0)
        object.__setattr__(self, "eps_b0_value", self.omega_b0 * eps_crit0)
        object.__setattr__(self, "eps_vac_tilde_value", vac_tilde)

    @property
    def no_decay(self) -> bool:
        return self.delta == 0

    @property
    def eps_d0(self) -> Quantity:
        return Quantity(self.eps_d0_value, 4)

    @property
    def eps_b0(self) -> Quantity:
        return Quantity(self.eps_b0_value, 4)

    @property
    def eps_vac_tilde(self) -> Quantity:
        """Time-independent part of the vacuum energy density."""
        return Quantity(self.eps_vac_tilde_value, 4)

    def replace(self, **changes) -> "CosmoParams":
        kwargs = dict(
            H0=self.H0,
            omega_d0=self.omega_d0,
            omega_b0=self.omega_b0,
            omega_vac0=self.omega_vac0,
            delta=self.delta,
            a0=self.a0,
        )
        kwargs.update(changes)
        return CosmoParams(**kwargs)


@dataclass(frozen=True)
class BackgroundState:
    """One sample of the integrated history; ``t`` is measured from ``a = a0``."""

    t: Quantity
    a: float
    eps_d: Quantity
    eps_vac: Quantity
    H: Quantity


def _check_a(a: float):
    if not a > 0 or not math.isfinite(a):
        raise DomainError(f"scale factor must be positive and finite, got {a!r}")


# Float kernels shared by the Quantity API and the integrator.

def _dilution(a: float, p: CosmoParams) -> float:
    return (p.a0 / a) ** (3 - p.delta)


def _eps_d(a: float, p: CosmoParams) -> float:
    return p.eps_d0_value * _dilution(a, p)


def _eps_vac(a: float, p: CosmoParams) -> float:
    return p.eps_vac_tilde_value + p.delta / (3 - p.delta) * _eps_d(a, p)


def _eps_b(a: float, p: CosmoParams) -> float:
    return p.eps_b0_value * (p.a0 / a) ** 3


def _hubble(a: float, p: CosmoParams) -> float:
    total = _eps_b(a, p) + _eps_d(a, p) + _eps_vac(a, p)
    h2 = 8 * math.pi * CONSTANTS.G.value / 3 * total
    if not h2 > 0:
        raise DomainError(f"no expanding solution at a={a!r}: H^2 = {h2!r}")
    return math.sqrt(h2)


def eps_d(a: float, p: CosmoParams) -> Quantity:
    """Dark-matter energy density ``eps_d0 * (a0/a)**(3 - delta)``."""
    _check_a(a)
    return Quantity(_eps_d(a, p), 4)


def eps_b(a: float, p: CosmoParams) -> Quantity:
    """Ordinary-matter energy density, standard ``a**-3`` dilution."""
    _check_a(a)
    return Quantity(_eps_b(a, p), 4)


def eps_vac(a: float, p: CosmoParams) -> Quantity:
    """Vacuum energy density, anchored to ``omega_vac0 * eps_crit`` at ``a0``."""
    _check_a(a)
    return Quantity(_eps_vac(a, p), 4)


def eps_vac_rate(a: float, H: Quantity, p: CosmoParams) -> Quantity:
    """Time derivative of the vacuum energy density (GeV^5).

    ``-delta * eps_d0 * H * (a0/a)**(3 - delta)``; strictly negative when
    ``delta > 0`` and exactly zero when ``delta == 0``.
    """
    _check_a(a)
    H.require(1, "Hubble rate")
    if not H.value > 0:
        raise DomainError(f"Hubble rate must be positive, got {H.value!r}")
    return Quantity(-p.delta * p.eps_d0_value * H.value * _dilution(a, p), 5)


def hubble(a: float, p: CosmoParams) -> Quantity:
    """Hubble rate from the flat Friedmann closure ``H**2 = 8 pi G / 3 * sum(eps)``."""
    _check_a(a)
    return Quantity(_hubble(a, p), 1)


def state_at(a: float, t: float, p: CosmoParams) -> BackgroundState:
    _check_a(a)
    return BackgroundState(
        t=Quantity(t, -1),
        a=a,
        eps_d=Quantity(_eps_d(a, p), 4),
        eps_vac=Quantity(_eps_vac(a, p), 4),
        H=Quantity(_hubble(a, p), 1),
    )


class _Quadrature:
    """Adaptive step-doubling RK4 for ``dt/dx = 1/H(exp(x))``, ``x = ln a``.

    The right-hand side does not depend on ``t``, so each RK4 step reduces
    to Simpson's rule; the step-doubling error estimate is unchanged.
    """

    def __init__(self, p: CosmoParams, rtol: float, max_steps: int):
        self.p = p
        self.rtol = rtol
        self.max_steps = max_steps
        self.steps = 0
        self.h = None

    def rhs(self, x: float) -> float:
        return 1.0 / _hubble(math.exp(x), self.p)

    def _rk4(self, x, h, fx):
        return h / 6.0 * (fx + 4.0 * self.rhs(x + 0.5 * h) + self.rhs(x + h))

    def advance(self, x: float, t: float, x_to: float) -> float:
        """Integrate from ``(x, t)`` to ``x_to``; return ``t(x_to)``."""
        span = x_to - x
        if span == 0.0:
            return t
        direction = math.copysign(1.0, span)
        h = self.h if self.h is not None else span / 16
        h = direction * min(abs(h), abs(span))
        while (x_to - x) * direction > 0:
            if self.steps >= self.max_steps:
                raise IntegrationError(
                    f"step budget of {self.max_steps} exhausted at a={math.exp(x)!r}",
                    last_state=state_at(math.exp(x), t, self.p),
                )
            if abs(h) >= abs(x_to - x):
                h = x_to - x
            fx = self.rhs(x)
            full = self._rk4(x, h, fx)
            half = 0.5 * h
            first = self._rk4(x, half, fx)
            second = self._rk4(x + half, half, self.rhs(x + half))
            fine = first + second
            err = abs(fine - full) / 15.0
            bound = self.rtol * abs(fine)
            self.steps += 1
            if err <= bound or abs(h) < 1e-14:
                if abs(h) < 1e-14 and err > bound:
                    raise IntegrationError(
                        f"step size underflow at a={math.exp(x)!r}",
                        last_state=state_at(math.exp(x), t, self.p),
                    )
                x_new = x + h
                t += fine
                x = x_to if abs(x_to - x_new) <= 1e-15 * max(1.0, abs(x_to)) else x_new
                self.h = h
                factor = 4.0 if err == 0 else min(4.0, 0.9 * (bound / err) ** 0.2)
                h *= max(1.0, factor)
            else:
                h *= max(0.1, 0.9 * (bound / err) ** 0.2)
        return t


def evolve_background(
    p: CosmoParams,
    a_start: float,
    a_end: float,
    n_samples: int,
    rtol: float = DEFAULT_RTOL,
    max_steps: int = MAX_STEPS,
) -> list[BackgroundState]:
    """Integrate cosmic time along the expansion history.

    Samples are spaced evenly in ``ln a`` between ``a_start`` and ``a_end``
    (both included). Cosmic time is integrated from ``dt = da / (a H)`` and
    shifted so that ``t = 0`` at ``a = a0``, which need not lie inside the
    sampled range.

    Raises:
        DomainError: if ``a_start >= a_end`` or ``n_samples < 2``.
        IntegrationError: if the tolerance cannot be met within ``max_steps``.
    """
    _check_a(a_start)
    _check_a(a_end)
    if not a_start < a_end:
        raise DomainError(f"need a_start < a_end, got {a_start!r} >= {a_end!r}")
    if n_samples < 2:
        raise DomainError(f"need at least 2 samples, got {n_samples!r}")

    xs = np.linspace(math.log(a_start), math.log(a_end), n_samples)
    xs[0], xs[-1] = math.log(a_start), math.log(a_end)
    a_values = np.exp(xs)
    a_values[0], a_values[-1] = a_start, a_end
    x0 = math.log(p.a0)
    near = np.abs(xs - x0) <= 1e-12
    xs[near], a_values[near] = x0, p.a0

    # Integrate outward from a0 so that t(a0) == 0 exactly when a0 is sampled.
    t_values = np.empty(n_samples)
    later = np.flatnonzero(xs >= x0)
    earlier = np.flatnonzero(xs < x0)[::-1]
    for order in (later, earlier):
        quad = _Quadrature(p, rtol, max_steps)
        x, t = x0, 0.0
        for i in order:
            t = quad.advance(x, t, float(xs[i]))
            x = float(xs[i])
            t_values[i] = t
    return [state_at(float(a), float(t), p) for a, t in zip(a_values, t_values)]


def continuity_residual(s: BackgroundState, p: CosmoParams) -> float:
    """Relative residual of ``deps_d/dt + 3 H eps_d = -deps_vac/dt``.

    ``deps_d/dt = -(3 - delta) H eps_d`` for the power-law density, so the
    identity holds exactly and the residual is rounding noise.
    """
    H = s.H.value
    ed = s.eps_d.value
    ed_dot = -(3 - p.delta) * H * ed
    vac_dot = eps_vac_rate(s.a, s.H, p).value
    return abs(ed_dot + 3 * H * ed + vac_dot) / (H * ed)


def friedmann_residual(s: BackgroundState, p: CosmoParams) -> float:
    """Relative violation of ``H**2 = 8 pi G / 3 * (eps_b + eps_d + eps_vac)``."""
    total = _eps_b(s.a, p) + s.eps_d.value + s.eps_vac.value
    rhs = 8 * math.pi * CONSTANTS.G.value / 3 * total
    return abs(s.H.value**2 - rhs) / rhs
