"""Characteristic volume and length of dynamical reduction from vacuum decay.

A particle whose mass is smeared over a volume ``V_c`` gains kinetic energy
at the rate ``m G / (2 V_c)`` from delta-correlated gravitational noise.
Requiring the vacuum inside the same volume to pay for it,

    m G / (2 V_c) = -V_c * deps_vac/dt,

fixes ``V_c = sqrt(-m G / (2 deps_vac/dt))`` and ``R_c = V_c**(1/3)``.

The noise correlator and the decoherence-time relation are order-of-magnitude
statements; both are evaluated with coefficient exactly 1 and every
serialized result says so through ``order_of_magnitude``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .cosmology import BackgroundState, CosmoParams, eps_vac_rate
from .errors import ConsistencyError, DomainError, NoDecayError
from .units import CONSTANTS, Quantity, length_to_cm, time_to_seconds

CROSSCHECK_RTOL = 1e-12


@dataclass(frozen=True)
class ReductionResult:
    m: Quantity
    V_c: Quantity
    R_c: Quantity
    dE_dt: Quantity
    t_dec: Quantity
    # Relative gap between the closed-form length and the composed pipeline.
    closed_form_rel_diff: Optional[float] = None

    @property
    def rc_cm(self) -> float:
        return length_to_cm(self.R_c)

    @property
    def t_dec_s(self) -> float:
        return time_to_seconds(self.t_dec)

    def to_dict(self) -> dict:
        d = {
            "m_gev": self.m.value,
            "V_c_gev-3": self.V_c.value,
            "R_c_gev-1": self.R_c.value,
            "dE_dt_gev2": self.dE_dt.value,
            "t_dec_gev-1": self.t_dec.value,
            "vc_cm3": length_to_cm(self.R_c) ** 3,
            "rc_cm": self.rc_cm,
            "t_dec_s": self.t_dec_s,
            "order_of_magnitude": True,
        }
        if self.closed_form_rel_diff is not None:
            d["closed_form_rel_diff"] = self.closed_form_rel_diff
        return d


def _positive_mass(m: Quantity, what: str = "mass"):
    m.require(1, what)
    if not m.value > 0:
        raise DomainError(f"{what} must be positive, got {m.value!r}")


def _require_decay(p: CosmoParams):
    if not p.delta > 0:
        raise NoDecayError(
            f"characteristic volume undefined when vacuum does not decay (delta={p.delta!r})"
        )


def characteristic_volume(m: Quantity, vac_rate: Quantity) -> Quantity:
    """Volume over which the vacuum loss balances the particle's energy gain.

    Args:
        m: particle mass (GeV).
        vac_rate: time derivative of the vacuum energy density (GeV^5), must be < 0.

    Returns:
        ``sqrt(-m G / (2 vac_rate))`` in GeV^-3.

    Raises:
        NoDecayError: if ``vac_rate >= 0``.
    """
    _positive_mass(m)
    vac_rate.require(5, "vacuum decay rate")
    if not vac_rate.value < 0:
        raise NoDecayError(
            f"characteristic volume undefined when vacuum does not decay (rate={vac_rate.value!r})"
        )
    return (-(m * CONSTANTS.G) / (2 * vac_rate)).sqrt()


def energy_gain_rate(m: Quantity, V_c: Quantity) -> Quantity:
    """Kinetic-energy gain rate ``m G / (2 V_c)`` (GeV^2)."""
    _positive_mass(m)
    V_c.require(-3, "characteristic volume")
    if not V_c.value > 0:
        raise DomainError(f"characteristic volume must be positive, got {V_c.value!r}")
    return m * CONSTANTS.G / (2 * V_c)


def decoherence_time(m: Quantity, R_c: Quantity) -> Quantity:
    """Order-of-magnitude decoherence time ``R_c / (G m**2)`` of a distant superposition."""
    _positive_mass(m)
    R_c.require(-1, "characteristic length")
    if not R_c.value > 0:
        raise DomainError(f"characteristic length must be positive, got {R_c.value!r}")
    return R_c / (CONSTANTS.G * m**2)


def result_from_rate(m: Quantity, vac_rate: Quantity) -> ReductionResult:
    V_c = characteristic_volume(m, vac_rate)
    R_c = V_c.cbrt()
    return ReductionResult(
        m=m,
        V_c=V_c,
        R_c=R_c,
        dE_dt=energy_gain_rate(m, V_c),
        t_dec=decoherence_time(m, R_c),
    )


def closed_form_length(p: CosmoParams, m: Quantity) -> Quantity:
    """Present-day ``R_c`` written directly in terms of ``H0``, ``G`` and the dark fraction."""
    _require_decay(p)
    _positive_mass(m)
    # m G^2 / H0^3 has mass dimension -6, so the sixth root is a length.
    G = CONSTANTS.G.value
    h0 = p.H0.value
    ratio = 8 * math.pi * m.value * G * G / (6 * p.omega_d0 * p.delta * h0 * h0 * h0)
    return Quantity(ratio ** (1 / 6), -1)


def characteristic_length_now(p: CosmoParams, m: Quantity = CONSTANTS.proton_mass) -> ReductionResult:
    """Reduction scales at the present epoch ``a = a0``, ``H = H0``.

    The value is computed through the decay rate and the characteristic
    volume, then checked against :func:`closed_form_length`.

    Raises:
        NoDecayError: if ``delta <= 0``.
        ConsistencyError: if the two routes disagree by more than 1e-12.
    """
    _require_decay(p)
    _positive_mass(m)
    V_c = characteristic_volume(m, eps_vac_rate(p.a0, p.H0, p))
    R_c = V_c.cbrt()
    closed = closed_form_length(p, m)
    rel = abs(R_c.value - closed.value) / closed.value
    if rel > CROSSCHECK_RTOL:
        raise ConsistencyError(f"closed form and pipeline disagree: relative gap {rel:.3e}")
    return ReductionResult(
        m=m,
        V_c=V_c,
        R_c=R_c,
        dE_dt=energy_gain_rate(m, V_c),
        t_dec=decoherence_time(m, R_c),
        closed_form_rel_diff=rel,
    )


def rc_history(
    traj: Sequence[BackgroundState], p: CosmoParams, m: Quantity = CONSTANTS.proton_mass
) -> list[tuple[Quantity, ReductionResult]]:
    """Evaluate the reduction scales at every state of an integrated history."""
    _require_decay(p)
    if not traj:
        raise DomainError("empty trajectory")
    return [(s.t, result_from_rate(m, eps_vac_rate(s.a, s.H, p))) for s in traj]


def budget_terms(
    p: CosmoParams,
    m_ordinary: Quantity = CONSTANTS.proton_mass,
    m_dark: Quantity = CONSTANTS.proton_mass,
) -> tuple[float, float]:
    """Ordinary- and dark-matter contributions to :func:`vacuum_budget_check`."""
    _positive_mass(m_ordinary, "ordinary-matter particle mass")
    _positive_mass(m_dark, "dark-matter particle mass")
    V_c = characteristic_length_now(p, m_ordinary).V_c
    return float(p.eps_b0 / m_ordinary * V_c), float(p.eps_d0 / m_dark * V_c)


def vacuum_budget_check(
    p: CosmoParams,
    m_ordinary: Quantity = CONSTANTS.proton_mass,
    m_dark: Quantity = CONSTANTS.proton_mass,
) -> float:
    """Fraction of space filled by one characteristic volume per matter particle.

    ``(n_b + n_d) * V_c(t0)`` with number densities ``eps / m``. Values far
    below 1 mean the energy handed to particle motion is a negligible drain
    on the vacuum. ``V_c`` is evaluated for the ordinary-matter particle
    (a nucleon by default) and shared by both species.
    """
    baryon, dark = budget_terms(p, m_ordinary, m_dark)
    return baryon + dark
