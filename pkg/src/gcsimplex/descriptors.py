"""Closed-form energies and chemical descriptors of a domain.

Horizontal simplex lines (fixed neutral weight) are governed by the chemical
potential ``mu0 = -(A + I)/2``; vertical lines (fixed charge) by the hardness
``eta0 = (I - A)/2``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import (
    BoundaryTooClose,
    ConvexityWarning,
    InconsistentReference,
    NonPositiveIonization,
    SideMismatch,
)
from .simplex import (
    DomainSpec,
    SimplexPoint,
    WeightVector,
    weights_from_omega_n,
    weights_from_reference,
)


@dataclass(frozen=True)
class DescriptorSet:
    i_q: float
    a_q: float
    mu0: float
    eta0: float
    e_bar: float
    convexity_warning: bool = False


@dataclass(frozen=True)
class EnergyPoint:
    point: SimplexPoint
    weights: WeightVector
    energy: float


def descriptor_set(domain: DomainSpec, warn: bool = True) -> DescriptorSet:
    """I^q, A^q, mu0, eta0 and the mean ionic energy of a domain.

    A domain with ``|A^q| >= I^q`` is flagged (and a :class:`ConvexityWarning`
    issued when ``warn``) but still evaluated.
    """
    i_q = domain.e_cation - domain.e_neutral
    a_q = domain.e_neutral - domain.e_anion
    if not i_q > 0:
        raise NonPositiveIonization(domain.label, f"I^q = {i_q!r} must be > 0")
    flagged = abs(a_q) >= i_q
    if flagged and warn:
        warnings.warn(
            f"{domain.label}: |A^q| = {abs(a_q)!r} >= I^q = {i_q!r}",
            ConvexityWarning,
            stacklevel=2,
        )
    return DescriptorSet(
        i_q=i_q,
        a_q=a_q,
        mu0=-(a_q + i_q) / 2.0,
        eta0=(i_q - a_q) / 2.0,
        e_bar=(domain.e_anion + domain.e_cation) / 2.0,
        convexity_warning=flagged,
    )


def energy(domain: DomainSpec, w: WeightVector) -> float:
    """Ensemble energy: convex combination of the sector ground energies."""
    return w.w_minus * domain.e_cation + w.w_zero * domain.e_neutral + w.w_plus * domain.e_anion


def energy_point(domain: DomainSpec, x: float, w_zero: float) -> EnergyPoint:
    w = weights_from_omega_n(x, w_zero)
    return EnergyPoint(SimplexPoint(x, w_zero), w, energy(domain, w))


def edge_energy(domain: DomainSpec, nu0: float) -> float:
    """Two-state energy on the edge gamma+ (``nu0 > 0``) or gamma- (``nu0 < 0``)."""
    q = domain.q
    if abs(nu0) > q * (1.0 + 1e-12):
        raise InconsistentReference(f"|nu0| = {abs(nu0)!r} exceeds q = {q}")
    if nu0 >= 0.0:
        return (1.0 - nu0 / q) * domain.e_neutral + (nu0 / q) * domain.e_anion
    return (1.0 + nu0 / q) * domain.e_neutral - (nu0 / q) * domain.e_cation


def _side(nu0: float) -> float:
    return 1.0 if nu0 >= 0.0 else -1.0


def delta_h(domain: DomainSpec, nu: float, nu0: float) -> float:
    """Horizontal energy gap to the ground edge, by direct subtraction.

    ``+/-(E(nu; nu0) - E_edge(nu0))`` with the sign of the side of ``nu0``.
    """
    w = weights_from_reference(nu, nu0, domain.q)
    return _side(nu0) * (energy(domain, w) - edge_energy(domain, nu0))


def delta_h_affinity_form(domain: DomainSpec, nu: float, nu0: float) -> float:
    """``-/+ (nu - nu0)/(2q) * (A^q + I^q)``."""
    d = descriptor_set(domain, warn=False)
    return -_side(nu0) * (nu - nu0) / (2.0 * domain.q) * (d.a_q + d.i_q)


def delta_h_mu_form(domain: DomainSpec, nu: float, nu0: float) -> float:
    """``+/- (nu - nu0)/q * mu0``."""
    d = descriptor_set(domain, warn=False)
    return _side(nu0) * (nu - nu0) / domain.q * d.mu0


def delta_u(domain: DomainSpec, nu: float, nu0: float, nu0_prime: float) -> float:
    """Vertical energy difference ``E(nu; nu0') - E(nu; nu0)`` at fixed charge."""
    if nu0 * nu0_prime < 0.0:
        raise SideMismatch(f"nu0 = {nu0!r} and nu0' = {nu0_prime!r} lie on opposite sides")
    q = domain.q
    upper = energy(domain, weights_from_reference(nu, nu0_prime, q))
    lower = energy(domain, weights_from_reference(nu, nu0, q))
    return upper - lower


def delta_u_eta_form(domain: DomainSpec, nu0: float, nu0_prime: float) -> float:
    """``+/- (nu0' - nu0)/q * eta0``; the sign follows the side of ``nu0``."""
    d = descriptor_set(domain, warn=False)
    side = _side(nu0 if nu0 != 0.0 else nu0_prime)
    return side * (nu0_prime - nu0) / domain.q * d.eta0


def energy_trend_check(domain: DomainSpec, w_zero: float, samples: int) -> list[float]:
    """Energies at ``samples`` evenly spaced points from gamma- to gamma+."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    if not 0.0 <= w_zero <= 1.0:
        raise ValueError(f"w_zero = {w_zero!r} outside [0, 1]")
    x_edge = 1.0 - w_zero
    out = []
    for k in range(samples):
        # symmetric parametrisation keeps both endpoints exact
        x = x_edge * ((2 * k - (samples - 1)) / (samples - 1))
        out.append(energy(domain, weights_from_omega_n(x, w_zero)))
    return out


def slope_checks(domain: DomainSpec, p: SimplexPoint, h: float | None = None) -> tuple[float, float]:
    """Central finite differences ``(dE/dnu, dE/dnu0)`` at an interior point.

    ``nu0`` is the edge fraction on the point's own side. Expected values are
    ``mu0/q`` and ``+eta0/q`` (acceptor) or ``-eta0/q`` (donor).
    """
    q = domain.q
    if h is None:
        h = 1e-5 * q
    nu = p.x * q
    nu0 = math.copysign(q * (1.0 - p.w_zero), p.x)
    margin = min(abs(nu), abs(nu0) - abs(nu), q - abs(nu0))
    if not margin > h:
        raise BoundaryTooClose(
            f"point ({p.x!r}, {p.w_zero!r}) is within {h!r} of a region boundary"
        )

    def e(n, n0):
        return energy(domain, weights_from_reference(n, n0, q))

    d_nu = (e(nu + h, nu0) - e(nu - h, nu0)) / (2.0 * h)
    d_nu0 = (e(nu, nu0 + h) - e(nu, nu0 - h)) / (2.0 * h)
    return d_nu, d_nu0
