"""Weight algebra and geometry of the three-state 2-simplex.

A domain with N electrons that can donate or accept at most q electrons is
described by a convex mixture of the ground states with N-q, N and N+q
electrons. Points of the simplex are addressed by ``(x, w_zero)`` with
``x = nu/q`` the transferred charge ratio and ``w_zero`` the neutral weight.

Charge fractions ``nu`` and reference fractions ``nu0`` are plain floats in
electron units; ``q`` travels alongside them.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ElectronCountUnderflow,
    InconsistentReference,
    InvalidWeights,
    NonPositiveIonization,
    OutsideSimplex,
    SignMismatch,
)

WEIGHT_TOL = 1e-12
CLASSIFY_TOL = 1e-9


@dataclass(frozen=True)
class DomainSpec:
    """Molecular domain: electron count, maximal transfer and sector energies."""

    label: str
    n_electrons: int
    q: int
    e_neutral: float
    e_anion: float
    e_cation: float

    def __post_init__(self):
        if self.q < 1 or self.n_electrons - self.q < 0:
            raise ElectronCountUnderflow(
                self.label,
                f"need q >= 1 and N - q >= 0 (N={self.n_electrons}, q={self.q})",
            )
        for name in ("e_neutral", "e_anion", "e_cation"):
            if not math.isfinite(getattr(self, name)):
                raise NonPositiveIonization(self.label, f"{name} is not finite")
        if not self.e_cation - self.e_neutral > 0:
            raise NonPositiveIonization(
                self.label,
                f"I^q = E(N-q) - E(N) = {self.e_cation - self.e_neutral!r} must be > 0",
            )

    @property
    def sectors(self) -> tuple[int, int, int]:
        """Particle counts (N-q, N, N+q)."""
        return (self.n_electrons - self.q, self.n_electrons, self.n_electrons + self.q)

    @property
    def sector_energies(self) -> tuple[float, float, float]:
        return (self.e_cation, self.e_neutral, self.e_anion)


def _snap(w: float) -> float:
    # floating-point hygiene at the simplex boundary
    if -WEIGHT_TOL <= w < 0.0:
        return 0.0
    if 1.0 < w <= 1.0 + WEIGHT_TOL:
        return 1.0
    return w + 0.0  # drops negative zero


@dataclass(frozen=True)
class WeightVector:
    """Convex coefficients of the cationic, neutral and anionic ground states."""

    w_minus: float
    w_zero: float
    w_plus: float

    def __post_init__(self):
        ws = (self.w_minus, self.w_zero, self.w_plus)
        if not all(math.isfinite(w) for w in ws):
            raise InvalidWeights(f"non-finite weights {ws}")
        if any(w < -WEIGHT_TOL or w > 1.0 + WEIGHT_TOL for w in ws):
            raise InvalidWeights(f"weights {ws} leave [0, 1]")
        if abs(math.fsum(ws) - 1.0) > WEIGHT_TOL:
            raise InvalidWeights(f"weights {ws} do not sum to 1")

    @classmethod
    def snapped(cls, w_minus: float, w_zero: float, w_plus: float) -> WeightVector:
        return cls(_snap(w_minus), _snap(w_zero), _snap(w_plus))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w_minus, self.w_zero, self.w_plus)

    @property
    def ratio(self) -> float:
        """nu/q implied by the ionic weights."""
        return self.w_plus - self.w_minus

    @property
    def point(self) -> SimplexPoint:
        return SimplexPoint(self.ratio, self.w_zero)


@dataclass(frozen=True)
class SimplexPoint:
    x: float
    w_zero: float

    @property
    def edge_weights(self) -> tuple[float, float]:
        """(w_minus, w_plus) implied by the point, unclamped."""
        return ((1.0 - self.x - self.w_zero) / 2.0, (1.0 + self.x - self.w_zero) / 2.0)

    def inside(self, tol: float = WEIGHT_TOL) -> bool:
        lo, hi = self.edge_weights
        return lo >= -tol and hi >= -tol and -tol <= self.w_zero <= 1.0 + tol


class Region(enum.Enum):
    InteriorAcceptor = "InteriorAcceptor"
    InteriorDonor = "InteriorDonor"
    EdgeAcceptor = "EdgeAcceptor"
    EdgeDonor = "EdgeDonor"
    NeutralAxis = "NeutralAxis"
    VertexNeutral = "VertexNeutral"
    VertexAnion = "VertexAnion"
    VertexCation = "VertexCation"
    Origin = "Origin"
    Outside = "Outside"

    def __str__(self):
        return self.value


# stable integer codes for the vectorised classifier
REGION_CODES = tuple(Region)


@dataclass(frozen=True)
class MixedState:
    """Symbolic convex combination of the three sector ground states."""

    domain: DomainSpec
    weights: WeightVector

    @property
    def components(self) -> dict[int, float]:
        """Particle count -> weight, ordered N-q, N, N+q."""
        return dict(zip(self.domain.sectors, self.weights.as_tuple()))

    @property
    def is_pure(self) -> bool:
        return sum(1 for w in self.weights.as_tuple() if w != 0.0) == 1


def weights_from_omega_n(x: float, w_zero: float) -> WeightVector:
    """Ionic weights from the neutral weight and the ratio ``x = nu/q``.

    ``w_pm = (1 +/- x - w_zero) / 2``. Raises :class:`OutsideSimplex` when the
    point lies above the triangle.
    """
    if not (-1.0 - WEIGHT_TOL <= x <= 1.0 + WEIGHT_TOL):
        raise OutsideSimplex(f"x = {x!r} outside [-1, 1]")
    if not (-WEIGHT_TOL <= w_zero <= 1.0 + WEIGHT_TOL):
        raise OutsideSimplex(f"w_zero = {w_zero!r} outside [0, 1]")
    w_minus = (1.0 - x - w_zero) / 2.0
    w_plus = (1.0 + x - w_zero) / 2.0
    if w_minus < -WEIGHT_TOL or w_plus < -WEIGHT_TOL:
        raise OutsideSimplex(f"point ({x!r}, {w_zero!r}) lies above the simplex")
    return WeightVector.snapped(w_minus, w_zero, w_plus)


def weights_array(x, w_zero):
    """Vectorised form of :func:`weights_from_omega_n` without validation.

    Returns ``(w_minus, w_zero, w_plus)`` arrays; points outside the triangle
    yield negative edge weights rather than raising.
    """
    x = np.asarray(x, dtype=float)
    w_zero = np.asarray(w_zero, dtype=float)
    w_minus = (1.0 - x - w_zero) / 2.0
    w_plus = (1.0 + x - w_zero) / 2.0
    return w_minus, np.broadcast_to(w_zero, w_minus.shape), w_plus


def reference_fraction(w_zero: float, side: str, q: int = 1) -> float:
    """Edge charge fraction ``nu0`` of the horizontal line at ``w_zero``.

    ``side`` is ``"acceptor"`` (gamma+) or ``"donor"`` (gamma-).
    """
    if side not in ("acceptor", "donor"):
        raise ValueError(f"side must be 'acceptor' or 'donor', got {side!r}")
    if not (0.0 <= w_zero <= 1.0):
        raise OutsideSimplex(f"w_zero = {w_zero!r} outside [0, 1]")
    magnitude = q * (1.0 - w_zero)
    return magnitude if side == "acceptor" else 0.0 - magnitude


def _check_reference(nu: float, nu0: float, q: int) -> None:
    if abs(nu0) > q * (1.0 + WEIGHT_TOL):
        raise InconsistentReference(f"|nu0| = {abs(nu0)!r} exceeds q = {q}")
    if abs(nu) > abs(nu0) + q * WEIGHT_TOL:
        raise InconsistentReference(
            f"|nu| = {abs(nu)!r} exceeds the edge fraction |nu0| = {abs(nu0)!r}"
        )
    if nu * nu0 < 0.0:
        raise SignMismatch(f"nu = {nu!r} and nu0 = {nu0!r} lie on opposite sides")


def weights_from_reference(nu: float, nu0: float, q: int = 1) -> WeightVector:
    """Region-resolved weights for charge ``nu`` on the line with edge ``nu0``.

    The acceptor side (``nu0 > 0``) gives ``w_pm = (+/-nu + nu0) / 2q`` and the
    donor side gives ``w_pm = (+/-nu - nu0) / 2q``; in both cases the neutral
    weight is ``1 - |nu0|/q``.
    """
    _check_reference(nu, nu0, q)
    two_q = 2.0 * q
    if nu0 >= 0.0:
        w_zero = 1.0 - nu0 / q
        w_plus = (nu + nu0) / two_q
        w_minus = (-nu + nu0) / two_q
    else:
        w_zero = 1.0 + nu0 / q
        w_plus = (nu - nu0) / two_q
        w_minus = (-nu - nu0) / two_q
    return WeightVector.snapped(w_minus, w_zero, w_plus)


def classify(p: SimplexPoint, tol: float = CLASSIFY_TOL) -> Region:
    """Region of a simplex point.

    Priority on boundaries: vertices, origin, edges gamma+-, neutral axis,
    then the open subtriangles. Bottom-edge points (``w_zero = 0``, ``x != 0``)
    belong to the subtriangle on their side.
    """
    x, w = p.x, p.w_zero
    ax = abs(x)
    if not (math.isfinite(x) and math.isfinite(w)):
        return Region.Outside
    if ax > 1.0 + tol or w < -tol or w > 1.0 + tol or w > 1.0 - ax + tol:
        return Region.Outside
    at_bottom = abs(w) <= tol
    if ax <= tol and abs(w - 1.0) <= tol:
        return Region.VertexNeutral
    if at_bottom and abs(x - 1.0) <= tol:
        return Region.VertexAnion
    if at_bottom and abs(x + 1.0) <= tol:
        return Region.VertexCation
    if at_bottom and ax <= tol:
        return Region.Origin
    if abs(w - (1.0 - ax)) <= tol:
        return Region.EdgeAcceptor if x > 0 else Region.EdgeDonor
    if ax <= tol:
        return Region.NeutralAxis
    return Region.InteriorAcceptor if x > 0 else Region.InteriorDonor


def classify_array(x, w_zero, tol: float = CLASSIFY_TOL) -> np.ndarray:
    """Vectorised :func:`classify`; returns indices into ``REGION_CODES``."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w_zero, dtype=float)
    x, w = np.broadcast_arrays(x, w)
    ax = np.abs(x)
    code = {r: i for i, r in enumerate(REGION_CODES)}
    out = np.where(x > 0, code[Region.InteriorAcceptor], code[Region.InteriorDonor])
    at_bottom = np.abs(w) <= tol
    # assign lowest priority first so later masks overwrite
    out = np.where(ax <= tol, code[Region.NeutralAxis], out)
    on_edge = np.abs(w - (1.0 - ax)) <= tol
    out = np.where(on_edge & (x > 0), code[Region.EdgeAcceptor], out)
    out = np.where(on_edge & ~(x > 0), code[Region.EdgeDonor], out)
    out = np.where(at_bottom & (ax <= tol), code[Region.Origin], out)
    out = np.where(at_bottom & (np.abs(x + 1.0) <= tol), code[Region.VertexCation], out)
    out = np.where(at_bottom & (np.abs(x - 1.0) <= tol), code[Region.VertexAnion], out)
    out = np.where((ax <= tol) & (np.abs(w - 1.0) <= tol), code[Region.VertexNeutral], out)
    outside = (
        ~np.isfinite(x) | ~np.isfinite(w)
        | (ax > 1.0 + tol) | (w < -tol) | (w > 1.0 + tol) | (w > 1.0 - ax + tol)
    )
    return np.where(outside, code[Region.Outside], out)


def assemble_state(domain: DomainSpec, w: WeightVector) -> MixedState:
    return MixedState(domain, w)


def mean_particle_number(domain: DomainSpec, w: WeightVector) -> float:
    """First moment ``<M> = sum_M w_M * M``."""
    m_minus, m_zero, m_plus = domain.sectors
    return m_minus * w.w_minus + m_zero * w.w_zero + m_plus * w.w_plus
