"""Explicit density operators over a finite model Fock space.

This is the brute-force check for the closed-form simplex results: sector
ground states become basis vectors of a block-diagonal space, and ensemble
quantities are obtained from matrix traces ``Tr(O D)``.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .errors import DimensionMismatch, OracleError, UnknownSector, WeightSumError
from .simplex import DomainSpec, WeightVector

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10


@dataclass(frozen=True)
class Sector:
    particles: int
    dim: int
    ground_energy: float


@dataclass(frozen=True)
class FockSpaceSpec:
    """Ordered direct sum of particle-number sectors."""

    sectors: tuple[Sector, ...]

    def __post_init__(self):
        counts = [s.particles for s in self.sectors]
        if not self.sectors:
            raise OracleError("a Fock space needs at least one sector")
        if any(c < 0 for c in counts):
            raise OracleError(f"negative particle count in {counts}")
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise OracleError(f"particle counts must be strictly increasing: {counts}")
        if any(s.dim < 1 for s in self.sectors):
            raise OracleError("sector dimensions must be >= 1")

    @classmethod
    def from_tuples(cls, sectors: Iterable[tuple[int, int, float]]) -> FockSpaceSpec:
        return cls(tuple(Sector(int(m), int(d), float(e)) for m, d, e in sectors))

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.sectors)

    def offset(self, particles: int) -> int:
        """Index of the first (ground) basis vector of a sector."""
        start = 0
        for s in self.sectors:
            if s.particles == particles:
                return start
            start += s.dim
        raise UnknownSector(f"no sector with {particles} particles")

    def slices(self) -> list[slice]:
        out, start = [], 0
        for s in self.sectors:
            out.append(slice(start, start + s.dim))
            start += s.dim
        return out


@dataclass(frozen=True, eq=False)
class EnsembleState:
    space: FockSpaceSpec
    matrix: np.ndarray

    def __post_init__(self):
        d = self.matrix
        n = self.space.dim
        if d.shape != (n, n):
            raise DimensionMismatch(f"matrix shape {d.shape} != ({n}, {n})")
        if np.max(np.abs(d - d.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise OracleError("density matrix is not Hermitian")
        if abs(np.trace(d).real - 1.0) > TRACE_TOL:
            raise OracleError(f"trace {np.trace(d).real!r} != 1")
        if np.linalg.eigvalsh(d).min() < PSD_TOL:
            raise OracleError("density matrix is not positive semidefinite")


def space_for_domain(domain: DomainSpec, dim: int = 1) -> FockSpaceSpec:
    """Three-sector space for a domain, each sector padded to ``dim``."""
    return FockSpaceSpec(tuple(
        Sector(m, dim, e) for m, e in zip(domain.sectors, domain.sector_energies)
    ))


def build_operators(space: FockSpaceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Hamiltonian and number operator, both block-diagonal.

    Each sector Hamiltonian is ``diag(E0, E0 + 1, E0 + 2, ...)`` so that the
    first basis vector is the sector ground state.
    """
    h_blocks = [np.diag(s.ground_energy + np.arange(s.dim, dtype=float)) for s in space.sectors]
    n_blocks = [float(s.particles) * np.eye(s.dim) for s in space.sectors]
    return block_diag(*h_blocks), block_diag(*n_blocks)


def build_ensemble(space: FockSpaceSpec, weights: Mapping[int, float] | Iterable[tuple[int, float]]) -> EnsembleState:
    """``D = sum_M w_M |0_M><0_M|`` over the sector ground projectors."""
    pairs = list(weights.items()) if isinstance(weights, Mapping) else list(weights)
    ws = [w for _, w in pairs]
    if any(not math.isfinite(w) or w < 0.0 for w in ws):
        raise WeightSumError(f"weights must be finite and non-negative: {ws}")
    if abs(math.fsum(ws) - 1.0) > TRACE_TOL:
        raise WeightSumError(f"weights sum to {math.fsum(ws)!r}, not 1")
    d = np.zeros((space.dim, space.dim))
    for m, w in pairs:
        i = space.offset(m)
        d[i, i] += w
    return EnsembleState(space, d)


def ensemble_for_weights(domain: DomainSpec, w: WeightVector, dim: int = 1) -> tuple[EnsembleState, np.ndarray, np.ndarray]:
    """State, Hamiltonian and number operator for a three-state mixture."""
    space = space_for_domain(domain, dim)
    state = build_ensemble(space, zip(domain.sectors, w.as_tuple()))
    h, n_op = build_operators(space)
    return state, h, n_op


def trace_observable(state: EnsembleState, obs: np.ndarray) -> float:
    obs = np.asarray(obs)
    if obs.shape != state.matrix.shape:
        raise DimensionMismatch(f"observable shape {obs.shape} != {state.matrix.shape}")
    return float(np.trace(obs @ state.matrix).real)


def purity(state: EnsembleState) -> float:
    """``Tr(D^2)``; 1 exactly for a single projector."""
    d = state.matrix
    return float(np.trace(d @ d).real)
