import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcsimplex.descriptors import energy
from gcsimplex.errors import DimensionMismatch, OracleError, UnknownSector, WeightSumError
from gcsimplex.oracle import (
    EnsembleState,
    FockSpaceSpec,
    build_ensemble,
    build_operators,
    ensemble_for_weights,
    purity,
    space_for_domain,
    trace_observable,
)
from gcsimplex.simplex import DomainSpec, WeightVector, weights_from_omega_n

DOM = DomainSpec("d", 6, 2, -100.0, -99.0, -90.0)
THREE = FockSpaceSpec.from_tuples([(5, 1, -90.0), (6, 1, -100.0), (7, 1, -99.0)])


def test_space_validation():
    with pytest.raises(OracleError):
        FockSpaceSpec.from_tuples([(6, 1, 0.0), (5, 1, 0.0)])
    with pytest.raises(OracleError):
        FockSpaceSpec.from_tuples([(6, 0, 0.0)])
    with pytest.raises(OracleError):
        FockSpaceSpec(())
    assert FockSpaceSpec.from_tuples([(0, 2, 0.0), (3, 4, 1.0)]).dim == 6


def test_operators_single_sector():
    h, n = build_operators(FockSpaceSpec.from_tuples([(6, 1, -100.0)]))
    assert h.tolist() == [[-100.0]] and n.tolist() == [[6.0]]


def test_operators_three_sectors():
    h, n = build_operators(THREE)
    assert np.array_equal(h, np.diag([-90.0, -100.0, -99.0]))
    assert np.array_equal(n, np.diag([5.0, 6.0, 7.0]))


def test_operators_filler():
    h, n = build_operators(FockSpaceSpec.from_tuples([(6, 2, -100.0)]))
    assert np.array_equal(h, np.diag([-100.0, -99.0]))
    assert np.array_equal(n, np.diag([6.0, 6.0]))


def test_space_for_domain(fixture_domain):
    space = space_for_domain(fixture_domain, dim=3)
    assert [(s.particles, s.dim, s.ground_energy) for s in space.sectors] == [
        (5, 3, -90.0), (6, 3, -100.0), (7, 3, -99.0)]
    assert space.offset(6) == 3


def test_pure_ensemble():
    space = FockSpaceSpec.from_tuples([(6, 1, -100.0)])
    state = build_ensemble(space, {6: 1.0})
    assert purity(state) == 1.0


def test_three_sector_ensemble():
    state = build_ensemble(THREE, [(5, 0.05), (6, 0.4), (7, 0.55)])
    h, n = build_operators(THREE)
    assert np.trace(state.matrix) == pytest.approx(1.0, abs=1e-12)
    assert sorted(np.linalg.eigvalsh(state.matrix)) == pytest.approx([0.05, 0.4, 0.55], abs=1e-12)
    assert trace_observable(state, h) == pytest.approx(-98.95, abs=1e-12)
    assert trace_observable(state, n) == pytest.approx(6.5, abs=1e-12)
    assert purity(state) == pytest.approx(0.465, abs=1e-12)


def test_origin_ensemble():
    state = build_ensemble(THREE, {7: 0.5, 5: 0.5})
    _, n = build_operators(THREE)
    assert trace_observable(state, n) == 6.0
    assert purity(state) == 0.5


def test_ensemble_errors():
    with pytest.raises(WeightSumError):
        build_ensemble(THREE, {5: 0.5, 6: 0.4})
    with pytest.raises(WeightSumError):
        build_ensemble(THREE, {5: -0.1, 6: 1.1})
    with pytest.raises(UnknownSector):
        build_ensemble(THREE, {8: 1.0})
    state = build_ensemble(THREE, {6: 1.0})
    with pytest.raises(DimensionMismatch):
        trace_observable(state, np.eye(4))


def test_ensemble_state_validation():
    space = FockSpaceSpec.from_tuples([(0, 2, 0.0)])
    with pytest.raises(OracleError):
        EnsembleState(space, np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(OracleError):
        EnsembleState(space, np.array([[1.5, 0.0], [0.0, -0.5]]))
    with pytest.raises(DimensionMismatch):
        EnsembleState(space, np.eye(3) / 3)
    # Hermitian complex input goes through the general path
    EnsembleState(space, np.array([[0.5, 0.1j], [-0.1j, 0.5]]))


@st.composite
def interior(draw):
    x = draw(st.floats(-1.0, 1.0))
    w = draw(st.floats(0.0, 1.0)) * (1.0 - abs(x))
    return weights_from_omega_n(x, w)


@given(interior(), st.integers(1, 5))
def test_block_diagonal_psd_normalized(w, dim):
    state, h, n = ensemble_for_weights(DOM, w, dim)
    d = state.matrix
    slices = state.space.slices()
    for a in slices:
        for b in slices:
            if a != b:
                assert not d[a, b].any()
    assert np.trace(d) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(d).min() >= -1e-10
    assert trace_observable(state, h) == pytest.approx(energy(DOM, w), rel=1e-9)
    assert trace_observable(state, n) == pytest.approx(6 + 2 * w.ratio, abs=1e-9)


@given(interior())
def test_dimension_independence(w):
    s1, h1, n1 = ensemble_for_weights(DOM, w, 1)
    s5, h5, n5 = ensemble_for_weights(DOM, w, 5)
    assert abs(trace_observable(s1, h1) - trace_observable(s5, h5)) <= 1e-12
    assert abs(trace_observable(s1, n1) - trace_observable(s5, n5)) <= 1e-12


@given(interior())
def test_purity_below_one_for_mixtures(w):
    p = purity(ensemble_for_weights(DOM, w)[0])
    assert 0.0 < p <= 1.0
    # a second weight below ~1e-8 vanishes from Tr(D^2) in double precision
    if sum(c > 1e-8 for c in w.as_tuple()) >= 2:
        assert p < 1.0
    if max(w.as_tuple()) == 1.0:
        assert p == 1.0


@pytest.mark.parametrize("weights", [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)])
def test_vertex_purity(fixture_domain, weights):
    assert purity(ensemble_for_weights(fixture_domain, WeightVector(*weights))[0]) == 1.0
