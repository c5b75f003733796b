import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skewinfo.bipartite import (
    SemiQuantumSpec, aggregate, bipartite_terms, cross_term, cross_term_spectral, embed,
    is_semi_quantum, lieb_gap, local_measurement, parallelogram_residual, reduced_states,
    semi_quantum_state, superadditivity_gap, weak_superadditivity,
)
from skewinfo.checker import (
    mix_semi_quantum, random_density, random_observable, random_semi_quantum_spec,
    random_unitary,
)
from skewinfo.linalg import PAULI_X, PAULI_Z, ValidationError, commutator_i
from skewinfo.metrics import DEFAULT_METRICS, get_metric
from skewinfo.skew import metric_inner, skew_information

REGULAR = [m for m in DEFAULT_METRICS if get_metric(m).regular]
DIMS = [(2, 2), (2, 3), (3, 2)]


def bell_mixture(w):
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return w * np.outer(psi, psi) + (1 - w) * np.eye(4) / 4


class TestEmbedding:
    def test_embed_parties(self):
        np.testing.assert_array_equal(embed(PAULI_X, (2, 3), 1), np.kron(PAULI_X, np.eye(3)))
        np.testing.assert_array_equal(embed(PAULI_X, (3, 2), 2), np.kron(np.eye(3), PAULI_X))
        with pytest.raises(ValidationError):
            embed(PAULI_X, (2, 2), 0)

    def test_aggregate(self):
        a = aggregate(PAULI_X, PAULI_Z, -1)
        np.testing.assert_array_equal(a, np.kron(PAULI_X, np.eye(2)) - np.kron(np.eye(2), PAULI_Z))
        with pytest.raises(ValidationError):
            aggregate(PAULI_X, PAULI_Z, 2)


class TestSemiQuantum:
    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            SemiQuantumSpec((0.5, 0.6), (np.diag([1, 0]), np.diag([0, 1])),
                            (np.eye(2) / 2, np.eye(2) / 2))
        with pytest.raises(ValidationError):
            SemiQuantumSpec((0.5, 0.5), (np.diag([1, 0]), np.diag([1, 0])),
                            (np.eye(2) / 2, np.eye(2) / 2))

    @pytest.mark.parametrize("dims", DIMS)
    def test_invariant_under_measurement(self, dims):
        spec = random_semi_quantum_spec(*dims, seed=1)
        rho = semi_quantum_state(spec)
        assert is_semi_quantum(rho, spec.projections)
        np.testing.assert_allclose(np.trace(rho), 1.0)
        np.testing.assert_allclose(local_measurement(rho, spec.projections), rho, atol=1e-14)

    def test_entangled_state_is_not(self):
        proj = (np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert not is_semi_quantum(bell_mixture(0.9), proj)

    def test_mixing_preserves_structure(self):
        spec = random_semi_quantum_spec(2, 3, seed=2)
        mixed = mix_semi_quantum(spec, 0.1)
        expected = 0.9 * semi_quantum_state(spec) + 0.1 * np.eye(6) / 6
        np.testing.assert_allclose(semi_quantum_state(mixed), expected, atol=1e-14)

    def test_from_basis_projections(self):
        u = random_unitary(3, seed=3)
        spec = SemiQuantumSpec.from_basis([0.2, 0.3, 0.5], u, [np.eye(2) / 2] * 3)
        assert spec.dims == (3, 2)


class TestTerms:
    def test_product_state_is_additive(self):
        r1, r2 = random_density(2, seed=4), random_density(3, seed=5)
        a, b = random_observable(2, seed=6), random_observable(3, seed=7)
        gap = superadditivity_gap(np.kron(r1, r2), a, b, (2, 3), "wyd:0.5")
        assert abs(gap) < 1e-12

    def test_reduced_states(self):
        r1, r2 = reduced_states(bell_mixture(0.5), (2, 2))
        np.testing.assert_allclose(r1, np.eye(2) / 2)
        np.testing.assert_allclose(r2, np.eye(2) / 2)

    def test_terms_consistent_with_skew(self):
        rho = random_density(6, seed=8)
        a, b = random_observable(2, seed=9), random_observable(3, seed=10)
        t = bipartite_terms(rho, a, b, (2, 3), "wyd:0.25")
        r1, r2 = reduced_states(rho, (2, 3))
        assert t.a_reduced == pytest.approx(skew_information(r1, a, "wyd:0.25").value)
        assert t.plus == pytest.approx(skew_information(rho, aggregate(a, b), "wyd:0.25").value)

    def test_lieb_gap_parties(self):
        rho = random_density(6, seed=11)
        assert lieb_gap(rho, random_observable(2, seed=12), (2, 3), "kubo", party=1) >= -1e-12
        assert lieb_gap(rho, random_observable(3, seed=13), (2, 3), "kubo", party=2) >= -1e-12
        with pytest.raises(ValidationError):
            lieb_gap(rho, random_observable(3, seed=13), (2, 3), "kubo", party=1)

    def test_dims_mismatch(self):
        with pytest.raises(ValidationError):
            superadditivity_gap(np.eye(4) / 4, PAULI_X, np.eye(3), (2, 2), "kubo")


class TestCrossTerm:
    @pytest.mark.parametrize("metric", REGULAR)
    @pytest.mark.parametrize("dims", DIMS)
    def test_vanishes_for_semi_quantum(self, metric, dims):
        spec = random_semi_quantum_spec(*dims, seed=REGULAR.index(metric))
        a, b = random_observable(dims[0], seed=1), random_observable(dims[1], seed=2)
        rho = semi_quantum_state(spec)
        assert abs(cross_term(rho, a, b, dims, metric)) <= 1e-10
        assert abs(cross_term_spectral(spec, a, b, metric)) <= 1e-10

    def test_matches_metric_inner(self):
        rho = bell_mixture(0.9)
        a, b = PAULI_X, PAULI_X
        xa = commutator_i(rho, embed(a, (2, 2), 1))
        xb = commutator_i(rho, embed(b, (2, 2), 2))
        k = metric_inner(rho, xa, xb, "wyd:0.5").real
        assert cross_term(rho, a, b, (2, 2), "wyd:0.5") == pytest.approx(k, rel=1e-12)
        assert abs(k) > 1e-3

    def test_parallelogram(self):
        rho = random_density(9, seed=14)
        a, b = random_observable(3, seed=15), random_observable(3, seed=16)
        assert parallelogram_residual(rho, a, b, (3, 3), "bures") < 1e-12

    def test_cross_term_is_half_polarization(self):
        rho = random_density(4, seed=17)
        a, b = random_observable(2, seed=18), random_observable(2, seed=19)
        spec = get_metric("wyd:0.5")
        t = bipartite_terms(rho, a, b, (2, 2), spec)
        ct = cross_term(rho, a, b, (2, 2), spec)
        assert (t.plus - t.minus) / 4 == pytest.approx(spec.metric_constant / 2 * ct, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(DEFAULT_METRICS), st.sampled_from(DIMS))
def test_semi_quantum_superadditivity(seed, metric, dims):
    spec = random_semi_quantum_spec(*dims, seed=seed)
    if not get_metric(metric).regular:
        spec = mix_semi_quantum(spec, 1e-3)
    rng = np.random.default_rng(seed)
    a, b = random_observable(dims[0], rng), random_observable(dims[1], rng)
    assert superadditivity_gap(semi_quantum_state(spec), a, b, dims, metric) >= -1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(REGULAR), st.sampled_from(DIMS))
def test_weak_forms(seed, metric, dims):
    rng = np.random.default_rng(seed)
    rho = random_density(dims[0] * dims[1], seed=rng)
    a, b = random_observable(dims[0], rng), random_observable(dims[1], rng)
    w1, w2 = weak_superadditivity(rho, a, b, dims, metric)
    assert w1 >= -1e-9 and w2 >= -1e-9
