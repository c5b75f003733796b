import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skewinfo.checker import random_density, random_observable, random_pure_state, random_unitary
from skewinfo.linalg import PAULI_X, PAULI_Z, ValidationError, commutator_i, variance
from skewinfo.metrics import (
    DEFAULT_METRICS, SingularMetricError, UnsupportedParameterError, get_metric,
)
from skewinfo.skew import metric_inner, skew_information, state_spectrum, wyd_trace_oracle

REGULAR = [m for m in DEFAULT_METRICS if get_metric(m).regular]
NON_REGULAR = [m for m in DEFAULT_METRICS if not get_metric(m).regular]
seeds = st.integers(0, 2 ** 32 - 1)


def qubit_closed_form(a, p):
    return (a ** p - (1 - a) ** p) * (a ** (1 - p) - (1 - a) ** (1 - p))


class TestQubit:
    def test_wigner_yanase_value(self):
        r = skew_information(np.diag([0.9, 0.1]), PAULI_X, "wyd:0.5")
        assert r.value == pytest.approx(0.4, abs=1e-15)
        assert r.regular_branch and r.rank_used == 2 and r.metric_id == "wyd:0.5"

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7, 0.9])
    @pytest.mark.parametrize("a", [0.6, 0.75, 0.9])
    def test_closed_form(self, a, p):
        value = skew_information(np.diag([a, 1 - a]), PAULI_X, f"wyd:{p}").value
        assert value == pytest.approx(qubit_closed_form(a, p), rel=1e-12)

    @pytest.mark.parametrize("p", [1.2, 1.5, 2.0])
    def test_unbounded_closed_form(self, p):
        # the trace formula carries -1/(p(1-p)) instead of -1/2
        a = 0.8
        expected = 2 * qubit_closed_form(a, p) / (p * (p - 1))
        value = skew_information(np.diag([a, 1 - a]), PAULI_X, f"wyd:{p}").value
        assert value == pytest.approx(abs(expected), rel=1e-12)

    def test_bures_value(self):
        # c_hat = 2 (x - y)^2 / (x + y) and m = 1/2
        value = skew_information(np.diag([0.9, 0.1]), PAULI_X, "bures").value
        assert value == pytest.approx(0.5 / 2 * 2 * 2 * 0.8 ** 2, rel=1e-13)

    def test_commuting_observable_is_zero(self):
        for m in DEFAULT_METRICS:
            assert skew_information(np.diag([0.7, 0.3]), PAULI_Z, m).value == 0.0


class TestPureStates:
    @pytest.mark.parametrize("metric", REGULAR)
    def test_equals_variance(self, metric):
        rho = random_pure_state(4, seed=3)
        a = random_observable(4, seed=4)
        r = skew_information(rho, a, metric)
        assert r.value == pytest.approx(variance(rho, a), rel=1e-12)
        assert r.rank_used == 1

    @pytest.mark.parametrize("metric", NON_REGULAR)
    def test_non_regular_rejects_singular(self, metric):
        with pytest.raises(SingularMetricError):
            skew_information(np.diag([1.0, 0.0]), PAULI_X, metric)


class TestOracle:
    @pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.8, 1.1, 1.5, 2.0, -0.5])
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_matches_spectral(self, p, n):
        rho = random_density(n, min_eig_floor=1e-3, seed=n)
        a = random_observable(n, seed=10 + n)
        spectral = skew_information(rho, a, f"wyd:{p}").value
        assert wyd_trace_oracle(rho, a, p) == pytest.approx(spectral, rel=1e-10)

    def test_singular_state_outside_unit_interval(self):
        with pytest.raises(SingularMetricError):
            wyd_trace_oracle(np.diag([1.0, 0.0]), PAULI_X, 1.5)

    def test_singular_state_inside_unit_interval(self):
        rho = random_density(3, seed=1, rank=1)
        a = random_observable(3, seed=2)
        assert wyd_trace_oracle(rho, a, 0.3) == pytest.approx(variance(rho, a), rel=1e-10)

    @pytest.mark.parametrize("p", [0.0, 1.0, 3.0])
    def test_rejects_p(self, p):
        with pytest.raises(UnsupportedParameterError):
            wyd_trace_oracle(np.eye(2) / 2, PAULI_X, p)


class TestMetricInner:
    def test_kubo_diagonal(self):
        rho = np.diag([0.6, 0.4])
        k = metric_inner(rho, PAULI_Z, PAULI_Z, "kubo")
        assert k.real == pytest.approx(1 / 0.6 + 1 / 0.4)

    def test_hermitian_form(self):
        rho = random_density(3, seed=5)
        a, b = random_observable(3, seed=6), random_observable(3, seed=7)
        kab = metric_inner(rho, a, b, "wyd:0.3")
        kba = metric_inner(rho, b, a, "wyd:0.3")
        assert kab == pytest.approx(np.conj(kba), rel=1e-12)
        assert metric_inner(rho, a, a, "wyd:0.3").real > 0

    @pytest.mark.parametrize("metric", REGULAR)
    def test_skew_from_commutator(self, metric):
        rho = random_density(3, seed=8)
        a = random_observable(3, seed=9)
        spec = get_metric(metric)
        k = metric_inner(rho, commutator_i(rho, a), commutator_i(rho, a), spec).real
        value = skew_information(rho, a, spec).value
        assert value == pytest.approx(spec.metric_constant / 2 * k, rel=1e-10)

    def test_singular_kernel_component_raises(self):
        with pytest.raises(SingularMetricError):
            metric_inner(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), np.eye(2), "wyd:0.5")

    def test_singular_kernel_supported_component(self):
        a = np.diag([1.0, 0.0])
        assert metric_inner(np.diag([1.0, 0.0]), a, a, "wyd:0.5").real == pytest.approx(1.0)
        # c(1, 0) = 1 / f(0) is finite for a regular metric
        k = metric_inner(np.diag([1.0, 0.0]), PAULI_X, PAULI_X, "wyd:0.5").real
        assert k == pytest.approx(2 / 0.25)


class TestInterface:
    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            skew_information(np.eye(3) / 3, PAULI_X, "kubo")

    def test_invalid_state(self):
        with pytest.raises(ValidationError):
            skew_information(np.diag([0.5, 0.6]), PAULI_X, "kubo")

    def test_jacobi_path(self):
        rho = random_density(4, seed=11)
        a = random_observable(4, seed=12)
        x = skew_information(rho, a, "kubo").value
        y = skew_information(rho, a, "kubo", method="jacobi").value
        assert x == pytest.approx(y, rel=1e-12)

    def test_compensated(self):
        rho = random_density(6, seed=13)
        a = random_observable(6, seed=14)
        x = skew_information(rho, a, "wyd:0.5").value
        y = skew_information(rho, a, "wyd:0.5", compensated=True).value
        assert x == pytest.approx(y, rel=1e-13)

    def test_rank_cutoff(self):
        st_ = state_spectrum(np.diag([1.0 - 1e-14, 1e-14]))
        assert st_.rank == 1


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(DEFAULT_METRICS), st.integers(2, 4))
def test_unitary_covariance(seed, metric, n):
    rng = np.random.default_rng(seed)
    rho = random_density(n, min_eig_floor=1e-3, seed=rng)
    a = random_observable(n, rng)
    u = random_unitary(n, rng)
    x = skew_information(rho, a, metric).value
    y = skew_information(u @ rho @ u.conj().T, u @ a @ u.conj().T, metric).value
    assert y == pytest.approx(x, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(REGULAR), st.integers(2, 4))
def test_bounded_by_variance(seed, metric, n):
    rng = np.random.default_rng(seed)
    rho = random_density(n, seed=rng, rank=int(rng.integers(1, n + 1)))
    a = random_observable(n, rng)
    value = skew_information(rho, a, metric).value
    assert -1e-12 <= value <= variance(rho, a) + 1e-10


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(DEFAULT_METRICS), st.floats(0.05, 0.95))
def test_convex_in_state(seed, metric, lam):
    rng = np.random.default_rng(seed)
    r1 = random_density(3, min_eig_floor=1e-3, seed=rng)
    r2 = random_density(3, min_eig_floor=1e-3, seed=rng)
    a = random_observable(3, rng)
    mix = skew_information(lam * r1 + (1 - lam) * r2, a, metric).value
    ends = lam * skew_information(r1, a, metric).value + (1 - lam) * skew_information(r2, a, metric).value
    assert mix <= ends + 1e-9 * max(1.0, ends)
