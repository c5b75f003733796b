"""Monotone metric inner products and metric adjusted skew information.

Everything is evaluated in the eigenbasis of the state: with
``rho = U diag(lam) U^dagger`` and ``A_hat = U^dagger A U``,

    K_rho(A, B) = sum_jk conj(A_hat[j, k]) c(lam_j, lam_k) B_hat[j, k]
    I_rho(A)    = (m / 2) sum_jk c_hat(lam_j, lam_k) |A_hat[j, k]|**2

for a regular metric with metric constant ``m = f(0)``. A non-regular
metric has no metric constant and the unbounded skew information is
``K_rho(i[rho, A], i[rho, A])`` with no prefactor.
"""

from dataclasses import dataclass
import math

import numpy as np

from .linalg import as_density, as_hermitian, as_matrix, hermitian_eigen, ValidationError
from .metrics import (
    MetricKernel, get_metric, clamp_spectrum, SingularMetricError,
    UnsupportedParameterError,
)

__all__ = [
    "SkewResult", "StateSpectrum", "state_spectrum", "metric_inner",
    "skew_information", "skew_value", "skew_weights", "wyd_trace_oracle",
    "DEGENERACY_TOL", "RANK_TOL",
]

DEGENERACY_TOL = 1e-10
RANK_TOL = 1e-12


@dataclass(frozen=True)
class SkewResult:
    value: float
    metric_id: str
    regular_branch: bool
    rank_used: int

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class StateSpectrum:
    """Cleaned spectral data of a density matrix, reusable across observables."""
    eigenvalues: np.ndarray
    unitary: np.ndarray

    @property
    def rank(self):
        return int(np.count_nonzero(self.eigenvalues))

    def to_basis(self, a):
        u = self.unitary
        return u.conj().T @ a @ u


def state_spectrum(rho, floor=RANK_TOL, method="lapack", validate=True):
    """Eigendecomposition of a state with rounding negatives clamped to 0.

    Eigenvalues below ``floor * max_eigenvalue`` are set to exactly 0 so the
    boundary rules of a regular kernel apply to them.
    """
    rho = as_density(rho) if validate else as_matrix(rho)
    spec = hermitian_eigen(rho, method=method, check=False)
    lam = clamp_spectrum(spec.eigenvalues)
    lam[lam < floor * lam.max()] = 0.0
    return StateSpectrum(lam, spec.unitary)


def _kernel(metric, floor=None):
    spec = get_metric(metric)
    if floor is None:
        return MetricKernel(spec)
    return MetricKernel(spec, eigenvalue_floor=floor)


def _c_hat_matrix(kernel, lam):
    x = lam[:, None]
    y = lam[None, :]
    ch = kernel.c_hat(x, y)
    # near-degenerate pairs contribute O(gap**2); drop them exactly
    return np.where(np.abs(x - y) < DEGENERACY_TOL, 0.0, ch)


def _sum(terms, compensated):
    if compensated:
        return math.fsum(np.ravel(terms).tolist())
    return float(np.sum(terms))


def metric_inner(rho, a, b, metric, *, floor=None, spectrum=None):
    """Monotone metric ``K_rho(A, B) = Tr A^* c(L_rho, R_rho) B``.

    ``A`` and ``B`` may be arbitrary square matrices. For a regular metric on
    a singular state the kernel is infinite on the null space; any nonzero
    component there raises :class:`SingularMetricError`.
    """
    kernel = _kernel(metric, floor)
    st = spectrum if spectrum is not None else state_spectrum(rho)
    a = as_matrix(a)
    b = as_matrix(b)
    n = st.eigenvalues.shape[0]
    if a.shape != (n, n) or b.shape != (n, n):
        raise ValidationError("dimension mismatch between state and operators")
    ah = st.to_basis(a)
    bh = st.to_basis(b)
    c = kernel.c(st.eigenvalues[:, None], st.eigenvalues[None, :])
    weight = ah.conj() * bh
    bad = ~np.isfinite(c)
    if np.any(bad & (np.abs(weight) > 0)):
        raise SingularMetricError("metric is infinite on the kernel of a singular state")
    c = np.where(bad, 0.0, c)
    return complex(np.sum(weight * c))


def skew_weights(st, metric, *, floor=None):
    """Matrix ``w[j, k]`` with ``I_rho(A) = sum_jk w[j, k] |A_hat[j, k]|**2``.

    Includes the ``m / 2`` prefactor for regular metrics. Reusable for every
    observable evaluated in the same state.
    """
    kernel = _kernel(metric, floor)
    ch = _c_hat_matrix(kernel, st.eigenvalues)
    if kernel.regular:
        return 0.5 * kernel.f.metric_constant * ch
    return ch


def skew_value(st, a, metric, *, floor=None, compensated=False, weights=None):
    """Skew information from precomputed :class:`StateSpectrum`; returns a float."""
    if weights is None:
        weights = skew_weights(st, metric, floor=floor)
    ah = st.to_basis(a)
    return _sum(weights * (ah.real ** 2 + ah.imag ** 2), compensated)


def skew_information(rho, a, metric, *, floor=None, compensated=False, method="lapack"):
    """Metric adjusted skew information of ``A`` in the state ``rho``.

    Parameters
    ----------
    rho : array_like
        Density matrix. Singular states are allowed for regular metrics.
    a : array_like
        Hermitian observable of the same dimension.
    metric : str or MonotoneFunctionSpec
        Catalog id such as ``"wyd:0.5"`` or ``"kubo"``.
    floor : float, optional
        Rank cut-off relative to the largest eigenvalue, and the smallest
        eigenvalue a non-regular kernel accepts. Defaults to ``1e-12``.
    compensated : bool
        Use ``math.fsum`` for the spectral double sum.

    Returns
    -------
    SkewResult

    Raises
    ------
    SingularMetricError
        Non-regular metric and an eigenvalue below ``floor``.
    """
    spec = get_metric(metric)
    a = as_hermitian(a)
    rho = as_density(rho)
    if a.shape != rho.shape:
        raise ValidationError(f"dimension mismatch: state {rho.shape}, observable {a.shape}")
    st = state_spectrum(rho, floor=RANK_TOL if floor is None else floor,
                        method=method, validate=False)
    value = skew_value(st, a, spec, floor=floor, compensated=compensated)
    return SkewResult(value, spec.id, spec.regular, st.rank)


def wyd_trace_oracle(rho, a, p, method="jacobi"):
    """Skew information of the ``f_p`` metric from the commutator trace formula.

    For ``0 < p < 1`` this is ``-1/2 Tr [rho^p, A][rho^(1-p), A]``; outside
    that interval the unbounded form ``-1/(p(1-p)) Tr [rho^p, A][rho^(1-p), A]``
    is used. Matrix powers use the Jacobi eigensolver by default so the
    result shares no eigen routine with :func:`skew_information`.
    """
    p = float(p)
    if not (-1.0 <= p <= 2.0) or p in (0.0, 1.0):
        raise UnsupportedParameterError(f"oracle needs p in [-1, 2] without 0 and 1, got {p}")
    rho = as_density(rho)
    a = as_hermitian(a)
    if a.shape != rho.shape:
        raise ValidationError(f"dimension mismatch: state {rho.shape}, observable {a.shape}")
    spec = hermitian_eigen(rho, method=method)
    lam = clamp_spectrum(spec.eigenvalues)
    # same rank cut-off as state_spectrum; lam**p magnifies rounding-level eigenvalues
    lam[lam < RANK_TOL * lam.max()] = 0.0
    if not 0.0 < p < 1.0 and np.any(lam <= 0):
        raise SingularMetricError("unbounded skew information needs a full-rank state")
    u = spec.unitary
    rp = (u * lam ** p) @ u.conj().T
    rq = (u * lam ** (1.0 - p)) @ u.conj().T
    trace = np.trace((rp @ a - a @ rp) @ (rq @ a - a @ rq)).real
    if 0.0 < p < 1.0:
        return float(-0.5 * trace)
    return float(-trace / (p * (1.0 - p)))
