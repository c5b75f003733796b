"""Bipartite states, semi-quantum states and superadditivity quantities.

Conventions: a bipartite operator lives on ``H1 (x) H2`` with
``dims = (n1, n2)``; ``rho_1`` and ``rho_2`` denote the reduced states
obtained by tracing out the other party.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import (
    as_density, as_hermitian, as_matrix, jacobi_eigen, partial_trace, ValidationError,
)
from .metrics import MetricKernel, get_metric, clamp_spectrum
from .skew import state_spectrum, skew_value, skew_weights, DEGENERACY_TOL

__all__ = [
    "SemiQuantumSpec", "aggregate", "embed", "semi_quantum_state",
    "local_measurement", "is_semi_quantum", "reduced_states",
    "superadditivity_gap", "lieb_gap", "weak_superadditivity",
    "cross_term", "cross_term_spectral", "parallelogram_residual",
    "BipartiteTerms", "bipartite_terms",
]

PROJECTION_TOL = 1e-11


def _dims(dims):
    n1, n2 = (int(d) for d in dims)
    if n1 < 1 or n2 < 1:
        raise ValidationError(f"bad bipartite dims {dims!r}")
    return n1, n2


def embed(a, dims, party):
    """``A (x) 1`` for ``party=1`` or ``1 (x) A`` for ``party=2``."""
    n1, n2 = _dims(dims)
    a = as_matrix(a)
    if party == 1:
        return np.kron(a, np.eye(n2))
    if party == 2:
        return np.kron(np.eye(n1), a)
    raise ValidationError(f"party must be 1 or 2, got {party!r}")


def aggregate(a, b, sign=1):
    """``A (x) 1 + sign * 1 (x) B``."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    dims = (a.shape[0], b.shape[0])
    return embed(a, dims, 1) + sign * embed(b, dims, 2)


def _check_projections(projections, n):
    ps = [as_hermitian(p) for p in projections]
    if any(p.shape != (n, n) for p in ps):
        raise ValidationError("projection dimension does not match the party")
    total = np.zeros((n, n), dtype=complex)
    for i, p in enumerate(ps):
        if abs(np.trace(p).real - 1.0) > PROJECTION_TOL:
            raise ValidationError(f"projection {i} is not rank one")
        for j, q in enumerate(ps):
            target = p if i == j else 0.0
            if np.max(np.abs(p @ q - target)) > PROJECTION_TOL:
                raise ValidationError(f"projections {i}, {j} are not orthogonal projections")
        total += p
    if np.max(np.abs(total - np.eye(n))) > PROJECTION_TOL:
        raise ValidationError("projections do not resolve the identity")
    return ps


@dataclass(frozen=True)
class SemiQuantumSpec:
    """``rho = sum_i p_i P_i (x) rho_i`` with rank-one projections ``P_i``.

    The constructor validates: probabilities sum to one, the ``P_i`` are
    mutually orthogonal rank-one projections summing to the identity, and
    each ``rho_i`` is a density matrix.
    """
    probabilities: tuple
    projections: tuple
    party2_states: tuple

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        if probs.ndim != 1 or np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ValidationError("probabilities must be a distribution")
        n1 = len(probs)
        if len(self.projections) != n1 or len(self.party2_states) != n1:
            raise ValidationError("need one projection and one state per probability")
        ps = _check_projections(self.projections, n1)
        states = [as_density(s) for s in self.party2_states]
        n2 = states[0].shape[0]
        if any(s.shape != (n2, n2) for s in states):
            raise ValidationError("party-2 states differ in dimension")
        object.__setattr__(self, "probabilities", tuple(probs.tolist()))
        object.__setattr__(self, "projections", tuple(ps))
        object.__setattr__(self, "party2_states", tuple(states))

    @property
    def dims(self):
        return len(self.probabilities), self.party2_states[0].shape[0]

    @classmethod
    def from_basis(cls, probabilities, basis, party2_states):
        """Build the projections from the columns of a unitary ``basis``."""
        basis = as_matrix(basis)
        projections = [np.outer(basis[:, i], basis[:, i].conj()) for i in range(basis.shape[1])]
        return cls(tuple(probabilities), tuple(projections), tuple(party2_states))


def semi_quantum_state(spec):
    n1, n2 = spec.dims
    rho = np.zeros((n1 * n2, n1 * n2), dtype=complex)
    for p, proj, sigma in zip(spec.probabilities, spec.projections, spec.party2_states):
        rho += p * np.kron(proj, sigma)
    return 0.5 * (rho + rho.conj().T)


def local_measurement(rho, projections, party=1):
    """Apply the local von Neumann measurement ``sum_i (P_i (x) 1) rho (P_i (x) 1)``."""
    rho = as_hermitian(rho)
    projections = [as_matrix(p) for p in projections]
    n = projections[0].shape[0]
    if rho.shape[0] % n:
        raise ValidationError("projection dimension does not divide the state dimension")
    other = rho.shape[0] // n
    dims = (n, other) if party == 1 else (other, n)
    _check_projections(projections, n)
    out = np.zeros_like(rho)
    for p in projections:
        e = embed(p, dims, party)
        out += e @ rho @ e
    return 0.5 * (out + out.conj().T)


def is_semi_quantum(rho, projections, party=1, tol=1e-10):
    rho = as_hermitian(rho)
    return bool(np.linalg.norm(local_measurement(rho, projections, party) - rho) <= tol)


def reduced_states(rho, dims):
    rho = as_matrix(rho)
    return partial_trace(rho, dims, 1), partial_trace(rho, dims, 2)


@dataclass(frozen=True)
class BipartiteTerms:
    """Skew informations entering the superadditivity inequalities."""
    plus: float          # I_rho(A (x) 1 + 1 (x) B)
    minus: float         # I_rho(A (x) 1 - 1 (x) B)
    a_embedded: float    # I_rho(A (x) 1)
    b_embedded: float    # I_rho(1 (x) B)
    a_reduced: float     # I_rho1(A)
    b_reduced: float     # I_rho2(B)


def _prepare(rho, a, b, dims, validate=True):
    n1, n2 = _dims(dims)
    if validate:
        rho = as_density(rho)
        a = as_hermitian(a)
        b = as_hermitian(b)
    if rho.shape[0] != n1 * n2 or a.shape[0] != n1 or b.shape[0] != n2:
        raise ValidationError("state and observables do not match the bipartite dims")
    return rho, a, b, (n1, n2)


def bipartite_terms(rho, a, b, dims, metric, *, floor=None, compensated=False, validate=True):
    rho, a, b, dims = _prepare(rho, a, b, dims, validate)
    spec = get_metric(metric)
    cut = 1e-12 if floor is None else floor
    st = state_spectrum(rho, floor=cut, validate=False)
    r1, r2 = reduced_states(rho, dims)
    st1 = state_spectrum(r1, floor=cut, validate=False)
    st2 = state_spectrum(r2, floor=cut, validate=False)
    xa = embed(a, dims, 1)
    xb = embed(b, dims, 2)
    kw = dict(floor=floor, compensated=compensated)
    w = skew_weights(st, spec, floor=floor)
    return BipartiteTerms(
        plus=skew_value(st, xa + xb, spec, weights=w, **kw),
        minus=skew_value(st, xa - xb, spec, weights=w, **kw),
        a_embedded=skew_value(st, xa, spec, weights=w, **kw),
        b_embedded=skew_value(st, xb, spec, weights=w, **kw),
        a_reduced=skew_value(st1, a, spec, **kw),
        b_reduced=skew_value(st2, b, spec, **kw),
    )


def superadditivity_gap(rho, a, b, dims, metric, *, floor=None, compensated=False,
                        validate=True):
    """``I_rho(A (x) 1 + 1 (x) B) - I_rho1(A) - I_rho2(B)``.

    Nonnegative for semi-quantum states; may be negative in general.
    ``validate=False`` skips the density and Hermiticity checks for inputs
    that are valid by construction.
    """
    rho, a, b, dims = _prepare(rho, a, b, dims, validate)
    spec = get_metric(metric)
    cut = 1e-12 if floor is None else floor
    st = state_spectrum(rho, floor=cut, validate=False)
    r1, r2 = reduced_states(rho, dims)
    kw = dict(floor=floor, compensated=compensated)
    plus = skew_value(st, aggregate(a, b, 1), spec, **kw)
    i1 = skew_value(state_spectrum(r1, floor=cut, validate=False), a, spec, **kw)
    i2 = skew_value(state_spectrum(r2, floor=cut, validate=False), b, spec, **kw)
    return plus - i1 - i2


def lieb_gap(rho, a, dims, metric, party=1):
    """``I_rho(A (x) 1) - I_rho1(A)`` (or the mirror for ``party=2``)."""
    n1, n2 = _dims(dims)
    rho = as_density(rho)
    a = as_hermitian(a)
    if a.shape[0] != (n1 if party == 1 else n2):
        raise ValidationError("observable does not match the party dimension")
    spec = get_metric(metric)
    whole = skew_value(state_spectrum(rho, validate=False), embed(a, dims, party), spec)
    reduced = partial_trace(rho, dims, party)
    return whole - skew_value(state_spectrum(reduced, validate=False), a, spec)


def weak_superadditivity(rho, a, b, dims, metric):
    """Margins of the two weak superadditivity inequalities.

    Returns ``(I(X+) - (I1 + I2)/2, I(X+) + I(X-) - 2 (I1 + I2))``; both are
    nonnegative for every bipartite state.
    """
    t = bipartite_terms(rho, a, b, dims, metric)
    reduced = t.a_reduced + t.b_reduced
    return t.plus - 0.5 * reduced, t.plus + t.minus - 2.0 * reduced


def parallelogram_residual(rho, a, b, dims, metric):
    """``|I(X+) + I(X-) - 2 (I(A (x) 1) + I(1 (x) B))|``."""
    t = bipartite_terms(rho, a, b, dims, metric)
    return abs(t.plus + t.minus - 2.0 * (t.a_embedded + t.b_embedded))


def cross_term(rho, a, b, dims, metric, *, floor=None):
    """Real part of ``K_rho(i[rho, A (x) 1], i[rho, 1 (x) B])``.

    Computed as ``Tr (A (x) 1) c_hat(L_rho, R_rho) (1 (x) B)``, which stays
    finite on singular states for regular metrics.
    """
    rho, a, b, dims = _prepare(rho, a, b, dims)
    kernel = MetricKernel(get_metric(metric)) if floor is None else \
        MetricKernel(get_metric(metric), eigenvalue_floor=floor)
    st = state_spectrum(rho, floor=1e-12 if floor is None else floor, validate=False)
    xa = st.to_basis(embed(a, dims, 1))
    xb = st.to_basis(embed(b, dims, 2))
    lam = st.eigenvalues
    ch = kernel.c_hat(lam[:, None], lam[None, :])
    ch = np.where(np.abs(lam[:, None] - lam[None, :]) < DEGENERACY_TOL, 0.0, ch)
    return float(np.sum(ch * xa.conj() * xb).real)


def cross_term_spectral(spec, a, b, metric):
    """Cross term of a semi-quantum state from its product spectral resolution.

    The eigenprojections of ``rho`` are ``P_i (x) Q_ij`` with eigenvalues
    ``p_i lambda_ij``, where ``rho_i = sum_j lambda_ij Q_ij``. The cross term
    is the double sum over pairs of eigenprojections

        sum c_hat(mu_a, mu_b) Tr(A P_i P_i') Tr(Q_ij B Q_i'j')

    evaluated literally. No eigendecomposition of the full state is used;
    each ``rho_i`` is diagonalized with the Jacobi solver.
    """
    kernel = MetricKernel(get_metric(metric))
    a = as_hermitian(a)
    b = as_hermitian(b)
    n1, n2 = spec.dims
    if a.shape[0] != n1 or b.shape[0] != n2:
        raise ValidationError("observables do not match the semi-quantum dims")
    mus, p_index, q_vecs = [], [], []
    for i, (p, sigma) in enumerate(zip(spec.probabilities, spec.party2_states)):
        sp = jacobi_eigen(sigma)
        lam = clamp_spectrum(sp.eigenvalues)
        for j in range(n2):
            mus.append(p * lam[j])
            p_index.append(i)
            q_vecs.append(sp.unitary[:, j])
    mus = np.array(mus)
    # Tr(A P_i P_i') and <q_b| ... from Tr(Q_a B Q_b) = <q_a|B|q_b> <q_b|q_a>
    tr_a = np.array([[np.trace(a @ spec.projections[i] @ spec.projections[k])
                      for k in p_index] for i in p_index])
    qv = np.array(q_vecs).T
    bq = qv.conj().T @ b @ qv
    overlap = qv.conj().T @ qv
    tr_b = bq * overlap.T
    ch = kernel.c_hat(mus[:, None], mus[None, :])
    return float(np.sum(ch * tr_a * tr_b).real)
