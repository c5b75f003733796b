"""Derivative-free search for negative superadditivity gaps.

A point of the search space is a real vector decoded into a bipartite state
and two unit-norm observables. Three encodings are available:

``"none"``
    any full-rank state ``(1 - delta) G G^dagger / Tr + delta I / n``;
``"semiquantum"``
    ``sum_i p_i P_i (x) rho_i`` with ``P_i`` from a rotated basis;
``"product"``
    ``rho_1 (x) rho_2``.

The optimizer is a multi-restart random-direction descent with an adaptive
step: a successful step grows the radius, a failed one shrinks it.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bipartite import superadditivity_gap
from .checker import worker_count
from .metrics import get_metric, SingularMetricError

__all__ = [
    "SearchResult", "param_size", "decode", "violation_search", "reverify",
    "DECODE_MIX", "REVERIFY_TOL", "CONSTRAINTS",
]

DECODE_MIX = 1e-6
REVERIFY_TOL = 1e-8
REVERIFY_FLOOR = 1e-14
CONSTRAINTS = ("none", "semiquantum", "product")


def _herm_size(n):
    return n * n


def _herm(v, n):
    """Hermitian matrix from ``n**2`` reals: diagonal, then real and imaginary upper parts."""
    m = np.zeros((n, n), dtype=complex)
    m[np.diag_indices(n)] = v[:n]
    iu = np.triu_indices(n, 1)
    k = len(iu[0])
    m[iu] = v[n:n + k] + 1j * v[n + k:n + 2 * k]
    return m + np.triu(m, 1).conj().T


def _observable(v, n):
    a = _herm(v, n)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.eye(n, dtype=complex) / np.sqrt(n)
    return a / norm


def _factor_state(v, n, delta=DECODE_MIX):
    g = (v[:n * n] + 1j * v[n * n:]).reshape(n, n)
    gg = g @ g.conj().T
    tr = np.trace(gg).real
    if tr == 0.0:
        return np.eye(n, dtype=complex) / n
    rho = (1.0 - delta) * gg / tr + delta * np.eye(n) / n
    return 0.5 * (rho + rho.conj().T)


def _unitary(v, n):
    h = _herm(v, n)
    lam, u = np.linalg.eigh(h)
    return (u * np.exp(1j * lam)) @ u.conj().T


def _layout(dims, constrain):
    n1, n2 = dims
    n = n1 * n2
    if constrain == "none":
        blocks = [("state", 2 * n * n)]
    elif constrain == "product":
        blocks = [("state1", 2 * n1 * n1), ("state2", 2 * n2 * n2)]
    elif constrain == "semiquantum":
        blocks = [("weights", n1), ("basis", _herm_size(n1))]
        blocks += [(f"party2_{i}", 2 * n2 * n2) for i in range(n1)]
    else:
        raise ValueError(f"unknown constraint {constrain!r}; choose from {CONSTRAINTS}")
    blocks += [("a", _herm_size(n1)), ("b", _herm_size(n2))]
    return blocks


def param_size(dims, constrain="none"):
    return sum(size for _, size in _layout(dims, constrain))


def _semi_quantum_state(parts, dims):
    n1, n2 = dims
    w = np.exp(parts["weights"] - parts["weights"].max())
    probs = (1.0 - DECODE_MIX) * w / w.sum() + DECODE_MIX / n1
    probs = probs / probs.sum()
    basis = _unitary(parts["basis"], n1)
    rho = np.zeros((n1 * n2, n1 * n2), dtype=complex)
    for i in range(n1):
        u = basis[:, i]
        rho += probs[i] * np.kron(np.outer(u, u.conj()), _factor_state(parts[f"party2_{i}"], n2))
    return 0.5 * (rho + rho.conj().T)


def decode(x, dims, constrain="none"):
    """Map a parameter vector to ``(rho, A, B)``.

    The state is full rank by construction (every encoding mixes in
    ``1e-6`` of the maximally mixed state) and ``A``, ``B`` have unit
    Frobenius norm. The zero vector decodes to ``I/n``.
    """
    x = np.asarray(x, dtype=float)
    dims = (int(dims[0]), int(dims[1]))
    layout = _layout(dims, constrain)
    if x.shape != (sum(s for _, s in layout),):
        raise ValueError(f"expected {param_size(dims, constrain)} parameters, got {x.shape}")
    parts, pos = {}, 0
    for name, size in layout:
        parts[name] = x[pos:pos + size]
        pos += size
    n1, n2 = dims
    if constrain == "none":
        rho = _factor_state(parts["state"], n1 * n2)
    elif constrain == "product":
        rho = np.kron(_factor_state(parts["state1"], n1), _factor_state(parts["state2"], n2))
    else:
        rho = _semi_quantum_state(parts, dims)
    return rho, _observable(parts["a"], n1), _observable(parts["b"], n2)


@dataclass(frozen=True)
class SearchResult:
    best_gap: float
    state: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    metric_id: str
    dims: tuple
    constrain: str
    evaluations: int
    reverified: bool = False
    reverified_gap: float | None = None
    history: tuple = field(default=(), repr=False)

    @property
    def violation_found(self):
        """A negative gap that survived re-verification."""
        return self.reverified and self.best_gap < -1e-9

    def to_dict(self):
        from .io import matrix_to_json
        return {
            "best_gap": self.best_gap,
            "reverified": self.reverified,
            "reverified_gap": self.reverified_gap,
            "violation_found": self.violation_found,
            "metric_id": self.metric_id,
            "dims": list(self.dims),
            "constrain": self.constrain,
            "evaluations": self.evaluations,
            "state": matrix_to_json(self.state),
            "a": matrix_to_json(self.a),
            "b": matrix_to_json(self.b),
        }


def _objective(x, dims, constrain, spec):
    rho, a, b = decode(x, dims, constrain)
    try:
        return superadditivity_gap(rho, a, b, dims, spec, validate=False)
    except SingularMetricError:
        return np.inf


def _local_search(x0, budget, rng, dims, constrain, spec):
    """Random-direction descent from ``x0``; returns ``(x, value, evaluations, history)``."""
    x = x0
    fx = _objective(x, dims, constrain, spec)
    used = 1
    step = 0.5
    history = [fx]
    while used < budget:
        d = rng.standard_normal(x.size)
        d *= step / np.linalg.norm(d)
        y = x + d
        fy = _objective(y, dims, constrain, spec)
        used += 1
        if fy < fx:
            x, fx = y, fy
            step = min(step * 2.0, 10.0)
            history.append(fx)
        else:
            step *= 0.85
            if step < 1e-7:
                step = 0.5
    return x, fx, used, history


def _restart(args):
    seed, budget, dims, constrain, metric_id = args
    rng = np.random.default_rng(seed)
    spec = get_metric(metric_id)
    x0 = rng.standard_normal(param_size(dims, constrain))
    return _local_search(x0, budget, rng, dims, constrain, spec)


def violation_search(metric_id, dims, budget=20000, seed=0, restarts=4, constrain="none",
                     workers=None):
    """Minimize the superadditivity gap over the chosen encoding.

    Parameters
    ----------
    metric_id : str
        Catalog id of the metric.
    dims : tuple of int
        ``(n1, n2)``.
    budget : int
        Total number of objective evaluations, split evenly across restarts.
    seed : int
        Master seed; restart ``k`` uses an independent child stream.
    restarts : int
        Number of independent random initializations.
    constrain : {"none", "semiquantum", "product"}
        Feasible set of the state.

    Returns
    -------
    SearchResult
        The most negative gap found, already passed through :func:`reverify`.
    """
    if not budget >= restarts >= 1:
        raise ValueError("need budget >= restarts >= 1")
    if constrain not in CONSTRAINTS:
        raise ValueError(f"unknown constraint {constrain!r}")
    spec = get_metric(metric_id)
    dims = (int(dims[0]), int(dims[1]))
    children = np.random.SeedSequence(int(seed)).spawn(restarts)
    shares = [budget // restarts + (1 if k < budget % restarts else 0) for k in range(restarts)]
    jobs = [(child, share, dims, constrain, spec.id) for child, share in zip(children, shares)]
    n = worker_count(workers)
    if n > 1 and restarts > 1:
        with ProcessPoolExecutor(max_workers=min(n, restarts)) as pool:
            outcomes = list(pool.map(_restart, jobs))
    else:
        outcomes = [_restart(job) for job in jobs]
    best = min(range(restarts), key=lambda k: outcomes[k][1])
    x, fx, _, history = outcomes[best]
    rho, a, b = decode(x, dims, constrain)
    result = SearchResult(float(fx), rho, a, b, spec.id, dims, constrain,
                          sum(o[2] for o in outcomes), history=tuple(history))
    return reverify(result)


def reverify(result):
    """Recompute the gap with a ``1e-14`` floor and compensated sums.

    ``reverified`` is set only when the recomputed gap agrees with
    ``best_gap`` to ``1e-8``; otherwise the result is a numerical artifact.
    """
    try:
        gap = superadditivity_gap(result.state, result.a, result.b, result.dims, result.metric_id,
                                  floor=REVERIFY_FLOOR, compensated=True)
    except SingularMetricError:
        return replace(result, reverified=False, reverified_gap=None)
    ok = bool(np.isfinite(gap) and abs(gap - result.best_gap) <= REVERIFY_TOL)
    return replace(result, reverified=ok, reverified_gap=float(gap))
