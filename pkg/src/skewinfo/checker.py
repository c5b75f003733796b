"""Randomized property suite for the skew information and its kernels.

Every check draws independent trials; each trial derives its own seed from
``(config.seed, check_id, metric_id, dims, trial_index)`` so a report does not
depend on execution order, and any single trial can be replayed from the
seed stored in its :class:`CheckReport`.

A trial returns a signed *residual*: nonnegative means the property holds,
and the trial fails when the residual is below ``-tolerance``.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
import os
import zlib

import numpy as np

from .linalg import (
    as_hermitian, hermitian_eigen, matrix_function, partial_trace, time_evolve,
    variance, DomainError,
)
from .metrics import (
    MetricKernel, get_metric, DEFAULT_METRICS, UnsupportedParameterError,
)
from .skew import state_spectrum, skew_value, wyd_trace_oracle, metric_inner
from .bipartite import (
    SemiQuantumSpec, semi_quantum_state, bipartite_terms, cross_term,
    cross_term_spectral, embed,
)

__all__ = [
    "TrialConfig", "CheckReport", "random_density", "random_pure_state",
    "random_observable", "random_unitary", "random_semi_quantum_spec",
    "mix_semi_quantum", "loewner_matrix", "loewner_min_eig", "g_p_value",
    "midpoint_operator_convexity", "run_suite", "replay", "trial_seed",
    "CHECKS", "FIXTURES", "worker_count",
]

# identity mixing for non-regular metrics keeps spectra away from zero
NON_REGULAR_MIX = 1e-4
CONVEXITY_SPECTRUM = (0.05, 5.0)
LOEWNER_RANGE = (1e-3, 1e3)
LOEWNER_MAX_NODES = 12
LOEWNER_MIN_RATIO = 1.05


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_density(n, min_eig_floor=0.0, seed=None, rank=None):
    """Ginibre density matrix ``G G^dagger / Tr(G G^dagger)``.

    With ``rank`` given, ``G`` is ``n x rank``. A positive ``min_eig_floor``
    mixes in the smallest amount of ``I/n`` that lifts every eigenvalue to
    at least the floor.
    """
    rng = np.random.default_rng(seed)
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    r = n if rank is None else int(rank)
    g = _complex_gaussian(rng, (n, r))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    rho = 0.5 * (rho + rho.conj().T)
    if min_eig_floor > 0:
        if min_eig_floor > 1.0 / n:
            raise ValueError("eigenvalue floor exceeds 1/n")
        target = min_eig_floor * (1.0 + 1e-9)
        lam_min = np.linalg.eigvalsh(rho)[0]
        if lam_min < target:
            delta = min(1.0, (target - lam_min) / (1.0 / n - lam_min))
            rho = (1.0 - delta) * rho + delta * np.eye(n) / n
    return rho


def random_pure_state(n, seed=None):
    rng = np.random.default_rng(seed)
    psi = _complex_gaussian(rng, n)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_observable(n, seed=None):
    rng = np.random.default_rng(seed)
    g = _complex_gaussian(rng, (n, n))
    return 0.5 * (g + g.conj().T)


def random_unitary(n, seed=None):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(_complex_gaussian(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_semi_quantum_spec(n1, n2, seed=None):
    """Flat-simplex weights, a rotated basis for party 1, Ginibre party-2 states."""
    rng = np.random.default_rng(seed)
    probs = rng.dirichlet(np.ones(n1))
    basis = random_unitary(n1, rng)
    states = [random_density(n2, seed=rng) for _ in range(n1)]
    return SemiQuantumSpec.from_basis(probs / probs.sum(), basis, states)


def mix_semi_quantum(spec, delta):
    """Spec of ``(1 - delta) rho + delta I / n``, which is again semi-quantum."""
    n1, n2 = spec.dims
    probs, states = [], []
    for p, sigma in zip(spec.probabilities, spec.party2_states):
        w = (1.0 - delta) * p + delta / n1
        probs.append(w)
        states.append(((1.0 - delta) * p * sigma + (delta / n1) * np.eye(n2) / n2) / w)
    probs = np.array(probs)
    return SemiQuantumSpec(tuple(probs / probs.sum()), spec.projections, tuple(states))


# ---------------------------------------------------------------------------
# scalar-function batteries
# ---------------------------------------------------------------------------

def _complex_step(phi, x):
    h = 1e-30
    return np.imag(phi(x + 1j * h)) / h


def loewner_matrix(phi, nodes, derivative="central"):
    """Divided-difference matrix ``(phi(x_j) - phi(x_k)) / (x_j - x_k)``.

    The diagonal holds ``phi'(x_j)``: by central difference with step
    ``1e-6 * max(1, x_j)`` (``"central"``), by complex step (``"complex"``,
    for functions that accept complex input), or from a callable.
    """
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least two nodes")
    if np.any(x <= 0):
        raise DomainError("nodes must be positive")
    if np.unique(x).size != x.size:
        raise ValueError("duplicate nodes")
    fx = np.real(np.asarray(phi(x), dtype=complex))
    diff = x[:, None] - x[None, :]
    with np.errstate(all="ignore"):
        mat = (fx[:, None] - fx[None, :]) / diff
    if callable(derivative):
        diag = np.asarray(derivative(x), dtype=float)
    elif derivative == "complex":
        diag = _complex_step(phi, x.astype(complex))
    elif derivative == "central":
        eps = 1e-6 * np.maximum(1.0, x)
        diag = np.real(np.asarray(phi(x + eps), dtype=complex) - np.asarray(phi(x - eps), dtype=complex)) / (2 * eps)
    else:
        raise ValueError(f"unknown derivative mode {derivative!r}")
    mat[np.diag_indices_from(mat)] = diag
    return 0.5 * (mat + mat.T)


def loewner_min_eig(phi, nodes, derivative="central", normalize=False):
    """Smallest eigenvalue of the Loewner matrix of ``phi`` at ``nodes``.

    ``normalize=True`` first applies the congruence ``D L D`` with
    ``D = diag(L_jj)**(-1/2)``. Congruence preserves inertia, so the sign of
    the minimum is unchanged, but rounding is measured relative to a unit
    diagonal rather than to the largest entry.
    """
    mat = loewner_matrix(phi, nodes, derivative)
    if normalize:
        d = np.diag(mat)
        if np.all(d > 0):
            s = 1.0 / np.sqrt(d)
            mat = mat * s[:, None] * s[None, :]
    return float(np.linalg.eigvalsh(mat)[0])


def g_p_value(p, t):
    """``(t^p - 1)/(t - 1) + (t^(1-p) - 1)/(t - 1)`` for ``1 < p <= 2``; equals 1 at ``t = 1``."""
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise UnsupportedParameterError(f"g_p needs 1 < p <= 2, got {p}")
    t = np.asarray(t)
    if np.any(np.real(t) <= 0):
        raise DomainError("g_p needs t > 0")
    q = 1.0 - p
    s = t - 1.0
    with np.errstate(all="ignore"):
        lt = np.log(t)
        direct = (np.expm1(p * lt) + np.expm1(q * lt)) / s
    series = (p * (1.0 + (p - 1.0) * s / 2.0 + (p - 1.0) * (p - 2.0) * s * s / 6.0)
              + q * (1.0 + (q - 1.0) * s / 2.0 + (q - 1.0) * (q - 2.0) * s * s / 6.0))
    out = np.where(np.abs(s) < 1e-4, series, direct)
    return out if np.ndim(out) else out[()]


def _random_pd(rng, n, lo, hi):
    u = random_unitary(n, rng)
    lam = rng.uniform(lo, hi, n)
    return (u * lam) @ u.conj().T


def _midpoint_residual(phi, x, y):
    fx = matrix_function(x, phi)
    fy = matrix_function(y, phi)
    fm = matrix_function(0.5 * (x + y), phi)
    gap = 0.5 * (fx + fy) - fm
    return float(np.linalg.eigvalsh(0.5 * (gap + gap.conj().T))[0])


def midpoint_operator_convexity(phi, n, trials, seed=None, spectrum=CONVEXITY_SPECTRUM):
    """Smallest eigenvalue of ``(phi(X) + phi(Y))/2 - phi((X + Y)/2)`` over random pairs.

    ``X`` and ``Y`` are random positive definite matrices with spectra in
    ``spectrum``. A value ``>= -tol`` is consistent with operator convexity.
    """
    if n < 2:
        raise ValueError("midpoint test needs n >= 2")
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(trials):
        x = _random_pd(rng, n, *spectrum)
        y = _random_pd(rng, n, *spectrum)
        worst = min(worst, _midpoint_residual(phi, x, y))
    return float(worst)


FIXTURES = {
    "square": lambda t: t * t,
}


# ---------------------------------------------------------------------------
# trials
# ---------------------------------------------------------------------------

def _state(rng, n, spec, full_rank=False):
    """Random state suited to ``spec``: any rank if regular, identity-mixed otherwise."""
    if spec.regular:
        rank = n if full_rank else int(rng.integers(1, n + 1))
        return random_density(n, seed=rng, rank=rank)
    rho = random_density(n, seed=rng)
    return (1.0 - NON_REGULAR_MIX) * rho + NON_REGULAR_MIX * np.eye(n) / n


def _skew(rho, a, spec):
    return skew_value(state_spectrum(rho, validate=False), a, spec)


def _abs(diff):
    return -abs(diff)


def _rel(diff, scale):
    return -abs(diff) / abs(scale) if scale != 0 else -abs(diff)


def _abs_for(spec, diff, scale):
    """Absolute residual for bounded (regular) metrics.

    Unbounded values grow like ``1 / min eigenvalue``, so for non-regular
    metrics the residual is measured against ``max(1, |scale|)``.
    """
    if spec.regular:
        return _abs(diff)
    return -abs(diff) / max(1.0, abs(scale))


def _t_state_convexity(rng, spec, n, cfg):
    r1 = _state(rng, n, spec)
    r2 = _state(rng, n, spec)
    a = random_observable(n, rng)
    lam = float(rng.integers(1, 10)) / 10.0
    mix = lam * r1 + (1.0 - lam) * r2
    return lam * _skew(r1, a, spec) + (1.0 - lam) * _skew(r2, a, spec) - _skew(mix, a, spec)


def _t_time_invariance(rng, spec, n, cfg):
    rho = _state(rng, n, spec)
    a = random_observable(n, rng)
    v = hermitian_eigen(a).unitary
    h = (v * rng.standard_normal(n)) @ v.conj().T
    base = _skew(rho, a, spec)
    return min(_abs_for(spec, _skew(time_evolve(rho, h, t), a, spec) - base, base)
               for t in (0.3, 1.7))


def _t_pure_state_variance(rng, spec, n, cfg):
    rho = random_pure_state(n, rng)
    a = random_observable(n, rng)
    var = variance(rho, a)
    return _abs(_skew(rho, a, spec) - var)


def _t_variance_bounds(rng, spec, n, cfg):
    rho = _state(rng, n, spec)
    a = random_observable(n, rng)
    value = _skew(rho, a, spec)
    return min(value, variance(rho, a) - value)


def _t_oracle_equivalence(rng, spec, n, cfg):
    rho = _state(rng, n, spec, full_rank=True)
    a = random_observable(n, rng)
    value = _skew(rho, a, spec)
    return _rel(value - wyd_trace_oracle(rho, a, spec.parameter), value)


def _t_scale_covariance(rng, spec, n, cfg):
    rho = _state(rng, n, spec)
    a = random_observable(n, rng)
    c = float(rng.uniform(-3.0, 3.0))
    st = state_spectrum(rho, validate=False)
    scaled = c * c * skew_value(st, a, spec)
    return _rel(skew_value(st, c * a, spec) - scaled, scaled)


def _t_additivity(rng, spec, dims, cfg):
    n1, n2 = dims
    r1, r2 = _state(rng, n1, spec), _state(rng, n2, spec)
    a1, a2 = random_observable(n1, rng), random_observable(n2, rng)
    whole = _skew(np.kron(r1, r2), embed(a1, dims, 1) + embed(a2, dims, 2), spec)
    parts = _skew(r1, a1, spec) + _skew(r2, a2, spec)
    return _rel(whole - parts, parts)


def _bipartite_sample(rng, spec, dims):
    n1, n2 = dims
    rho = _state(rng, n1 * n2, spec)
    return rho, random_observable(n1, rng), random_observable(n2, rng)


def _t_lieb(rng, spec, dims, cfg):
    rho, a, b = _bipartite_sample(rng, spec, dims)
    t = bipartite_terms(rho, a, b, dims, spec, validate=False)
    return min(t.a_embedded - t.a_reduced, t.b_embedded - t.b_reduced)


def _t_weak(rng, spec, dims, cfg):
    rho, a, b = _bipartite_sample(rng, spec, dims)
    t = bipartite_terms(rho, a, b, dims, spec, validate=False)
    return t.plus - 0.5 * (t.a_reduced + t.b_reduced)


def _t_weak2(rng, spec, dims, cfg):
    rho, a, b = _bipartite_sample(rng, spec, dims)
    t = bipartite_terms(rho, a, b, dims, spec, validate=False)
    return t.plus + t.minus - 2.0 * (t.a_reduced + t.b_reduced)


def _t_parallelogram(rng, spec, dims, cfg):
    rho, a, b = _bipartite_sample(rng, spec, dims)
    t = bipartite_terms(rho, a, b, dims, spec, validate=False)
    rhs = 2.0 * (t.a_embedded + t.b_embedded)
    return _abs_for(spec, t.plus + t.minus - rhs, rhs)


def _t_contraction(rng, spec, dims, cfg):
    n1, n2 = dims
    n = n1 * n2
    rho = random_density(n, min_eig_floor=1e-3 / n, seed=rng)
    x = random_observable(n, rng)
    whole = metric_inner(rho, x, x, spec).real
    worst = np.inf
    for keep in (1, 2):
        sub = partial_trace(rho, dims, keep)
        xs = partial_trace(x, dims, keep)
        worst = min(worst, whole - metric_inner(sub, xs, xs, spec).real)
    return worst


def _semi_quantum_sample(rng, spec, dims):
    sq = random_semi_quantum_spec(dims[0], dims[1], rng)
    if not spec.regular:
        sq = mix_semi_quantum(sq, NON_REGULAR_MIX)
    return sq, random_observable(dims[0], rng), random_observable(dims[1], rng)


def _t_semiquantum_gap(rng, spec, dims, cfg):
    sq, a, b = _semi_quantum_sample(rng, spec, dims)
    t = bipartite_terms(semi_quantum_state(sq), a, b, dims, spec, validate=False)
    return t.plus - t.a_reduced - t.b_reduced


def _t_cross_term(rng, spec, dims, cfg):
    sq, a, b = _semi_quantum_sample(rng, spec, dims)
    rho = semi_quantum_state(sq)
    value = max(abs(cross_term(rho, a, b, dims, spec)), abs(cross_term_spectral(sq, a, b, spec)))
    if spec.regular:
        return -value
    t = bipartite_terms(rho, a, b, dims, spec, validate=False)
    return _abs_for(spec, value, t.a_embedded + t.b_embedded)


def _loewner_nodes(rng, trial_index):
    lo, hi = np.log(LOEWNER_RANGE[0]), np.log(LOEWNER_RANGE[1])
    if trial_index == 0:
        return np.exp(np.linspace(lo, hi, LOEWNER_MAX_NODES))
    while True:
        k = int(rng.integers(2, LOEWNER_MAX_NODES + 1))
        x = np.sort(np.exp(rng.uniform(lo, hi, k)))
        if np.all(x[1:] / x[:-1] >= LOEWNER_MIN_RATIO):
            return x


def _t_loewner(rng, phi, trial_index, derivative):
    return loewner_min_eig(phi, _loewner_nodes(rng, trial_index), derivative, normalize=True)


def _t_midpoint(rng, spec, n, cfg):
    kernel = MetricKernel(spec)
    x = _random_pd(rng, n, *CONVEXITY_SPECTRUM)
    y = _random_pd(rng, n, *CONVEXITY_SPECTRUM)
    return _midpoint_residual(lambda t: np.real(kernel.h(t)), x, y)


def _t_c_hat_convexity(rng, spec, cfg):
    kernel = MetricKernel(spec)
    p1 = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), 2))
    p2 = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), 2))
    mid = 0.5 * (p1 + p2)
    return float(0.5 * (kernel.c_hat(*p1) + kernel.c_hat(*p2)) - kernel.c_hat(*mid))


# check_id -> (scope, applicability, tolerance kind, trial function)
CHECKS = {
    "state_convexity": ("single", "all", "eq", _t_state_convexity),
    "additivity": ("pair", "all", "eq", _t_additivity),
    "time_invariance": ("single", "all", "eq", _t_time_invariance),
    "pure_state_variance": ("single", "regular", "eq", _t_pure_state_variance),
    "variance_bounds": ("single", "regular", "psd", _t_variance_bounds),
    "scale_covariance": ("single", "all", "scale", _t_scale_covariance),
    "oracle_equivalence": ("single", "wyd", "eq", _t_oracle_equivalence),
    "lieb_monotonicity": ("pair", "all", "eq", _t_lieb),
    "metric_contraction": ("pair", "all", "eq", _t_contraction),
    "weak_superadditivity": ("pair", "all", "eq", _t_weak),
    "weak_superadditivity_2": ("pair", "all", "eq", _t_weak2),
    "parallelogram": ("pair", "all", "eq", _t_parallelogram),
    "semiquantum_superadditivity": ("pair", "all", "eq", _t_semiquantum_gap),
    "cross_term_vanishing": ("pair", "all", "psd", _t_cross_term),
    "loewner_monotonicity": ("function", "all", "psd", None),
    "midpoint_convexity": ("function", "all", "eq", _t_midpoint),
    "c_hat_joint_convexity": ("function", "all", "psd", _t_c_hat_convexity),
    "loewner_g": ("g", "all", "psd", None),
    "loewner_fixture": ("fixture", "all", "psd", None),
}

SCALE_TOL = 1e-11


# ---------------------------------------------------------------------------
# configuration and reports
# ---------------------------------------------------------------------------

def _tuplify(dims):
    return tuple(tuple(int(v) for v in d) for d in dims)


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of a suite run.

    ``single_dims`` feed the single-system checks, ``pair_dims`` the
    bipartite ones. ``checks=None`` runs every check. ``fixtures`` names
    extra functions from :data:`FIXTURES` fed to the Loewner battery.
    """
    seed: int = 42
    single_dims: tuple = (2, 3, 4)
    pair_dims: tuple = ((2, 2), (2, 3), (3, 3))
    trials_per_check: int = 500
    tol_eq: float = 1e-9
    tol_psd: float = 1e-10
    metric_ids: tuple = DEFAULT_METRICS
    checks: tuple | None = None
    g_p_values: tuple = (1.1, 1.25, 1.5, 1.75, 2.0)
    midpoint_dim: int = 4
    fixtures: tuple = ()

    def __post_init__(self):
        if self.trials_per_check < 1:
            raise ValueError("trials_per_check must be at least 1")
        if self.tol_eq <= 0 or self.tol_psd <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "single_dims", tuple(int(n) for n in self.single_dims))
        object.__setattr__(self, "pair_dims", _tuplify(self.pair_dims))
        object.__setattr__(self, "metric_ids", tuple(get_metric(m).id for m in self.metric_ids))
        object.__setattr__(self, "g_p_values", tuple(float(p) for p in self.g_p_values))
        object.__setattr__(self, "fixtures", tuple(self.fixtures))
        if self.checks is not None:
            unknown = set(self.checks) - set(CHECKS)
            if unknown:
                raise ValueError(f"unknown checks: {sorted(unknown)}")
            object.__setattr__(self, "checks", tuple(self.checks))
        unknown = set(self.fixtures) - set(FIXTURES)
        if unknown:
            raise ValueError(f"unknown fixtures: {sorted(unknown)}")

    def to_dict(self):
        d = asdict(self)
        d["pair_dims"] = [list(p) for p in self.pair_dims]
        for key in ("single_dims", "metric_ids", "g_p_values", "fixtures"):
            d[key] = list(d[key])
        d["checks"] = None if self.checks is None else list(self.checks)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def tolerance(self, check_id):
        kind = CHECKS[check_id][2]
        return {"eq": self.tol_eq, "psd": self.tol_psd, "scale": SCALE_TOL}[kind]


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    metric_id: str
    dims: str
    trials: int
    failures: int
    worst_residual: float
    worst_case_seed: int
    worst_trial: int
    tolerance: float

    def to_dict(self):
        return asdict(self)

    @property
    def passed(self):
        return self.failures == 0


def _dims_label(dims):
    if dims is None:
        return "-"
    if isinstance(dims, tuple):
        return "x".join(str(d) for d in dims)
    return str(dims)


def trial_seed(seed, check_id, metric_id, dims, trial_index):
    """Per-trial seed from the run seed and the trial's coordinates."""
    tag = zlib.crc32(f"{check_id}|{metric_id}|{_dims_label(dims)}".encode())
    words = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(seed) >> 32, tag,
                                    int(trial_index)]).generate_state(2, np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


def _subject(check_id, metric_id):
    """The function under test for function-level checks."""
    scope = CHECKS[check_id][0]
    if scope == "g":
        p = float(metric_id.split(":", 1)[1])
        return (lambda t: g_p_value(p, t)), "complex"
    if scope == "fixture":
        return FIXTURES[metric_id.split(":", 1)[1]], "central"
    return get_metric(metric_id).evaluate, "complex"


def _run_trial(check_id, metric_id, dims, seed, trial_index, cfg):
    rng = np.random.default_rng(seed)
    scope, _, _, fn = CHECKS[check_id]
    if check_id in ("loewner_monotonicity", "loewner_g", "loewner_fixture"):
        phi, mode = _subject(check_id, metric_id)
        return _t_loewner(rng, phi, trial_index, mode)
    spec = get_metric(metric_id)
    if check_id == "midpoint_convexity":
        return fn(rng, spec, cfg.midpoint_dim, cfg)
    if check_id == "c_hat_joint_convexity":
        return fn(rng, spec, cfg)
    return float(fn(rng, spec, dims, cfg))


def replay(report, config):
    """Recompute the residual of the worst trial recorded in ``report``."""
    dims = _parse_dims_label(report.dims)
    return _run_trial(report.check_id, report.metric_id, dims, report.worst_case_seed,
                      report.worst_trial, config)


def _parse_dims_label(label):
    if label == "-":
        return None
    if "x" in label:
        return tuple(int(v) for v in label.split("x"))
    return int(label)


def _units(cfg):
    selected = CHECKS if cfg.checks is None else {c: CHECKS[c] for c in CHECKS if c in cfg.checks}
    units = []
    for check_id, (scope, applies, _, _) in selected.items():
        if scope == "g":
            units.extend((check_id, f"g:{p:g}", None) for p in cfg.g_p_values)
            continue
        if scope == "fixture":
            units.extend((check_id, f"fixture:{name}", None) for name in cfg.fixtures)
            continue
        for metric_id in cfg.metric_ids:
            spec = get_metric(metric_id)
            if applies == "regular" and not spec.regular:
                continue
            if applies == "wyd" and spec.parameter is None:
                continue
            if scope == "single":
                units.extend((check_id, spec.id, n) for n in cfg.single_dims)
            elif scope == "pair":
                units.extend((check_id, spec.id, d) for d in cfg.pair_dims)
            else:
                units.append((check_id, spec.id, None))
    return units


def _run_unit(unit, cfg):
    check_id, metric_id, dims = unit
    tol = cfg.tolerance(check_id)
    failures = 0
    worst = np.inf
    worst_seed = 0
    worst_trial = 0
    for i in range(cfg.trials_per_check):
        seed = trial_seed(cfg.seed, check_id, metric_id, dims, i)
        residual = _run_trial(check_id, metric_id, dims, seed, i, cfg)
        if not np.isfinite(residual) or residual < -tol:
            failures += 1
        if residual < worst or not np.isfinite(residual):
            worst = residual
            worst_seed = seed
            worst_trial = i
    return CheckReport(check_id, metric_id, _dims_label(dims), cfg.trials_per_check,
                       failures, float(worst), worst_seed, worst_trial, tol)


def _run_unit_star(args):
    return _run_unit(*args)


def worker_count(workers=None):
    """Worker processes: explicit value, else ``QIG_THREADS`` (0 = all CPUs), else 1."""
    if workers is None:
        raw = os.environ.get("QIG_THREADS", "").strip()
        workers = int(raw) if raw else 1
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def run_suite(config=None, workers=None):
    """Run every configured check and return the list of :class:`CheckReport`.

    Failures are data: nothing is raised for a failing property. Output
    order and content do not depend on ``workers``.
    """
    cfg = config if config is not None else TrialConfig()
    units = _units(cfg)
    n = worker_count(workers)
    if n == 1 or len(units) < 2:
        return [_run_unit(u, cfg) for u in units]
    with ProcessPoolExecutor(max_workers=min(n, len(units))) as pool:
        return list(pool.map(_run_unit_star, [(u, cfg) for u in units], chunksize=1))
