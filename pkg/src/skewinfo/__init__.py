"""Metric adjusted skew information over a catalog of monotone metrics."""

__version__ = "0.1.0"

from .linalg import (
    ValidationError, DomainError, PAULI_X, PAULI_Y, PAULI_Z,
    hermitian_eigen, jacobi_eigen, partial_trace, variance,
)
from .metrics import (
    MonotoneFunctionSpec, MetricKernel, UnsupportedParameterError, SingularMetricError,
    wyd, kubo, harmonic, bures, get_metric, catalog, DEFAULT_METRICS,
)
from .skew import SkewResult, metric_inner, skew_information, wyd_trace_oracle
from .bipartite import (
    SemiQuantumSpec, semi_quantum_state, superadditivity_gap, lieb_gap,
    weak_superadditivity, parallelogram_residual, cross_term,
)
from .checker import TrialConfig, CheckReport, run_suite, replay
from .search import SearchResult, violation_search, reverify

__all__ = [
    "ValidationError", "DomainError", "PAULI_X", "PAULI_Y", "PAULI_Z",
    "hermitian_eigen", "jacobi_eigen", "partial_trace", "variance",
    "MonotoneFunctionSpec", "MetricKernel", "UnsupportedParameterError",
    "SingularMetricError", "wyd", "kubo", "harmonic", "bures", "get_metric",
    "catalog", "DEFAULT_METRICS", "SkewResult", "metric_inner",
    "skew_information", "wyd_trace_oracle", "SemiQuantumSpec",
    "semi_quantum_state", "superadditivity_gap", "lieb_gap",
    "weak_superadditivity", "parallelogram_residual", "cross_term",
    "TrialConfig", "CheckReport", "run_suite", "replay", "SearchResult",
    "violation_search", "reverify",
]
