"""Catalog of operator monotone functions and their metric kernels.

Each catalog entry is a normalized symmetric operator monotone function
``f`` (``f(1) = 1``, ``f(t) = t f(1/t)``). From ``f`` we derive

* the Morozova-Chentsov kernel ``c(x, y) = 1 / (y f(x/y))``,
* ``c_hat(x, y) = (x - y)**2 c(x, y)``, the kernel of the skew information,
* ``h(t) = (t - 1)**2 / f(t)``, so that ``c_hat(x, y) = y h(x/y)``.

All evaluators are vectorized and accept complex arguments, which lets the
checker differentiate them by complex step.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import DomainError, PSD_TOL

__all__ = [
    "UnsupportedParameterError", "SingularMetricError",
    "MonotoneFunctionSpec", "MetricKernel",
    "wyd", "kubo", "harmonic", "bures", "get_metric", "catalog",
    "DEFAULT_METRICS", "eval_f", "c_value", "c_hat_value", "h_value",
    "classify", "wyd_f_series_cutoff",
]

# |t - 1| below which f_p and the Kubo function use Taylor expansions.
wyd_f_series_cutoff = 1e-4

DEFAULT_METRICS = (
    "wyd:0.1", "wyd:0.25", "wyd:0.5", "wyd:0.75", "wyd:0.9",
    "wyd:-0.5", "wyd:1.5", "wyd:2", "kubo", "harmonic", "bures",
)


class UnsupportedParameterError(ValueError):
    pass


class SingularMetricError(ValueError):
    """A non-regular metric was evaluated at (numerically) zero eigenvalues."""


def _real_positive(t):
    t = np.asarray(t)
    if np.any(np.real(t) <= 0):
        raise DomainError("argument must be strictly positive")
    return t


def _wyd_f(t, p):
    q = 1.0 - p
    s = t - 1.0
    with np.errstate(all="ignore"):
        lt = np.log(t)
        direct = p * q * s * s / (np.expm1(p * lt) * np.expm1(q * lt))
    # (t**a - 1) / (a s) = 1 + (a-1) s/2 + (a-1)(a-2) s^2/6 + O(s^3)
    series = 1.0 / ((1.0 + (p - 1.0) * s / 2.0 + (p - 1.0) * (p - 2.0) * s * s / 6.0)
                    * (1.0 + (q - 1.0) * s / 2.0 + (q - 1.0) * (q - 2.0) * s * s / 6.0))
    return np.where(np.abs(s) < wyd_f_series_cutoff, series, direct)


def _kubo_f(t):
    s = t - 1.0
    with np.errstate(all="ignore"):
        direct = s / np.log1p(s)
    series = 1.0 + s / 2.0 - s * s / 12.0 + s ** 3 / 24.0
    return np.where(np.abs(s) < wyd_f_series_cutoff, series, direct)


def _harmonic_f(t):
    return 2.0 * t / (t + 1.0)


def _bures_f(t):
    return (1.0 + t) / 2.0


@dataclass(frozen=True)
class MonotoneFunctionSpec:
    """A function ``f`` in the normalized symmetric operator monotone class.

    ``f_at_zero`` is the limit of ``f(t)`` as ``t -> 0``. The metric is
    regular exactly when that limit is positive, and then the metric constant
    is ``f(0)``. Non-regular entries carry ``metric_constant=None``.
    """
    id: str
    evaluate: Callable = field(repr=False, compare=False)
    f_at_zero: float
    parameter: float | None = None

    @property
    def regular(self):
        return self.f_at_zero > 0.0

    @property
    def metric_constant(self):
        return self.f_at_zero if self.regular else None

    def __call__(self, t):
        return eval_f(self, t)


def wyd(p):
    """The Wigner-Yanase-Dyson family ``f_p`` for ``p`` in ``[-1, 2]``, ``p != 0, 1``.

    ``f_p`` and ``f_{1-p}`` coincide, so ``p < 0`` gives the same (non-regular)
    functions as ``1 - p > 1``. ``p = -1`` and ``p = 2`` both give ``2t/(t+1)``.
    """
    p = float(p)
    if not (-1.0 <= p <= 2.0):
        raise UnsupportedParameterError(f"wyd parameter {p} outside [-1, 2]")
    if p == 0.0 or p == 1.0:
        raise UnsupportedParameterError("wyd parameter 0 and 1 are the Kubo limit; use 'kubo'")
    f0 = p * (1.0 - p) if 0.0 < p < 1.0 else 0.0
    return MonotoneFunctionSpec(f"wyd:{p:g}", lambda t, p=p: _wyd_f(t, p), f0, parameter=p)


def kubo():
    return MonotoneFunctionSpec("kubo", _kubo_f, 0.0)


def harmonic():
    return MonotoneFunctionSpec("harmonic", _harmonic_f, 0.0)


def bures():
    return MonotoneFunctionSpec("bures", _bures_f, 0.5)


_NAMED = {"kubo": kubo, "harmonic": harmonic, "bures": bures}


def get_metric(metric_id):
    """Parse a catalog id: ``"wyd:<p>"``, ``"kubo"``, ``"harmonic"`` or ``"bures"``."""
    if isinstance(metric_id, MonotoneFunctionSpec):
        return metric_id
    key = str(metric_id).strip().lower()
    if key.startswith("wyd:"):
        try:
            p = float(key[4:])
        except ValueError:
            raise UnsupportedParameterError(f"bad wyd parameter in {metric_id!r}") from None
        return wyd(p)
    if key in _NAMED:
        return _NAMED[key]()
    raise UnsupportedParameterError(f"unknown metric id {metric_id!r}")


def catalog(ids=DEFAULT_METRICS):
    return [get_metric(i) for i in ids]


def eval_f(spec, t):
    t = _real_positive(t)
    out = spec.evaluate(t)
    return out if np.ndim(out) else out[()]


def classify(spec):
    return "regular" if spec.regular else "non_regular"


@dataclass(frozen=True)
class MetricKernel:
    """Kernel evaluators for one catalog function.

    ``eigenvalue_floor`` is the smallest argument a non-regular kernel
    accepts; below it :class:`SingularMetricError` is raised.
    """
    f: MonotoneFunctionSpec
    eigenvalue_floor: float = 1e-12

    @property
    def regular(self):
        return self.f.regular

    def _split(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        lo = np.minimum(x, y)
        hi = np.maximum(x, y)
        smallest = lo.min() if lo.size else 0.0
        if smallest < 0:
            raise DomainError("kernel arguments must be nonnegative")
        if not self.regular and smallest < self.eigenvalue_floor:
            raise SingularMetricError("non-regular metric requires full-rank arguments")
        return lo, hi

    def _f_ratio(self, lo, hi):
        # f(lo/hi) with f(0) taken from the catalog limit; nan where hi == 0
        with np.errstate(all="ignore"):
            t = lo / hi
            return np.where(lo > 0, self.f.evaluate(np.where(lo > 0, t, 1.0)), self.f.f_at_zero)

    def c(self, x, y):
        """``1 / (y f(x/y))`` evaluated as ``1 / (M f(m/M))`` with ``m <= M``."""
        lo, hi = self._split(x, y)
        with np.errstate(all="ignore"):
            out = 1.0 / (hi * self._f_ratio(lo, hi))
        return np.where(hi > 0, out, np.inf)

    def c_hat(self, x, y):
        """``(x - y)**2 c(x, y)`` with the boundary rules of a regular metric.

        For a regular kernel ``c_hat(x, 0) = x / f(0)`` and ``c_hat(0, 0) = 0``.
        The diagonal ``c_hat(x, x)`` is exactly zero.
        """
        lo, hi = self._split(x, y)
        d = hi - lo
        with np.errstate(all="ignore"):
            out = d * d / (hi * self._f_ratio(lo, hi))
        return np.where(d == 0, 0.0, out)

    def h(self, t):
        t = _real_positive(t)
        s = t - 1.0
        return s * s / self.f.evaluate(t)


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def c_value(k, x, y):
    if np.any(np.asarray(x) <= 0) or np.any(np.asarray(y) <= 0):
        raise DomainError("c(x, y) needs positive arguments")
    return _scalar(k.c(x, y))


def c_hat_value(k, x, y):
    return _scalar(k.c_hat(x, y))


def h_value(k, t):
    return _scalar(np.real(k.h(t)))


def clamp_spectrum(lam):
    """Zero out eigenvalues in ``[-1e-10, 0)`` produced by rounding."""
    lam = np.array(lam, dtype=float)
    lam[(lam < 0) & (lam >= -PSD_TOL)] = 0.0
    return lam
