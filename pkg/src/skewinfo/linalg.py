"""Dense complex linear algebra for small quantum states.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The validators
``as_hermitian`` and ``as_density`` check the type invariants and return a
symmetrized copy; everything downstream assumes validated input.
"""

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "ValidationError", "DomainError", "Spectrum",
    "as_matrix", "as_hermitian", "as_density",
    "hermitian_eigen", "jacobi_eigen", "kron", "partial_trace",
    "commutator_i", "matrix_function", "density_power", "time_evolve",
    "variance", "PAULI_X", "PAULI_Y", "PAULI_Z",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class ValidationError(ValueError):
    """Input violates a type invariant (shape, Hermiticity, trace, positivity)."""


class DomainError(ValueError):
    """A scalar function is undefined at a requested argument."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order and the unitary of column eigenvectors."""
    eigenvalues: np.ndarray
    unitary: np.ndarray

    def reconstruct(self):
        u = self.unitary
        return (u * self.eigenvalues) @ u.conj().T


def as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValidationError(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    return m


def as_hermitian(m):
    """Validate Hermiticity and return ``(M + M^dagger) / 2``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"matrix is not square: {m.shape}")
    scale = 1.0 + np.max(np.abs(m))
    skew = np.max(np.abs(m - m.conj().T))
    if not np.isfinite(skew) or skew > HERMITIAN_TOL * scale:
        raise ValidationError(f"matrix is not Hermitian (max asymmetry {skew:.3g})")
    return 0.5 * (m + m.conj().T)


def as_density(m):
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    rho = as_hermitian(m)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -PSD_TOL:
        raise ValidationError(f"density matrix has negative eigenvalue {lam_min:.3g}")
    return rho


def _check_square_pair(a, b):
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")


def hermitian_eigen(m, method="lapack", check=True):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Hermitian matrix. Validated and symmetrized first.
    method : {"lapack", "jacobi"}
        ``"lapack"`` uses ``numpy.linalg.eigh``; ``"jacobi"`` uses the cyclic
        complex Jacobi solver in this module. The two are independent code
        paths and are cross-checked in the test suite.

    check : bool
        Skip validation when False; the matrix is only symmetrized.

    Returns
    -------
    Spectrum
        Ascending eigenvalues with the matching unitary.
    """
    if check:
        m = as_hermitian(m)
    else:
        m = 0.5 * (m + m.conj().T)
    if method == "lapack":
        lam, u = np.linalg.eigh(m)
        return Spectrum(lam, u)
    if method == "jacobi":
        return jacobi_eigen(m)
    raise ValueError(f"unknown eigen method {method!r}")


def jacobi_eigen(m, tol=1e-15, max_sweeps=60):
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each rotation first removes the phase of the pivot ``m[p, q]`` and then
    applies the real symmetric Jacobi rotation, so the pair of columns is
    updated by a 2x2 unitary. Sweeps stop once the off-diagonal Frobenius
    norm drops below ``tol`` times the total norm. Works on Python lists;
    at the matrix orders used here that beats per-rotation numpy calls.
    """
    arr = np.asarray(m, dtype=complex)
    n = arr.shape[0]
    a = arr.tolist()
    v = np.eye(n, dtype=complex).tolist()
    total_sq = float(np.sum(np.abs(arr) ** 2))
    if total_sq == 0.0:
        return Spectrum(np.zeros(n), np.eye(n, dtype=complex))
    stop = (tol * tol) * total_sq
    tiny = 1e-36 * total_sq
    rng_n = range(n)
    for _ in range(max_sweeps):
        off = 0.0
        for i in rng_n:
            row = a[i]
            for j in range(i + 1, n):
                z = row[j]
                off += z.real * z.real + z.imag * z.imag
        if 2.0 * off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p][q]
                mag2 = g.real * g.real + g.imag * g.imag
                if mag2 <= tiny:
                    continue
                mag = math.sqrt(mag2)
                phase_c = g.conjugate() / mag
                theta = (a[q][q].real - a[p][p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # column rotation R = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                sp = s * phase_c
                cp = c * phase_c
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = c * x - sp * y
                    row[q] = s * x + cp * y
                rp, rq = a[p], a[q]
                spc = sp.conjugate()
                cpc = cp.conjugate()
                for k in rng_n:
                    x, y = rp[k], rq[k]
                    rp[k] = c * x - spc * y
                    rq[k] = s * x + cpc * y
                rp[q] = 0j
                rq[p] = 0j
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = c * x - sp * y
                    row[q] = s * x + cp * y
    lam = np.array([a[i][i].real for i in rng_n])
    order = np.argsort(lam, kind="stable")
    return Spectrum(lam[order], np.array(v, dtype=complex)[:, order])


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, dims, keep):
    """Reduce a bipartite operator to one party.

    Parameters
    ----------
    rho : array_like
        Operator on ``H1 (x) H2`` of dimension ``n1 * n2``.
    dims : tuple of int
        ``(n1, n2)``.
    keep : {1, 2}
        The party that is retained; the other one is traced out.
    """
    rho = as_matrix(rho)
    n1, n2 = int(dims[0]), int(dims[1])
    if rho.shape != (n1 * n2, n1 * n2):
        raise ValidationError(f"operator shape {rho.shape} does not match dims {(n1, n2)}")
    t = rho.reshape(n1, n2, n1, n2)
    if keep == 1:
        return np.einsum("ajbj->ab", t)
    if keep == 2:
        return np.einsum("iaib->ab", t)
    raise ValidationError(f"party must be 1 or 2, got {keep!r}")


def commutator_i(rho, a):
    """Return ``i (rho A - A rho)``, which is Hermitian for Hermitian inputs."""
    rho = as_matrix(rho)
    a = as_matrix(a)
    _check_square_pair(rho, a)
    return 1j * (rho @ a - a @ rho)


def matrix_function(m, phi, method="lapack", spectrum=None):
    """Apply a real scalar function through the spectral decomposition.

    ``phi`` receives the array of eigenvalues. A non-finite value at any
    eigenvalue raises :class:`DomainError`.
    """
    spec = spectrum if spectrum is not None else hermitian_eigen(m, method=method)
    with np.errstate(all="ignore"):
        vals = np.asarray(phi(spec.eigenvalues), dtype=float)
    if vals.shape != spec.eigenvalues.shape or not np.all(np.isfinite(vals)):
        raise DomainError("function is undefined on part of the spectrum")
    u = spec.unitary
    return (u * vals) @ u.conj().T


def density_power(rho, p, method="lapack"):
    """``rho**p`` for a density matrix; eigenvalues in ``[-1e-10, 0)`` count as 0."""
    spec = hermitian_eigen(rho, method=method)
    lam = spec.eigenvalues.copy()
    lam[(lam < 0) & (lam >= -PSD_TOL)] = 0.0
    if np.any(lam < 0):
        raise DomainError("negative eigenvalue in density matrix")
    if p < 0 and np.any(lam == 0):
        raise DomainError(f"power {p} is undefined on a singular state")
    clamped = Spectrum(lam, spec.unitary)
    return matrix_function(None, lambda x: np.power(x, p), spectrum=clamped)


def time_evolve(rho, h, t):
    """Conjugate ``rho`` by ``exp(i t H)``."""
    rho = as_hermitian(rho)
    h = as_hermitian(h)
    _check_square_pair(rho, h)
    spec = hermitian_eigen(h)
    u = (spec.unitary * np.exp(1j * t * spec.eigenvalues)) @ spec.unitary.conj().T
    out = u @ rho @ u.conj().T
    return 0.5 * (out + out.conj().T)


def variance(rho, a):
    """``Tr(rho A^2) - Tr(rho A)^2``."""
    rho = as_matrix(rho)
    a = as_matrix(a)
    _check_square_pair(rho, a)
    ra = rho @ a
    mean = np.trace(ra).real
    return float(np.trace(ra @ a).real - mean * mean)
