"""JSON formats for matrices and suite reports.

A matrix file is ``{"dim": n, "entries": [[[re, im], ...], ...]}`` in
row-major order. A report file is ``{"config": ..., "checks": [...],
"version": ...}``.
"""

import json

import numpy as np

from .checker import CheckReport, TrialConfig

__all__ = [
    "MatrixFormatError", "matrix_to_json", "matrix_from_json", "load_matrix",
    "save_matrix", "report_to_json", "report_from_json", "write_report",
    "REPORT_VERSION",
]

REPORT_VERSION = "1"


class MatrixFormatError(ValueError):
    pass


def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def matrix_from_json(doc):
    """Parse a matrix document; raises :class:`MatrixFormatError` on malformed input."""
    try:
        n = doc["dim"]
        rows = doc["entries"]
    except (TypeError, KeyError) as exc:
        raise MatrixFormatError(f"matrix document needs 'dim' and 'entries': {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixFormatError(f"'dim' must be a positive integer, got {n!r}")
    if not isinstance(rows, list) or len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFormatError(f"row {i} must have {n} entries")
        for j, z in enumerate(row):
            if (not isinstance(z, list) or len(z) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in z)):
                raise MatrixFormatError(f"entry ({i}, {j}) must be a [re, im] pair")
            out[i, j] = complex(z[0], z[1])
    if not np.all(np.isfinite(out)):
        raise MatrixFormatError("entries must be finite")
    return out


def load_matrix(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from None
    return matrix_from_json(doc)


def save_matrix(path, m):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)


def report_to_json(config, reports, extra=None):
    doc = {
        "config": config.to_dict(),
        "checks": [r.to_dict() for r in reports],
        "version": REPORT_VERSION,
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_from_json(text):
    """Inverse of :func:`report_to_json`: returns ``(TrialConfig, [CheckReport])``."""
    doc = json.loads(text)
    cfg = TrialConfig.from_dict(doc["config"])
    return cfg, [CheckReport(**c) for c in doc["checks"]]


def write_report(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
