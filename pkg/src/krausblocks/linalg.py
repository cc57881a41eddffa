"""Dense complex linear-algebra primitives with one shared tolerance policy.

All norms are max-absolute-entry unless noted; relative cutoffs divide by
the largest singular value. Matrices are dense ``numpy`` arrays; every
function is pure and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotOrthonormal


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    hermitian: allowed max-entry deviation in ``M - M^†`` checks.
    nullspace: relative singular-value cutoff for kernel extraction.
    eigencluster: width for grouping near-degenerate eigenvalues.
    residual: operator-identity checks (trace preservation, fixing, ...).
    optimizer: convergence target of the entropy optimizers, in bits.
    """

    hermitian: float = 1e-10
    nullspace: float = 1e-8
    eigencluster: float = 1e-7
    residual: float = 1e-9
    optimizer: float = 1e-4

    def __post_init__(self):
        for name in ("hermitian", "nullspace", "eigencluster", "residual", "optimizer"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be strictly positive")


DEFAULT_TOL = Tolerances()


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got array of ndim {a.ndim}")
    return a


def max_abs(m) -> float:
    """Max-absolute-entry norm; 0 for empty arrays."""
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only copy, used to keep stored values immutable."""
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def is_hermitian(m: np.ndarray, tol: float) -> bool:
    return m.shape[0] == m.shape[1] and max_abs(m - m.conj().T) <= tol


def hermitian_eig(m, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and an orthonormal eigenvector
    matrix (columns). Raises NotHermitian / DimensionMismatch.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix is {a.shape[0]}x{a.shape[1]}, not square")
    dev = max_abs(a - a.conj().T)
    if dev > tol.hermitian * max(1.0, max_abs(a)):
        raise NotHermitian(f"max |M - M^dagger| = {dev:.3e} exceeds tolerance")
    w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    return w, v


def null_space(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``{x : M x = 0}`` as columns.

    The kernel dimension is the number of singular values below
    ``tol.nullspace`` relative to the largest one. An empty basis is a
    valid return (shape ``(cols, 0)``).
    """
    a = as_matrix(m)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.eye(a.shape[1], dtype=complex)
    # the kernel lives in V, which is complete unless the matrix is wide;
    # never materialize the (rows x rows) U of a tall stacked system
    _, s, vh = np.linalg.svd(a, full_matrices=a.shape[0] < a.shape[1])
    smax = s[0] if s.size else 0.0
    # pad: singular values beyond min(rows, cols) are exact zeros
    full = np.zeros(a.shape[1])
    full[: s.size] = s
    keep = full <= tol.nullspace * smax
    return vh.conj().T[:, keep]


def orthonormal_complement(
    basis, ambient_dim: int, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(basis)``.

    ``basis`` holds orthonormal columns in a space of dimension
    ``ambient_dim``; the union of input and output columns is an
    orthonormal basis of the whole space.
    """
    b = np.asarray(basis, dtype=complex)
    if b.ndim == 1:
        b = b[:, None]
    if b.ndim != 2 or b.shape[0] != ambient_dim:
        raise DimensionMismatch(
            f"basis has {b.shape[0] if b.ndim == 2 else '?'} rows, ambient dim is {ambient_dim}"
        )
    if b.shape[1] > ambient_dim:
        raise DimensionMismatch("more columns than the ambient dimension")
    if b.shape[1] == 0:
        return np.eye(ambient_dim, dtype=complex)
    gram_dev = max_abs(b.conj().T @ b - np.eye(b.shape[1]))
    if gram_dev > 1e-10:
        raise NotOrthonormal(f"max |B^dagger B - I| = {gram_dev:.3e}")
    return null_space(b.conj().T, tol)


def cluster_eigenvalues(values: np.ndarray, width: float) -> list[np.ndarray]:
    """Group an ascending eigenvalue list by single-linkage with the given width.

    Returns index arrays, one per cluster, in ascending eigenvalue order.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return []
    breaks = np.nonzero(np.diff(v) > width)[0]
    return np.split(np.arange(v.size), breaks + 1)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian, phase-fixed diagonal."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def trace_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(A^dagger B)."""
    return complex(np.sum(a.conj() * b))
