"""Unital-channel data model: validation, application, adjoint, superoperator
form, Kraus remixing, direct sums, and standard channel generators.

Channels are immutable after construction. The superoperator convention is
column-stacking: ``vec(A s B) = (B^T kron A) vec(s)``, so a Kraus channel has
superoperator ``sum_i conj(A_i) kron A_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NotUnitary,
    ValidationError,
)
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, frozen, haar_unitary, max_abs


@dataclass(frozen=True)
class ValidationReport:
    """Trace-preservation and unitality residuals of a Kraus operator set."""

    is_trace_preserving: bool
    is_unital: bool
    tp_residual: float
    unital_residual: float


def validate_kraus(ops, tol: Tolerances = DEFAULT_TOL) -> ValidationReport:
    """Measure how far a Kraus set is from a unital trace-preserving channel.

    ``tp_residual`` is ``max |sum A_i^dagger A_i - I|`` and ``unital_residual``
    is ``max |sum A_i A_i^dagger - I|``; the flags compare them against
    ``tol.residual``.
    """
    mats = [as_matrix(a) for a in ops]
    if not mats:
        raise DimensionMismatch("need at least one Kraus operator")
    d = mats[0].shape[0]
    for a in mats:
        if a.shape != (d, d):
            raise DimensionMismatch(f"Kraus operators must all be {d}x{d}, got {a.shape}")
    eye = np.eye(d)
    tp = sum(a.conj().T @ a for a in mats)
    un = sum(a @ a.conj().T for a in mats)
    tp_res = max_abs(tp - eye)
    un_res = max_abs(un - eye)
    return ValidationReport(
        is_trace_preserving=tp_res <= tol.residual,
        is_unital=un_res <= tol.residual,
        tp_residual=tp_res,
        unital_residual=un_res,
    )


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A unital quantum operation given by its Kraus operators.

    Construct through :meth:`from_kraus` (or the generator functions below),
    which reject operator sets that are not unital and trace preserving.
    """

    dim: int
    kraus: tuple[np.ndarray, ...] = field(repr=False)

    @classmethod
    def from_kraus(cls, ops, tol: Tolerances = DEFAULT_TOL) -> "KrausChannel":
        report = validate_kraus(ops, tol)
        if not (report.is_trace_preserving and report.is_unital):
            raise ValidationError(
                "Kraus operators are not a unital trace-preserving channel "
                f"(tp_residual={report.tp_residual:.3e}, "
                f"unital_residual={report.unital_residual:.3e})",
                report=report,
            )
        mats = tuple(frozen(as_matrix(a)) for a in ops)
        return cls(dim=mats[0].shape[0], kraus=mats)

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)

    def apply(self, sigma) -> np.ndarray:
        """Evaluate ``sum_i A_i sigma A_i^dagger``."""
        s = as_matrix(sigma)
        if s.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"operator is {s.shape}, channel dim is {self.dim}")
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for a in self.kraus:
            out += a @ s @ a.conj().T
        return out

    def adjoint(self) -> "KrausChannel":
        """The adjoint channel, with Kraus operators ``A_i^dagger``.

        The adjoint of a unital trace-preserving map is again unital and
        trace preserving, so this validates cleanly.
        """
        return KrausChannel(dim=self.dim, kraus=tuple(frozen(a.conj().T) for a in self.kraus))

    def superoperator_matrix(self) -> np.ndarray:
        """The ``dim^2 x dim^2`` matrix acting on column-stacked operators."""
        d2 = self.dim * self.dim
        out = np.zeros((d2, d2), dtype=complex)
        for a in self.kraus:
            out += np.kron(a.conj(), a)
        return out

    def remix(self, u, pad: int | None = None, tol: Tolerances = DEFAULT_TOL) -> "KrausChannel":
        """Re-express the channel with Kraus operators ``B_j = sum_i u_ij A_i``.

        ``u`` must be ``k x k`` unitary with ``k >= n_kraus``; the operator
        list is zero-padded to ``k`` first. The resulting channel has the
        same superoperator.
        """
        um = as_matrix(u)
        k = um.shape[0]
        if pad is not None:
            if pad != k:
                raise DimensionMismatch(f"pad={pad} disagrees with unitary size {k}")
        if um.shape != (k, k):
            raise DimensionMismatch("remix matrix must be square")
        if k < self.n_kraus:
            raise DimensionMismatch(
                f"remix unitary is {k}x{k} but the channel has {self.n_kraus} Kraus operators"
            )
        dev = max_abs(um.conj().T @ um - np.eye(k))
        if dev > tol.residual:
            raise NotUnitary(f"max |u^dagger u - I| = {dev:.3e}")
        padded = list(self.kraus) + [np.zeros((self.dim, self.dim))] * (k - self.n_kraus)
        mixed = [sum(um[i, j] * padded[i] for i in range(k)) for j in range(k)]
        return KrausChannel.from_kraus(mixed, tol)


def vec(sigma: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(sigma, dtype=complex).flatten(order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec` for a ``dim x dim`` matrix."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def superoperator_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Max-entry distance between the two superoperator matrices.

    Channel equality is always decided through this distance, never by
    comparing Kraus lists, which are only unique up to remixing.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"channel dims differ: {a.dim} vs {b.dim}")
    return max_abs(a.superoperator_matrix() - b.superoperator_matrix())


def direct_sum(
    a: KrausChannel,
    b: KrausChannel,
    conjugating_unitary=None,
    tol: Tolerances = DEFAULT_TOL,
) -> KrausChannel:
    """Block-diagonal sum of two channels, optionally conjugated by a unitary.

    The shorter Kraus list is zero-padded so both have the same length; each
    resulting operator is ``blockdiag(A_i, B_i)``, then ``U K U^dagger`` if a
    unitary is supplied.
    """
    d = a.dim + b.dim
    n = max(a.n_kraus, b.n_kraus)
    ka = list(a.kraus) + [np.zeros((a.dim, a.dim))] * (n - a.n_kraus)
    kb = list(b.kraus) + [np.zeros((b.dim, b.dim))] * (n - b.n_kraus)
    ops = []
    for i in range(n):
        k = np.zeros((d, d), dtype=complex)
        k[: a.dim, : a.dim] = ka[i]
        k[a.dim :, a.dim :] = kb[i]
        ops.append(k)
    if conjugating_unitary is not None:
        u = as_matrix(conjugating_unitary)
        if u.shape != (d, d):
            raise DimensionMismatch(f"conjugating unitary must be {d}x{d}")
        dev = max_abs(u.conj().T @ u - np.eye(d))
        if dev > tol.residual:
            raise NotUnitary(f"max |U^dagger U - I| = {dev:.3e}")
        ops = [u @ k @ u.conj().T for k in ops]
    return KrausChannel.from_kraus(ops, tol)


def _shift(d: int) -> np.ndarray:
    x = np.zeros((d, d), dtype=complex)
    for j in range(d):
        x[(j + 1) % d, j] = 1.0
    return x


def _clock(d: int) -> np.ndarray:
    omega = np.exp(2j * np.pi / d)
    return np.diag(omega ** np.arange(d))


def identity_channel(dim: int) -> KrausChannel:
    if dim < 1:
        raise InvalidParameter("dim must be >= 1")
    return KrausChannel.from_kraus([np.eye(dim, dtype=complex)])


def unitary_channel(u, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """Conjugation by a single unitary."""
    um = as_matrix(u)
    if um.shape[0] != um.shape[1]:
        raise DimensionMismatch("unitary must be square")
    dev = max_abs(um.conj().T @ um - np.eye(um.shape[0]))
    if dev > tol.residual:
        raise NotUnitary(f"max |U^dagger U - I| = {dev:.3e}")
    return KrausChannel.from_kraus([um], tol)


def depolarizing_channel(dim: int, p: float) -> KrausChannel:
    """The map ``sigma -> (1-p) sigma + p tr(sigma) I / dim``.

    Realized with the shift/clock operator family ``X^a Z^b``: the uniform
    mixture of all ``dim^2`` of them is the completely depolarizing map, so
    weighting the identity term by ``1 - p + p/dim^2`` and the rest by
    ``p/dim^2`` reproduces the map exactly for every ``dim``.
    """
    if dim < 1:
        raise InvalidParameter("dim must be >= 1")
    if not 0 < p <= 1:
        raise InvalidParameter(f"depolarizing strength must satisfy 0 < p <= 1, got {p}")
    x = _shift(dim)
    z = _clock(dim)
    ops = []
    for a in range(dim):
        for b in range(dim):
            w = 1 - p + p / dim**2 if a == 0 and b == 0 else p / dim**2
            ops.append(np.sqrt(w) * np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b))
    return KrausChannel.from_kraus(ops)


def dephasing_channel(dim: int) -> KrausChannel:
    """Complete dephasing to the computational basis: ``Z^a / sqrt(dim)``.

    For ``dim = 2`` this is the familiar pair ``{I, Z} / sqrt(2)``.
    """
    if dim < 1:
        raise InvalidParameter("dim must be >= 1")
    z = _clock(dim)
    ops = [np.linalg.matrix_power(z, a) / np.sqrt(dim) for a in range(dim)]
    return KrausChannel.from_kraus(ops)


def random_unital_channel(dim: int, n_unitaries: int, seed: int) -> KrausChannel:
    """Equal-weight mixture of ``n_unitaries`` Haar-random unitaries."""
    if dim < 1:
        raise InvalidParameter("dim must be >= 1")
    if n_unitaries < 1:
        raise InvalidParameter("n_unitaries must be >= 1")
    rng = np.random.default_rng(seed)
    ops = [haar_unitary(dim, rng) / np.sqrt(n_unitaries) for _ in range(n_unitaries)]
    return KrausChannel.from_kraus(ops)


STANDARD_KINDS = ("identity", "depolarizing", "dephasing", "unitary", "random_unital")


def standard_channel(kind: str, dim: int, **params) -> KrausChannel:
    """Dispatch to the named generator; used by the CLI ``gen`` command."""
    if kind == "identity":
        return identity_channel(dim)
    if kind == "depolarizing":
        if "p" not in params:
            raise InvalidParameter("depolarizing needs parameter p")
        return depolarizing_channel(dim, params["p"])
    if kind == "dephasing":
        return dephasing_channel(dim)
    if kind == "unitary":
        if "unitary" not in params:
            raise InvalidParameter("unitary kind needs the unitary matrix")
        u = as_matrix(params["unitary"])
        if u.shape != (dim, dim):
            raise DimensionMismatch(f"unitary must be {dim}x{dim}")
        return unitary_channel(u)
    if kind == "random_unital":
        return random_unital_channel(
            dim, params.get("n_unitaries", 3), params.get("seed", 0)
        )
    raise InvalidParameter(f"unknown channel kind {kind!r}; choose from {STANDARD_KINDS}")
