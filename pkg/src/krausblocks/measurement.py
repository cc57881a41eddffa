"""Measurement-statistics preservation under a unital channel.

A POVM element's statistics survive the channel for every input state exactly
when the adjoint channel fixes the element, which in turn happens exactly when
the element is a nonnegative combination of invariant-block projectors. For
projective measurements this is equivalent to the measurement channel
commuting with the channel under test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import KrausChannel
from .decomposition import Subspace, is_invariant_subspace
from .errors import (
    DimensionMismatch,
    InvalidMeasurement,
    NoViolation,
    NotAProjector,
    NotPSD,
    ToleranceFailure,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    cluster_eigenvalues,
    frozen,
    hermitian_eig,
    max_abs,
)


@dataclass(frozen=True, eq=False)
class Povm:
    """Finite list of PSD elements summing to the identity."""

    dim: int
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = []
        total = np.zeros((self.dim, self.dim), dtype=complex)
        if not self.elements:
            raise InvalidMeasurement("a POVM needs at least one element")
        for k, e in enumerate(self.elements):
            m = as_matrix(e)
            if m.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"element {k} is {m.shape}, expected {self.dim}x{self.dim}")
            if max_abs(m - m.conj().T) > 1e-10:
                raise InvalidMeasurement(f"element {k} is not Hermitian within 1e-10")
            if float(np.linalg.eigvalsh((m + m.conj().T) / 2).min()) < -1e-10:
                raise InvalidMeasurement(f"element {k} has an eigenvalue below -1e-10")
            total += m
            mats.append(frozen(m))
        if max_abs(total - np.eye(self.dim)) > 1e-9:
            raise InvalidMeasurement("elements do not sum to the identity within 1e-9")
        object.__setattr__(self, "elements", tuple(mats))


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete family of mutually orthogonal projectors."""

    dim: int
    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = []
        total = np.zeros((self.dim, self.dim), dtype=complex)
        if not self.projectors:
            raise InvalidMeasurement("a projective measurement needs at least one projector")
        for k, p in enumerate(self.projectors):
            m = as_matrix(p)
            if m.shape != (self.dim, self.dim):
                raise DimensionMismatch(
                    f"projector {k} is {m.shape}, expected {self.dim}x{self.dim}"
                )
            if max_abs(m - m.conj().T) > 1e-10 or max_abs(m @ m - m) > 1e-10:
                raise InvalidMeasurement(f"projector {k} is not an orthogonal projector")
            for kk, other in enumerate(mats):
                if max_abs(other @ m) > 1e-10:
                    raise InvalidMeasurement(f"projectors {kk} and {k} are not orthogonal")
            total += m
            mats.append(frozen(m))
        if max_abs(total - np.eye(self.dim)) > 1e-9:
            raise InvalidMeasurement("projectors do not sum to the identity within 1e-9")
        object.__setattr__(self, "projectors", tuple(mats))

    def as_povm(self) -> Povm:
        return Povm(dim=self.dim, elements=self.projectors)


def projective_channel(m: ProjectiveMeasurement) -> KrausChannel:
    """The measurement channel ``rho -> sum_k P_k rho P_k``.

    Projectors are self-adjoint and complete, so this is unital and trace
    preserving by construction.
    """
    return KrausChannel.from_kraus(list(m.projectors))


def _check_projector(pi, tol: Tolerances) -> np.ndarray:
    p = as_matrix(pi)
    if p.shape[0] != p.shape[1]:
        raise NotAProjector("projector must be square")
    if max_abs(p - p.conj().T) > tol.hermitian * max(1.0, max_abs(p)):
        raise NotAProjector("matrix is not Hermitian")
    if max_abs(p @ p - p) > max(tol.residual, 1e-10):
        raise NotAProjector("matrix is not idempotent")
    return p


@dataclass(frozen=True)
class CommutationReport:
    commute: bool
    residual: float


def projection_intertwines(
    ch: KrausChannel, pi, tol: Tolerances = DEFAULT_TOL
) -> CommutationReport:
    """Check ``P phi(rho) P = phi(P rho P)`` for all rho, as superoperators.

    Equivalent to the range of P being an invariant subspace of the channel.
    """
    p = _check_projector(pi, tol)
    if p.shape != (ch.dim, ch.dim):
        raise DimensionMismatch(f"projector is {p.shape}, channel dim is {ch.dim}")
    l_pi = np.kron(p.conj(), p)
    l_ch = ch.superoperator_matrix()
    residual = max_abs(l_pi @ l_ch - l_ch @ l_pi)
    return CommutationReport(commute=residual <= tol.residual, residual=residual)


def channels_commute(
    a: KrausChannel, b: KrausChannel, tol: Tolerances = DEFAULT_TOL
) -> CommutationReport:
    """Superoperator commutator test for two channels on the same space."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"channel dims differ: {a.dim} vs {b.dim}")
    la = a.superoperator_matrix()
    lb = b.superoperator_matrix()
    residual = max_abs(la @ lb - lb @ la)
    return CommutationReport(commute=residual <= tol.residual, residual=residual)


def _check_psd(e, tol: Tolerances) -> np.ndarray:
    m = as_matrix(e)
    if m.shape[0] != m.shape[1]:
        raise NotPSD("operator must be square")
    if max_abs(m - m.conj().T) > 1e-8:
        raise NotPSD("operator is not Hermitian within 1e-8")
    h = (m + m.conj().T) / 2
    if float(np.linalg.eigvalsh(h).min()) < -1e-8:
        raise NotPSD("operator has an eigenvalue below -1e-8")
    return h


@dataclass(frozen=True)
class PreservationReport:
    preserved: bool
    residual: float


def statistics_preserved(
    ch: KrausChannel, e, tol: Tolerances = DEFAULT_TOL
) -> PreservationReport:
    """Decide whether ``tr(E rho) = tr(E phi(rho))`` for every density matrix.

    Operationalized exactly as the adjoint channel fixing E:
    ``residual = max |phi^dagger(E) - E|``.
    """
    m = _check_psd(e, tol)
    if m.shape != (ch.dim, ch.dim):
        raise DimensionMismatch(f"operator is {m.shape}, channel dim is {ch.dim}")
    residual = max_abs(ch.adjoint().apply(m) - m)
    return PreservationReport(preserved=residual <= tol.residual, residual=residual)


@dataclass(frozen=True, eq=False)
class StructuralTerm:
    weight: float
    subspace: Subspace


@dataclass(frozen=True, eq=False)
class StructuralDecomposition:
    """A preserved element written as nonnegative weights on invariant eigenspaces."""

    terms: tuple[StructuralTerm, ...]


@dataclass(frozen=True, eq=False)
class StructuralFailure:
    """First spectral eigenspace of a non-preserved element that is not invariant."""

    witness_subspace: Subspace


def povm_structural_decomposition(ch: KrausChannel, e, tol: Tolerances = DEFAULT_TOL):
    """Spectral form of a POVM element against the channel's block structure.

    For a preserved element every eigenspace is an invariant subspace and the
    element equals the weighted sum of their projectors; for a non-preserved
    element the first non-invariant eigenspace (scanning eigenvalues in
    descending order) is returned as a witness.
    """
    m = _check_psd(e, tol)
    if m.shape != (ch.dim, ch.dim):
        raise DimensionMismatch(f"operator is {m.shape}, channel dim is {ch.dim}")
    preserved = statistics_preserved(ch, m, tol).preserved
    w, v = hermitian_eig(m, tol)
    clusters = cluster_eigenvalues(w, tol.eigencluster)

    if preserved:
        terms = []
        for idx in clusters:
            sub = Subspace(ch.dim, v[:, idx])
            if not is_invariant_subspace(ch, sub, tol).invariant:
                raise ToleranceFailure(
                    "element is preserved but one of its eigenspaces failed the "
                    "invariance check; eigencluster tolerance is inconsistent"
                )
            terms.append(StructuralTerm(weight=max(float(np.mean(w[idx])), 0.0), subspace=sub))
        terms.reverse()  # descending weight
        return StructuralDecomposition(terms=tuple(terms))

    for idx in reversed(clusters):  # descending eigenvalue
        sub = Subspace(ch.dim, v[:, idx])
        if not is_invariant_subspace(ch, sub, tol).invariant:
            return StructuralFailure(witness_subspace=sub)
    raise ToleranceFailure(
        "element is not preserved yet every eigenspace passed the invariance "
        "check; tolerances are inconsistent"
    )


def violation_witness(ch: KrausChannel, e, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A pure density matrix whose statistics the channel visibly changes.

    Built from the top eigenvector (by magnitude) of ``E - phi^dagger(E)``;
    the achieved gap ``|tr(E rho) - tr(E phi(rho))|`` equals that eigenvalue's
    magnitude.
    """
    m = _check_psd(e, tol)
    report = statistics_preserved(ch, m, tol)
    if report.preserved:
        raise NoViolation("element statistics are preserved; no witness exists")
    diff = m - ch.adjoint().apply(m)
    w, v = hermitian_eig((diff + diff.conj().T) / 2, tol)
    top = int(np.argmax(np.abs(w)))
    x = v[:, top]
    return np.outer(x, x.conj())


@dataclass(frozen=True, eq=False)
class ElementReport:
    preserved: bool
    residual: float
    structure: StructuralDecomposition | StructuralFailure


@dataclass(frozen=True, eq=False)
class MeasurementReport:
    """Per-element preservation verdicts, plus the projective-only cross-checks."""

    elements: tuple[ElementReport, ...]
    all_preserved: bool
    commute: CommutationReport | None = None
    ranges_invariant: bool | None = None


def measurement_preserved(
    ch: KrausChannel,
    m: Povm | ProjectiveMeasurement,
    tol: Tolerances = DEFAULT_TOL,
) -> MeasurementReport:
    """Aggregate the per-element checks over a measurement.

    For projective measurements, three criteria are evaluated: all elements
    preserved, every projector range invariant, and the measurement channel
    commuting with the channel. The first two are equivalent, and invariance
    implies commutation; a violation of either proven implication raises
    ToleranceFailure. Commutation without invariance is genuinely possible
    (the depolarizing family commutes with every unital channel) and is
    reported as-is.
    """
    if m.dim != ch.dim:
        raise DimensionMismatch(f"measurement dim {m.dim} != channel dim {ch.dim}")
    projective = isinstance(m, ProjectiveMeasurement)
    elements = m.projectors if projective else m.elements

    reports = []
    for e in elements:
        p = statistics_preserved(ch, e, tol)
        reports.append(
            ElementReport(
                preserved=p.preserved,
                residual=p.residual,
                structure=povm_structural_decomposition(ch, e, tol),
            )
        )
    all_preserved = all(r.preserved for r in reports)

    commute = None
    ranges_invariant = None
    if projective:
        commute = channels_commute(projective_channel(m), ch, tol)
        ranges_invariant = all(
            projection_intertwines(ch, p, tol).commute for p in m.projectors
        )
        if all_preserved != ranges_invariant:
            raise ToleranceFailure(
                "per-element preservation and projector-range invariance "
                f"disagree (preserved={all_preserved}, invariant={ranges_invariant}); "
                "tolerances are inconsistent"
            )
        if ranges_invariant and not commute.commute:
            raise ToleranceFailure(
                "every projector range is invariant yet the measurement channel "
                f"fails to commute (residual={commute.residual:.3e}); "
                "tolerances are inconsistent"
            )
    return MeasurementReport(
        elements=tuple(reports),
        all_preserved=all_preserved,
        commute=commute,
        ranges_invariant=ranges_invariant,
    )
