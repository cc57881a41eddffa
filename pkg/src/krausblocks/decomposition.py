"""Invariant subspaces, the irreducible block decomposition, channel
restriction, and matching of two decompositions.

A subspace is invariant exactly when the channel fixes its projector;
equivalently all Kraus operators are block-diagonal with respect to it. The
decomposition routine splits the space along eigenspaces of a random fixed
operator and recurses until every block's restricted channel has a trivial
commutant, which certifies irreducibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import KrausChannel
from .errors import (
    DimensionMismatch,
    MultisetMismatch,
    NotInvariant,
    NotOrthonormal,
    ToleranceFailure,
)
from .fixed_points import commutant_basis
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    cluster_eigenvalues,
    frozen,
    hermitian_eig,
    max_abs,
    orthonormal_complement,
)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace given by orthonormal basis columns in the ambient space."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis)
        if b.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"basis has {b.shape[0]} rows, ambient dim is {self.ambient_dim}"
            )
        if b.shape[1] < 1 or b.shape[1] > self.ambient_dim:
            raise DimensionMismatch(f"basis must have between 1 and {self.ambient_dim} columns")
        dev = max_abs(b.conj().T @ b - np.eye(b.shape[1]))
        if dev > 1e-10:
            raise NotOrthonormal(f"max |B^dagger B - I| = {dev:.3e}")
        object.__setattr__(self, "basis", frozen(b))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        return Subspace(self.ambient_dim, orthonormal_complement(self.basis, self.ambient_dim, tol))

    @classmethod
    def span(cls, vectors) -> "Subspace":
        """Subspace spanned by the given (not necessarily orthonormal) columns."""
        v = np.asarray(vectors, dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        q, r = np.linalg.qr(v)
        keep = np.abs(np.diagonal(r)) > 1e-12 * max(1.0, max_abs(r))
        return cls(v.shape[0], q[:, keep])


@dataclass(frozen=True, eq=False)
class IrisDecomposition:
    """Ordered orthogonal blocks covering the ambient space, each certified
    irreducible (restricted commutant of size one)."""

    ambient_dim: int
    blocks: tuple[Subspace, ...]
    irreducibility_certificates: tuple[int, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.irreducibility_certificates):
            raise DimensionMismatch("one certificate per block required")
        if any(c != 1 for c in self.irreducibility_certificates):
            raise ToleranceFailure("every block must certify a commutant count of 1")
        total = 0
        for i, s in enumerate(self.blocks):
            if s.ambient_dim != self.ambient_dim:
                raise DimensionMismatch("all blocks must live in the same ambient space")
            total += s.dim
            for t in self.blocks[:i]:
                if max_abs(t.basis.conj().T @ s.basis) > 1e-9:
                    raise NotOrthonormal("blocks are not pairwise orthogonal within 1e-9")
        if total != self.ambient_dim:
            raise DimensionMismatch(
                f"block dimensions sum to {total}, ambient dim is {self.ambient_dim}"
            )

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def block_dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.blocks)

    def dimension_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(self.block_dims))


@dataclass(frozen=True)
class InvarianceReport:
    invariant: bool
    residual: float


def is_invariant_subspace(
    ch: KrausChannel, s: Subspace, tol: Tolerances = DEFAULT_TOL
) -> InvarianceReport:
    """Projector-fixing test: S is invariant iff ``apply(ch, P_S) = P_S``."""
    if s.ambient_dim != ch.dim:
        raise DimensionMismatch(f"subspace ambient dim {s.ambient_dim} != channel dim {ch.dim}")
    p = s.projector()
    residual = max_abs(ch.apply(p) - p)
    return InvarianceReport(invariant=residual <= tol.residual, residual=residual)


def offdiagonal_residual(ch: KrausChannel, s: Subspace) -> float:
    """Largest off-diagonal Kraus matrix element across the S / S-perp split.

    Vanishes exactly when S (and its complement) are invariant, i.e. when
    every Kraus operator is block-diagonal in a basis adapted to S.
    """
    if s.ambient_dim != ch.dim:
        raise DimensionMismatch(f"subspace ambient dim {s.ambient_dim} != channel dim {ch.dim}")
    if s.dim == s.ambient_dim:
        return 0.0
    b = s.basis
    c = orthonormal_complement(b, s.ambient_dim)
    worst = 0.0
    for a in ch.kraus:
        worst = max(worst, max_abs(c.conj().T @ a @ b), max_abs(b.conj().T @ a @ c))
    return worst


def restrict(ch: KrausChannel, s: Subspace, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """Channel restricted to an invariant subspace, Kraus ops ``B^dagger A_i B``."""
    report = is_invariant_subspace(ch, s, tol)
    if not report.invariant:
        raise NotInvariant(
            f"subspace is not invariant (residual={report.residual:.3e})",
            residual=report.residual,
        )
    b = s.basis
    return KrausChannel.from_kraus([b.conj().T @ a @ b for a in ch.kraus], tol)


def _canonical_basis(basis: np.ndarray) -> np.ndarray:
    """Re-orthonormalize and fix column phases so output is reproducible.

    Each column is rotated so its largest-magnitude entry is real positive.
    """
    q, _ = np.linalg.qr(basis)
    out = np.array(q)
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        phase = col[i] / abs(col[i])
        out[:, j] = col * phase.conjugate()
    return out


def _block_sort_key(s: Subspace):
    lead = np.round(s.basis[:, 0], 9)
    return (s.dim, tuple(float(x) for pair in zip(lead.real, lead.imag) for x in pair))


def _split(
    ch: KrausChannel,
    lift: np.ndarray,
    rng: np.random.Generator,
    tol: Tolerances,
    out: list[np.ndarray],
) -> None:
    """Recursively split ``ch`` (already restricted; ``lift`` maps back to the
    ambient space) into irreducible blocks, appending ambient bases to ``out``."""
    basis = commutant_basis(ch, tol)
    if basis.count == 1:
        out.append(lift)
        return

    d = ch.dim
    clusters = None
    vecs = None
    # a random real combination of the non-identity basis elements is
    # non-scalar (scalars are orthogonal to them), so it has >= 2 eigenvalue
    # clusters; retry guards against freak near-degenerate draws
    for _ in range(8):
        coeff = rng.standard_normal(basis.count - 1)
        sigma = np.zeros((d, d), dtype=complex)
        for c, h in zip(coeff, basis.hermitian_basis[1:]):
            sigma += c * h
        nrm = max_abs(sigma)
        if nrm < 1e-12:
            continue
        w, v = hermitian_eig(sigma / nrm, tol)
        groups = cluster_eigenvalues(w, tol.eigencluster)
        if len(groups) >= 2:
            clusters, vecs = groups, v
            break
    if clusters is None:
        raise ToleranceFailure(
            "could not split a reducible block: random fixed operators kept a "
            "single eigenvalue cluster at the configured eigencluster width"
        )

    for idx in clusters:
        sub = Subspace(d, vecs[:, idx])
        try:
            ch_sub = restrict(ch, sub, tol)
        except NotInvariant as exc:
            raise ToleranceFailure(
                f"eigenspace of a fixed operator failed the invariance check "
                f"(residual={exc.residual:.3e}); input is too ill-conditioned"
            ) from exc
        _split(ch_sub, lift @ sub.basis, rng, tol, out)


def iris_decompose(
    ch: KrausChannel, tol: Tolerances = DEFAULT_TOL, seed: int = 0
) -> IrisDecomposition:
    """Decompose the space into irreducible invariant blocks of the channel.

    Every Kraus operator is simultaneously block-diagonal with respect to the
    returned blocks, each block's restricted channel has a trivial commutant,
    and the sorted dimension list is independent of ``seed`` and of the Kraus
    representation. Deterministic for a fixed seed.

    Blocks are ordered by dimension ascending, ties broken by the rounded
    leading basis vector.
    """
    rng = np.random.default_rng(seed)
    bases: list[np.ndarray] = []
    _split(ch, np.eye(ch.dim, dtype=complex), rng, tol, bases)

    blocks = sorted(
        (Subspace(ch.dim, _canonical_basis(b)) for b in bases), key=_block_sort_key
    )
    certificates = []
    for s in blocks:
        if offdiagonal_residual(ch, s) > tol.residual:
            raise ToleranceFailure(
                "a recovered block leaves off-diagonal Kraus weight above tol.residual"
            )
        report = is_invariant_subspace(ch, s, tol)
        if not report.invariant:
            raise ToleranceFailure(
                f"a recovered block failed the invariance check (residual={report.residual:.3e})"
            )
        certificates.append(commutant_basis(restrict(ch, s, tol), tol).count)
        if certificates[-1] != 1:
            raise ToleranceFailure("a recovered block failed the irreducibility certificate")
    return IrisDecomposition(
        ambient_dim=ch.dim,
        blocks=tuple(blocks),
        irreducibility_certificates=tuple(certificates),
    )


@dataclass(frozen=True)
class MatchingComponent:
    """A connected component of the block-overlap graph."""

    left_block_indices: tuple[int, ...]
    right_block_indices: tuple[int, ...]
    common_dimension_multiset: tuple[int, ...]


@dataclass(frozen=True)
class DecompositionMatching:
    components: tuple[MatchingComponent, ...]
    bijection: tuple[tuple[int, int], ...]


def _has_overlap(a: Subspace, b: Subspace, tol: Tolerances) -> bool:
    """True unless every basis vector of ``a`` lies in the complement of ``b``.

    Decided vector by vector: the squared overlap mass ``sum_k |<v|b_k>|^2``
    of each basis vector of ``a`` with ``b`` is compared against the
    tolerance.
    """
    m = a.basis.conj().T @ b.basis
    masses = np.sum(np.abs(m) ** 2, axis=1)
    return bool(np.max(masses) > tol.residual)


def match_decompositions(
    d1: IrisDecomposition, d2: IrisDecomposition, tol: Tolerances = DEFAULT_TOL
) -> DecompositionMatching:
    """Match two decompositions through the bipartite block-overlap graph.

    Blocks that are not mutually orthogonal get an edge; connected components
    (found by depth-first search) must then contain equally many blocks of
    equal dimensions on both sides, and a dimension-preserving bijection is
    emitted. Raises MultisetMismatch when the component structure is
    inconsistent, which signals that an input is not a true decomposition of
    the same channel.
    """
    if d1.ambient_dim != d2.ambient_dim:
        raise DimensionMismatch("decompositions live in different ambient spaces")
    nl, nr = d1.n_blocks, d2.n_blocks

    adj: list[list[int]] = [[] for _ in range(nl + nr)]
    for i in range(nl):
        for j in range(nr):
            if _has_overlap(d1.blocks[i], d2.blocks[j], tol):
                adj[i].append(nl + j)
                adj[nl + j].append(i)

    seen = [False] * (nl + nr)
    components: list[MatchingComponent] = []
    bijection: list[tuple[int, int]] = []
    for start in range(nl + nr):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            u = stack.pop()
            members.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        left = sorted(u for u in members if u < nl)
        right = sorted(u - nl for u in members if u >= nl)
        left_dims = sorted(d1.blocks[i].dim for i in left)
        right_dims = sorted(d2.blocks[j].dim for j in right)
        if len(left) != len(right) or left_dims != right_dims:
            raise MultisetMismatch(
                f"component has {len(left)} left blocks {left_dims} vs "
                f"{len(right)} right blocks {right_dims}"
            )
        components.append(
            MatchingComponent(
                left_block_indices=tuple(left),
                right_block_indices=tuple(right),
                common_dimension_multiset=tuple(left_dims),
            )
        )
        pair_left = sorted(left, key=lambda i: (d1.blocks[i].dim, i))
        pair_right = sorted(right, key=lambda j: (d2.blocks[j].dim, j))
        bijection.extend(zip(pair_left, pair_right))

    bijection.sort()
    return DecompositionMatching(components=tuple(components), bijection=tuple(bijection))
