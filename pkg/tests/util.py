"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

from krausblocks import (
    KrausChannel,
    ProjectiveMeasurement,
    Subspace,
    direct_sum,
    haar_unitary,
    null_space,
    random_unital_channel,
    unvec,
)
from krausblocks.linalg import DEFAULT_TOL


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (z + z.conj().T) / 2


def random_psd(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return z @ z.conj().T


def random_density(d: int, rng: np.random.Generator) -> np.ndarray:
    m = random_psd(d, rng)
    return m / np.real(np.trace(m))


def random_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_subspace(d: int, k: int, rng: np.random.Generator) -> Subspace:
    return Subspace(d, haar_unitary(d, rng)[:, :k])


def rotated_direct_sum(
    dims: tuple[int, ...], seed: int, n_unitaries: int = 3, rotate: bool = True
) -> tuple[KrausChannel, np.ndarray, list[np.ndarray]]:
    """Random unital blocks glued together and conjugated by a Haar unitary.

    Returns the channel, the conjugating unitary, and the embedded block
    projectors (in the rotated frame).
    """
    rng = np.random.default_rng(seed)
    blocks = [
        random_unital_channel(d, n_unitaries, seed=int(rng.integers(2**31)))
        for d in dims
    ]
    ch = blocks[0]
    for b in blocks[1:]:
        ch = direct_sum(ch, b)
    total = sum(dims)
    u = haar_unitary(total, rng) if rotate else np.eye(total, dtype=complex)
    ops = [u @ a @ u.conj().T for a in ch.kraus]
    ch = KrausChannel.from_kraus(ops)
    projectors = []
    offset = 0
    for d in dims:
        p = np.zeros((total, total), dtype=complex)
        p[offset : offset + d, offset : offset + d] = np.eye(d)
        projectors.append(u @ p @ u.conj().T)
        offset += d
    return ch, u, projectors


def computational_measurement(d: int) -> ProjectiveMeasurement:
    projs = []
    for k in range(d):
        p = np.zeros((d, d), dtype=complex)
        p[k, k] = 1.0
        projs.append(p)
    return ProjectiveMeasurement(dim=d, projectors=tuple(projs))


def block_measurement(d: int, split: int) -> ProjectiveMeasurement:
    p1 = np.zeros((d, d), dtype=complex)
    p1[:split, :split] = np.eye(split)
    return ProjectiveMeasurement(dim=d, projectors=(p1, np.eye(d) - p1))


def fixed_hermitian_basis_oracle(ch: KrausChannel) -> list[np.ndarray]:
    """Independent fixed-point solver: Hermitian null space of (L - I).

    Cross-checks the commutation-system route used by the library.
    """
    d = ch.dim
    l = ch.superoperator_matrix() - np.eye(d * d)
    kernel = null_space(l, DEFAULT_TOL)
    mats = []
    for k in range(kernel.shape[1]):
        b = unvec(kernel[:, k], d)
        mats.append((b + b.conj().T) / 2)
        mats.append((b - b.conj().T) / 2j)
    # orthonormalize over the reals, dropping dependent directions
    basis: list[np.ndarray] = []
    for c in mats:
        r = c.copy()
        for h in basis:
            r -= np.real(np.sum(h.conj() * r)) * h
        n = np.sqrt(np.real(np.sum(r.conj() * r)))
        if n > 1e-7:
            basis.append(r / n)
    return basis


def span_projector(mats: list[np.ndarray]) -> np.ndarray:
    """Projector (as a Gram-based map on vectorized space) onto span of matrices."""
    v = np.column_stack([m.reshape(-1) for m in mats])
    q, _ = np.linalg.qr(v)
    return q @ q.conj().T
