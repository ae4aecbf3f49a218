"""Coherent information and the dephasing-mask lower bound on quantum capacity.

For a Hadamard channel rho -> M * rho with a unit-diagonal PSD mask M on n
levels, the quantum capacity satisfies Q >= log2(n) - S(M/n).  The bound is
attained by the coherent information at the maximally mixed input, which this
module can verify numerically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels as mc
from .channels import Channel, DensityMatrix
from .errors import DiagonalNotUnit, DimensionMismatch, MaskNotPSD


@dataclass(frozen=True)
class CapacityReport:
    coherent_information: float  # bits
    hadamard_bound: float | None  # bits; None when no mask was given
    input_dim: int


def purify(rho: DensityMatrix, unitary: np.ndarray | None = None) -> np.ndarray:
    """A purification |phi> of rho on reference (x) system, system on the right.

    ``unitary`` optionally rotates the reference basis; the coherent
    information must not depend on it.
    """
    vals, vecs = np.linalg.eigh(rho.matrix)
    vals = np.clip(vals, 0.0, None)
    n = rho.dim
    phi = np.zeros(n * n, dtype=complex)
    ref = np.eye(n, dtype=complex) if unitary is None else np.asarray(unitary, dtype=complex)
    for i in range(n):
        phi += np.sqrt(vals[i]) * np.kron(ref[:, i], vecs[:, i])
    return phi


def coherent_information(
    channel: Channel, rho: DensityMatrix, reference_unitary: np.ndarray | None = None
) -> float:
    """I_c = S(G(rho)) - S((id (x) G)(|phi><phi|)) in bits."""
    if channel.dim_in != channel.dim_out:
        raise DimensionMismatch("coherent information needs a square channel")
    if rho.dim != channel.dim_in:
        raise DimensionMismatch("state and channel dimensions differ")
    out_entropy = mc.von_neumann_entropy(mc.apply(channel, rho))
    phi = purify(rho, unitary=reference_unitary)
    joint = DensityMatrix(np.outer(phi, phi.conj()))
    joint_entropy = mc.von_neumann_entropy(mc.bipartite_apply(channel, joint))
    return out_entropy - joint_entropy


def _check_mask(mask: np.ndarray, n: int, eps_tr: float = mc.EPS_TR) -> np.ndarray:
    mask = np.asarray(mask, dtype=complex)
    if mask.shape != (n, n):
        raise DimensionMismatch(f"mask shape {mask.shape} is not ({n}, {n})")
    if np.max(np.abs(mask - mask.conj().T)) > mc.EPS_H:
        raise MaskNotPSD("mask is not Hermitian")
    lmin = float(np.linalg.eigvalsh(mask).min())
    if lmin < -mc.EPS_PSD:
        raise MaskNotPSD(f"mask minimum eigenvalue {lmin:.3e}")
    if np.max(np.abs(np.diag(mask) - 1.0)) > eps_tr:
        raise DiagonalNotUnit("mask diagonal is not identically 1")
    return mask


def hadamard_channel(mask: np.ndarray) -> Channel:
    """The dephasing channel rho -> M * rho as a Kraus family.

    Kraus operators are the diagonal matrices built from the spectral vectors
    of M (deterministic eigendecomposition ordering, as everywhere else).
    """
    n = np.asarray(mask).shape[0]
    mask = _check_mask(mask, n)
    vals, vecs = mc._deterministic_eig(mask)
    cutoff = 1e-14 * max(float(vals.max(initial=0.0)), 1.0)
    ops = [np.diag(np.sqrt(lam) * v) for lam, v in zip(vals, vecs) if lam > cutoff]
    if not ops:
        ops = [np.zeros((n, n), dtype=complex)]
    return Channel(tuple(ops))


def hadamard_bound(mask: np.ndarray, n: int) -> float:
    """Capacity lower bound log2(n) - S(M/n) in bits."""
    mask = _check_mask(mask, n)
    vals = np.linalg.eigvalsh(mask / n)
    return float(np.log2(n)) - mc.entropy_of_eigenvalues(vals)


def verify_hqc(mask: np.ndarray, n: int) -> float:
    """|coherent information at the maximally mixed input - hadamard_bound|.

    The bound is an equality at this input (the mask's spectral vectors give
    mutually orthogonal branches of the purified output), so the returned
    difference must vanish up to roundoff.
    """
    mask = _check_mask(mask, n)
    chan = hadamard_channel(mask)
    mixed = DensityMatrix(np.eye(n) / n)
    return abs(coherent_information(chan, mixed) - hadamard_bound(mask, n))


def capacity_report(
    channel: Channel,
    rho: DensityMatrix,
    mask: np.ndarray | None = None,
) -> CapacityReport:
    bound = None if mask is None else hadamard_bound(mask, channel.dim_in)
    return CapacityReport(
        coherent_information=coherent_information(channel, rho),
        hadamard_bound=bound,
        input_dim=channel.dim_in,
    )
