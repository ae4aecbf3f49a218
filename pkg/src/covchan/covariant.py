"""Time covariance: spectra, sector extraction, and the canonical
decomposition of a covariant channel into partial energy shifts composed with
Hadamard dephasing masks.

A channel G commuting with the Hamiltonian conjugation has the form

    G(rho) = sum_sigma  S_sigma (M_sigma * rho) S_sigma^dag

where sigma runs over the energy differences of the spectrum, S_sigma is the
0/1 partial permutation shifting each level by sigma where the target exists,
M_sigma is a positive mask supported on the shift's domain, and * is the
entrywise product.  Sector data is read off the Choi matrix, which makes the
extraction independent of the Kraus gauge.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels as mc
from .channels import Channel, ChoiMatrix, DensityMatrix
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    MaskNotPSD,
    NotCovariant,
    NotCP,
    UnknownSector,
)


@dataclass(frozen=True)
class Spectrum:
    """Strictly increasing energies of a non-degenerate diagonal Hamiltonian.

    match_tol declares when two floating-point energy differences are "the
    same" sigma; spectra with gaps at or below match_tol are rejected.
    """

    energies: np.ndarray
    match_tol: float = 0.0  # 0 -> default relative tolerance

    def __post_init__(self):
        en = np.asarray(self.energies, dtype=float)
        if en.ndim != 1 or en.size == 0:
            raise DegenerateSpectrum("spectrum must be a non-empty 1-d list of energies")
        if not np.all(np.isfinite(en)):
            raise DegenerateSpectrum("spectrum contains non-finite energies")
        tol = self.match_tol
        if tol <= 0.0:
            tol = 1e-9 * max(1.0, float(np.max(np.abs(en))))
        if en.size > 1 and float(np.min(np.diff(en))) <= tol:
            raise DegenerateSpectrum(
                f"energies must be strictly increasing with gaps > {tol:.3e}"
            )
        en.setflags(write=False)
        object.__setattr__(self, "energies", en)
        object.__setattr__(self, "match_tol", tol)

    @property
    def dim(self) -> int:
        return self.energies.size

    def level_of(self, energy: float) -> int:
        """Index of the level with the given energy, or -1 if absent."""
        hits = np.nonzero(np.abs(self.energies - energy) <= self.match_tol)[0]
        return int(hits[0]) if hits.size else -1


@dataclass(frozen=True)
class PartialShift:
    """0/1 partial permutation |omega + sigma><omega| over the shift's domain."""

    sigma: float
    matrix: np.ndarray
    domain: tuple[int, ...]

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class SectorMask:
    """Hermitian mask supported on domain x domain, PSD on its domain."""

    sigma: float
    mask: np.ndarray
    domain: tuple[int, ...]
    eps_h: float = mc.EPS_H
    eps_psd: float = mc.EPS_PSD

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=complex)
        if np.max(np.abs(mask - mask.conj().T)) > self.eps_h:
            raise MaskNotPSD(f"sector {self.sigma}: mask is not Hermitian")
        dom = list(self.domain)
        off = mask.copy()
        if dom:
            sub = mask[np.ix_(dom, dom)]
            lmin = float(np.linalg.eigvalsh((sub + sub.conj().T) / 2.0).min())
            if lmin < -self.eps_psd:
                raise MaskNotPSD(
                    f"sector {self.sigma}: domain submatrix eigenvalue {lmin:.3e}"
                )
            off[np.ix_(dom, dom)] = 0.0
        if np.max(np.abs(off), initial=0.0) > 0.0:
            raise MaskNotPSD(f"sector {self.sigma}: mask has support outside its domain")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @property
    def domain_submatrix(self) -> np.ndarray:
        dom = list(self.domain)
        return self.mask[np.ix_(dom, dom)]


@dataclass(frozen=True)
class SectorDecomposition:
    """The canonical family sigma -> (S_sigma, M_sigma) of one channel.

    projection_defect is the Choi Frobenius distance between the input channel
    and the decomposition; it is zero (up to roundoff) for exactly covariant
    inputs and reports the sector-projection distance otherwise.
    """

    spectrum: Spectrum
    sectors: tuple[tuple[PartialShift, SectorMask], ...]
    projection_defect: float = 0.0

    def sigmas(self) -> np.ndarray:
        return np.array([shift.sigma for shift, _ in self.sectors])

    def sector(self, sigma: float) -> tuple[PartialShift, SectorMask]:
        for shift, mask in self.sectors:
            if abs(shift.sigma - sigma) <= self.spectrum.match_tol:
                return shift, mask
        raise UnknownSector(f"no sector at sigma = {sigma}")


@dataclass(frozen=True)
class EnergyShiftDistribution:
    """Probabilities p(sigma) = tr(G_sigma(rho)) of the energy given away."""

    pairs: tuple[tuple[float, float], ...]

    def probability(self, sigma: float, tol: float = 0.0) -> float:
        for s, p in self.pairs:
            if abs(s - sigma) <= tol or s == sigma:
                return p
        return 0.0

    def as_dict(self) -> dict[float, float]:
        return {s: p for s, p in self.pairs}


# ---------------------------------------------------------------------------
# Spectra and shifts


def energy_differences(spectrum: Spectrum) -> np.ndarray:
    """Sorted distinct values omega_j - omega_k, clustered with match_tol."""
    en = spectrum.energies
    diffs = np.sort((en[:, None] - en[None, :]).reshape(-1))
    reps = []
    start = 0
    for i in range(1, diffs.size + 1):
        if i == diffs.size or diffs[i] - diffs[i - 1] > spectrum.match_tol:
            reps.append(float(np.mean(diffs[start:i])))
            start = i
    return np.array(reps)


def shift_domain(spectrum: Spectrum, sigma: float) -> tuple[int, ...]:
    return tuple(
        j
        for j in range(spectrum.dim)
        if spectrum.level_of(spectrum.energies[j] + sigma) >= 0
    )


def partial_shift(spectrum: Spectrum, sigma: float) -> PartialShift:
    """The partial isometry S_sigma : |omega> -> |omega + sigma|>, 0 off-domain."""
    n = spectrum.dim
    mat = np.zeros((n, n), dtype=complex)
    dom = shift_domain(spectrum, sigma)
    for j in dom:
        mat[spectrum.level_of(spectrum.energies[j] + sigma), j] = 1.0
    return PartialShift(sigma=float(sigma), matrix=mat, domain=dom)


def evolve_matrix(spectrum: Spectrum, t: float, mat: np.ndarray) -> np.ndarray:
    """Conjugation e^{-iHt} mat e^{iHt} for an arbitrary operator."""
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (spectrum.dim, spectrum.dim):
        raise DimensionMismatch(f"operator shape {mat.shape} vs spectrum dim {spectrum.dim}")
    ph = np.exp(-1j * spectrum.energies * t)
    return mat * np.outer(ph, ph.conj())


def evolve(spectrum: Spectrum, t: float, rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(evolve_matrix(spectrum, t, rho.matrix))


# ---------------------------------------------------------------------------
# Sector extraction

def _pair_sigma_ids(spectrum: Spectrum) -> np.ndarray:
    """Cluster id of omega_{j'} - omega_j for every flattened pair (j', j)."""
    sigmas = energy_differences(spectrum)
    en = spectrum.energies
    diff = en[:, None] - en[None, :]
    ids = np.abs(diff.reshape(-1, 1) - sigmas[None, :]).argmin(axis=1)
    return ids


def covariance_defect(channel: Channel, spectrum: Spectrum) -> float:
    """Largest |Choi entry| coupling two different energy-difference sectors.

    Zero exactly when the channel commutes with the time evolution: under
    alpha_t conjugation the Choi entries pick up relative phases between
    sectors, so any cross-sector mass breaks covariance.
    """
    if channel.dim_in != spectrum.dim or channel.dim_out != spectrum.dim:
        raise DimensionMismatch("channel and spectrum dimensions differ")
    ids = _pair_sigma_ids(spectrum)
    choi = mc.choi_of(channel).matrix
    cross = ids[:, None] != ids[None, :]
    if not cross.any():
        return 0.0
    return float(np.max(np.abs(choi[cross])))


def decompose(
    channel: Channel,
    spectrum: Spectrum,
    tol: float = 1e-10,
) -> SectorDecomposition:
    """Extract the canonical sector decomposition from the Choi matrix.

    For each energy difference sigma the mask entries are

        M_sigma(j, k) = <j + d_sigma| G(|j><k|) |k + d_sigma>

    read directly from the Choi matrix (a principal submatrix, hence PSD).
    Inputs covariant only within ``tol`` are sector-projected: cross-sector
    Choi mass is discarded, and if the input was trace preserving the mask
    diagonals are renormalized to restore the trace-preservation identity.
    The distance of that projection is reported, never hidden.
    """
    defect = covariance_defect(channel, spectrum)
    if defect > tol:
        raise NotCovariant(defect, tol)
    choi = mc.choi_of(channel)
    lmin = float(np.linalg.eigvalsh(choi.matrix).min())
    if lmin < -mc.EPS_PSD:
        raise NotCP(f"Choi minimum eigenvalue {lmin:.3e}")

    n = spectrum.dim
    sigmas = energy_differences(spectrum)
    shifts = {float(s): partial_shift(spectrum, s) for s in sigmas}

    raw_masks: dict[float, np.ndarray] = {}
    for s in sigmas:
        shift = shifts[float(s)]
        mask = np.zeros((n, n), dtype=complex)
        target = {j: spectrum.level_of(spectrum.energies[j] + s) for j in shift.domain}
        for j in shift.domain:
            for k in shift.domain:
                row = target[j] * n + j
                col = target[k] * n + k
                mask[j, k] = choi.matrix[row, col]
        raw_masks[float(s)] = (mask + mask.conj().T) / 2.0

    # Renormalize diagonal sums to 1 when the input channel was TP; this is
    # the TP-restoring half of the sector projection for near-covariant input.
    tp_defect = mc.is_cptp(channel).tp_defect
    if tp_defect <= mc.EPS_TP:
        diag_sum = np.zeros(n)
        for s, mask in raw_masks.items():
            diag_sum += np.real(np.diag(mask))
        scale = 1.0 / np.sqrt(diag_sum)
        for s in raw_masks:
            raw_masks[s] = raw_masks[s] * np.outer(scale, scale)

    scale_max = max(1.0, float(np.max(np.abs(choi.matrix))))
    sectors = []
    for s in sigmas:
        mask = raw_masks[float(s)]
        shift = shifts[float(s)]
        if float(np.max(np.abs(mask), initial=0.0)) <= 1e-13 * scale_max:
            continue
        sectors.append(
            (shift, SectorMask(sigma=float(s), mask=mask, domain=shift.domain))
        )

    decomp = SectorDecomposition(
        spectrum=spectrum, sectors=tuple(sectors), projection_defect=0.0
    )
    proj = float(np.linalg.norm(mc.choi_of(reconstruct(decomp)).matrix - choi.matrix))
    return SectorDecomposition(
        spectrum=spectrum, sectors=tuple(sectors), projection_defect=proj
    )


def sector_kraus(shift: PartialShift, mask: SectorMask, eps_psd: float = mc.EPS_PSD):
    """Kraus operators S_sigma diag(d) from the spectral vectors d of M_sigma."""
    vals, vecs = mc._deterministic_eig(mask.mask)
    if vals.min() < -eps_psd:
        raise MaskNotPSD(f"sector {shift.sigma}: eigenvalue {vals.min():.3e}")
    cutoff = 1e-14 * max(float(vals.max(initial=0.0)), 1.0)
    ops = []
    for lam, v in zip(vals, vecs):
        if lam <= cutoff:
            continue
        ops.append(shift.matrix @ np.diag(np.sqrt(lam) * v))
    if not ops:
        ops.append(np.zeros_like(shift.matrix))
    return ops


def reconstruct(decomp: SectorDecomposition) -> Channel:
    """Rebuild the channel sum_sigma S_sigma (M_sigma * rho) S_sigma^dag."""
    ops = []
    for shift, mask in decomp.sectors:
        ops.extend(sector_kraus(shift, mask))
    return Channel(tuple(ops))


def sector_channel(decomp: SectorDecomposition, sigma: float) -> Channel:
    """The single CP (possibly trace-decreasing) component G_sigma."""
    shift, mask = decomp.sector(sigma)
    return Channel(tuple(sector_kraus(shift, mask)))


def shift_distribution(
    decomp: SectorDecomposition, rho: DensityMatrix
) -> EnergyShiftDistribution:
    """Energy shift probabilities p(sigma) = tr(G_sigma(rho))."""
    if rho.dim != decomp.spectrum.dim:
        raise DimensionMismatch("state and spectrum dimensions differ")
    pairs = []
    for shift, mask in decomp.sectors:
        # tr(S (M * rho) S^dag) = sum_j M(j, j) rho(j, j) since M vanishes
        # outside the shift's domain.
        p = float(np.sum(np.real(np.diag(mask.mask) * np.diag(rho.matrix))))
        if p < -mc.EPS_PSD:
            raise MaskNotPSD(f"negative probability {p:.3e} at sigma {shift.sigma}")
        pairs.append((shift.sigma, min(max(p, 0.0), 1.0)))
    return EnergyShiftDistribution(pairs=tuple(pairs))


# ---------------------------------------------------------------------------
# Characteristic function and its consistency checks


def characteristic_function(
    channel: Channel,
    spectrum: Spectrum,
    K: np.ndarray,
    rho: DensityMatrix,
    t: float,
) -> complex:
    """f(t) = tr(K G(rho e^{-iHt}) e^{iHt}).

    For a covariant channel this is the Fourier series
    sum_sigma tr(K G_sigma(rho)) e^{i sigma t} of the sector components.
    """
    K = np.asarray(K, dtype=complex)
    n = spectrum.dim
    if K.shape != (n, n) or rho.dim != n or channel.dim_in != n:
        raise DimensionMismatch("characteristic_function: dimensions do not match")
    ph = np.exp(-1j * spectrum.energies * t)
    shifted = rho.matrix * ph[None, :]
    out = mc.apply_matrix(channel, shifted) * ph.conj()[None, :]
    return complex(np.trace(K @ out))


def bochner_check(
    channel: Channel,
    spectrum: Spectrum,
    K: np.ndarray,
    rho: DensityMatrix,
    times,
) -> float:
    """Minimum eigenvalue of the Gram matrix F[k, l] = f(t_k - t_l).

    Positive semidefiniteness of f makes this >= 0 (up to roundoff) for every
    covariant CPTP channel and PSD observable K.
    """
    times = np.asarray(times, dtype=float)
    m = times.size
    F = np.empty((m, m), dtype=complex)
    for a in range(m):
        for b in range(m):
            F[a, b] = characteristic_function(channel, spectrum, K, rho, times[a] - times[b])
    F = (F + F.conj().T) / 2.0
    return float(np.linalg.eigvalsh(F).min())


def domain_extension_check(
    decomp: SectorDecomposition, rho: DensityMatrix, t: float
) -> float:
    """Largest defect of G_sigma(rho e^{-iHt}) = G_sigma(rho) e^{-iHt} e^{i sigma t}.

    The left-hand side applies the sector map to the non-Hermitian operator
    directly; the identity must hold numerically for covariant channels.
    """
    spectrum = decomp.spectrum
    ph = np.exp(-1j * spectrum.energies * t)
    shifted = rho.matrix * ph[None, :]
    worst = 0.0
    for shift, mask in decomp.sectors:
        chan = Channel(tuple(sector_kraus(shift, mask)))
        lhs = mc.apply_matrix(chan, shifted)
        rhs = mc.apply_matrix(chan, rho.matrix) * ph[None, :] * np.exp(1j * shift.sigma * t)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst
