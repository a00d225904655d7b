"""Closed-form channel statistics and average SINR under MRT.

Every user's overall channel is treated as ``CN(0, R_k)``. ``R_k`` is a
direct-link identity term, plus a ``beta_2 H1 H1^H`` floor from every IRS,
plus a correction block for each IRS tuned to user ``k``. Because only
those blocks depend on the association, they are precomputed once
(:class:`CorrelationBlocks`) and summed per candidate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import hyp2f1

from .channel import LosChannel, los_channels
from .scenario import DeploymentScenario

__all__ = [
    "phase_only",
    "sigma_v",
    "CorrelationMatrix",
    "CorrelationBlocks",
    "correlation_matrix",
    "correlation_stack",
    "mean_sq_gain",
    "fourth_moment",
    "cross_term",
    "AvgSinrReport",
    "avg_sinr",
    "sinr_bounds",
    "SinrEvaluator",
    "cross_irs_term",
]


def phase_only(X) -> np.ndarray:
    """Entrywise ``exp(j angle(X))``; a zero entry maps to 1."""
    return np.exp(1j * np.angle(X))


def sigma_v(beta_2: float, H1: LosChannel) -> np.ndarray:
    """Second moment of ``diag(|h2|) exp(j angle(H1^H h_d))`` for an associated IRS.

    Diagonal ``beta_2``; off-diagonals ``(pi beta_2 / 4)`` times the phases
    of ``H1^H H1``.
    """
    if not beta_2 > 0:
        raise ValueError("beta_2 must be positive")
    P = phase_only(H1.gram_irs())
    S = (np.pi * beta_2 / 4.0) * P
    np.fill_diagonal(S, beta_2)
    return S


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    R: np.ndarray
    trace: float

    @classmethod
    def from_matrix(cls, R) -> "CorrelationMatrix":
        R = np.asarray(R)
        return cls(R=R, trace=float(np.trace(R).real))

    def is_hermitian(self, rtol: float = 1e-10) -> bool:
        scale = max(np.abs(self.R).max(), np.finfo(float).tiny)
        return bool(np.abs(self.R - self.R.conj().T).max() <= rtol * scale)

    def is_psd(self, rel_tol: float = 1e-8) -> bool:
        lam_min = np.linalg.eigvalsh(0.5 * (self.R + self.R.conj().T)).min()
        return bool(lam_min >= -rel_tol * self.trace)


def _assoc_block(beta_1, beta_2, beta_d, H1: LosChannel, M: int, N: int) -> np.ndarray:
    """Change in ``R_k`` when IRS ``l`` switches from non-associated to associated."""
    gram = H1.gram_bs()
    H = H1.H1
    coherent = 2.0 * np.sqrt(beta_1 * beta_2 * beta_d) * N * np.pi / (4.0 * np.sqrt(M)) * phase_only(gram)
    return coherent + H @ sigma_v(beta_2, H1) @ H.conj().T - beta_2 * gram


@dataclass(frozen=True, eq=False)
class CorrelationBlocks:
    """Association-independent pieces of every ``R_k``.

    ``base[k]`` is ``beta_d I + sum_l beta_2[l, k] H1_l H1_l^H``;
    ``assoc[l, k]`` is added when IRS ``l`` is tuned to user ``k``.
    """

    base: np.ndarray
    assoc: np.ndarray

    @classmethod
    def build(cls, scn: DeploymentScenario, los=None) -> "CorrelationBlocks":
        d = scn.dims
        los = los if los is not None else los_channels(scn)
        eye = np.eye(d.M)
        base = np.array([scn.beta_d[k] * eye for k in range(d.K)], dtype=complex)
        assoc = np.empty((d.L, d.K, d.M, d.M), dtype=complex)
        for l, H1 in enumerate(los):
            gram = H1.gram_bs()
            for k in range(d.K):
                base[k] += scn.beta_2[l, k] * gram
                assoc[l, k] = _assoc_block(scn.beta_1[l], scn.beta_2[l, k], scn.beta_d[k], H1, d.M, d.N)
        return cls(base=base, assoc=assoc)

    def stack(self, lam) -> np.ndarray:
        """``(K, M, M)`` correlation matrices for a ``K x L`` association."""
        lam = np.asarray(lam, dtype=float)
        return self.base + np.einsum("kl,lkij->kij", lam, self.assoc)


def correlation_matrix(scn: DeploymentScenario, k: int, assoc_row, los=None) -> CorrelationMatrix:
    """``R_k`` for user ``k`` given its association row ``lambda_{., k}``."""
    row = np.asarray(assoc_row, dtype=float).reshape(-1)
    d = scn.dims
    if row.shape[0] != d.L:
        raise ValueError(f"association row has {row.shape[0]} entries, expected L={d.L}")
    if not np.all((row == 0) | (row == 1)):
        raise ValueError("association row must be binary")
    los = los if los is not None else los_channels(scn)
    R = scn.beta_d[k] * np.eye(d.M, dtype=complex)
    for l, H1 in enumerate(los):
        R += scn.beta_2[l, k] * H1.gram_bs()
        if row[l]:
            R += _assoc_block(scn.beta_1[l], scn.beta_2[l, k], scn.beta_d[k], H1, d.M, d.N)
    return CorrelationMatrix.from_matrix(R)


def correlation_stack(scn: DeploymentScenario, assoc, los=None) -> np.ndarray:
    lam = np.asarray(assoc, dtype=float)
    return np.array([correlation_matrix(scn, k, lam[k], los).R for k in range(scn.dims.K)])


def mean_sq_gain(scn: DeploymentScenario, k: int, assoc_row, los=None) -> float:
    """``E||h_k||^2`` from the scalar trace formula (no matrices of size M)."""
    d = scn.dims
    row = np.asarray(assoc_row, dtype=float).reshape(-1)
    los = los if los is not None else los_channels(scn)
    total = d.M * scn.beta_d[k]
    for l, H1 in enumerate(los):
        b1, b2, bd = scn.beta_1[l], scn.beta_2[l, k], scn.beta_d[k]
        A = H1.gram_irs()
        trA = np.trace(A).real
        if row[l]:
            alpha = np.sqrt(b1 * b2 * bd) * np.pi * np.sqrt(d.M) * d.N / 2.0
            total += alpha + np.trace(A @ sigma_v(b2, H1)).real - b2 * trA
        total += b2 * trA
    return float(total)


def fourth_moment(R) -> float:
    """``E||h||^4 = tr(R^2) + tr(R)^2`` for ``h ~ CN(0, R)``."""
    R = np.asarray(getattr(R, "R", R))
    return float(np.trace(R @ R).real + np.trace(R).real ** 2)


def cross_term(R_k, R_t) -> float:
    """``E|h_k^H h_t|^2 = tr(R_t R_k)`` for independent zero-mean channels."""
    R_k = np.asarray(getattr(R_k, "R", R_k))
    R_t = np.asarray(getattr(R_t, "R", R_t))
    if R_k.shape != R_t.shape:
        raise ValueError(f"dimension mismatch: {R_k.shape} vs {R_t.shape}")
    return float(np.trace(R_t @ R_k).real)


def sinr_bounds(R_k, c_k: float, sigma2: float, K: int):
    """Orthogonal-user upper bound and identical-user lower bound on the average SINR."""
    R_k = np.asarray(getattr(R_k, "R", R_k))
    tr = np.trace(R_k).real
    tr2 = np.trace(R_k @ R_k).real
    up = c_k * (tr2 + tr**2) / sigma2
    low = (1.0 + tr**2 / tr2) / ((K - 1) + sigma2 / (c_k * tr2))
    return float(low), float(up)


@dataclass(frozen=True, eq=False)
class AvgSinrReport:
    """Linear-scale average SINRs and bounds; ``min_user`` is the lowest-index minimizer."""

    gamma_bar: np.ndarray
    gamma_low: np.ndarray
    gamma_up: np.ndarray
    min_user: int
    min_sinr: float


def _gram(Rs: np.ndarray) -> np.ndarray:
    """``G[..., t, k] = tr(R_t R_k)`` for Hermitian stacks ``(..., K, M, M)``."""
    flat = Rs.reshape(Rs.shape[:-2] + (-1,))
    return np.real(flat @ np.swapaxes(flat.conj(), -1, -2))


def _closed_form_sinr(trR: np.ndarray, G: np.ndarray, p: np.ndarray, sigma2: float) -> np.ndarray:
    c = p / trR
    tr2 = np.diagonal(G, axis1=-2, axis2=-1)
    num = c * (tr2 + trR**2)
    interference = np.einsum("...t,...tk->...k", c, G) - c * tr2
    return num / (interference + sigma2)


def avg_sinr(R, pow, sigma2: float) -> AvgSinrReport:
    """Average SINR of every user from the stack of correlation matrices.

    ``pow`` is a :class:`~irsassoc.beamform.PowerAllocation`; its ``p`` is
    used and ``c`` is recomputed from the traces of ``R``.
    """
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    Rs = np.asarray([getattr(r, "R", r) for r in R])
    trR = np.real(np.trace(Rs, axis1=-2, axis2=-1))
    p = np.asarray(pow.p, dtype=float)
    G = _gram(Rs)
    gamma = _closed_form_sinr(trR, G, p, sigma2)
    bounds = np.array([sinr_bounds(Rs[k], p[k] / trR[k], sigma2, len(Rs)) for k in range(len(Rs))])
    k_min = int(np.argmin(gamma))
    return AvgSinrReport(
        gamma_bar=gamma,
        gamma_low=bounds[:, 0],
        gamma_up=bounds[:, 1],
        min_user=k_min,
        min_sinr=float(gamma[k_min]),
    )


class SinrEvaluator:
    """Average SINRs for many candidate associations of one scenario.

    Candidates are given as integer arrays ``users[..., l]`` naming the
    user each IRS is tuned to. Powers ``p`` default to an equal split of
    ``P_max``.
    """

    def __init__(self, scn: DeploymentScenario, p=None, los=None, blocks: CorrelationBlocks | None = None):
        self.scn = scn
        self.blocks = blocks or CorrelationBlocks.build(scn, los)
        K = scn.dims.K
        self.p = np.full(K, scn.P_max / K) if p is None else np.asarray(p, dtype=float)
        self.sigma2 = scn.sigma2
        M = scn.dims.M
        self._base = self.blocks.base.reshape(K, M * M)
        self._assoc = self.blocks.assoc.reshape(scn.dims.L, K, M * M)
        self._trace_idx = np.arange(M) * (M + 1)
        self.evaluations = 0

    def correlation(self, users) -> np.ndarray:
        users = np.asarray(users, dtype=int)
        K, L = self.scn.dims.K, self.scn.dims.L
        lam = np.zeros((K, L))
        lam[users, np.arange(L)] = 1.0
        return self.blocks.stack(lam)

    def batch(self, users: np.ndarray, chunk: int = 2048) -> np.ndarray:
        """``(C, K)`` average SINRs for ``(C, L)`` candidate user indices."""
        users = np.atleast_2d(np.asarray(users, dtype=int))
        K = self.scn.dims.K
        out = np.empty((users.shape[0], K))
        eye_k = np.eye(K)
        for start in range(0, users.shape[0], chunk):
            u = users[start : start + chunk]
            onehot = eye_k[u]  # (C, L, K)
            Rf = self._base[None] + np.einsum("clk,lki->cki", onehot, self._assoc)
            trR = np.real(Rf[:, :, self._trace_idx].sum(axis=-1))
            G = np.real(Rf @ np.swapaxes(Rf.conj(), -1, -2))
            out[start : start + len(u)] = _closed_form_sinr(trR, G, self.p, self.sigma2)
        self.evaluations += users.shape[0]
        return out

    def __call__(self, users) -> np.ndarray:
        return self.batch(np.asarray(users)[None, :])[0]


def cross_irs_term(scn: DeploymentScenario, assoc, k: int, los=None) -> np.ndarray:
    """Coherent coupling between pairs of IRSs both tuned to user ``k``.

    Two such IRSs co-phase with the same direct channel, so their
    reflected components are correlated. ``R_k`` as built by
    :func:`correlation_matrix` leaves this out; adding the returned
    ``M x M`` matrix gives the exact second moment. For ``x = a_l^H h_d``
    and ``y = a_m^H h_d`` with normalized correlation ``rho``,
    ``E[e^{j(angle x - angle y)}] = (pi/4) rho 2F1(1/2, 1/2; 2; |rho|^2)``.
    """
    lam = np.asarray(assoc)
    los = los if los is not None else los_channels(scn)
    M, N = scn.dims.M, scn.dims.N
    tuned = np.flatnonzero(lam[k] == 1)
    out = np.zeros((M, M), dtype=complex)
    mean_amp = N * np.sqrt(np.pi * scn.beta_2[:, k]) / 2.0  # E sum_n |h2_n|
    for l in tuned:
        for m in tuned:
            if l == m:
                continue
            a_l, a_m = los[l].a, los[m].a
            rho = np.vdot(a_l, a_m) / M
            phase = np.pi / 4.0 * rho * hyp2f1(0.5, 0.5, 2.0, abs(rho) ** 2)
            scale = np.sqrt(scn.beta_1[l] * scn.beta_1[m]) * mean_amp[l] * mean_amp[m]
            out += scale * phase * np.outer(a_l, a_m.conj())
    return out
