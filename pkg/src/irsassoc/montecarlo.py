"""Fading-level simulation used as an independent check of the closed forms.

Each trial draws its own :class:`~irsassoc.channel.ChannelSet` from streams
keyed by ``(seed, trial, link)``; per-trial results are reduced with
``math.fsum`` in trial order, so the estimate does not depend on how the
trials were scheduled.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .analytic import correlation_stack
from .beamform import PowerAllocation, equal_power
from .channel import ChannelSet, draw_channels, los_channels
from .scenario import DeploymentScenario

__all__ = [
    "McConfig",
    "McEstimate",
    "association_users",
    "reflect_vectors",
    "effective_channels",
    "instantaneous_sinr",
    "sinr_terms",
    "mc_average_sinr",
    "sample_effective_channels",
    "mc_correlation",
    "mc_direct_cascade_term",
]


@dataclass(frozen=True)
class McConfig:
    trials: int = 1000
    seed: int = 0
    confidence: float = 0.95
    workers: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 < self.confidence < 1:
            raise ValueError("confidence must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class McEstimate:
    """Sample statistics of the instantaneous SINR (linear scale).

    ``ratio_of_means`` divides the sample mean of the desired-signal power
    by the sample mean of interference plus noise, which is the quantity
    the closed form approximates ``E[gamma]`` with.
    """

    mean: np.ndarray
    stderr: np.ndarray
    trials_used: int
    ratio_of_means: np.ndarray
    confidence: float = 0.95
    samples: np.ndarray | None = None

    def interval(self):
        z = NormalDist().inv_cdf(0.5 + self.confidence / 2.0)
        return self.mean - z * self.stderr, self.mean + z * self.stderr


def association_users(assoc) -> np.ndarray:
    """Index of the tuned user for each IRS, from a ``K x L`` one-hot matrix."""
    lam = np.asarray(assoc)
    if lam.ndim != 2 or not np.all((lam == 0) | (lam == 1)) or not np.all(lam.sum(axis=0) == 1):
        raise ValueError("association must be a K x L matrix with one-hot columns")
    return np.argmax(lam, axis=0)


def reflect_vectors(ch: ChannelSet, users) -> np.ndarray:
    """``(L, N)`` gain-maximizing phases of every IRS for its tuned user."""
    v = np.empty(ch.h_2.shape[::2], dtype=complex)
    for l, (los, k) in enumerate(zip(ch.los, users)):
        ref = np.vdot(los.a, ch.h_d[k])
        v[l] = np.exp(1j * (np.angle(ch.h_2[l, k].conj() * los.b) + np.angle(ref)))
    return v


def effective_channels(ch: ChannelSet, v: np.ndarray) -> np.ndarray:
    """``(K, M)`` overall channels ``h_d + sum_l sqrt(beta_1) a (b^H diag(h2) v)``."""
    h = ch.h_d.copy()
    for l, los in enumerate(ch.los):
        s = (ch.h_2[l] * v[l][None, :]) @ los.b.conj()  # (K,)
        h += np.sqrt(los.beta_1) * s[:, None] * los.a[None, :]
    return h


def sinr_terms(h: np.ndarray, normalizers, p, sigma2: float):
    """Desired power and interference-plus-noise of every user under MRT."""
    f = h / np.sqrt(np.asarray(normalizers, dtype=float))[:, None]
    gains = np.abs(h.conj() @ f.T) ** 2  # gains[k, t] = |h_k^H f_t|^2
    p = np.asarray(p, dtype=float)
    weighted = gains * p[None, :]
    desired = np.diag(weighted).copy()
    return desired, weighted.sum(axis=1) - desired + sigma2


def instantaneous_sinr(ch: ChannelSet, assoc, pow: PowerAllocation, sigma2: float) -> np.ndarray:
    """Per-user SINR of one realization; precoders use ``tr(R_k) = p_k / c_k``."""
    users = association_users(assoc)
    h = effective_channels(ch, reflect_vectors(ch, users))
    desired, den = sinr_terms(h, pow.p / pow.c, pow.p, sigma2)
    return desired / den


def _map_trials(fn, trials: int, workers: int | None):
    workers = workers if workers is not None else int(os.environ.get("IRSASSOC_THREADS", "1"))
    if workers <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def _fsum_mean(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    flat = x.reshape(n, -1)
    out = np.array([math.fsum(flat[:, j]) for j in range(flat.shape[1])]) / n
    return out.reshape(x.shape[1:])


def mc_average_sinr(
    scn: DeploymentScenario,
    assoc,
    pow: PowerAllocation | None = None,
    cfg: McConfig = McConfig(),
    keep_samples: bool = False,
):
    """Monte-Carlo mean of the instantaneous SINR of every user.

    ``pow`` defaults to an equal split of ``scn.P_max``. ``assoc=None``
    simulates the direct links alone (IRSs absent). With
    ``keep_samples`` the ``(T, K)`` per-trial SINRs are attached.
    """
    los = los_channels(scn)
    users = None if assoc is None else association_users(assoc)
    if pow is None:
        if users is None:
            trR = scn.dims.M * np.asarray(scn.beta_d, dtype=float)
        else:
            trR = np.real(np.trace(correlation_stack(scn, assoc, los), axis1=1, axis2=2))
        pow = equal_power(scn.P_max, scn.dims.K, trR)
    normalizers = pow.p / pow.c

    def one(trial):
        ch = draw_channels(scn, cfg.seed, trial, los)
        h = ch.h_d if users is None else effective_channels(ch, reflect_vectors(ch, users))
        desired, den = sinr_terms(h, normalizers, pow.p, scn.sigma2)
        return np.stack([desired / den, desired, den])

    per_trial = np.asarray(_map_trials(one, cfg.trials, cfg.workers))  # (T, 3, K)
    gamma = per_trial[:, 0]
    mean = _fsum_mean(gamma)
    if cfg.trials > 1:
        var = _fsum_mean((gamma - mean) ** 2) * cfg.trials / (cfg.trials - 1)
        stderr = np.sqrt(var / cfg.trials)
    else:
        stderr = np.zeros_like(mean)
    ratio = _fsum_mean(per_trial[:, 1]) / _fsum_mean(per_trial[:, 2])
    return McEstimate(
        mean=mean,
        stderr=stderr,
        trials_used=cfg.trials,
        ratio_of_means=ratio,
        confidence=cfg.confidence,
        samples=gamma if keep_samples else None,
    )


def sample_effective_channels(scn: DeploymentScenario, assoc, cfg: McConfig) -> np.ndarray:
    """``(T, K, M)`` overall channels, one block per trial."""
    los = los_channels(scn)
    users = association_users(assoc)

    def one(trial):
        ch = draw_channels(scn, cfg.seed, trial, los)
        return effective_channels(ch, reflect_vectors(ch, users))

    return np.asarray(_map_trials(one, cfg.trials, cfg.workers))


def mc_correlation(scn: DeploymentScenario, assoc, k: int | None, cfg: McConfig, return_stderr: bool = False):
    """Sample correlation ``(1/T) sum h_k h_k^H`` of user ``k``.

    ``k=None`` returns all users as a ``(K, M, M)`` stack from one set of
    draws. With ``return_stderr`` also returns the entrywise standard
    error, ``sqrt(sum |x - mean|^2 / (T (T - 1)))`` over the per-trial
    outer products.
    """
    hs = sample_effective_channels(scn, assoc, cfg)
    users = range(scn.dims.K) if k is None else [k]
    Rs, ses = [], []
    for u in users:
        h = hs[:, u, :]
        outer = h[:, :, None] * h[:, None, :].conj()
        R = outer.mean(axis=0)
        R = 0.5 * (R + R.conj().T)
        Rs.append(R)
        if return_stderr:
            T = h.shape[0]
            ses.append(np.sqrt(np.sum(np.abs(outer - R) ** 2, axis=0) / (T - 1) / T))
    R = np.array(Rs) if k is None else Rs[0]
    if not return_stderr:
        return R
    return R, (np.array(ses) if k is None else ses[0])


def mc_direct_cascade_term(scn: DeploymentScenario, assoc, cfg: McConfig):
    """Sample mean of ``2 Re(v_l^H H0_{l,k}^H h_{d,k})`` for each IRS and its tuned user.

    Returns ``(mean, stderr)`` arrays of shape ``(L,)``.
    """
    los = los_channels(scn)
    users = association_users(assoc)

    def one(trial):
        ch = draw_channels(scn, cfg.seed, trial, los)
        v = reflect_vectors(ch, users)
        out = np.empty(scn.dims.L)
        for l, (H1, k) in enumerate(zip(ch.los, users)):
            H0 = H1.H1 * ch.h_2[l, k][None, :]
            out[l] = 2.0 * np.vdot(v[l], H0.conj().T @ ch.h_d[k]).real
        return out

    x = np.asarray(_map_trials(one, cfg.trials, cfg.workers))
    return x.mean(axis=0), x.std(axis=0, ddof=1) / np.sqrt(x.shape[0])
