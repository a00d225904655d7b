"""Gain-maximizing IRS phases, MRT precoders and power allocation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ReflectVector",
    "Precoder",
    "PowerAllocation",
    "optimal_reflect_vector",
    "reflect_objective",
    "mrt_precoders",
    "equal_power",
    "power_allocation",
]


@dataclass(frozen=True, eq=False)
class ReflectVector:
    """Unit-modulus IRS configuration tuned to one user.

    ``degenerate`` is set when the BS-side phase reference ``a^H h_d``
    vanished and was replaced by zero.
    """

    v: np.ndarray
    tuned_user: int | None = None
    degenerate: bool = False


def optimal_reflect_vector(h2, b, a, h_d, tuned_user: int | None = None) -> ReflectVector:
    """Phases maximizing ``||h_d^H + v^H H0^H||^2`` over unit-modulus ``v``.

    Each element co-phases its cascaded path ``conj(h2_n) b_n`` with the
    direct path seen through the BS array response, ``a^H h_d``.

    Parameters
    ----------
    h2 : (N,) complex
        IRS-user fading of the tuned user.
    b, a : complex
        IRS (length N) and BS (length M) array responses of this IRS.
    h_d : (M,) complex
        Direct channel of the tuned user.
    """
    h2, b, a, h_d = (np.asarray(x, dtype=complex) for x in (h2, b, a, h_d))
    ref = np.vdot(a, h_d)
    degenerate = ref == 0
    global_phase = 0.0 if degenerate else np.angle(ref)
    v = np.exp(1j * (np.angle(h2.conj() * b) + global_phase))
    return ReflectVector(v=v, tuned_user=tuned_user, degenerate=bool(degenerate))


def reflect_objective(v, H0, h_d) -> float:
    """``2 Re<v, H0^H h_d> + ||v^H H0^H||^2``, the v-dependent part of the gain."""
    v = np.asarray(v)
    x = H0.conj().T @ h_d
    return float(2.0 * np.vdot(v, x).real + np.linalg.norm(H0 @ v) ** 2)


@dataclass(frozen=True, eq=False)
class Precoder:
    """MRT precoders ``f_k = h_k / sqrt(normalizer_k)``; ``f`` has shape ``(K, M)``."""

    f: np.ndarray
    normalizer: np.ndarray


def mrt_precoders(channels, normalizers) -> Precoder:
    """Normalize each user's channel by the root of its mean squared norm."""
    h = np.atleast_2d(np.asarray(channels, dtype=complex))
    norm = np.asarray(normalizers, dtype=float).reshape(-1)
    if norm.shape[0] != h.shape[0]:
        raise ValueError("one normalizer per user is required")
    if np.any(norm <= 0):
        raise ValueError("normalizers must be positive")
    if np.any(np.all(h == 0, axis=1)):
        raise ValueError("MRT precoder undefined for an all-zero channel")
    return Precoder(f=h / np.sqrt(norm)[:, None], normalizer=norm)


@dataclass(frozen=True, eq=False)
class PowerAllocation:
    """Per-user powers with the derived constants ``c_k = p_k / tr(R_k)``.

    The budget holds in expectation only: with statistically normalized
    MRT, ``E||f_k||^2 = 1`` while a given realization may exceed it.
    """

    p: np.ndarray
    P_max: float
    c: np.ndarray

    def __post_init__(self):
        if np.any(self.p <= 0):
            raise ValueError("powers must be positive")
        if self.p.sum() > self.P_max * (1 + 1e-12):
            raise ValueError(f"total power {self.p.sum()} exceeds budget {self.P_max}")


def power_allocation(p, P_max: float, trR) -> PowerAllocation:
    p = np.asarray(p, dtype=float).reshape(-1)
    trR = np.asarray(trR, dtype=float).reshape(-1)
    return PowerAllocation(p=p, P_max=float(P_max), c=p / trR)


def equal_power(P_max: float, K: int, trR) -> PowerAllocation:
    """Split ``P_max`` evenly across ``K`` users."""
    if not P_max > 0:
        raise ValueError("P_max must be positive")
    return power_allocation(np.full(K, P_max / K), P_max, trR)
