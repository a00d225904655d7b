"""Array responses, line-of-sight BS-IRS channels and Rayleigh fading.

Random draws come from Philox streams addressed by ``(seed, trial, link)``
so any trial can be regenerated on its own, in any order, on any worker.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .scenario import ArrayGeometry, DeploymentScenario

__all__ = [
    "LosChannel",
    "ChannelSet",
    "RngStream",
    "ula_steering",
    "upa_steering",
    "los_channel",
    "los_channels",
    "sample_cgauss",
    "cascaded_channel",
    "effective_channel",
    "draw_channels",
    "direct_link_id",
    "irs_link_id",
]


def ula_steering(M: int, theta: float, geometry: ArrayGeometry) -> np.ndarray:
    """BS uniform linear array response, ``exp(-j k d_BS m cos(theta))``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(M)
    return np.exp(-1j * geometry.wavenumber * geometry.d_BS * m * np.cos(theta))


def upa_steering(N_x: int, N_z: int, phi: float, vartheta: float, geometry: ArrayGeometry) -> np.ndarray:
    """IRS uniform planar array response, horizontal factor ``kron`` vertical factor."""
    if N_x < 1 or N_z < 1:
        raise ValueError("N_x and N_z must be >= 1")
    kd = geometry.wavenumber * geometry.d_IRS
    b_x = np.exp(-1j * kd * np.arange(N_x) * np.sin(phi) * np.cos(vartheta))
    b_z = np.exp(-1j * kd * np.arange(N_z) * np.cos(phi))
    return np.kron(b_x, b_z)


@dataclass(frozen=True, eq=False)
class LosChannel:
    """Rank-one BS-IRS channel ``H1 = sqrt(beta_1) a b^H``."""

    beta_1: float
    a: np.ndarray
    b: np.ndarray

    @property
    def H1(self) -> np.ndarray:
        return np.sqrt(self.beta_1) * np.outer(self.a, self.b.conj())

    @property
    def singular_value(self) -> float:
        # sqrt(beta_1) * ||a|| * ||b|| for unnormalized steering vectors.
        return float(np.sqrt(self.beta_1) * np.linalg.norm(self.a) * np.linalg.norm(self.b))

    def gram_bs(self) -> np.ndarray:
        """``H1 H1^H = beta_1 N a a^H`` (M x M)."""
        return self.beta_1 * np.vdot(self.b, self.b).real * np.outer(self.a, self.a.conj())

    def gram_irs(self) -> np.ndarray:
        """``H1^H H1 = beta_1 M b b^H`` (N x N)."""
        return self.beta_1 * np.vdot(self.a, self.a).real * np.outer(self.b, self.b.conj())


def los_channel(scn: DeploymentScenario, l: int) -> LosChannel:
    d = scn.dims
    return LosChannel(
        beta_1=float(scn.beta_1[l]),
        a=ula_steering(d.M, scn.theta[l], scn.geometry),
        b=upa_steering(d.N_x, d.N_z, scn.phi[l], scn.vartheta[l], scn.geometry),
    )


def los_channels(scn: DeploymentScenario) -> list[LosChannel]:
    return [los_channel(scn, l) for l in range(scn.dims.L)]


def _seed_key(seed: int) -> int:
    # Spread small user seeds over the full 128-bit Philox key space.
    digest = hashlib.blake2b(int(seed).to_bytes(16, "little", signed=True), digest_size=16).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class RngStream:
    """Address of an independent random stream: a seed plus ``(trial, link)``.

    The trial and link indices occupy the two high words of the Philox
    counter, so streams never overlap for fewer than 2**128 draws each.
    """

    seed: int
    trial: int = 0
    link: int = 0

    def generator(self) -> np.random.Generator:
        if self.trial < 0 or self.link < 0:
            raise ValueError("trial and link indices must be non-negative")
        bitgen = np.random.Philox(key=_seed_key(self.seed), counter=[0, 0, self.link, self.trial])
        return np.random.Generator(bitgen)


def direct_link_id(k: int) -> int:
    return k


def irs_link_id(l: int, k: int, K: int) -> int:
    return K + l * K + k


def sample_cgauss(dim: int, beta: float, rng) -> np.ndarray:
    """Draw ``dim`` i.i.d. CN(0, beta) entries.

    ``rng`` may be an :class:`RngStream` or a numpy ``Generator``.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    z = gen.standard_normal((2, dim))
    return np.sqrt(beta / 2.0) * (z[0] + 1j * z[1])


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """One block-fading realization.

    ``h_d`` has shape ``(K, M)``, ``h_2`` has shape ``(L, K, N)``.
    """

    h_d: np.ndarray
    h_2: np.ndarray
    los: tuple

    def to_dict(self) -> dict:
        """JSON-friendly dump (complex arrays as ``[re, im]`` pairs)."""

        def enc(x):
            return np.stack([x.real, x.imag], axis=-1).tolist()

        return {
            "h_d": enc(self.h_d),
            "h_2": enc(self.h_2),
            "los": [{"beta_1": c.beta_1, "a": enc(c.a), "b": enc(c.b)} for c in self.los],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelSet":
        def dec(x):
            arr = np.asarray(x, dtype=float)
            return arr[..., 0] + 1j * arr[..., 1]

        los = tuple(LosChannel(beta_1=c["beta_1"], a=dec(c["a"]), b=dec(c["b"])) for c in data["los"])
        return cls(h_d=dec(data["h_d"]), h_2=dec(data["h_2"]), los=los)


def draw_channels(scn: DeploymentScenario, seed: int, trial: int, los=None) -> ChannelSet:
    """Draw the fading of every direct and IRS-user link for one trial."""
    d = scn.dims
    los = tuple(los if los is not None else los_channels(scn))
    h_d = np.empty((d.K, d.M), dtype=complex)
    h_2 = np.empty((d.L, d.K, d.N), dtype=complex)
    for k in range(d.K):
        h_d[k] = sample_cgauss(d.M, scn.beta_d[k], RngStream(seed, trial, direct_link_id(k)))
    for l in range(d.L):
        for k in range(d.K):
            h_2[l, k] = sample_cgauss(d.N, scn.beta_2[l, k], RngStream(seed, trial, irs_link_id(l, k, d.K)))
    return ChannelSet(h_d=h_d, h_2=h_2, los=los)


def cascaded_channel(H1, h2: np.ndarray) -> np.ndarray:
    """``H1 diag(h2)``: scale column n of the BS-IRS matrix by ``h2[n]``."""
    H = H1.H1 if isinstance(H1, LosChannel) else np.asarray(H1)
    h2 = np.asarray(h2)
    if h2.ndim != 1 or H.shape[1] != h2.shape[0]:
        raise ValueError(f"dimension mismatch: H1 is {H.shape}, h2 is {h2.shape}")
    return H * h2[None, :]


def effective_channel(h_d: np.ndarray, cascaded, v, atol: float = 1e-9) -> np.ndarray:
    """Overall BS-user channel ``h_d + sum_l H0_l v_l``.

    Every IRS contributes; association only decides which user each
    ``v_l`` was tuned for.
    """
    h = np.array(h_d, dtype=complex, copy=True)
    if len(cascaded) != len(v):
        raise ValueError("need one reflect vector per cascaded channel")
    for H0, v_l in zip(cascaded, v):
        v_l = np.asarray(v_l)
        if not np.allclose(np.abs(v_l), 1.0, atol=atol):
            raise ValueError("reflect vectors must have unit-modulus entries")
        h += H0 @ v_l
    return h
