"""Deployment geometry and large-scale link statistics.

All nodes live in a plane. Bearings are measured counter-clockwise from
the +x axis, which is also the axis of the BS uniform linear array, so the
in-plane bearing from the BS to an IRS doubles as the ULA departure angle.
The IRS elevation angle of arrival is pinned at pi/2, leaving the UPA
azimuth factor to carry the geometry.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SPEED_OF_LIGHT",
    "ConfigurationError",
    "SystemDims",
    "ArrayGeometry",
    "PathLossModel",
    "ArcLayout",
    "LinkLosses",
    "DeploymentScenario",
    "path_gain",
    "link_angles",
    "build_arc_scenario",
    "centralize_irs",
    "dbm_to_watts",
    "scenario_from_dict",
    "SCENARIO_SCHEMA_VERSION",
]

SPEED_OF_LIGHT = 299_792_458.0


class ConfigurationError(ValueError):
    """Raised for inconsistent deployment or experiment configuration."""


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class SystemDims:
    """Sizes of the system: BS antennas, IRS panel, IRS count and users."""

    M: int
    N_x: int
    N_z: int
    L: int
    K: int

    def __post_init__(self):
        for name in ("M", "N_x", "N_z", "L", "K"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")

    @property
    def N(self) -> int:
        return self.N_x * self.N_z


@dataclass(frozen=True)
class ArrayGeometry:
    """Antenna spacings and carrier wavelength, all in meters."""

    d_BS: float
    d_IRS: float
    lambda_c: float

    def __post_init__(self):
        if min(self.d_BS, self.d_IRS, self.lambda_c) <= 0:
            raise ConfigurationError("spacings and wavelength must be positive")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.lambda_c

    @classmethod
    def half_wavelength(cls, carrier_hz: float = 2.5e9) -> "ArrayGeometry":
        lam = SPEED_OF_LIGHT / carrier_hz
        return cls(d_BS=0.5 * lam, d_IRS=0.5 * lam, lambda_c=lam)


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance model ``10^(-C/10) d^-alpha`` with extra dB offsets."""

    C: float
    alpha: float
    penetration_dB: float = 0.0
    antenna_gain_dBi: float = 0.0


def path_gain(model: PathLossModel, d):
    """Linear large-scale gain at distance ``d`` (meters).

    Accepts a scalar or an array of distances.
    """
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr <= 0) or not np.all(np.isfinite(d_arr)):
        raise ValueError("path_gain requires finite distances d > 0")
    offset_dB = model.antenna_gain_dBi - model.C - model.penetration_dB
    g = 10.0 ** (offset_dB / 10.0) * d_arr ** (-model.alpha)
    return float(g) if g.ndim == 0 else g


@dataclass(frozen=True)
class LinkLosses:
    """Path-loss models for the three link types."""

    bs_irs: PathLossModel = PathLossModel(C=25.0, alpha=2.2, penetration_dB=0.0, antenna_gain_dBi=5.0)
    irs_user: PathLossModel = PathLossModel(C=30.0, alpha=3.67, penetration_dB=5.0, antenna_gain_dBi=5.0)
    direct: PathLossModel = PathLossModel(C=30.0, alpha=3.67, penetration_dB=20.0, antenna_gain_dBi=5.0)


@dataclass(frozen=True)
class ArcLayout:
    """Arc placement of IRSs and users around a BS at the origin.

    Sectors are ``(start, stop)`` bearings in degrees; nodes are spread
    uniformly over the closed sector. ``far_user`` is a 0-based user index
    pushed out to ``far_radius`` (index 1 is the second user).
    """

    irs_radius: float = 100.0
    user_radius: float = 85.0
    far_user: int | None = 1
    far_radius: float = 130.0
    irs_sector_deg: tuple[float, float] = (30.0, 150.0)
    user_sector_deg: tuple[float, float] = (30.0, 150.0)
    bs_pos: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True, eq=False)
class DeploymentScenario:
    """Node positions plus every large-scale quantity the analysis needs.

    Arrays are indexed ``[l]`` for IRSs, ``[k]`` for users and ``[l, k]``
    for IRS-user links. Power quantities are in watts.
    """

    dims: SystemDims
    geometry: ArrayGeometry
    bs_pos: np.ndarray
    irs_pos: np.ndarray
    user_pos: np.ndarray
    beta_1: np.ndarray
    beta_2: np.ndarray
    beta_d: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    vartheta: np.ndarray
    sigma2: float
    P_max: float
    losses: LinkLosses = field(default_factory=LinkLosses)

    def __post_init__(self):
        L, K = self.dims.L, self.dims.K
        expected = {
            "irs_pos": (L, 2),
            "user_pos": (K, 2),
            "beta_1": (L,),
            "beta_2": (L, K),
            "beta_d": (K,),
            "theta": (L,),
            "phi": (L,),
            "vartheta": (L,),
        }
        for name, shape in expected.items():
            if np.shape(getattr(self, name)) != shape:
                raise ConfigurationError(f"{name} has shape {np.shape(getattr(self, name))}, expected {shape}")
        for name in ("beta_1", "beta_2", "beta_d"):
            if not np.all(getattr(self, name) > 0):
                raise ConfigurationError(f"{name} must be strictly positive")
        if not self.sigma2 > 0:
            raise ConfigurationError("sigma2 must be positive")
        if not self.P_max > 0:
            raise ConfigurationError("P_max must be positive")

    def irs_user_distances(self) -> np.ndarray:
        """``[l, k]`` Euclidean distances between IRSs and users."""
        return np.linalg.norm(self.irs_pos[:, None, :] - self.user_pos[None, :, :], axis=-1)

    def replace(self, **changes) -> "DeploymentScenario":
        return dataclasses.replace(self, **changes)

    def with_noise(self, sigma2: float) -> "DeploymentScenario":
        return dataclasses.replace(self, sigma2=float(sigma2))


def link_angles(bs_pos, irs_pos, geometry: ArrayGeometry | None = None):
    """Angles of the BS-IRS line-of-sight path for one IRS.

    Returns ``(theta, phi, vartheta)``: the BS->IRS bearing, the IRS
    elevation AoA (fixed at pi/2 in the planar world) and the IRS->BS
    bearing. Bearings are wrapped to [0, 2pi). ``geometry`` is accepted
    for interface symmetry and is unused in the planar model.
    """
    delta = np.asarray(irs_pos, dtype=float) - np.asarray(bs_pos, dtype=float)
    if np.hypot(delta[0], delta[1]) == 0.0:
        raise ValueError("BS and IRS positions coincide; bearing undefined")
    theta = _wrap(math.atan2(delta[1], delta[0]))
    return theta, math.pi / 2.0, _wrap(theta + math.pi)


def _wrap(angle: float) -> float:
    two_pi = 2.0 * math.pi
    out = angle % two_pi
    return 0.0 if out == two_pi else out  # tiny negatives round up to 2pi


def _arc_points(radius: float, sector_deg, count: int, center) -> np.ndarray:
    start, stop = sector_deg
    if count > 1 and not start < stop:
        raise ConfigurationError(f"sector must be strictly ordered, got {sector_deg}")
    if count == 1:
        bearings = np.array([math.radians(start if start == stop else 0.5 * (start + stop))])
    else:
        bearings = np.radians(np.linspace(start, stop, count))
    return np.asarray(center, dtype=float) + radius * np.column_stack([np.cos(bearings), np.sin(bearings)])


def _fill_scenario(
    dims, geometry, bs_pos, irs_pos, user_pos, losses, sigma2, P_max
) -> DeploymentScenario:
    all_pos = np.vstack([bs_pos[None, :], irs_pos, user_pos])
    # Colocated IRSs are allowed (centralized deployment); anything else must be distinct.
    bs_gap = np.linalg.norm(all_pos[1:] - bs_pos, axis=1)
    iu_gap = np.linalg.norm(irs_pos[:, None, :] - user_pos[None, :, :], axis=-1)
    uu_gap = np.linalg.norm(user_pos[:, None, :] - user_pos[None, :, :], axis=-1)
    np.fill_diagonal(uu_gap, np.inf)
    if np.any(bs_gap == 0) or np.any(iu_gap == 0) or np.any(uu_gap == 0):
        raise ConfigurationError("overlapping node positions")

    angles = np.array([link_angles(bs_pos, p, geometry) for p in irs_pos])
    d_1 = np.linalg.norm(irs_pos - bs_pos, axis=1)
    d_d = np.linalg.norm(user_pos - bs_pos, axis=1)
    return DeploymentScenario(
        dims=dims,
        geometry=geometry,
        bs_pos=bs_pos,
        irs_pos=irs_pos,
        user_pos=user_pos,
        beta_1=np.atleast_1d(path_gain(losses.bs_irs, d_1)),
        beta_2=np.atleast_2d(path_gain(losses.irs_user, iu_gap)).reshape(dims.L, dims.K),
        beta_d=np.atleast_1d(path_gain(losses.direct, d_d)),
        theta=angles[:, 0].copy(),
        phi=angles[:, 1].copy(),
        vartheta=angles[:, 2].copy(),
        sigma2=float(sigma2),
        P_max=float(P_max),
        losses=losses,
    )


def build_arc_scenario(
    dims: SystemDims,
    geometry: ArrayGeometry | None = None,
    layout: ArcLayout | None = None,
    losses: LinkLosses | None = None,
    sigma2: float = dbm_to_watts(-60.0),
    P_max: float = 1.0,
) -> DeploymentScenario:
    """Place IRSs and users on concentric arcs around the BS.

    IRSs are spread uniformly in bearing over ``layout.irs_sector_deg`` on
    the IRS arc; users likewise on the user arc, after which
    ``layout.far_user`` (if set) is moved out to ``layout.far_radius`` at
    the same bearing.
    """
    geometry = geometry or ArrayGeometry.half_wavelength()
    layout = layout or ArcLayout()
    losses = losses or LinkLosses()
    bs_pos = np.asarray(layout.bs_pos, dtype=float)

    irs_pos = _arc_points(layout.irs_radius, layout.irs_sector_deg, dims.L, bs_pos)
    user_pos = _arc_points(layout.user_radius, layout.user_sector_deg, dims.K, bs_pos)
    # A far-user index beyond K is ignored so small-K sweeps reuse the layout.
    if layout.far_user is not None and 0 <= layout.far_user < dims.K:
        u = user_pos[layout.far_user] - bs_pos
        user_pos[layout.far_user] = bs_pos + u * (layout.far_radius / np.linalg.norm(u))
    return _fill_scenario(dims, geometry, bs_pos, irs_pos, user_pos, losses, sigma2, P_max)


def centralize_irs(scn: DeploymentScenario, sector_deg=(30.0, 150.0)) -> DeploymentScenario:
    """Collapse all IRSs onto the mid-sector point of the IRS arc.

    The arc radius is taken from the current IRS positions (their mean
    distance to the BS). A single IRS is returned unchanged.
    """
    if scn.dims.L == 1:
        return scn
    radius = float(np.mean(np.linalg.norm(scn.irs_pos - scn.bs_pos, axis=1)))
    mid = math.radians(0.5 * (sector_deg[0] + sector_deg[1]))
    point = scn.bs_pos + radius * np.array([math.cos(mid), math.sin(mid)])
    irs_pos = np.tile(point, (scn.dims.L, 1))
    return _fill_scenario(
        scn.dims, scn.geometry, scn.bs_pos, irs_pos, scn.user_pos, scn.losses, scn.sigma2, scn.P_max
    )


SCENARIO_SCHEMA_VERSION = 1


def _section(data: dict, key: str, path: str) -> dict:
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ConfigurationError(f"field '{path}{key}': expected an object")
    return value


def _number(sec: dict, key: str, default, path: str, *, positive: bool = False):
    value = sec.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"field '{path}{key}': expected a number, got {value!r}")
    if positive and not value > 0:
        raise ConfigurationError(f"field '{path}{key}': must be positive, got {value!r}")
    return value


def _unknown(sec: dict, allowed, path: str):
    extra = sorted(set(sec) - set(allowed))
    if extra:
        raise ConfigurationError(f"unknown field(s) under '{path or '<root>'}': {', '.join(extra)}")


def _pathloss_from_dict(sec: dict, default: PathLossModel, path: str) -> PathLossModel:
    _unknown(sec, ("C", "alpha", "penetration_dB", "antenna_gain_dBi"), path)
    return PathLossModel(
        C=_number(sec, "C", default.C, path),
        alpha=_number(sec, "alpha", default.alpha, path),
        penetration_dB=_number(sec, "penetration_dB", default.penetration_dB, path),
        antenna_gain_dBi=_number(sec, "antenna_gain_dBi", default.antenna_gain_dBi, path),
    )


def scenario_from_dict(data: dict) -> DeploymentScenario:
    """Build a scenario from a JSON-style configuration document.

    Missing fields take the built-in defaults; see ``docs/config.md`` for
    the schema.
    """
    if not isinstance(data, dict):
        raise ConfigurationError("scenario config must be a JSON object")
    _unknown(data, ("schema_version", "dims", "geometry", "layout", "pathloss", "noise_dbm", "P_max_W", "deployment"), "")
    version = data.get("schema_version", SCENARIO_SCHEMA_VERSION)
    if version != SCENARIO_SCHEMA_VERSION:
        raise ConfigurationError(f"field 'schema_version': unsupported version {version!r}")

    d = _section(data, "dims", "")
    _unknown(d, ("M", "N_x", "N_z", "L", "K"), "dims")
    try:
        dims = SystemDims(
            M=d.get("M", 16), N_x=d.get("N_x", 4), N_z=d.get("N_z", 4), L=d.get("L", 8), K=d.get("K", 4)
        )
    except (ConfigurationError, TypeError) as exc:
        raise ConfigurationError(f"field 'dims': {exc}") from None

    g = _section(data, "geometry", "")
    _unknown(g, ("carrier_hz", "d_BS_wavelengths", "d_IRS_wavelengths"), "geometry")
    carrier = _number(g, "carrier_hz", 2.5e9, "geometry.", positive=True)
    lam = SPEED_OF_LIGHT / carrier
    geometry = ArrayGeometry(
        d_BS=_number(g, "d_BS_wavelengths", 0.5, "geometry.", positive=True) * lam,
        d_IRS=_number(g, "d_IRS_wavelengths", 0.5, "geometry.", positive=True) * lam,
        lambda_c=lam,
    )

    lay = _section(data, "layout", "")
    _unknown(
        lay,
        ("irs_radius", "user_radius", "far_user", "far_radius", "irs_sector_deg", "user_sector_deg"),
        "layout",
    )
    base = ArcLayout()
    far_user = lay.get("far_user", base.far_user)
    if far_user is not None and (isinstance(far_user, bool) or not isinstance(far_user, int)):
        raise ConfigurationError(f"field 'layout.far_user': expected an integer or null, got {far_user!r}")
    sectors = {}
    for key in ("irs_sector_deg", "user_sector_deg"):
        value = lay.get(key, getattr(base, key))
        if not (isinstance(value, (list, tuple)) and len(value) == 2):
            raise ConfigurationError(f"field 'layout.{key}': expected [start, stop] in degrees")
        sectors[key] = (float(value[0]), float(value[1]))
    layout = ArcLayout(
        irs_radius=_number(lay, "irs_radius", base.irs_radius, "layout.", positive=True),
        user_radius=_number(lay, "user_radius", base.user_radius, "layout.", positive=True),
        far_user=far_user,
        far_radius=_number(lay, "far_radius", base.far_radius, "layout.", positive=True),
        **sectors,
    )

    pl = _section(data, "pathloss", "")
    _unknown(pl, ("bs_irs", "irs_user", "direct"), "pathloss")
    defaults = LinkLosses()
    losses = LinkLosses(
        **{
            key: _pathloss_from_dict(_section(pl, key, "pathloss."), getattr(defaults, key), f"pathloss.{key}.")
            for key in ("bs_irs", "irs_user", "direct")
        }
    )
    noise_dbm = _number(data, "noise_dbm", -60.0, "")
    P_max = _number(data, "P_max_W", 1.0, "", positive=True)
    scn = build_arc_scenario(dims, geometry, layout, losses, sigma2=dbm_to_watts(noise_dbm), P_max=P_max)
    deployment = data.get("deployment", "distributed")
    if deployment == "centralized":
        scn = centralize_irs(scn, layout.irs_sector_deg)
    elif deployment != "distributed":
        raise ConfigurationError(f"field 'deployment': expected 'distributed' or 'centralized', got {deployment!r}")
    return scn
