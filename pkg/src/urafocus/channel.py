"""Spherical-wave steering vectors, LoS channels and focused array gain.

Vectors are 1-D complex numpy arrays of length ``cfg.n_bs`` laid out
row-major over the (n1, n2) index grid, n2 varying fastest.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fresnel import fresnel_power
from .geometry import ParameterDomainError, SphericalPoint, UraConfig, angle_quantities, directional_quantities

DISTANCE_MODELS = ("exact", "expanded")


class NearFieldWarning(UserWarning):
    """Range closer than the radiative near-field bound of 1.2 apertures."""


def _check_index(cfg: UraConfig, n1: float, n2: float) -> None:
    if n1 not in cfg.indices1 or n2 not in cfg.indices2:
        raise ParameterDomainError(f"element index ({n1}, {n2}) outside the {cfg.n1}x{cfg.n2} array")


def element_distance_exact(cfg: UraConfig, p: SphericalPoint, n1: float, n2: float) -> float:
    """Distance from element (n1, n2) to ``p``, computed without approximation."""
    _check_index(cfg, n1, n2)
    return float(_distances_exact(cfg, p, np.array([n1], float), np.array([n2], float))[0])


def element_distance_expanded(cfg: UraConfig, p: SphericalPoint, n1: float, n2: float,
                              include_cross_term: bool = False) -> float:
    """Second-order (Fresnel) expansion of the element distance.

    The ``n1 n2`` cross term is dropped by default, as in the gain analysis.
    """
    _check_index(cfg, n1, n2)
    return float(_distances_expanded(cfg, p, np.array([n1], float), np.array([n2], float),
                                     include_cross_term)[0])


def _distances_exact(cfg, p, g1, g2):
    ux, uy, uz, _, _ = directional_quantities(p)
    r, d = p.range_m, cfg.spacing_m
    return np.sqrt((r * ux) ** 2 + (r * uy - g1 * d) ** 2 + (r * uz - g2 * d) ** 2)


def _distances_expanded(cfg, p, g1, g2, include_cross_term=False):
    _, uy, uz, b1, b2 = directional_quantities(p)
    r, d = p.range_m, cfg.spacing_m
    out = r - g1 * d * uy - g2 * d * uz + (g1 * d) ** 2 * b1 / (2 * r) + (g2 * d) ** 2 * b2 / (2 * r)
    if include_cross_term:
        out = out - g1 * g2 * d * d * uy * uz / r
    return out


def _excess_path(cfg: UraConfig, p: SphericalPoint, distance_model: str, include_cross_term: bool) -> np.ndarray:
    g1, g2 = cfg.index_grid()
    if distance_model == "exact":
        return _distances_exact(cfg, p, g1, g2) - p.range_m
    if distance_model == "expanded":
        return _distances_expanded(cfg, p, g1, g2, include_cross_term) - p.range_m
    raise ValueError(f"unknown distance model {distance_model!r}; expected one of {DISTANCE_MODELS}")


def steering_vector(cfg: UraConfig, p: SphericalPoint, distance_model: str = "expanded",
                    include_cross_term: bool = False) -> np.ndarray:
    """Unit-norm near-field steering vector towards ``p``.

    Entry (n1, n2) is ``exp(-1j * k * (r_n - r)) / sqrt(N)`` with ``r_n`` the
    element distance under ``distance_model``.
    """
    if p.range_m < cfg.near_field_min_m:
        warnings.warn(f"range {p.range_m:.4g} m is inside 1.2 D = {cfg.near_field_min_m:.4g} m; "
                      "uniform-amplitude model may be inaccurate", NearFieldWarning, stacklevel=2)
    phase = cfg.wavenumber * _excess_path(cfg, p, distance_model, include_cross_term)
    return np.exp(-1j * phase) / math.sqrt(cfg.n_bs)


def planar_vector(cfg: UraConfig, u_y: float, u_z: float) -> np.ndarray:
    """Far-field (planar wavefront) response for directional cosines (u_y, u_z)."""
    g1, g2 = cfg.index_grid()
    phase = cfg.wavenumber * cfg.spacing_m * (g1 * u_y + g2 * u_z)
    return np.exp(1j * phase) / math.sqrt(cfg.n_bs)


def far_field_vector(cfg: UraConfig, phi: float, theta: float) -> np.ndarray:
    q = angle_quantities(phi, theta)
    return planar_vector(cfg, q.u_y, q.u_z)


@dataclass(frozen=True)
class PathSpec:
    gain: complex
    point: SphericalPoint


def los_channel(cfg: UraConfig, paths: Sequence[PathSpec], distance_model: str = "expanded") -> np.ndarray:
    """USW channel ``sqrt(N/L) * sum_l g_l exp(-1j k r_l) b(phi_l, theta_l, r_l)``.

    ``L`` counts every supplied path, LoS included.
    """
    if not paths:
        raise ValueError("channel needs at least one path")
    h = np.zeros(cfg.n_bs, dtype=complex)
    for path in paths:
        b = steering_vector(cfg, path.point, distance_model)
        h += path.gain * np.exp(-1j * cfg.wavenumber * path.point.range_m) * b
    return math.sqrt(cfg.n_bs / len(paths)) * h


def array_gain_exact(cfg: UraConfig, focus: SphericalPoint, eval_range, distance_model: str = "expanded",
                     include_cross_term: bool = False):
    """Normalised gain ``|w^H b(phi, theta, z)|^2`` of a beam focused at ``focus``.

    Direct summation over all elements; ``eval_range`` may be a scalar or
    an array of ranges ``z`` along the focus direction.
    """
    z = np.atleast_1d(np.asarray(eval_range, dtype=float))
    if np.any(z <= 0):
        raise ParameterDomainError("evaluation ranges must be positive")
    w_phase = cfg.wavenumber * _excess_path(cfg, focus, distance_model, include_cross_term)
    out = np.empty_like(z)
    # chunk to bound the (len(z), N) phase matrix
    step = max(1, 2**22 // cfg.n_bs)
    for start in range(0, z.size, step):
        zs = z[start:start + step]
        phases = np.stack([
            cfg.wavenumber * _excess_path(
                cfg, SphericalPoint(focus.azimuth_rad, focus.elevation_rad, float(r)),
                distance_model, include_cross_term)
            for r in zs])
        s = np.exp(1j * (w_phase[None, :] - phases)).sum(axis=1) / cfg.n_bs
        out[start:start + step] = np.abs(s) ** 2
    return out if np.ndim(eval_range) else float(out[0])


def fresnel_gammas(cfg: UraConfig, phi: float, theta: float, r_f: float, z):
    """Fresnel arguments (gamma1, gamma2) for a beam at ``r_f`` seen at ``z``."""
    q = angle_quantities(phi, theta)
    z = np.asarray(z, dtype=float)
    z_eff = np.abs(z - r_f) / (z * r_f)
    d2 = cfg.spacing_m**2
    lam = cfg.wavelength_m
    g1 = np.sqrt(cfg.n1**2 * d2 * q.beta1 * z_eff / (2 * lam))
    g2 = np.sqrt(cfg.n2**2 * d2 * q.beta2 * z_eff / (2 * lam))
    return g1, g2


def array_gain_fresnel(cfg: UraConfig, focus_angles: tuple[float, float], r_f: float, z):
    """Closed-form focused gain: product of the two Fresnel power factors.

    Endfire-degenerate axes (beta = 0) contribute a factor of one.
    """
    if not r_f > 0 or np.any(np.asarray(z) <= 0):
        raise ParameterDomainError("focus and evaluation ranges must be positive")
    g1, g2 = fresnel_gammas(cfg, *focus_angles, r_f, z)
    out = fresnel_power(g1) * fresnel_power(g2)
    return out if np.ndim(z) else float(out)


def _bisect_level(gain, a: float, b: float, rtol: float) -> float:
    # gain(a) and gain(b) straddle the half-power level
    ga = gain(a) - 0.5
    while abs(b - a) > rtol * max(abs(a), abs(b)):
        m = 0.5 * (a + b)
        gm = gain(m) - 0.5
        if (gm > 0) == (ga > 0):
            a, ga = m, gm
        else:
            b = m
    return 0.5 * (a + b)


def half_power_window(gain, r_f: float, z_lo: float, z_hi: float, n_points: int = 4096,
                      rtol: float = 1e-6) -> tuple[float, float]:
    """Contiguous half-power interval of ``gain(z)`` around the focus ``r_f``.

    ``gain`` maps an array of ranges to gains. Scans a log grid on
    [z_lo, z_hi], then bisects each crossing. A side with no crossing inside
    the grid is reported as ``z_lo`` (near side) or ``inf`` (far side).
    """
    z = np.geomspace(z_lo, z_hi, n_points)
    g = np.asarray(gain(z))
    scalar = lambda v: float(np.asarray(gain(np.array([v])))[0])
    k = int(np.searchsorted(z, r_f))
    below = np.nonzero(g[:k] < 0.5)[0]
    if below.size:
        i = below[-1]
        lo = _bisect_level(scalar, z[i], z[i + 1] if i + 1 < k else r_f, rtol)
    else:
        lo = z_lo
    above = np.nonzero(g[k:] < 0.5)[0]
    if above.size:
        j = k + above[0]
        hi = _bisect_level(scalar, z[j - 1] if j > k else r_f, z[j], rtol)
    else:
        hi = math.inf
    return lo, hi
