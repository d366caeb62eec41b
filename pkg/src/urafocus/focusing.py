"""Closed-form 3 dB beamdepth and effective beamfocusing Rayleigh distance.

Along a fixed direction the focused gain depends on the ranges only through
``z_eff = |1/r_f - 1/z|``, and the two Fresnel arguments keep a fixed ratio

    gamma1 / gamma2 = (n1 sqrt(beta1)) / (n2 sqrt(beta2)) = eta sqrt(beta1 / beta2)

so the half-power level set is a single number ``alpha_3db = gamma1 * gamma2``
per ratio. The two 3 dB ranges then follow from

    1 / z = 1 / r_f -+ kappa,   kappa = 4 alpha (eta^2 + 1) / (eta R_D sqrt(beta1 beta2))

and the EBRD is ``1 / kappa``: beyond it the far 3 dB point recedes to infinity.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .fresnel import fresnel_power
from .geometry import ParameterDomainError, UraConfig, angle_quantities, build_ura

HALF_POWER = 0.5
SCAN_STEP = 0.01
ROOT_RTOL = 1e-12


class DegenerateAngleError(ParameterDomainError):
    """beta1 * beta2 == 0: the 2-D analysis collapses to a line array."""


@functools.total_ordering
class _Infinite:
    """Tagged 'no finite value' marker; prints as ``inf``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "inf"

    def __float__(self):
        return math.inf

    def __eq__(self, other):
        return other is self or (isinstance(other, float) and other == math.inf)

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash(math.inf)


INFINITE = _Infinite()


def is_infinite(value) -> bool:
    return value is INFINITE


@dataclass(frozen=True)
class BeamdepthResult:
    bd_m: float | _Infinite
    rf_min_m: float
    rf_max_m: float | _Infinite
    alpha_3db: float
    degenerate: bool = False

    @property
    def finite(self) -> bool:
        return self.bd_m is not INFINITE


@dataclass(frozen=True)
class EbrdResult:
    ebrd_m: float
    angle: tuple[float, float]
    degenerate: bool = False


def _first_crossing(gain, step: float, chunk: int = 128) -> float:
    """Smallest t > 0 with gain(t) == 0.5, assuming gain(0) == 1.

    ``gain`` must accept arrays. The upward scan is evaluated a chunk of
    steps at a time, then the bracketing step is refined by multisection.
    """
    base = 0.0
    while True:
        t = base + step * np.arange(1, chunk + 1)
        below = np.nonzero(np.asarray(gain(t)) <= HALF_POWER)[0]
        if below.size:
            hi = float(t[below[0]])
            lo = hi - step
            break
        base = float(t[-1])
        if base > 1e6:
            raise RuntimeError("gain never dropped to half power")
    # multisection: each pass shrinks the bracket 64-fold
    while hi - lo > ROOT_RTOL * hi:
        t = np.linspace(lo, hi, 65)[1:-1]
        below = np.nonzero(np.asarray(gain(t)) <= HALF_POWER)[0]
        if below.size:
            k = below[0]
            hi = float(t[k])
            lo = float(t[k - 1]) if k else lo
        else:
            lo = float(t[-1])
    return 0.5 * (lo + hi)


@functools.lru_cache(maxsize=4096)
def alpha_for_ratio(ratio: float) -> float:
    """Half-power value of ``gamma1 * gamma2`` along the ray ``gamma1 = ratio * gamma2``.

    Scans ``t = sqrt(gamma1 gamma2)`` upward and bisects the first crossing
    (main lobe). The scan step shrinks for elongated rays so the main lobe
    is never stepped over.
    """
    if not ratio > 0 or not math.isfinite(ratio):
        raise DegenerateAngleError(f"Fresnel argument ratio must be positive and finite, got {ratio}")
    sr = math.sqrt(ratio)

    def gain(t):
        return fresnel_power(t * sr) * fresnel_power(t / sr)

    t = _first_crossing(gain, SCAN_STEP * min(sr, 1.0 / sr))
    return t * t


@functools.lru_cache(maxsize=1)
def alpha_3db_line() -> float:
    """Half-power value of ``gamma^2`` for a single Fresnel factor (line array)."""
    g = _first_crossing(fresnel_power, SCAN_STEP)
    return g * g


def _ratio(cfg: UraConfig, phi: float, theta: float) -> tuple[float, float]:
    q = angle_quantities(phi, theta)
    if q.beta1 <= 0.0 or q.beta2 <= 0.0:
        raise DegenerateAngleError(
            f"endfire direction (beta1={q.beta1:.3g}, beta2={q.beta2:.3g}); use the line-array analysis")
    return cfg.eta * math.sqrt(q.beta1 / q.beta2), math.sqrt(q.beta1 * q.beta2)


def alpha_3db(cfg: UraConfig, phi: float, theta: float) -> float:
    """Half-power level ``alpha_3db`` for ``cfg`` focused towards (phi, theta)."""
    ratio, _ = _ratio(cfg, phi, theta)
    return alpha_for_ratio(ratio)


def _kappa(cfg: UraConfig, alpha: float, sqrt_beta: float) -> float:
    eta = cfg.eta
    return 4.0 * alpha * (eta * eta + 1.0) / (eta * cfg.rayleigh_m * sqrt_beta)


def _window(r_f: float, kappa: float, alpha: float) -> BeamdepthResult:
    rf_min = r_f / (1.0 + kappa * r_f)
    # a few ulps of slack so a focus placed exactly on the limit is infinite
    if kappa * r_f >= 1.0 - 1e-12:
        return BeamdepthResult(INFINITE, rf_min, INFINITE, alpha)
    rf_max = r_f / (1.0 - kappa * r_f)
    return BeamdepthResult(rf_max - rf_min, rf_min, rf_max, alpha)


def _check_focus(cfg: UraConfig, r_f: float) -> None:
    if not r_f >= cfg.near_field_min_m:
        raise ParameterDomainError(
            f"focus range {r_f:.4g} m below the near-field bound 1.2 D = {cfg.near_field_min_m:.4g} m")


def beamdepth(cfg: UraConfig, phi: float, theta: float, r_f: float) -> BeamdepthResult:
    """3 dB beamdepth of a beam focused at (phi, theta, r_f).

    Returns ``INFINITE`` depth (and far limit) when ``r_f`` is at or beyond
    the EBRD, and also for endfire directions, flagged ``degenerate``.
    """
    _check_focus(cfg, r_f)
    try:
        ratio, sqrt_beta = _ratio(cfg, phi, theta)
    except DegenerateAngleError:
        return BeamdepthResult(INFINITE, 0.0, INFINITE, math.nan, degenerate=True)
    alpha = alpha_for_ratio(ratio)
    return _window(r_f, _kappa(cfg, alpha, sqrt_beta), alpha)


def beamdepth_formula(cfg: UraConfig, phi: float, theta: float, r_f: float) -> float:
    """The single-fraction beamdepth expression (may be negative past the EBRD)."""
    ratio, sb = _ratio(cfg, phi, theta)
    a = alpha_for_ratio(ratio)
    eta, rd = cfg.eta, cfg.rayleigh_m
    num = 8.0 * r_f**2 * rd * a * eta * (eta**2 + 1.0) * sb
    den = (eta * rd * sb) ** 2 - (4.0 * a * r_f * (eta**2 + 1.0)) ** 2
    return num / den


def ebrd(cfg: UraConfig, phi: float, theta: float) -> EbrdResult:
    """Effective beamfocusing Rayleigh distance towards (phi, theta)."""
    try:
        ratio, sqrt_beta = _ratio(cfg, phi, theta)
    except DegenerateAngleError:
        return EbrdResult(0.0, (phi, theta), degenerate=True)
    return EbrdResult(1.0 / _kappa(cfg, alpha_for_ratio(ratio), sqrt_beta), (phi, theta))


def beamdepth_usa(cfg: UraConfig, phi: float, theta: float, r_f: float) -> BeamdepthResult:
    """Beamdepth of a square array; finite iff ``r_f < R_D sqrt(b1 b2) / (8 alpha)``."""
    if cfg.n1 != cfg.n2:
        raise ParameterDomainError(f"square array required, got {cfg.n1}x{cfg.n2}")
    _check_focus(cfg, r_f)
    try:
        ratio, sqrt_beta = _ratio(cfg, phi, theta)
    except DegenerateAngleError:
        return BeamdepthResult(INFINITE, 0.0, INFINITE, math.nan, degenerate=True)
    alpha = alpha_for_ratio(ratio)
    return _window(r_f, 8.0 * alpha / (cfg.rayleigh_m * sqrt_beta), alpha)


def beamdepth_ula(cfg: UraConfig, phi: float, r_f: float) -> BeamdepthResult:
    """Beamdepth of a line array along y, in the horizontal plane (theta = pi/2).

    Uses the single-factor half-power level; finite iff
    ``r_f < R_D cos^2(phi) / (4 alpha)``.
    """
    if cfg.n2 != 1:
        raise ParameterDomainError(f"line array along y required (n2 == 1), got {cfg.n1}x{cfg.n2}")
    _check_focus(cfg, r_f)
    c2 = math.cos(phi) ** 2
    alpha = alpha_3db_line()
    if c2 <= 0.0:
        return BeamdepthResult(INFINITE, 0.0, INFINITE, alpha, degenerate=True)
    return _window(r_f, 4.0 * alpha / (cfg.rayleigh_m * c2), alpha)


DEFAULT_ETA_GRID = tuple(2.0**k for k in range(-6, 7))


def factor_pair(n_bs: int, eta: float) -> tuple[int, int]:
    """Integer (n1, n2) with n1 * n2 close to ``n_bs`` and n1 / n2 close to ``eta``.

    An exact divisor pair is used when its ratio is within 10 % of ``eta``;
    otherwise each side is rounded on its own (so odd powers of two at
    ``n_bs = 4**k`` give e.g. 91 x 45 for eta = 2). Both rules map ``eta``
    and ``1 / eta`` to transposed shapes.
    """
    if n_bs < 1 or not eta > 0:
        raise ParameterDomainError(f"need n_bs >= 1 and eta > 0, got {n_bs}, {eta}")
    target = math.log(eta)
    best = min((abs(math.log(a * a / n_bs) - target), a) for a in range(1, n_bs + 1) if n_bs % a == 0)
    if best[0] <= math.log(1.1):
        return best[1], n_bs // best[1]
    return max(1, round(math.sqrt(n_bs * eta))), max(1, round(math.sqrt(n_bs / eta)))


@dataclass(frozen=True)
class EtaSweepRow:
    target_eta: float
    eta: float
    n1: int
    n2: int
    rayleigh_m: float
    alpha_3db: float
    combined_factor: float
    rf_m: float
    beamdepth: BeamdepthResult
    ebrd_m: float


def eta_sweep(n_bs: int, carrier_hz: float, phi: float, theta: float, r_f: float | None = None,
              rf_fraction: float | None = None, etas=DEFAULT_ETA_GRID,
              spacing_factor: float = 0.5) -> list[EtaSweepRow]:
    """Beamdepth, Rayleigh distance and EBRD across width-to-height ratios.

    Exactly one of ``r_f`` (metres, shared by all shapes) or ``rf_fraction``
    (fraction of each shape's own Rayleigh distance) must be given. With a
    shared metric focus the beamdepth tracks ``alpha_3db`` alone, because
    ``(eta^2 + 1) / (eta R_D)`` does not depend on eta at fixed N.
    """
    if (r_f is None) == (rf_fraction is None):
        raise ValueError("give exactly one of r_f or rf_fraction")
    rows = []
    for target in etas:
        n1, n2 = factor_pair(n_bs, target)
        cfg = build_ura(n1, n2, carrier_hz, spacing_factor)
        rf = r_f if r_f is not None else rf_fraction * cfg.rayleigh_m
        a = alpha_3db(cfg, phi, theta)
        rows.append(EtaSweepRow(
            target_eta=target, eta=cfg.eta, n1=n1, n2=n2, rayleigh_m=cfg.rayleigh_m, alpha_3db=a,
            combined_factor=a * (cfg.eta**2 + 1.0) / cfg.eta, rf_m=rf,
            beamdepth=beamdepth(cfg, phi, theta, rf), ebrd_m=ebrd(cfg, phi, theta).ebrd_m))
    return rows
