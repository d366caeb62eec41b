"""Downlink multiuser simulation with codebook beam training and hybrid ZF.

Pipeline per Monte Carlo trial:

1. drop users on their range bins (uniform in inverse distance),
2. sweep the codebook; each user reports its best codeword,
3. schedule at most ``n_rf`` users (strongest reported gain first) and
   resolve codeword collisions greedily,
4. zero-forcing on the effective channel ``H^H W``,
5. sum spectral efficiency at every SNR point.

Users get unit path gain and equal power ``p = 10^(snr_db/10)`` with unit
noise, so the SNR axis is a per-user transmit SNR before array gain.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .channel import PathSpec, los_channel, planar_vector, steering_vector
from .focusing import ebrd
from .geometry import ParameterDomainError, SphericalPoint, UraConfig, build_ura

log = logging.getLogger(__name__)

CODEBOOK_KINDS = ("polar", "dft")


def dft_grid(n: int) -> np.ndarray:
    """``n`` directional cosines spaced 2/n apart, including 0."""
    return 2.0 * (np.arange(n) - n // 2) / n


@dataclass(frozen=True, eq=False)
class Codebook:
    """Codewords stored as the columns of ``matrix`` (N_BS x K)."""

    matrix: np.ndarray
    kind: str
    focus: tuple  # per codeword (phi, theta, range_m), range inf for planar beams
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return self.matrix.shape[1]

    def codeword(self, index: int) -> np.ndarray:
        return self.matrix[:, index]


def _ring_ranges(r_near: float, r_far: float, rings: int) -> np.ndarray:
    # bin midpoints, uniform in 1/r
    inv = 1.0 / r_far + (np.arange(rings) + 0.5) * (1.0 / r_near - 1.0 / r_far) / rings
    return 1.0 / inv


def build_polar_codebook(cfg: UraConfig, az_points: int | None = None, el_points: int | None = None,
                         rings: int = 8) -> Codebook:
    """Near-field codebook: angle grid times range rings inside each angle's EBRD.

    Angles sit on the directional-cosine grid (u_y, u_z) of sizes
    ``az_points`` x ``el_points`` (default n1 x n2); grid points outside the
    visible region are skipped. Every angle gets ``rings`` focused codewords
    between 1.2 D and its EBRD, plus one planar (far-field) codeword.
    """
    if rings < 1:
        raise ParameterDomainError(f"polar codebook needs at least one ring, got {rings}")
    az_points = az_points or cfg.n1
    el_points = el_points or cfg.n2
    cols, focus = [], []
    r_near = cfg.near_field_min_m
    skipped = 0
    for uy in dft_grid(az_points):
        for uz in dft_grid(el_points):
            if uy * uy + uz * uz >= 1.0:
                skipped += 1
                continue
            theta = math.acos(uz)
            phi = math.asin(uy / math.sin(theta))
            limit = ebrd(cfg, phi, theta).ebrd_m
            if limit > r_near:
                for r in _ring_ranges(r_near, limit, rings):
                    cols.append(steering_vector(cfg, SphericalPoint(phi, theta, float(r))))
                    focus.append((phi, theta, float(r)))
            cols.append(planar_vector(cfg, uy, uz))
            focus.append((phi, theta, math.inf))
    meta = {"az_points": az_points, "el_points": el_points, "rings": rings, "invisible_skipped": skipped}
    return Codebook(np.stack(cols, axis=1), "polar", tuple(focus), meta)


def build_dft_codebook(cfg: UraConfig) -> Codebook:
    """Orthogonal 2-D DFT codebook: n1 x n2 planar beams."""
    cols, focus = [], []
    for uy in dft_grid(cfg.n1):
        for uz in dft_grid(cfg.n2):
            cols.append(planar_vector(cfg, uy, uz))
            visible = uy * uy + uz * uz < 1.0
            if visible:
                theta = math.acos(uz)
                focus.append((math.asin(uy / math.sin(theta)), theta, math.inf))
            else:
                focus.append((math.nan, math.nan, math.inf))
    return Codebook(np.stack(cols, axis=1), "dft", tuple(focus), {"n1": cfg.n1, "n2": cfg.n2})


def build_codebook(cfg: UraConfig, kind: str, rings: int = 8, az_points=None, el_points=None) -> Codebook:
    if kind == "polar":
        return build_polar_codebook(cfg, az_points, el_points, rings)
    if kind == "dft":
        return build_dft_codebook(cfg)
    raise ValueError(f"unknown codebook kind {kind!r}; expected one of {CODEBOOK_KINDS}")


def training_scores(book: Codebook, channels) -> np.ndarray:
    """``|h_m^H c_k|^2`` for every user m (rows) and codeword k (columns)."""
    h = np.atleast_2d(np.asarray(channels))
    return np.abs(h.conj() @ book.matrix) ** 2


def beam_training(book: Codebook, channels) -> list[int]:
    """Best codeword index per user, in user order.

    Ties go to the lowest index. A user whose favourite is already taken by
    an earlier user gets its best remaining codeword.
    """
    scores = training_scores(book, channels)
    if scores.shape[0] > scores.shape[1]:
        raise ValueError(f"{scores.shape[0]} users but only {scores.shape[1]} codewords")
    taken: set[int] = set()
    picks = []
    for row in scores:
        for k in np.argsort(-row, kind="stable"):
            if int(k) not in taken:
                taken.add(int(k))
                picks.append(int(k))
                break
    return picks


class ZeroForcing(NamedTuple):
    digital: np.ndarray
    degraded: bool


def zf_precode(effective_channels, analog: np.ndarray | None = None) -> ZeroForcing:
    """Zero-forcing digital precoder ``F = H^H (H H^H)^-1`` for ``H`` (M x N_RF).

    Columns are scaled so ``W f_m`` has unit norm (``f_m`` itself when no
    analog stage is given). A rank-deficient ``H`` is diagonally loaded with
    ``1e-10 * trace`` and flagged ``degraded``.
    """
    h = np.atleast_2d(np.asarray(effective_channels, dtype=complex))
    m, n_rf = h.shape
    if m > n_rf:
        raise ValueError(f"zero forcing needs users <= RF chains, got {m} > {n_rf}")
    gram = h @ h.conj().T
    degraded = np.linalg.matrix_rank(h) < m
    if degraded:
        gram = gram + 1e-10 * np.real(np.trace(gram)) * np.eye(m)
    f = h.conj().T @ np.linalg.inv(gram)
    beams = f if analog is None else analog @ f
    norms = np.linalg.norm(beams, axis=0)
    norms[norms == 0] = 1.0
    return ZeroForcing(f / norms, bool(degraded))


@dataclass(frozen=True, eq=False)
class PrecodingSolution:
    analog: np.ndarray    # N_BS x N_RF
    digital: np.ndarray   # N_RF x M
    power: np.ndarray     # per user, watts
    noise: np.ndarray     # per user, watts


def per_user_rates(channels, solution: PrecodingSolution) -> np.ndarray:
    """Per-user spectral efficiency under linear precoding, bps/Hz."""
    h = np.atleast_2d(np.asarray(channels))
    # coupling[m, l] = |h_m^H W f_l|^2
    coupling = np.abs(h.conj() @ solution.analog @ solution.digital) ** 2
    rx = coupling * solution.power[None, :]
    signal = np.diag(rx)
    interference = rx.sum(axis=1) - signal
    return np.log2(1.0 + signal / (solution.noise + interference))


@dataclass(frozen=True)
class SumRateRecord:
    snr_db: float
    codebook: str
    rates: tuple
    sum_rate: float
    seed: int
    trial: int = 0
    eta: float = math.nan


def sum_rate(channels, solution: PrecodingSolution, snr_db: float = math.nan, codebook: str = "",
             seed: int = 0, trial: int = 0, eta: float = math.nan) -> SumRateRecord:
    rates = per_user_rates(channels, solution)
    return SumRateRecord(snr_db, codebook, tuple(float(r) for r in rates), float(rates.sum()), seed, trial, eta)


USER_REGIONS = ("ebrd", "extended", "far")


@dataclass(frozen=True)
class SumRateExperiment:
    """One curve: a fixed array and codebook over an SNR grid."""

    n1: int
    n2: int
    n_users: int
    snr_db: tuple
    trials: int
    seed: int = 0
    codebook: str = "polar"
    carrier_hz: float = 28e9
    spacing_factor: float = 0.5
    n_rf: int = 4
    rings: int = 8
    az_points: int | None = None
    el_points: int | None = None
    # "ebrd" | "extended" | "far" or explicit (r_min, r_max) in metres
    region: str | tuple = "ebrd"
    azimuth_rad: float = 0.0
    elevation_rad: float = math.pi / 2
    channel_model: str = "expanded"

    def array(self) -> UraConfig:
        return build_ura(self.n1, self.n2, self.carrier_hz, self.spacing_factor)


def region_bounds(cfg: UraConfig, region, phi: float = 0.0, theta: float = math.pi / 2) -> tuple[float, float]:
    """Range interval (metres) for a named user region of ``cfg``."""
    if not isinstance(region, str):
        lo, hi = map(float, region)
        if not 0 < lo < hi:
            raise ParameterDomainError(f"bad user range interval {region}")
        return lo, hi
    limit = ebrd(cfg, phi, theta).ebrd_m
    if region == "ebrd":
        return cfg.near_field_min_m, limit
    if region == "extended":
        return limit, cfg.rayleigh_m
    if region == "far":
        return cfg.rayleigh_m, 100.0 * cfg.rayleigh_m
    raise ValueError(f"unknown user region {region!r}; expected one of {USER_REGIONS} or (r_min, r_max)")


def draw_user_ranges(rng: np.random.Generator, n_users: int, r_min: float, r_max: float) -> np.ndarray:
    """One range per equal-width inverse-distance bin, jittered within its bin."""
    edges = np.linspace(1.0 / r_max, 1.0 / r_min, n_users + 1)
    inv = edges[:-1] + rng.random(n_users) * np.diff(edges)
    return 1.0 / inv


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def schedule_and_precode(cfg: UraConfig, book: Codebook, channels: np.ndarray, n_rf: int):
    """Beam training, user scheduling and ZF. Returns (users, codewords, ZeroForcing)."""
    scores = training_scores(book, channels)
    best = scores.max(axis=1)
    order = np.argsort(-best, kind="stable")[:min(len(channels), n_rf)]
    picks = beam_training(book, channels[order])
    analog = book.matrix[:, picks]
    zf = zf_precode(channels[order].conj() @ analog, analog)
    return order, picks, analog, zf


def run_trial(exp: SumRateExperiment, cfg: UraConfig, book: Codebook, trial: int) -> list[SumRateRecord]:
    rng = trial_rng(exp.seed, trial)
    r_min, r_max = region_bounds(cfg, exp.region, exp.azimuth_rad, exp.elevation_rad)
    ranges = draw_user_ranges(rng, exp.n_users, r_min, r_max)
    channels = np.stack([
        los_channel(cfg, [PathSpec(1.0, SphericalPoint(exp.azimuth_rad, exp.elevation_rad, float(r)))],
                    exp.channel_model)
        for r in ranges])
    order, _, analog, zf = schedule_and_precode(cfg, book, channels, exp.n_rf)
    if zf.degraded:
        log.debug("trial %d: rank-deficient effective channel, loaded ZF", trial)
    served = channels[order]
    out = []
    for snr in exp.snr_db:
        p = 10.0 ** (snr / 10.0)
        sol = PrecodingSolution(analog, zf.digital, np.full(len(order), p), np.ones(len(order)))
        rates = np.zeros(exp.n_users)
        rates[order] = per_user_rates(served, sol)
        out.append(SumRateRecord(float(snr), book.kind, tuple(float(r) for r in rates), float(rates.sum()),
                                 exp.seed, trial, cfg.eta))
    return out


def run_monte_carlo(exp: SumRateExperiment, book: Codebook | None = None) -> list[SumRateRecord]:
    """All per-trial records, ordered by (trial, snr).

    Each trial draws from its own stream seeded by ``(seed, trial)``, so a
    trial's records do not depend on which other trials run.
    """
    if exp.trials < 0:
        raise ValueError("trial count must be non-negative")
    if exp.trials == 0:
        return []
    cfg = exp.array()
    if book is None:
        book = build_codebook(cfg, exp.codebook, exp.rings, exp.az_points, exp.el_points)
    records = []
    for t in range(exp.trials):
        records.extend(run_trial(exp, cfg, book, t))
    return records


class SnrSummary(NamedTuple):
    snr_db: float
    mean: float
    ci95_low: float
    ci95_high: float
    trials: int


def summarize(records: Sequence[SumRateRecord]) -> list[SnrSummary]:
    """Mean sum rate and normal-approximation 95 % interval per SNR point."""
    by_snr: dict[float, list[float]] = {}
    for rec in records:
        by_snr.setdefault(rec.snr_db, []).append(rec.sum_rate)
    out = []
    for snr, vals in by_snr.items():
        v = np.asarray(vals)
        half = 1.96 * v.std(ddof=1) / math.sqrt(v.size) if v.size > 1 else 0.0
        out.append(SnrSummary(snr, float(v.mean()), float(v.mean() - half), float(v.mean() + half), v.size))
    return out
