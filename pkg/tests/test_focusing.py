import math

import numpy as np
import pytest

from oracles import gain_window, scan_first_crossing
from urafocus.channel import array_gain_exact
from urafocus.focusing import (
    DEFAULT_ETA_GRID,
    INFINITE,
    DegenerateAngleError,
    alpha_3db,
    alpha_3db_line,
    alpha_for_ratio,
    beamdepth,
    beamdepth_formula,
    beamdepth_ula,
    beamdepth_usa,
    ebrd,
    eta_sweep,
    factor_pair,
    is_infinite,
)
from urafocus.fresnel import fresnel_cs, fresnel_power
from urafocus.geometry import ParameterDomainError, SphericalPoint, build_ura

BORESIGHT = (0.0, math.pi / 2)


def _scan_window(cfg, phi, theta, r_f, n=600):
    gain = lambda z: array_gain_exact(cfg, SphericalPoint(phi, theta, r_f), z)
    return gain_window(gain, r_f, 0.05 * cfg.aperture_m, 10 * cfg.rayleigh_m, n=n)


# ---- alpha -------------------------------------------------------------------

def test_alpha_square_boresight():
    assert alpha_3db(build_ura(64, 64), *BORESIGHT) == pytest.approx(1.25, abs=0.01)


@pytest.mark.parametrize("eta", [2, 4, 8, 16])
def test_alpha_reciprocal_symmetry(eta):
    assert abs(alpha_for_ratio(float(eta)) - alpha_for_ratio(1.0 / eta)) <= 1e-6


def test_alpha_swapped_angles():
    # wide array at (0, pi/3): beta1 = 1, beta2 = 3/4; its transpose at
    # (pi/6, pi/2): beta1 = 3/4, beta2 = 1, so the ray ratios are reciprocal
    wide, tall = build_ura(64, 16), build_ura(16, 64)
    assert abs(alpha_3db(wide, 0.0, math.pi / 3) - alpha_3db(tall, math.pi / 6, math.pi / 2)) <= 1e-6


def test_alpha_eta16_against_scan():
    sr = 4.0  # sqrt of the ray ratio gamma1 / gamma2 = 16

    def gain(t):
        g1, g2 = t * sr, t / sr
        c1, s1 = fresnel_cs(g1)
        c2, s2 = fresnel_cs(g2)
        return (c1 * c1 + s1 * s1) * (c2 * c2 + s2 * s2) / (g1 * g2) ** 2

    t = scan_first_crossing(gain, step=1e-4)
    assert alpha_for_ratio(16.0) == pytest.approx(t * t, rel=1e-9)
    assert alpha_3db(build_ura(128, 8), *BORESIGHT) == pytest.approx(t * t, rel=1e-9)


def test_alpha_is_the_level_set():
    for ratio in (0.05, 0.3, 1.0, 7.0):
        a = alpha_for_ratio(ratio)
        g1, g2 = math.sqrt(a * ratio), math.sqrt(a / ratio)
        assert fresnel_power(g1) * fresnel_power(g2) == pytest.approx(0.5, abs=1e-10)


def test_alpha_degenerate():
    with pytest.raises(DegenerateAngleError):
        alpha_3db(build_ura(8, 8), math.pi / 2, math.pi / 2)
    with pytest.raises(DegenerateAngleError):
        alpha_for_ratio(0.0)


def test_line_alpha():
    a = alpha_3db_line()
    assert fresnel_power(math.sqrt(a)) == pytest.approx(0.5, abs=1e-10)
    t = scan_first_crossing(fresnel_power, step=1e-4)
    assert a == pytest.approx(t * t, rel=1e-9)


# ---- beamdepth ---------------------------------------------------------------

def test_64x64_at_two_metres():
    cfg = build_ura(64, 64)
    res = beamdepth(cfg, *BORESIGHT, 2.0)
    # reference values evaluated with alpha = 1.25 and c = 3e8
    assert res.bd_m == pytest.approx(2.30, rel=0.02)
    assert res.rf_min_m == pytest.approx(1.374, rel=0.01)
    assert res.rf_max_m == pytest.approx(3.675, rel=0.01)
    assert res.rf_min_m < 2.0 < res.rf_max_m


def test_window_matches_gain_scan_64x64():
    cfg = build_ura(64, 64)
    res = beamdepth(cfg, *BORESIGHT, 2.0)
    lo, hi = _scan_window(cfg, *BORESIGHT, 2.0)
    assert lo == pytest.approx(res.rf_min_m, rel=0.02)
    assert hi == pytest.approx(res.rf_max_m, rel=0.02)


def test_beyond_ebrd_is_infinite():
    cfg = build_ura(64, 64)
    limit = ebrd(cfg, *BORESIGHT).ebrd_m
    res = beamdepth(cfg, *BORESIGHT, 1.0001 * limit)
    assert res.bd_m is INFINITE and res.rf_max_m is INFINITE and not res.finite
    assert res.rf_min_m == pytest.approx(limit / 2, rel=1e-3)
    assert beamdepth_formula(cfg, *BORESIGHT, 1.0001 * limit) < 0


def test_below_near_field_rejected():
    cfg = build_ura(64, 64)
    with pytest.raises(ParameterDomainError):
        beamdepth(cfg, *BORESIGHT, 0.9 * cfg.near_field_min_m)


def test_degenerate_angle_flagged():
    res = beamdepth(build_ura(16, 16), math.pi / 2, math.pi / 2, 1.0)
    assert res.degenerate and res.bd_m is INFINITE
    e = ebrd(build_ura(16, 16), math.pi / 2, math.pi / 2)
    assert e.degenerate and e.ebrd_m == 0


def test_depth_is_difference_of_limits():
    rng = np.random.default_rng(0)
    for _ in range(50):
        cfg = build_ura(int(rng.integers(32, 200)), int(rng.integers(32, 200)))
        phi, theta = rng.uniform(-1.3, 1.3), rng.uniform(0.3, 2.8)
        limit = ebrd(cfg, phi, theta).ebrd_m
        if limit <= cfg.near_field_min_m:
            continue
        r_f = rng.uniform(cfg.near_field_min_m, limit)
        res = beamdepth(cfg, phi, theta, r_f)
        assert res.bd_m == res.rf_max_m - res.rf_min_m
        assert res.rf_min_m < r_f < res.rf_max_m
        assert res.bd_m == pytest.approx(beamdepth_formula(cfg, phi, theta, r_f), rel=1e-9)


def test_ebrd_zeroes_the_denominator():
    for n1, n2, phi, theta in [(64, 64, 0.0, math.pi / 2), (128, 8, 0.4, 1.2), (16, 256, -0.9, 2.0)]:
        cfg = build_ura(n1, n2)
        r = ebrd(cfg, phi, theta).ebrd_m
        a = alpha_3db(cfg, phi, theta)
        q = math.sin(theta) * math.sqrt(1 - math.sin(theta) ** 2 * math.sin(phi) ** 2)
        eta, rd = cfg.eta, cfg.rayleigh_m
        # root of (eta R_D q)^2 - (4 a r (eta^2 + 1))^2
        root = eta * rd * q / (4 * a * (eta * eta + 1))
        assert r == pytest.approx(root, rel=1e-9)
        assert 0 < r < rd


def test_ebrd_square_boresight():
    cfg = build_ura(64, 64)
    assert ebrd(cfg, *BORESIGHT).ebrd_m == pytest.approx(cfg.rayleigh_m / 10, rel=0.01)
    assert ebrd(cfg, *BORESIGHT).ebrd_m == pytest.approx(4.39, rel=0.01)


def test_ebrd_wide_array_decreasing_in_azimuth():
    cfg = build_ura(256, 16)
    phis = np.linspace(0, 1.5, 40)
    vals = [ebrd(cfg, p, math.pi / 2).ebrd_m for p in phis]
    assert np.all(np.diff(vals) < 0)
    neg = [ebrd(cfg, -p, math.pi / 2).ebrd_m for p in phis]
    np.testing.assert_allclose(vals, neg, rtol=1e-12)


def test_quadratic_growth():
    cfg = build_ura(256, 256)
    limit = ebrd(cfg, *BORESIGHT).ebrd_m
    r = np.linspace(cfg.near_field_min_m, 0.1 * limit, 25)
    ratio = np.array([beamdepth(cfg, *BORESIGHT, x).bd_m / x**2 for x in r])
    assert ratio.max() / ratio.min() - 1 < 0.10


def test_wide_array_depth_grows_off_boresight():
    cfg = build_ura(128, 8)
    r_f = 0.3 * ebrd(cfg, 1.0, math.pi / 2).ebrd_m
    r_f = max(r_f, cfg.near_field_min_m)
    depths = [float(beamdepth(cfg, p, math.pi / 2, r_f).bd_m) for p in np.linspace(0, 1.0, 30)]
    assert np.all(np.diff(depths) >= 0)


@pytest.mark.slow
def test_random_cases_against_gain_scan():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        cfg = build_ura(int(rng.integers(32, 129)), int(rng.integers(32, 129)))
        phi, theta = rng.uniform(-math.pi / 3, math.pi / 3), rng.uniform(math.pi / 4, 3 * math.pi / 4)
        r_f = rng.uniform(cfg.near_field_min_m, 0.5 * ebrd(cfg, phi, theta).ebrd_m)
        res = beamdepth(cfg, phi, theta, r_f)
        lo, hi = _scan_window(cfg, phi, theta, r_f, n=400)
        assert hi - lo == pytest.approx(res.bd_m, rel=0.05)


# ---- corollaries -------------------------------------------------------------

def test_usa_matches_general():
    cfg = build_ura(64, 64)
    for phi, theta, r_f in [(0.0, math.pi / 2, 2.0), (0.5, 1.2, 1.5)]:
        assert beamdepth_usa(cfg, phi, theta, r_f) == beamdepth(cfg, phi, theta, r_f)


def test_usa_boundary():
    cfg = build_ura(64, 64)
    phi, theta = 0.3, 1.3
    a = alpha_3db(cfg, phi, theta)
    q = math.sin(theta) * math.sqrt(1 - math.sin(theta) ** 2 * math.sin(phi) ** 2)
    edge = cfg.rayleigh_m * q / (8 * a)
    near = beamdepth_usa(cfg, phi, theta, 0.99 * edge)
    assert near.finite and near.bd_m > 10 * edge
    assert beamdepth_usa(cfg, phi, theta, 1.01 * edge).bd_m is INFINITE


def test_usa_rejects_rectangular():
    with pytest.raises(ParameterDomainError):
        beamdepth_usa(build_ura(64, 32), *BORESIGHT, 2.0)


def test_usa_square_aperture_expression():
    # boresight square aperture: BD = 16 a r^2 R_D / (R_D^2 - (8 a r)^2)
    cfg = build_ura(64, 64)
    a = alpha_3db(cfg, *BORESIGHT)
    r, rd = 2.0, cfg.rayleigh_m
    assert beamdepth_usa(cfg, *BORESIGHT, r).bd_m == pytest.approx(16 * a * r * r * rd / (rd**2 - (8 * a * r) ** 2),
                                                                  rel=1e-12)


def test_ula_boundary_and_formula():
    cfg = build_ura(256, 1)
    a = alpha_3db_line()
    edge = cfg.rayleigh_m / (4 * a)
    assert beamdepth_ula(cfg, 0.0, edge).bd_m is INFINITE
    r, rd = 0.05 * cfg.rayleigh_m, cfg.rayleigh_m
    for phi in (0.0, 0.5):
        c2 = math.cos(phi) ** 2
        expected = 8 * a * r * r * rd * c2 / ((rd * c2) ** 2 - (4 * a * r) ** 2)
        assert beamdepth_ula(cfg, phi, r).bd_m == pytest.approx(expected, rel=1e-12)


def test_ula_against_gain_scan():
    cfg = build_ura(256, 1)
    r_f = 0.1 * cfg.rayleigh_m
    res = beamdepth_ula(cfg, 0.0, r_f)
    lo, hi = _scan_window(cfg, *BORESIGHT, r_f)
    assert hi - lo == pytest.approx(res.bd_m, rel=0.02)


def test_ula_deeper_off_boresight():
    cfg = build_ura(256, 1)
    r_f = 0.05 * cfg.rayleigh_m
    assert beamdepth_ula(cfg, math.pi / 3, r_f).bd_m > beamdepth_ula(cfg, 0.0, r_f).bd_m


def test_ula_rejects_planar():
    with pytest.raises(ParameterDomainError):
        beamdepth_ula(build_ura(16, 2), 0.0, 1.0)


# ---- eta sweep ---------------------------------------------------------------

def test_factor_pairs():
    for eta in DEFAULT_ETA_GRID:
        n1, n2 = factor_pair(4096, eta)
        assert factor_pair(4096, 1 / eta) == (n2, n1)
        assert abs(n1 * n2 / 4096 - 1) < 0.03 and abs(math.log(n1 / n2 / eta)) < 0.05
        if math.log2(eta) % 2 == 0:
            assert n1 * n2 == 4096 and n1 / n2 == eta
    assert factor_pair(4096, 0.004) == (4, 1024)
    assert factor_pair(4096, 0.016) == (8, 512)
    assert factor_pair(1024, 16) == (128, 8)


def test_sweep_extremes_at_square():
    rows = eta_sweep(4096, 28e9, *BORESIGHT, rf_fraction=0.02)
    by_eta = {r.target_eta: r for r in rows}
    sq = by_eta[1.0]
    for r in rows:
        assert float(sq.beamdepth.bd_m) <= float(r.beamdepth.bd_m)
        assert sq.rayleigh_m <= r.rayleigh_m
        assert sq.combined_factor >= r.combined_factor
        assert sq.ebrd_m <= r.ebrd_m
        assert r.rayleigh_m == pytest.approx(by_eta[1 / r.target_eta].rayleigh_m, rel=1e-12)


def test_sweep_shared_focus_tracks_alpha():
    # with one metric focus for every shape, (eta^2 + 1) / (eta R_D) is constant
    # and the depth follows alpha alone, which peaks at the square shape
    rows = eta_sweep(4096, 28e9, *BORESIGHT, r_f=3.5)
    depth = {r.target_eta: float(r.beamdepth.bd_m) for r in rows}
    alpha = {r.target_eta: r.alpha_3db for r in rows}
    assert max(depth, key=depth.get) == 1.0 == max(alpha, key=alpha.get)


def test_sweep_needs_one_focus_spec():
    with pytest.raises(ValueError):
        eta_sweep(4096, 28e9, *BORESIGHT)
    with pytest.raises(ValueError):
        eta_sweep(4096, 28e9, *BORESIGHT, r_f=1.0, rf_fraction=0.1)


def test_infinite_marker():
    assert str(INFINITE) == "inf" and float(INFINITE) == math.inf
    assert is_infinite(INFINITE) and not is_infinite(math.inf)
    assert INFINITE > 1e300 and not INFINITE < 5
