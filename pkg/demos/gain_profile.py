"""
Focused array gain along the range axis
=======================================

A 64 x 64 array at 28 GHz focuses on a boresight point at 5 % of its
Rayleigh distance. We compare the direct element sum with the closed
Fresnel form and read off the 3 dB window.
"""
import math

import numpy as np

from urafocus import array_gain_exact, array_gain_fresnel, beamdepth, build_ura
from urafocus.channel import half_power_window
from urafocus.geometry import SphericalPoint

cfg = build_ura(64, 64, 28e9)
print(f"aperture D = {cfg.aperture_m:.3f} m, Rayleigh distance = {cfg.rayleigh_m:.2f} m")

phi, theta = 0.0, math.pi / 2
r_f = 0.05 * cfg.rayleigh_m
focus = SphericalPoint(phi, theta, r_f)

# both models on a log grid from the near-field bound out to 5 r_f
z = np.geomspace(cfg.near_field_min_m, 5 * r_f, 25)
exact = array_gain_exact(cfg, focus, z)
closed = array_gain_fresnel(cfg, (phi, theta), r_f, z)
print(f"\n{'z [m]':>8} {'direct':>8} {'Fresnel':>8}")
for zi, a, b in zip(z, exact, closed):
    print(f"{zi:8.3f} {a:8.4f} {b:8.4f}")
print(f"max |direct - Fresnel| = {np.max(np.abs(exact - closed)):.2e}")

# the 3 dB window from a numeric scan, next to the closed form
lo, hi = half_power_window(lambda zz: array_gain_exact(cfg, focus, zz), r_f,
                           cfg.near_field_min_m, 10 * cfg.rayleigh_m, n_points=512)
res = beamdepth(cfg, phi, theta, r_f)
print(f"\nscan:        [{lo:.4f}, {hi:.4f}] m, depth {hi - lo:.4f} m")
print(f"closed form: [{res.rf_min_m:.4f}, {float(res.rf_max_m):.4f}] m, depth {float(res.bd_m):.4f} m")
