"""
Effective beamfocusing Rayleigh distance
========================================

EBRD against azimuth for five shapes of a 4096-element array, at two
elevations. Wide arrays lose EBRD quickly in azimuth, tall ones barely
notice azimuth but shrink with elevation.
"""
import math

import numpy as np

from urafocus import build_ura, ebrd
from urafocus.focusing import factor_pair

etas = (1, 4, 16, 0.016, 0.004)
arrays = {eta: build_ura(*factor_pair(4096, eta), 28e9) for eta in etas}
phis = np.radians(np.arange(0, 86, 17))

for theta_deg in (90, 60):
    theta = math.radians(theta_deg)
    print(f"\ntheta = {theta_deg} deg, EBRD in metres")
    print(f"{'phi':>4} " + " ".join(f"{f'{c.n1}x{c.n2}':>9}" for c in arrays.values()))
    for phi in phis:
        print(f"{math.degrees(phi):4.0f} " + " ".join(f"{ebrd(c, float(phi), theta).ebrd_m:9.2f}"
                                                    for c in arrays.values()))

# square array at boresight: R_D / 10 up to the exact alpha_3dB
sq = arrays[1]
print(f"\n64x64 boresight EBRD {ebrd(sq, 0.0, math.pi / 2).ebrd_m:.3f} m, R_D / 10 = {sq.rayleigh_m / 10:.3f} m")
