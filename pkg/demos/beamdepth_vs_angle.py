"""
Beamdepth of a square array against azimuth
===========================================

16 x 16 elements at 28 GHz, focus ranges 0.15, 0.2 and 0.25 m in the
horizontal plane. The depth is smallest at boresight and grows as the
beam steers away, until the focus passes the angle's EBRD and the far
3 dB point disappears.
"""
import math

import numpy as np

from urafocus import beamdepth, build_ura, ebrd

cfg = build_ura(16, 16, 28e9)
theta = math.pi / 2
phis = np.radians(np.arange(0, 61, 5))

print(f"{'phi':>5} {'EBRD':>7}  " + "  ".join(f"BD@{r:.2f}m" for r in (0.15, 0.2, 0.25)))
for phi in phis:
    row = [beamdepth(cfg, float(phi), theta, r) for r in (0.15, 0.2, 0.25)]
    cells = "  ".join(f"{str(x.bd_m) if not x.finite else f'{x.bd_m:.4f}':>9}" for x in row)
    print(f"{math.degrees(phi):5.0f} {ebrd(cfg, float(phi), theta).ebrd_m:7.4f}  {cells}")

# the depth grows roughly with r_f^2 while the focus is well inside the EBRD
big = build_ura(256, 256, 28e9)
limit = ebrd(big, 0.0, theta).ebrd_m
for r in np.linspace(big.near_field_min_m, 0.1 * limit, 4):
    bd = beamdepth(big, 0.0, theta, float(r)).bd_m
    print(f"256x256 r_f = {r:6.2f} m  BD = {bd:8.4f} m  BD / r_f^2 = {bd / r**2:.5f}")
