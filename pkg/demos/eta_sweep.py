"""
Array shape at a fixed element budget
=====================================

4096 elements arranged from 8 x 512 to 512 x 8. Focusing at the same
fraction (2 %) of each shape's own Rayleigh distance, the square array
has the smallest depth and the smallest Rayleigh distance.

With a single metric focus range the picture flips: the factor
(eta^2 + 1) / (eta R_D) is the same for every shape, so the depth follows
alpha_3dB alone, which peaks at the square shape.
"""
import math

from urafocus import eta_sweep

boresight = (0.0, math.pi / 2)

print("focus at 0.02 R_D of each shape")
print(f"{'eta':>8} {'shape':>9} {'R_D':>8} {'alpha':>7} {'factor':>7} {'r_f':>6} {'BD':>7} {'EBRD':>8}")
for row in eta_sweep(4096, 28e9, *boresight, rf_fraction=0.02):
    print(f"{row.target_eta:8.4g} {row.n1:>4}x{row.n2:<4} {row.rayleigh_m:8.2f} {row.alpha_3db:7.4f} "
          f"{row.combined_factor:7.3f} {row.rf_m:6.3f} {float(row.beamdepth.bd_m):7.4f} {row.ebrd_m:8.2f}")

print("\nshared focus at 3.5 m")
for row in eta_sweep(4096, 28e9, *boresight, r_f=3.5):
    print(f"{row.target_eta:8.4g} {row.n1:>4}x{row.n2:<4} alpha {row.alpha_3db:.4f}  BD {row.beamdepth.bd_m}")
