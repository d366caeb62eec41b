"""
Square versus wide array with the same element count
====================================================

32 x 32 and 128 x 8 both hold 1024 elements. Six boresight users sit
inside the wide array's EBRD; most of them are beyond the square array's
EBRD, where it can no longer separate users by range.
"""
import math

from urafocus import SumRateExperiment, build_ura, ebrd, run_monte_carlo, summarize
from urafocus.multiuser import region_bounds

square, wide = build_ura(32, 32), build_ura(128, 8)
for cfg in (square, wide):
    print(f"{cfg.n1}x{cfg.n2}: R_D {cfg.rayleigh_m:6.2f} m, EBRD {ebrd(cfg, 0.0, math.pi / 2).ebrd_m:5.2f} m")

region = region_bounds(wide, "ebrd")
print(f"users in [{region[0]:.2f}, {region[1]:.2f}] m")
snr = (-30.0, -20.0, -10.0, 0.0)
for cfg in (square, wide):
    exp = SumRateExperiment(cfg.n1, cfg.n2, 6, snr, trials=50, seed=1, region=region)
    rates = " ".join(f"{s.mean:6.2f}" for s in summarize(run_monte_carlo(exp)))
    print(f"{cfg.n1}x{cfg.n2} polar: {rates}")
