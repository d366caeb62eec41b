"""
Polar versus DFT codebooks for near-field users
===============================================

A 64 x 8 array serves five boresight users spread over three range
regions: inside the EBRD, between the EBRD and R_D, and in the far field.
Four RF chains, zero forcing, 50 trials per point.
"""
from urafocus import SumRateExperiment, build_ura, run_monte_carlo, summarize
from urafocus.multiuser import region_bounds

cfg = build_ura(64, 8, 28e9)
snr = (-30.0, -20.0, -10.0, 0.0)
for region in ("ebrd", "extended", "far"):
    lo, hi = region_bounds(cfg, region)
    print(f"\nusers in [{lo:.2f}, {hi:.2f}] m ({region})")
    for kind in ("polar", "dft"):
        exp = SumRateExperiment(64, 8, 5, snr, trials=50, seed=1, codebook=kind, region=region)
        rates = " ".join(f"{s.mean:6.2f}" for s in summarize(run_monte_carlo(exp)))
        print(f"  {kind:5}  sum rate at {snr} dB: {rates}")
