"""Near-field beamfocusing analysis for uniform rectangular arrays."""

__version__ = "0.1.0"

from .channel import (
    PathSpec,
    array_gain_exact,
    array_gain_fresnel,
    element_distance_exact,
    element_distance_expanded,
    far_field_vector,
    half_power_window,
    los_channel,
    planar_vector,
    steering_vector,
)
from .focusing import (
    INFINITE,
    BeamdepthResult,
    DegenerateAngleError,
    EbrdResult,
    alpha_3db,
    beamdepth,
    beamdepth_ula,
    beamdepth_usa,
    ebrd,
    eta_sweep,
    factor_pair,
)
from .fresnel import FresnelPair, fresnel_cs
from .geometry import (
    ParameterDomainError,
    SphericalPoint,
    UraConfig,
    boresight,
    build_ura,
    directional_quantities,
)
from .multiuser import (
    Codebook,
    PrecodingSolution,
    SumRateExperiment,
    SumRateRecord,
    beam_training,
    build_dft_codebook,
    build_polar_codebook,
    region_bounds,
    run_monte_carlo,
    sum_rate,
    summarize,
    zf_precode,
)
