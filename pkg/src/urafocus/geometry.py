"""Array geometry for a uniform rectangular array (URA) in the y-z plane.

Angle convention: ``elevation_rad`` is the polar angle measured from the
+z axis, so boresight (the +x axis) is ``azimuth=0, elevation=pi/2``.
Directional cosines are

    u_x = sin(theta) cos(phi),  u_y = sin(theta) sin(phi),  u_z = cos(theta)

This is NOT the elevation-above-horizon convention many radar codes use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
# closest range treated as radiative near-field, in units of the aperture
NEAR_FIELD_MIN_APERTURES = 1.2


class ParameterDomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


def element_indices(n: int) -> np.ndarray:
    """Integer element indices along one axis.

    Runs over ``n`` consecutive integers starting at ``-ceil((n - 1) / 2)``:
    symmetric for odd ``n``; ``[-n/2, ..., n/2 - 1]`` for even ``n``.
    """
    half = math.ceil((n - 1) / 2)
    return np.arange(-half, -half + n, dtype=float)


@dataclass(frozen=True)
class UraConfig:
    n1: int
    n2: int
    carrier_hz: float
    spacing_m: float
    wavelength_m: float = field(init=False)
    aperture_m: float = field(init=False)
    rayleigh_m: float = field(init=False)
    eta: float = field(init=False)

    def __post_init__(self):
        if int(self.n1) != self.n1 or int(self.n2) != self.n2:
            raise ParameterDomainError("element counts must be integers")
        if self.n1 < 1 or self.n2 < 1:
            raise ParameterDomainError(f"element counts must be >= 1, got {self.n1}x{self.n2}")
        if not self.carrier_hz > 0:
            raise ParameterDomainError(f"carrier must be positive, got {self.carrier_hz}")
        if not self.spacing_m > 0:
            raise ParameterDomainError(f"spacing must be positive, got {self.spacing_m}")
        lam = SPEED_OF_LIGHT / self.carrier_hz
        aperture = self.spacing_m * math.hypot(self.n1, self.n2)
        object.__setattr__(self, "wavelength_m", lam)
        object.__setattr__(self, "aperture_m", aperture)
        object.__setattr__(self, "rayleigh_m", 2.0 * aperture**2 / lam)
        object.__setattr__(self, "eta", self.n1 / self.n2)

    @property
    def n_bs(self) -> int:
        return self.n1 * self.n2

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength_m

    @property
    def near_field_min_m(self) -> float:
        return NEAR_FIELD_MIN_APERTURES * self.aperture_m

    @property
    def indices1(self) -> np.ndarray:
        return element_indices(self.n1)

    @property
    def indices2(self) -> np.ndarray:
        return element_indices(self.n2)

    def index_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (n1, n2) index pairs, row-major: n2 varies fastest."""
        g1, g2 = np.meshgrid(self.indices1, self.indices2, indexing="ij")
        return g1.ravel(), g2.ravel()


def build_ura(n1: int, n2: int, carrier_hz: float = 28e9, spacing_factor: float = 0.5) -> UraConfig:
    """URA with element spacing ``spacing_factor`` wavelengths."""
    if not spacing_factor > 0:
        raise ParameterDomainError(f"spacing factor must be positive, got {spacing_factor}")
    if not carrier_hz > 0:
        raise ParameterDomainError(f"carrier must be positive, got {carrier_hz}")
    lam = SPEED_OF_LIGHT / carrier_hz
    return UraConfig(n1, n2, carrier_hz, spacing_factor * lam)


@dataclass(frozen=True)
class SphericalPoint:
    azimuth_rad: float
    elevation_rad: float
    range_m: float

    def __post_init__(self):
        if not -math.pi / 2 <= self.azimuth_rad <= math.pi / 2:
            raise ParameterDomainError(f"azimuth {self.azimuth_rad} outside [-pi/2, pi/2]")
        if not 0.0 < self.elevation_rad < math.pi:
            raise ParameterDomainError(f"elevation {self.elevation_rad} outside (0, pi)")
        if not self.range_m > 0:
            raise ParameterDomainError(f"range must be positive, got {self.range_m}")


class Directional(NamedTuple):
    u_x: float
    u_y: float
    u_z: float
    beta1: float
    beta2: float


def directional_quantities(p: SphericalPoint) -> Directional:
    return angle_quantities(p.azimuth_rad, p.elevation_rad)


def angle_quantities(phi: float, theta: float) -> Directional:
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    return Directional(st * cp, st * sp, ct, 1.0 - st * st * sp * sp, st * st)


def boresight(range_m: float) -> SphericalPoint:
    return SphericalPoint(0.0, math.pi / 2, range_m)
