"""Channel model: Friis path-loss gains and the SNR-scale constants.

The network has one energy node (EN), two harvesting users X and Y, and one
destination node (DN).  Six scalar power gains describe it: EN->X, EN->Y,
X<->Y (reciprocal), X->DN and Y->DN.  Everything downstream consumes either
the gains themselves or the four dimensionless constants rho1..rho4 that fold
harvesting efficiency, EN transmit power and noise power into per-link SNR
scales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 3e8  # m/s


@dataclass(frozen=True)
class Scenario:
    """Physical setup from which channel gains derive.

    Distances in meters, frequency in Hz, powers in Watts.  ``t0`` is the
    fraction of each unit block spent on channel estimation before any
    energy or information transfer.
    """

    d_EX: float = 5.0
    d_EY: float = 10.0
    d_XY: float = 2.0
    d_XD: float = 40.0
    d_YD: float = 40.0
    f_carrier: float = 915e6
    pathloss_exp: float = 2.0
    antenna_gain: float = 1.0
    P_t: float = 3.0
    eta: float = 0.5
    N0: float = 1e-10
    t0: float = 0.05

    def __post_init__(self):
        for name in ("d_EX", "d_EY", "d_XY", "d_XD", "d_YD"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.f_carrier <= 0:
            raise ValueError(f"f_carrier must be > 0, got {self.f_carrier}")
        if self.pathloss_exp < 2:
            raise ValueError(f"pathloss_exp must be >= 2, got {self.pathloss_exp}")
        if self.antenna_gain <= 0:
            raise ValueError(f"antenna_gain must be > 0, got {self.antenna_gain}")
        if self.P_t <= 0:
            raise ValueError(f"P_t must be > 0, got {self.P_t}")
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must be in (0, 1), got {self.eta}")
        if self.N0 <= 0:
            raise ValueError(f"N0 must be > 0, got {self.N0}")
        if not 0 <= self.t0 < 1:
            raise ValueError(f"t0 must be in [0, 1), got {self.t0}")


@dataclass(frozen=True)
class ChannelGains:
    """The six link power gains plus the derived SNR-scale constants.

    rho1 = eta*P_t*h_EX*h_XY/N0   (X's exchange-slot SNR scale)
    rho2 = eta*P_t*h_EY*h_YX/N0   (Y's exchange-slot SNR scale)
    rho3 = eta*P_t*h_EX*h_XD/N0   (X's joint-slot SNR scale)
    rho4 = eta*P_t*h_EY*h_YD/N0   (Y's joint-slot SNR scale)

    The constructor constants (eta, P_t, N0) are kept so that energies and
    powers can be reconstructed without the originating Scenario.
    """

    h_EX: float
    h_EY: float
    h_XY: float
    h_YX: float
    h_XD: float
    h_YD: float
    rho1: float
    rho2: float
    rho3: float
    rho4: float
    eta: float
    P_t: float
    N0: float

    def __post_init__(self):
        for name in ("h_EX", "h_EY", "h_XY", "h_YX", "h_XD", "h_YD"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.h_XY != self.h_YX:
            raise ValueError("channel reciprocity requires h_XY == h_YX")
        for name in ("rho1", "rho2", "rho3", "rho4"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


def pathloss_gain(distance, f_carrier, pathloss_exp=2.0, antenna_gain=1.0):
    """Friis-style power gain: antenna_gain * (c / (4*pi*d*f))**exponent.

    Strictly decreasing in distance.  At 915 MHz with exponent 2 this gives
    2.72e-5 at 5 m and 4.25e-7 at 40 m.
    """
    if distance <= 0:
        raise ValueError(f"distance must be > 0, got {distance}")
    if f_carrier <= 0:
        raise ValueError(f"f_carrier must be > 0, got {f_carrier}")
    return antenna_gain * (SPEED_OF_LIGHT / (4.0 * math.pi * distance * f_carrier)) ** pathloss_exp


def gains_from_scenario(s: Scenario) -> ChannelGains:
    """Compute all six gains from the scenario geometry."""
    def g(d):
        return pathloss_gain(d, s.f_carrier, s.pathloss_exp, s.antenna_gain)

    h_XY = g(s.d_XY)
    return gains_direct(
        h_EX=g(s.d_EX),
        h_EY=g(s.d_EY),
        h_XY=h_XY,
        h_XD=g(s.d_XD),
        h_YD=g(s.d_YD),
        eta=s.eta,
        P_t=s.P_t,
        N0=s.N0,
    )


def gains_direct(h_EX, h_EY, h_XY, h_XD, h_YD, eta, P_t, N0) -> ChannelGains:
    """Package explicitly given gains, deriving rho1..rho4 and h_YX = h_XY."""
    for name, val in (("h_EX", h_EX), ("h_EY", h_EY), ("h_XY", h_XY),
                      ("h_XD", h_XD), ("h_YD", h_YD)):
        if val <= 0:
            raise ValueError(f"{name} must be > 0, got {val}")
    scale = eta * P_t / N0
    return ChannelGains(
        h_EX=h_EX, h_EY=h_EY, h_XY=h_XY, h_YX=h_XY, h_XD=h_XD, h_YD=h_YD,
        rho1=scale * h_EX * h_XY,
        rho2=scale * h_EY * h_XY,
        rho3=scale * h_EX * h_XD,
        rho4=scale * h_EY * h_YD,
        eta=eta, P_t=P_t, N0=N0,
    )
