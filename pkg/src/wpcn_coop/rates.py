"""Per-block energy and rate expressions for the four-slot cooperation protocol.

A unit block (T = 1) is split into channel estimation (t0), energy transfer
(t1), the two message-exchange slots (t2, t3) and the joint transmission slot
(t4, shared equally between the two users' messages by the space-time code).
All rates are in bits/s/Hz normalized per block; every expression returns
exactly 0 when its slot duration is 0, matching the t*log2(1 + c/t') limit so
that optimizers can probe simplex boundaries safely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelGains, Scenario

#: slack allowed on the total-time constraint to absorb float rounding
FEASIBILITY_EPS = 1e-9

_LN2 = math.log(2.0)


class FeasibilityError(ValueError):
    """A time allocation violates the simplex constraint it was checked against."""


@dataclass(frozen=True)
class TimeAllocation:
    """Durations (t1, t2, t3, t4) as fractions of the unit block.

    The joint slot t4 is always split equally between the two users, so only
    its total duration is carried.
    """

    t1: float
    t2: float
    t3: float
    t4: float

    def __post_init__(self):
        for name in ("t1", "t2", "t3", "t4"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def total(self) -> float:
        return self.t1 + self.t2 + self.t3 + self.t4

    def assert_feasible(self, t0: float) -> None:
        """Raise FeasibilityError if t0 + sum(t) exceeds the unit block."""
        budget = 1.0 - t0
        if self.total() > budget + FEASIBILITY_EPS:
            raise FeasibilityError(
                f"t1+t2+t3+t4 = {self.total():.12g} exceeds 1 - t0 = {budget:.12g}"
            )


@dataclass(frozen=True)
class RateBreakdown:
    """Everything the protocol produces for one allocation: energies,
    transmit powers, the three slot rates and the per-user/common rates."""

    E_X: float
    E_Y: float
    P_X: float
    P_Y: float
    R_X2: float
    R_Y3: float
    R_X4: float
    R_X: float
    R_Y: float
    R_common: float


def harvested_energy(t1, P_t, eta, h_EU):
    """Energy a user harvests during the transfer slot: eta * t1 * P_t * h."""
    if t1 < 0:
        raise ValueError(f"t1 must be >= 0, got {t1}")
    return eta * t1 * P_t * h_EU


def rate_exchange_X(t1, t2, t4, rho1):
    """X's exchange-slot rate: t2 * log2(1 + rho1 * t1 / (t2 + t4)).

    X spreads its harvested energy over t2 + t4, so the SNR seen by Y during
    t2 is rho1 * t1 / (t2 + t4).
    """
    if t1 < 0 or t2 < 0 or t4 < 0:
        raise ValueError("time fractions must be >= 0")
    if t2 == 0.0:
        return 0.0
    return t2 * math.log2(1.0 + rho1 * t1 / (t2 + t4))


def rate_exchange_Y(t1, t3, t4, rho2):
    """Y's exchange-slot rate: t3 * log2(1 + rho2 * t1 / (t3 + t4))."""
    if t1 < 0 or t3 < 0 or t4 < 0:
        raise ValueError("time fractions must be >= 0")
    if t3 == 0.0:
        return 0.0
    return t3 * math.log2(1.0 + rho2 * t1 / (t3 + t4))


def rate_joint(t1, t2, t3, t4, rho3, rho4):
    """Joint-slot rate under the two-user space-time code.

    (t4/2) * log2(1 + rho3*t1/(t2+t4) + rho4*t1/(t3+t4)); identical for both
    users' messages, each of which occupies half the slot.
    """
    if t1 < 0 or t2 < 0 or t3 < 0 or t4 < 0:
        raise ValueError("time fractions must be >= 0")
    if t4 == 0.0:
        return 0.0
    return 0.5 * t4 * math.log2(1.0 + rho3 * t1 / (t2 + t4) + rho4 * t1 / (t3 + t4))


def rate_exchange_X_d1(t1, t2, t4, rho1):
    """Analytic d/dt2 of rate_exchange_X at fixed (t1, t4).

    With c1 = rho1*t1, c2 = t4, c3 = c1 + c2:
        log2(1 + c1/(t2+c2)) - c1*t2 / (ln2 * (t2+c3) * (t2+c2))
    """
    if t2 <= 0:
        raise ValueError(f"t2 must be > 0, got {t2}")
    c1 = rho1 * t1
    c2 = t4
    c3 = c1 + c2
    return math.log2(1.0 + c1 / (t2 + c2)) - c1 * t2 / (_LN2 * (t2 + c3) * (t2 + c2))


def rate_exchange_X_d2(t1, t2, t4, rho1):
    """Analytic d2/dt2^2 of rate_exchange_X; strictly negative for c1 > 0.

        -(c1/ln2) * ((c2+c3)*t2 + 2*c2*c3) / ((t2+c3)*(t2+c2))**2
    """
    if t2 <= 0:
        raise ValueError(f"t2 must be > 0, got {t2}")
    c1 = rho1 * t1
    c2 = t4
    c3 = c1 + c2
    return -(c1 / _LN2) * ((c2 + c3) * t2 + 2.0 * c2 * c3) / ((t2 + c3) * (t2 + c2)) ** 2


def breakdown(ta: TimeAllocation, gains: ChannelGains, scenario: Scenario | None = None) -> RateBreakdown:
    """Evaluate every energy/power/rate quantity for one allocation.

    Constants (eta, P_t, N0) come from ``scenario`` when given, otherwise
    from the values stored on ``gains``.  Transmit powers are defined as 0
    when a user has no transmission time at all.
    """
    if scenario is not None:
        eta, P_t, t0 = scenario.eta, scenario.P_t, scenario.t0
    else:
        eta, P_t, t0 = gains.eta, gains.P_t, 0.0
    ta.assert_feasible(t0)

    E_X = harvested_energy(ta.t1, P_t, eta, gains.h_EX)
    E_Y = harvested_energy(ta.t1, P_t, eta, gains.h_EY)
    d24 = ta.t2 + ta.t4
    d34 = ta.t3 + ta.t4
    P_X = E_X / d24 if d24 > 0 else 0.0
    P_Y = E_Y / d34 if d34 > 0 else 0.0

    R_X2 = rate_exchange_X(ta.t1, ta.t2, ta.t4, gains.rho1)
    R_Y3 = rate_exchange_Y(ta.t1, ta.t3, ta.t4, gains.rho2)
    R_X4 = rate_joint(ta.t1, ta.t2, ta.t3, ta.t4, gains.rho3, gains.rho4)

    R_X = min(R_X2, R_X4)
    R_Y = min(R_Y3, R_X4)
    return RateBreakdown(
        E_X=E_X, E_Y=E_Y, P_X=P_X, P_Y=P_Y,
        R_X2=R_X2, R_Y3=R_Y3, R_X4=R_X4,
        R_X=R_X, R_Y=R_Y, R_common=min(R_X, R_Y),
    )
