"""Comparison schemes: direct TDMA transmission and single-relay forwarding.

Both schemes charge the same channel-estimation time t0 and the same
harvest-then-transmit structure as the cooperation protocol: slot t1 powers
both users, and the remaining time is split between two transmission slots.

Non-cooperate: X transmits to the DN in t2 and Y in t3, each exhausting its
harvested energy over its own slot.  Relay: the source sends its message to
the relay in t2; in t3 the relay forwards it and appends its own data within
a single constant-power stream, so the slot-3 capacity is time-shared and the
achievable common rate for a fixed split is min(R_source, C3/2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelGains
from .coop_optimizer import (
    BRACKET_WIDTH_FLOOR,
    ConvergenceError,
    SolverConfig,
    _t1_grid,
    brute_force_oracle,
    solve as solve_cooperate,
)
from .rates import TimeAllocation


class SchemeId(str, enum.Enum):
    Cooperate = "Cooperate"
    NonCooperate = "NonCooperate"
    RelayXtoY = "RelayXtoY"      # X -> Y -> DN, user Y is the relay
    RelayYtoX = "RelayYtoX"      # Y -> X -> DN, user X is the relay
    RelayBest = "RelayBest"

    def __str__(self):
        return self.value


_RELAY_DIRECTIONS = (SchemeId.RelayXtoY, SchemeId.RelayYtoX)


@dataclass(frozen=True)
class BenchmarkResult:
    """One scheme's optimum: allocation, common rate and diagnostics.

    ``allocation`` uses the shared TimeAllocation container with t4 = 0 for
    the three-slot schemes.  ``residual`` is the equal-rate (or
    rate-vs-half-capacity) gap at the optimum.
    """

    scheme: SchemeId
    allocation: TimeAllocation
    R_common: float
    per_user: tuple[float, float]
    chosen_relay: SchemeId | None
    residual: float
    evaluations: int
    residual_joint: float | None = None  # cooperation scheme only


def _relay_snr_scales(direction: SchemeId, gains: ChannelGains):
    """(source->relay, relay->DN) SNR scales for a relay direction."""
    if direction == SchemeId.RelayXtoY:
        return gains.rho1, gains.rho4
    if direction == SchemeId.RelayYtoX:
        return gains.rho2, gains.rho3
    raise ValueError(f"not a relay direction: {direction}")


def noncoop_rate_pair(t1, t2, t3, gains: ChannelGains):
    """Direct-transmission rates (R_X, R_Y) for one allocation."""
    a3 = gains.rho3 * t1
    a4 = gains.rho4 * t1
    rx = t2 * math.log2(1.0 + a3 / t2) if t2 > 0.0 else 0.0
    ry = t3 * math.log2(1.0 + a4 / t3) if t3 > 0.0 else 0.0
    return rx, ry


def relay_rate_pair(direction: SchemeId, t1, t2, t3, gains: ChannelGains):
    """(source slot-2 rate, slot-3 relay capacity) for one allocation."""
    a_sr, a_rd = _relay_snr_scales(direction, gains)
    rs2 = t2 * math.log2(1.0 + a_sr * t1 / t2) if t2 > 0.0 else 0.0
    c3 = t3 * math.log2(1.0 + a_rd * t1 / t3) if t3 > 0.0 else 0.0
    return rs2, c3


def _bisect_split(budget, rising, falling, sigma, max_iters):
    """Balance a rate rising in t2 against one falling in t2 over [0, budget].

    Returns (t2, t3, rising_value, falling_value, iterations).
    """
    lb = 0.0
    ub = budget
    n = 0
    while True:
        t2 = 0.5 * (lb + ub)
        t3 = budget - t2
        fv = rising(t2)
        gv = falling(t3)
        n += 1
        diff = fv - gv
        if diff > 0.0:
            ub = t2
        else:
            lb = t2
        if abs(diff) < sigma or ub - lb < BRACKET_WIDTH_FLOOR:
            return t2, t3, fv, gv, n
        if n >= max_iters:
            raise ConvergenceError("transmission-split bisection", lb, ub, diff)


def _line_search(gains, t0, cfg, make_split_rates):
    """Shared t1 line search: make_split_rates(t1) returns the (rising,
    falling) closures for the inner split bisection at that t1."""
    budget = 1.0 - t0
    best = None
    best_rate = -1.0
    evals = 0
    first_error = None
    for t1 in _t1_grid(budget, cfg.delta):
        rising, falling = make_split_rates(t1)
        try:
            t2, t3, fv, gv, n = _bisect_split(
                budget - t1, rising, falling, cfg.sigma, cfg.max_bisect_iters)
        except ConvergenceError as err:
            if first_error is None:
                first_error = err
            continue
        evals += n
        rate = min(fv, gv)
        if rate > best_rate:
            best_rate = rate
            best = (t1, t2, t3, fv, gv)
    if best is None:
        raise first_error
    return best, evals


def solve_noncoop(gains: ChannelGains, t0: float, cfg: SolverConfig = SolverConfig()) -> BenchmarkResult:
    """Max-min direct transmission: balance R_X = R_Y at every t1, keep the best."""
    def make(t1):
        a3 = gains.rho3 * t1
        a4 = gains.rho4 * t1

        def rising(t2):
            return t2 * math.log2(1.0 + a3 / t2) if t2 > 0.0 else 0.0

        def falling(t3):
            return t3 * math.log2(1.0 + a4 / t3) if t3 > 0.0 else 0.0

        return rising, falling

    (t1, t2, t3, rx, ry), evals = _line_search(gains, t0, cfg, make)
    return BenchmarkResult(
        scheme=SchemeId.NonCooperate,
        allocation=TimeAllocation(t1, t2, t3, 0.0),
        R_common=min(rx, ry),
        per_user=(rx, ry),
        chosen_relay=None,
        residual=abs(rx - ry),
        evaluations=evals,
    )


def solve_relay(direction: SchemeId, gains: ChannelGains, t0: float,
                cfg: SolverConfig = SolverConfig()) -> BenchmarkResult:
    """Max-min decode-and-forward for one relay direction.

    The inner split balances the source rate against half the slot-3
    capacity (the relay forwards the source message in one half of the
    capacity's time share and sends its own data in the other).
    """
    a_sr, a_rd = _relay_snr_scales(direction, gains)

    def make(t1):
        asr = a_sr * t1
        ard = a_rd * t1

        def rising(t2):
            return t2 * math.log2(1.0 + asr / t2) if t2 > 0.0 else 0.0

        def falling(t3):
            return 0.5 * t3 * math.log2(1.0 + ard / t3) if t3 > 0.0 else 0.0

        return rising, falling

    (t1, t2, t3, rs2, c3half), evals = _line_search(gains, t0, cfg, make)
    rate = min(rs2, c3half)
    return BenchmarkResult(
        scheme=direction,
        allocation=TimeAllocation(t1, t2, t3, 0.0),
        R_common=rate,
        per_user=(rate, rate),
        chosen_relay=direction,
        residual=abs(rs2 - c3half),
        evaluations=evals,
    )


def solve_best_relay(gains: ChannelGains, t0: float,
                     cfg: SolverConfig = SolverConfig()) -> BenchmarkResult:
    """Solve both relay directions and keep the better one (ties go to
    the X -> Y -> DN direction for determinism)."""
    res_xy = solve_relay(SchemeId.RelayXtoY, gains, t0, cfg)
    res_yx = solve_relay(SchemeId.RelayYtoX, gains, t0, cfg)
    winner = res_xy if res_xy.R_common >= res_yx.R_common else res_yx
    return BenchmarkResult(
        scheme=SchemeId.RelayBest,
        allocation=winner.allocation,
        R_common=winner.R_common,
        per_user=winner.per_user,
        chosen_relay=winner.scheme,
        residual=winner.residual,
        evaluations=res_xy.evaluations + res_yx.evaluations,
    )


def solve_scheme(scheme: SchemeId, gains: ChannelGains, t0: float,
                 cfg: SolverConfig = SolverConfig()) -> BenchmarkResult:
    """Uniform entry point used by the sweep runner (includes Cooperate)."""
    if scheme == SchemeId.Cooperate:
        res = solve_cooperate(gains, t0, cfg)
        bd = res.breakdown
        return BenchmarkResult(
            scheme=SchemeId.Cooperate,
            allocation=res.allocation,
            R_common=res.R_common,
            per_user=(bd.R_X, bd.R_Y),
            chosen_relay=None,
            residual=res.residuals[0],
            evaluations=res.evaluations,
            residual_joint=res.residuals[1],
        )
    if scheme == SchemeId.NonCooperate:
        return solve_noncoop(gains, t0, cfg)
    if scheme in _RELAY_DIRECTIONS:
        return solve_relay(scheme, gains, t0, cfg)
    if scheme == SchemeId.RelayBest:
        return solve_best_relay(gains, t0, cfg)
    raise ValueError(f"unknown scheme: {scheme}")


def benchmark_grid_oracle(scheme: SchemeId, gains: ChannelGains, t0: float,
                          grid_step: float = 2e-3):
    """Brute-force grid reference for the three-slot schemes.

    Enumerates t1 and t2 on the lattice with t3 absorbing the remainder and
    evaluates the scheme's closed-form common rate; returns (value,
    (t1, t2, t3)).  RelayBest takes the max over both directions;
    Cooperate delegates to the four-slot oracle.
    """
    if scheme == SchemeId.Cooperate:
        res = brute_force_oracle(gains, t0, grid_step)
        a = res.allocation
        return res.R_common, (a.t1, a.t2, a.t3, a.t4)
    if scheme == SchemeId.RelayBest:
        vx, px = benchmark_grid_oracle(SchemeId.RelayXtoY, gains, t0, grid_step)
        vy, py = benchmark_grid_oracle(SchemeId.RelayYtoX, gains, t0, grid_step)
        return (vx, px) if vx >= vy else (vy, py)

    if scheme == SchemeId.NonCooperate:
        s_rise, s_fall, half = gains.rho3, gains.rho4, 1.0
    else:
        s_rise, s_fall = _relay_snr_scales(scheme, gains)
        half = 0.5

    budget = 1.0 - t0
    n = int(math.floor(budget / grid_step + 1e-9))
    rem = budget - n * grid_step
    best_val = -1.0
    best_pt = (0.0, 0.0, budget)
    for k in range(n + 1):
        t1 = k * grid_step
        i = np.arange(n - k + 1)
        t2 = i * grid_step
        t3 = (n - k - i) * grid_step + rem
        s2 = np.where(t2 > 0.0, t2, 1.0)
        s3 = np.where(t3 > 0.0, t3, 1.0)
        rise = np.where(t2 > 0.0, t2 * np.log2(1.0 + s_rise * t1 / s2), 0.0)
        fall = half * np.where(t3 > 0.0, t3 * np.log2(1.0 + s_fall * t1 / s3), 0.0)
        vals = np.minimum(rise, fall)
        idx = int(np.argmax(vals))
        if vals[idx] > best_val:
            best_val = float(vals[idx])
            best_pt = (t1, float(t2[idx]), float(t3[idx]))
    return best_val, best_pt
