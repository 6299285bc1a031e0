"""Max-min throughput solver for the four-slot cooperation protocol.

The optimum satisfies the equal-rate conditions R_X2 = R_Y3 = R_X4, which
turns the search into a line search over the energy-transfer time t1 with two
nested bisections: the inner one balances the two exchange rates in t2, the
outer one balances the exchange rate against the joint-transmission rate in
t4.  Both balances are monotone (the exchange rate rises in its own slot
duration while the opposing rate falls), so each bisection has a unique root.

A brute-force simplex-grid oracle is included for validation; it is the
independent reference the solver is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelGains
from . import rates
from .rates import TimeAllocation, RateBreakdown

#: bisection brackets narrower than this are accepted even if the rate
#: difference has not dropped below sigma (guarantees termination on flat
#: objectives, e.g. when every rate is identically 0)
BRACKET_WIDTH_FLOOR = 1e-12


class ConvergenceError(RuntimeError):
    """A bisection hit its iteration cap before meeting the tolerance."""

    def __init__(self, what, lower, upper, last_diff):
        super().__init__(
            f"{what} did not converge: bracket [{lower:.6g}, {upper:.6g}], "
            f"last rate difference {last_diff:.3g}"
        )
        self.bracket = (lower, upper)
        self.last_diff = last_diff


@dataclass(frozen=True)
class SolverConfig:
    """Line-search step, bisection tolerance and iteration cap."""

    delta: float = 1e-3
    sigma: float = 1e-6
    max_bisect_iters: int = 200

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        need = math.ceil(math.log2(1.0 / self.sigma)) if self.sigma < 1 else 1
        if self.max_bisect_iters < need:
            raise ValueError(
                f"max_bisect_iters = {self.max_bisect_iters} leaves no headroom "
                f"for sigma = {self.sigma} (need >= {need})"
            )


@dataclass(frozen=True)
class SolveResult:
    """Optimizer output: allocation, rates at it, and solver diagnostics.

    ``residuals`` holds (|R_X2 - R_Y3|, |R_X2 - R_X4|) at the reported
    allocation; both are below sigma for solve() outputs.  ``evaluations``
    counts rate-expression evaluations performed.
    """

    allocation: TimeAllocation
    breakdown: RateBreakdown
    R_common: float
    residuals: tuple[float, float]
    evaluations: int


def _bisect_exchange(t1, t4, rho1, rho2, budget, sigma, max_iters):
    """Balance R_X2 against R_Y3 over t2 in [0, budget], budget = t2 + t3.

    Returns (t2, t3, R_X2, R_Y3, evaluations).  R_X2 rises and R_Y3 falls in
    t2, so the bracket update is: too-large R_X2 lowers the upper bound.
    """
    a1 = rho1 * t1
    a2 = rho2 * t1
    lb = 0.0
    ub = budget
    log2 = math.log2
    n = 0
    while True:
        t2 = 0.5 * (lb + ub)
        t3 = budget - t2
        rx2 = t2 * log2(1.0 + a1 / (t2 + t4)) if t2 > 0.0 else 0.0
        ry3 = t3 * log2(1.0 + a2 / (t3 + t4)) if t3 > 0.0 else 0.0
        n += 1
        diff = rx2 - ry3
        if diff > 0.0:
            ub = t2
        else:
            lb = t2
        if abs(diff) < sigma or ub - lb < BRACKET_WIDTH_FLOOR:
            return t2, t3, rx2, ry3, n
        if n >= max_iters:
            raise ConvergenceError("exchange-rate bisection", lb, ub, diff)


def _bisect_joint(t1, gains, t0, sigma, max_iters):
    """Balance R_X2 against R_X4 over t4 in [0, 1 - t0 - t1].

    The exchange split (t2, t3) is re-balanced at every trial t4.  Returns
    (t2, t3, t4, R_X2, R_Y3, R_X4, evaluations).
    """
    budget = 1.0 - t0 - t1
    if budget < -rates.FEASIBILITY_EPS:
        raise ValueError(f"t1 = {t1} exceeds the available block time {1.0 - t0}")
    budget = max(budget, 0.0)
    a3 = gains.rho3 * t1
    a4 = gains.rho4 * t1
    lb = 0.0
    ub = budget
    log2 = math.log2
    n = 0
    evals = 0
    while True:
        t4 = 0.5 * (lb + ub)
        t2, t3, rx2, ry3, inner = _bisect_exchange(
            t1, t4, gains.rho1, gains.rho2, budget - t4, sigma, max_iters)
        evals += inner
        rx4 = 0.5 * t4 * log2(1.0 + a3 / (t2 + t4) + a4 / (t3 + t4)) if t4 > 0.0 else 0.0
        evals += 1
        n += 1
        diff = rx4 - rx2
        if diff > 0.0:
            ub = t4
        else:
            lb = t4
        if abs(diff) < sigma or ub - lb < BRACKET_WIDTH_FLOOR:
            return t2, t3, t4, rx2, ry3, rx4, evals
        if n >= max_iters:
            raise ConvergenceError("joint-rate bisection", lb, ub, diff)


def bisect_t2(t1, t4, gains: ChannelGains, t0, sigma, max_iters=200):
    """Find the unique exchange split with |R_X2 - R_Y3| < sigma.

    Returns (t2, t3, rate) with t2 + t3 = 1 - t0 - t1 - t4 and rate the
    balanced common value min(R_X2, R_Y3).
    """
    budget = 1.0 - t0 - t1 - t4
    if budget < -rates.FEASIBILITY_EPS:
        raise ValueError(f"t1 + t4 = {t1 + t4} exceeds the available block time {1.0 - t0}")
    t2, t3, rx2, ry3, _ = _bisect_exchange(
        t1, t4, gains.rho1, gains.rho2, max(budget, 0.0), sigma, max_iters)
    return t2, t3, min(rx2, ry3)


def bisect_t4(t1, gains: ChannelGains, t0, cfg: SolverConfig):
    """Find the unique t4 with |R_X2 - R_X4| < sigma at fixed t1.

    Returns (t2, t3, t4, rate) with rate = min(R_X2, R_X4).
    """
    t2, t3, t4, rx2, _, rx4, _ = _bisect_joint(t1, gains, t0, cfg.sigma, cfg.max_bisect_iters)
    return t2, t3, t4, min(rx2, rx4)


def _t1_grid(budget, delta):
    """Line-search grid {delta, 2*delta, ...} capped at the budget; the
    budget itself is appended when the last step lands within delta/2 of it."""
    n_steps = int(math.floor(budget / delta + 1e-9))
    grid = [min(k * delta, budget) for k in range(1, n_steps + 1)]
    if not grid:
        return [budget]
    gap = budget - grid[-1]
    if 0.0 < gap <= 0.5 * delta:
        grid.append(budget)
    return grid


def solve(gains: ChannelGains, t0: float, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Line search over t1 with nested bisections; returns the best allocation.

    Grid points whose bisections fail to converge are skipped; an error is
    raised only if every point fails.
    """
    if not 0 <= t0 < 1:
        raise ValueError(f"t0 must be in [0, 1), got {t0}")
    budget = 1.0 - t0
    best = None
    best_rate = -1.0
    total_evals = 0
    first_error = None
    for t1 in _t1_grid(budget, cfg.delta):
        try:
            t2, t3, t4, rx2, ry3, rx4, evals = _bisect_joint(
                t1, gains, t0, cfg.sigma, cfg.max_bisect_iters)
        except ConvergenceError as err:
            if first_error is None:
                first_error = err
            continue
        total_evals += evals
        rate = min(rx2, rx4)
        if rate > best_rate:
            best_rate = rate
            best = (t1, t2, t3, t4)
    if best is None:
        raise first_error
    ta = TimeAllocation(*best)
    bd = rates.breakdown(ta, gains)
    return SolveResult(
        allocation=ta,
        breakdown=bd,
        R_common=bd.R_common,
        residuals=(abs(bd.R_X2 - bd.R_Y3), abs(bd.R_X2 - bd.R_X4)),
        evaluations=total_evals,
    )


def grid_common_rate(t1, t2, t3, t4, gains: ChannelGains):
    """Vectorized min(R_X, R_Y) over arrays of allocations (one t1 scalar or
    array broadcastable against the slot arrays).

    This is the oracle's evaluation path; it must agree with
    rates.breakdown() pointwise, which the test suite asserts.
    """
    d24 = t2 + t4
    d34 = t3 + t4
    s24 = np.where(d24 > 0.0, d24, 1.0)
    s34 = np.where(d34 > 0.0, d34, 1.0)
    rx2 = np.where(t2 > 0.0, t2 * np.log2(1.0 + gains.rho1 * t1 / s24), 0.0)
    ry3 = np.where(t3 > 0.0, t3 * np.log2(1.0 + gains.rho2 * t1 / s34), 0.0)
    rx4 = np.where(
        t4 > 0.0,
        0.5 * t4 * np.log2(1.0 + gains.rho3 * t1 / s24 + gains.rho4 * t1 / s34),
        0.0,
    )
    return np.minimum(np.minimum(rx2, ry3), rx4)


def brute_force_oracle(gains: ChannelGains, t0: float, grid_step: float = 2e-3) -> SolveResult:
    """Exhaustive search over the lattice {(t1,t2,t3,t4): sum = 1 - t0}.

    t1, t4, t2 run over multiples of grid_step and t3 absorbs the remainder,
    so every evaluated point sits exactly on the constraint.  Cost grows as
    (1/grid_step)**3; the default step keeps a full run under a few seconds.
    """
    if grid_step <= 0:
        raise ValueError(f"grid_step must be > 0, got {grid_step}")
    if not 0 <= t0 < 1:
        raise ValueError(f"t0 must be in [0, 1), got {t0}")
    budget = 1.0 - t0
    n = int(math.floor(budget / grid_step + 1e-9))
    rem = budget - n * grid_step

    best_rate = -1.0
    best = (0.0, 0.0, 0.0, budget)
    evaluations = 0
    for k in range(n + 1):
        t1 = k * grid_step
        m = n - k
        # flatten the triangle {(j, i): j + i <= m}: j indexes t4, i indexes t2
        counts = np.arange(m + 1, 0, -1)
        j_col = np.repeat(np.arange(m + 1), counts)
        offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
        i_col = np.arange(counts.sum()) - np.repeat(offsets, counts)
        t4 = j_col * grid_step
        t2 = i_col * grid_step
        t3 = (m - j_col - i_col) * grid_step + rem
        values = grid_common_rate(t1, t2, t3, t4, gains)
        evaluations += values.size
        idx = int(np.argmax(values))
        if values[idx] > best_rate:
            best_rate = float(values[idx])
            best = (t1, float(t2[idx]), float(t3[idx]), float(t4[idx]))
    ta = TimeAllocation(*best)
    bd = rates.breakdown(ta, gains)
    return SolveResult(
        allocation=ta,
        breakdown=bd,
        R_common=bd.R_common,
        residuals=(abs(bd.R_X2 - bd.R_Y3), abs(bd.R_X2 - bd.R_X4)),
        evaluations=evaluations,
    )
