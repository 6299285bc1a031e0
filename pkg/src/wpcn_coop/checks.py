"""Seeded property checks: monotonicity lemmas, derivative identities,
equal-rate residuals and the solver-vs-grid-oracle sandwich.

These back the ``wpcn check`` command and are reused by the test suite.
Each check runs over reproducible pseudo-random instances and reports a
pass/fail outcome plus a serializable payload for the first failure so an
offending instance can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelGains, Scenario, gains_from_scenario
from . import rates
from .coop_optimizer import SolverConfig, _bisect_exchange, brute_force_oracle, solve

T0_CHOICES = (0.0, 0.05, 0.1)


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    cases: int
    detail: str = ""
    failure: dict | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{self.name}: {status} [{self.cases} cases]{extra}"


def random_scenario(rng: np.random.Generator, t0: float) -> Scenario:
    """A random but physically moderate deployment: users a few meters to
    tens of meters from the EN and DN."""
    return Scenario(
        d_EX=rng.uniform(3.0, 15.0),
        d_EY=rng.uniform(3.0, 15.0),
        d_XY=rng.uniform(1.0, 10.0),
        d_XD=rng.uniform(20.0, 60.0),
        d_YD=rng.uniform(20.0, 60.0),
        t0=t0,
    )


def random_instances(seed: int, n: int) -> list[tuple[ChannelGains, float]]:
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        t0 = T0_CHOICES[i % len(T0_CHOICES)]
        out.append((gains_from_scenario(random_scenario(rng, t0)), t0))
    return out


def _instance_payload(gains: ChannelGains, t0: float) -> dict:
    return {
        "h_EX": gains.h_EX, "h_EY": gains.h_EY, "h_XY": gains.h_XY,
        "h_XD": gains.h_XD, "h_YD": gains.h_YD,
        "eta": gains.eta, "P_t": gains.P_t, "N0": gains.N0, "t0": t0,
    }


def check_lemma31(rng: np.random.Generator, n_instances: int,
                  n_samples: int = 100, slack: float = 1e-12) -> CheckOutcome:
    """Exchange-rate monotonicity in the slot split: at fixed (t1, t4) and
    fixed t2 + t3, X's rate strictly rises with t2 and Y's strictly falls."""
    name = "lemma_3_1_exchange_monotonicity"
    for i in range(n_instances):
        rho1, rho2 = 10.0 ** rng.uniform(-2, 3, size=2)
        t1 = rng.uniform(0.05, 0.5)
        t4 = rng.uniform(0.01, 0.3)
        T0 = (1.0 - t1 - t4) * rng.uniform(0.3, 0.95)
        t2_grid = np.linspace(T0 * 1e-3, T0 * (1 - 1e-3), n_samples)
        rx = np.array([rates.rate_exchange_X(t1, t2, t4, rho1) for t2 in t2_grid])
        ry = np.array([rates.rate_exchange_Y(t1, T0 - t2, t4, rho2) for t2 in t2_grid])
        if not (np.all(np.diff(rx) > -slack) and np.all(np.diff(ry) < slack)):
            return CheckOutcome(name, False, i + 1, "monotonicity violated",
                                {"rho1": rho1, "rho2": rho2, "t1": t1, "t4": t4, "T0": T0})
    return CheckOutcome(name, True, n_instances)


def lemma32_curves(gains: ChannelGains, t0: float, t1: float, n_t4: int = 50,
                   sigma: float = 1e-12, max_iters: int = 200):
    """Re-balance the exchange split at each t4 on a grid over
    [0, 1 - t0 - t1]; returns (t4_grid, R_X2, R_X4, t2, t3) arrays."""
    budget = 1.0 - t0 - t1
    t4_grid = np.linspace(0.0, budget, n_t4)
    rx2s, rx4s, t2s, t3s = [], [], [], []
    for t4 in t4_grid:
        t2, t3, rx2, _, _ = _bisect_exchange(
            t1, t4, gains.rho1, gains.rho2, budget - t4, sigma, max_iters)
        rx4 = rates.rate_joint(t1, t2, t3, t4, gains.rho3, gains.rho4)
        rx2s.append(rx2)
        rx4s.append(rx4)
        t2s.append(t2)
        t3s.append(t3)
    return t4_grid, np.array(rx2s), np.array(rx4s), np.array(t2s), np.array(t3s)


def check_lemma32(instances, rng: np.random.Generator, n_t4: int = 50,
                  slack: float = 1e-9) -> CheckOutcome:
    """Joint-slot monotonicity: with the exchange split re-balanced at each
    t4, R_X2 falls and R_X4 rises in t4, t2 and t3 both shrink, and the
    boundary values R_X2(t4 = max) = 0 and R_X4(t4 = 0) = 0 hold exactly."""
    name = "lemma_3_2_joint_slot_monotonicity"
    for i, (gains, t0) in enumerate(instances):
        t1 = rng.uniform(0.1, 0.7) * (1.0 - t0)
        _, rx2, rx4, t2, t3 = lemma32_curves(gains, t0, t1, n_t4=n_t4)
        ok = (
            np.all(np.diff(rx2) < slack)
            and np.all(np.diff(rx4) > -slack)
            and np.all(np.diff(t2) < slack)
            and np.all(np.diff(t3) < slack)
            and rx2[-1] == 0.0
            and rx4[0] == 0.0
        )
        if not ok:
            return CheckOutcome(name, False, i + 1, "monotonicity or boundary violated",
                                {**_instance_payload(gains, t0), "t1": t1})
    return CheckOutcome(name, True, len(instances))


def check_appendix_a(rng: np.random.Generator, n_points: int = 1000,
                     fd_step: float = 1e-6, rel_tol: float = 1e-5) -> CheckOutcome:
    """Analytic slope of the exchange rate vs a central finite difference,
    plus strict concavity (negative second derivative)."""
    name = "exchange_rate_derivative_identity"
    for i in range(n_points):
        rho1 = 10.0 ** rng.uniform(-2, 3)
        t1 = rng.uniform(0.05, 0.5)
        t4 = rng.uniform(0.0, 0.3)
        T0 = (1.0 - t1 - t4) * rng.uniform(0.3, 0.95)
        t2 = rng.uniform(0.05, 0.95) * T0
        analytic = rates.rate_exchange_X_d1(t1, t2, t4, rho1)
        fd = (rates.rate_exchange_X(t1, t2 + fd_step, t4, rho1)
              - rates.rate_exchange_X(t1, t2 - fd_step, t4, rho1)) / (2 * fd_step)
        rel = abs(analytic - fd) / max(abs(analytic), 1e-30)
        curv = rates.rate_exchange_X_d2(t1, t2, t4, rho1)
        if rel > rel_tol or not curv < 0.0:
            return CheckOutcome(name, False, i + 1,
                                f"relative error {rel:.3g}, d2 {curv:.3g}",
                                {"rho1": rho1, "t1": t1, "t2": t2, "t4": t4})
    return CheckOutcome(name, True, n_points)


def check_equal_rate(instances, cfg: SolverConfig = SolverConfig()) -> CheckOutcome:
    """Solver outputs satisfy the equal-rate optimality conditions: both
    residuals below sigma."""
    name = "equal_rate_residuals"
    for i, (gains, t0) in enumerate(instances):
        res = solve(gains, t0, cfg)
        if not (res.residuals[0] <= cfg.sigma and res.residuals[1] <= cfg.sigma):
            return CheckOutcome(name, False, i + 1,
                                f"residuals {res.residuals}",
                                _instance_payload(gains, t0))
    return CheckOutcome(name, True, len(instances))


def check_oracle_sandwich(instances, cfg: SolverConfig = SolverConfig(),
                          grid_step: float = 2e-3, rel_tol: float = 1e-2) -> CheckOutcome:
    """Solver value agrees with the brute-force grid oracle to within the
    grid's resolution error."""
    name = "solver_vs_grid_oracle"
    worst = 0.0
    for i, (gains, t0) in enumerate(instances):
        r_solve = solve(gains, t0, cfg).R_common
        r_oracle = brute_force_oracle(gains, t0, grid_step).R_common
        rel = abs(r_solve - r_oracle) / max(r_solve, r_oracle, 1e-300)
        worst = max(worst, rel)
        if rel > rel_tol:
            return CheckOutcome(name, False, i + 1,
                                f"relative gap {rel:.3g} exceeds {rel_tol}",
                                _instance_payload(gains, t0))
    return CheckOutcome(name, True, len(instances), f"worst relative gap {worst:.3g}")


def run_checks(seed: int, n: int, cfg: SolverConfig = SolverConfig(),
               grid_step: float = 2e-3) -> list[CheckOutcome]:
    """Run every property check on n seeded instances."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    instances = random_instances(seed, n)
    rng = np.random.default_rng(seed + 1)
    return [
        check_lemma31(rng, n),
        check_lemma32(instances, rng),
        check_appendix_a(rng, max(n * 10, 100)),
        check_equal_rate(instances, cfg),
        check_oracle_sandwich(instances, cfg, grid_step),
    ]
