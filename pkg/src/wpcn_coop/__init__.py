"""Max-min throughput optimization for a two-user wireless-powered
cooperative network: channel model, rate expressions, the nested-bisection
solver, benchmark schemes and a sweep/check CLI."""

from .channel import (
    ChannelGains,
    Scenario,
    gains_direct,
    gains_from_scenario,
    pathloss_gain,
)
from .rates import (
    FeasibilityError,
    RateBreakdown,
    TimeAllocation,
    breakdown,
    harvested_energy,
    rate_exchange_X,
    rate_exchange_X_d1,
    rate_exchange_X_d2,
    rate_exchange_Y,
    rate_joint,
)
from .coop_optimizer import (
    ConvergenceError,
    SolveResult,
    SolverConfig,
    bisect_t2,
    bisect_t4,
    brute_force_oracle,
    solve,
)
from .benchmarks import (
    BenchmarkResult,
    SchemeId,
    benchmark_grid_oracle,
    solve_best_relay,
    solve_noncoop,
    solve_relay,
    solve_scheme,
)
from .sweeps import SweepRow, SweepSpec, preset_spec, run_sweep, write_csv

__version__ = "0.1.0"
