"""Parameter-sweep presets and the sweep runner.

Three bundled presets cover the experiment axes of interest:

* ``fig4``: user-to-DN disparity.  h_YD stays at 4.25e-7 and h_XD is scaled
  down by the swept dB ratio h_YD/h_XD.
* ``fig5``: EN-to-user disparity.  h_XD = h_YD = 4.25e-7, h_EX stays at
  2.72e-5 and h_EY is scaled down by the swept dB ratio h_EX/h_EY.
* ``fig6``: inter-user channel strength.  h_XD = h_YD = 4.25e-7,
  h_EX = 4*h_EY = 2.72e-5, and the swept variable is the inter-user
  distance in meters (the direct-transmission scheme does not depend on it,
  so it is omitted by default).

Every (sweep value, scheme) pair becomes one SweepRow; rows are emitted in
deterministic order (value major, scheme minor) regardless of how many
worker threads evaluate them.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import Scenario, gains_direct, gains_from_scenario, pathloss_gain
from .coop_optimizer import ConvergenceError, SolverConfig
from .benchmarks import BenchmarkResult, SchemeId, solve_scheme

AXIS_USER_DN_DB = "h_YD_over_h_XD_dB"
AXIS_EN_USER_DB = "h_EX_over_h_EY_dB"
AXIS_INTER_USER_M = "d_XY_m"
SWEEP_AXES = (AXIS_USER_DN_DB, AXIS_EN_USER_DB, AXIS_INTER_USER_M)

#: the user-to-DN gain at 40 m and the EN-to-user gain at 5 m, as fixed in
#: the experiment setups
GAIN_USER_DN_40M = 4.25e-7
GAIN_EN_USER_5M = 2.72e-5

GAIN_KEYS = ("h_EX", "h_EY", "h_XY", "h_XD", "h_YD")

_SCHEME_ORDER = (SchemeId.Cooperate, SchemeId.NonCooperate, SchemeId.RelayXtoY,
                 SchemeId.RelayYtoX, SchemeId.RelayBest)

CSV_COLUMNS = (
    "sweep_var", "sweep_value", "scheme", "status", "R_common", "R_X", "R_Y",
    "t1", "t2", "t3", "t4", "chosen_relay", "evaluations",
    "residual_equal_rate", "residual_joint",
)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: an axis, its range, the schemes to run and fixed overrides.

    ``overrides`` maps Scenario field names or direct gain names (h_EX,
    h_EY, h_XY, h_XD, h_YD) to values applied before the axis value.
    """

    preset: str
    swept_variable: str
    start: float
    stop: float
    points: int = 21
    schemes: tuple[SchemeId, ...] = (SchemeId.Cooperate, SchemeId.NonCooperate, SchemeId.RelayBest)
    overrides: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.swept_variable not in SWEEP_AXES:
            raise ValueError(
                f"swept_variable must be one of {SWEEP_AXES}, got {self.swept_variable!r}")
        if self.points < 2:
            raise ValueError(f"points must be >= 2, got {self.points}")
        if not self.start < self.stop:
            raise ValueError(f"range must be ordered, got [{self.start}, {self.stop}]")
        if not self.schemes:
            raise ValueError("schemes must not be empty")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepRow:
    """One output record: a scheme's optimum at one sweep point."""

    sweep_var: str
    sweep_value: float
    scheme: SchemeId
    status: str
    R_common: float | None
    R_X: float | None
    R_Y: float | None
    t1: float | None
    t2: float | None
    t3: float | None
    t4: float | None
    chosen_relay: SchemeId | None
    evaluations: int | None
    residual_equal_rate: float | None
    residual_joint: float | None


def preset_spec(name: str) -> SweepSpec:
    """The bundled sweep definitions."""
    if name == "fig4":
        return SweepSpec(
            preset="fig4", swept_variable=AXIS_USER_DN_DB, start=0.0, stop=10.0,
            overrides={"h_YD": GAIN_USER_DN_40M},
        )
    if name == "fig5":
        return SweepSpec(
            preset="fig5", swept_variable=AXIS_EN_USER_DB, start=0.0, stop=10.0,
            overrides={"h_XD": GAIN_USER_DN_40M, "h_YD": GAIN_USER_DN_40M,
                       "h_EX": GAIN_EN_USER_5M},
        )
    if name == "fig6":
        return SweepSpec(
            preset="fig6", swept_variable=AXIS_INTER_USER_M, start=1.0, stop=10.0,
            schemes=(SchemeId.Cooperate, SchemeId.RelayBest),
            overrides={"h_XD": GAIN_USER_DN_40M, "h_YD": GAIN_USER_DN_40M,
                       "h_EX": GAIN_EN_USER_5M, "h_EY": GAIN_EN_USER_5M / 4.0},
        )
    raise ValueError(f"unknown preset: {name!r}")


def canonical_scheme_order(schemes) -> tuple[SchemeId, ...]:
    return tuple(s for s in _SCHEME_ORDER if s in set(schemes))


def split_overrides(overrides):
    """Separate direct-gain overrides from Scenario field overrides."""
    gain_over = {k: v for k, v in overrides.items() if k in GAIN_KEYS}
    scen_over = {k: v for k, v in overrides.items() if k not in GAIN_KEYS}
    bad = [k for k in scen_over if k not in {f.name for f in dataclasses.fields(Scenario)}]
    if bad:
        raise ValueError(f"unknown override keys: {bad}")
    return gain_over, scen_over


def gains_at_point(spec: SweepSpec, value: float, scenario: Scenario):
    """Channel gains for one sweep point: scenario geometry, then fixed
    overrides, then the swept axis."""
    gain_over, _ = split_overrides(spec.overrides)
    base = gains_from_scenario(scenario)
    h = {k: getattr(base, k) for k in GAIN_KEYS}
    h.update(gain_over)
    if spec.swept_variable == AXIS_USER_DN_DB:
        h["h_XD"] = h["h_YD"] * 10.0 ** (-value / 10.0)
    elif spec.swept_variable == AXIS_EN_USER_DB:
        h["h_EY"] = h["h_EX"] * 10.0 ** (-value / 10.0)
    elif spec.swept_variable == AXIS_INTER_USER_M:
        h["h_XY"] = pathloss_gain(value, scenario.f_carrier,
                                  scenario.pathloss_exp, scenario.antenna_gain)
    return gains_direct(eta=scenario.eta, P_t=scenario.P_t, N0=scenario.N0, **h)


def scenario_for_spec(spec: SweepSpec, base: Scenario | None = None) -> Scenario:
    _, scen_over = split_overrides(spec.overrides)
    return dataclasses.replace(base or Scenario(), **scen_over)


def _row_ok(spec, value, scheme, res: BenchmarkResult) -> SweepRow:
    a = res.allocation
    return SweepRow(
        sweep_var=spec.swept_variable, sweep_value=value, scheme=scheme, status="ok",
        R_common=res.R_common, R_X=res.per_user[0], R_Y=res.per_user[1],
        t1=a.t1, t2=a.t2, t3=a.t3, t4=a.t4,
        chosen_relay=res.chosen_relay, evaluations=res.evaluations,
        residual_equal_rate=res.residual,
        residual_joint=res.residual_joint,
    )


def _row_failed(spec, value, scheme) -> SweepRow:
    return SweepRow(
        sweep_var=spec.swept_variable, sweep_value=value, scheme=scheme,
        status="failed", R_common=None, R_X=None, R_Y=None,
        t1=None, t2=None, t3=None, t4=None, chosen_relay=None,
        evaluations=None, residual_equal_rate=None, residual_joint=None,
    )


def run_sweep(spec: SweepSpec, scenario: Scenario | None = None,
              cfg: SolverConfig = SolverConfig(), threads: int = 0) -> list[SweepRow]:
    """Evaluate every (value, scheme) pair; failures become 'failed' rows.

    ``threads`` > 1 evaluates points on a thread pool; output order is
    independent of scheduling.
    """
    scen = scenario_for_spec(spec, scenario)
    schemes = canonical_scheme_order(spec.schemes)
    tasks = [(float(v), s) for v in spec.values() for s in schemes]

    def work(task):
        value, scheme = task
        gains = gains_at_point(spec, value, scen)
        try:
            return _row_ok(spec, value, scheme, solve_scheme(scheme, gains, scen.t0, cfg))
        except ConvergenceError:
            return _row_failed(spec, value, scheme)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(work, tasks))
    return [work(t) for t in tasks]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, SchemeId):
        return v.value
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows, path) -> None:
    """Self-describing, locale-independent, byte-stable CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([_fmt(getattr(r, col)) for col in CSV_COLUMNS])
