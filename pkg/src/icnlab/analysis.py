"""Error norms, convergence orders, refinement sweeps, and the Burgers
fine-step reference.

Two sweep protocols are supported, matching how the reference tables were
produced:

  * advection problems refine the grid at fixed CFL and measure the error
    against the exact solution in a single snapshot at t_final;
  * the Burgers study refines dt on a fixed grid, measures the error
    against a fine-step reference run after every step, and reports the
    running mean of each norm ("norm in time").
"""
from __future__ import annotations

import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DivergenceError, Field, Grid1D
from .problems import Problem, ProblemKind, burgers, initial_condition
from .schemes import SchemeConfig, integrate

THREADS_ENV_VAR = "ICN_LAB_THREADS"


@dataclass(frozen=True)
class NormTriple:
    l1: float
    l2: float
    linf: float

    def get(self, key: str) -> float:
        return getattr(self, key)


NORM_KEYS = ("l1", "l2", "linf")


def _norms(errors: np.ndarray, dx: float) -> NormTriple:
    return NormTriple(
        l1=float(dx * np.sum(np.abs(errors))),
        l2=float(dx * np.sqrt(np.sum(errors * errors))),
        linf=float(np.max(np.abs(errors))),
    )


def error_norms(numerical: Field, reference: Field) -> NormTriple:
    """L1 = dx sum|e|, L2 = dx sqrt(sum e^2), Linf = max|e|.

    Note the L2 definition carries an extra sqrt(dx) relative to the usual
    discrete L2 norm, which is why second-order schemes show L2 orders of
    2.5 in the refinement tables.
    """
    if numerical.grid != reference.grid:
        raise ValueError("grid mismatch")
    return _norms(numerical.values - reference.values, numerical.grid.dx)


def observed_order(e_coarse: float, e_fine: float) -> float:
    """log2 error ratio for a resolution pair that refines by exactly 2x."""
    if e_coarse <= 0.0 or e_fine <= 0.0:
        raise ValueError("order undefined")
    return math.log2(e_coarse / e_fine)


def steps_for(t_final: float, dt: float) -> int:
    """Uniform step count reaching t_final, or an error if none exists."""
    if t_final == 0.0:
        return 0
    steps = round(t_final / dt)
    if steps < 1 or abs(steps * dt - t_final) > 1e-9 * t_final:
        raise ValueError("t_final not reachable with uniform steps")
    return steps


@dataclass(frozen=True)
class SweepSpec:
    """One convergence study: problem, schemes, and a refinement axis.

    ``resolutions`` holds grid sizes for the advection problems and dt
    divisors (dt = dt_base / divisor) for Burgers, where the grid is fixed
    at ``n_cells`` and dt_base defaults to 0.5 dx^2.
    """

    problem: Problem
    schemes: tuple[SchemeConfig, ...]
    resolutions: tuple[int, ...]
    t_final: float
    cfl: float = 0.5
    n_cells: int = 30
    dt_base: float | None = None
    reference_divisor: int = 32
    time_averaged: bool | None = None
    cache_dir: str | Path | None = None

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "resolutions", tuple(self.resolutions))
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        if not self.resolutions:
            raise ValueError("at least one resolution is required")
        if any(
            b <= a for a, b in zip(self.resolutions, self.resolutions[1:])
        ):
            raise ValueError("resolutions must be strictly increasing")
        if not self.t_final > 0.0:
            raise ValueError("t_final must be positive")
        if not self.cfl > 0.0:
            raise ValueError("cfl must be positive")
        if self.is_burgers:
            lcm = math.lcm(*self.resolutions)
            if self.reference_divisor % lcm != 0:
                raise ValueError(
                    "reference_divisor must be a multiple of every dt divisor"
                )

    @property
    def is_burgers(self) -> bool:
        return self.problem.kind is ProblemKind.BURGERS

    @property
    def effective_time_averaged(self) -> bool:
        if self.time_averaged is None:
            return self.is_burgers
        return self.time_averaged


def advection_sweep(
    problem: Problem,
    schemes,
    resolutions=(100, 200, 400, 800, 1600),
    cfl: float = 0.5,
    t_final: float = 0.5,
) -> SweepSpec:
    """Grid-refinement study at fixed CFL against the exact solution."""
    if problem.kind is ProblemKind.BURGERS:
        raise ValueError("use burgers_sweep for the Burgers problem")
    if problem.advection_speed == 0.0:
        raise ValueError("advection speed must be nonzero for a CFL sweep")
    return SweepSpec(
        problem=problem,
        schemes=tuple(schemes),
        resolutions=tuple(resolutions),
        t_final=t_final,
        cfl=cfl,
    )


def burgers_sweep(
    schemes,
    dt_divisors=(1, 2, 4, 8),
    n_cells: int = 30,
    t_final: float = 1.0,
    viscosity: float = 0.01,
    dt_base: float | None = None,
    cache_dir: str | Path | None = None,
) -> SweepSpec:
    """dt-refinement study on a fixed grid against the fine-step reference."""
    return SweepSpec(
        problem=burgers(viscosity),
        schemes=tuple(schemes),
        resolutions=tuple(dt_divisors),
        t_final=t_final,
        n_cells=n_cells,
        dt_base=dt_base,
        cache_dir=cache_dir,
    )


@dataclass(frozen=True)
class ConvergenceRow:
    resolution_label: int
    norms: NormTriple | None
    orders: tuple[float, float, float] | None
    failed: bool = False


@dataclass(frozen=True)
class SchemeTable:
    scheme: SchemeConfig
    rows: tuple[ConvergenceRow, ...]


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    tables: tuple[SchemeTable, ...]


class _MeanNorms:
    """Running mean of the three norms over the states visited by a run."""

    def __init__(self, dx: float):
        self.dx = dx
        self.sums = np.zeros(3)
        self.count = 0

    def add(self, errors: np.ndarray) -> None:
        n = _norms(errors, self.dx)
        self.sums += (n.l1, n.l2, n.linf)
        self.count += 1

    def result(self) -> NormTriple:
        means = self.sums / self.count
        return NormTriple(*map(float, means))


# Burgers reference trajectories are expensive relative to everything else,
# so completed ones are kept for the lifetime of the process (read-shared,
# written once under the lock).
_reference_lock = threading.Lock()
_reference_memo: dict[tuple, list[np.ndarray]] = {}


def _reference_trajectory(
    grid: Grid1D,
    dt_fine: float,
    t_final: float,
    viscosity: float,
    cadence: int,
) -> list[np.ndarray]:
    """ICN reference states every ``cadence`` fine steps up to t_final."""
    key = (
        grid.n_cells,
        grid.x_min,
        grid.x_max,
        dt_fine,
        t_final,
        viscosity,
        cadence,
    )
    with _reference_lock:
        if key in _reference_memo:
            return _reference_memo[key]
    steps = steps_for(t_final, dt_fine)
    if steps % cadence != 0:
        raise ValueError("reference cadence does not divide the step count")
    problem = burgers(viscosity)
    states: list[np.ndarray] = []

    def keep(i: int, state: Field) -> None:
        if (i + 1) % cadence == 0:
            states.append(state.values)

    integrate(
        initial_condition(grid), SchemeConfig.icn(), problem.rhs, dt_fine,
        steps, observer=keep,
    )
    with _reference_lock:
        _reference_memo.setdefault(key, states)
    return states


def _reference_cache_path(
    cache_dir: str | Path,
    n_cells: int,
    dt_fine: float,
    t_final: float,
    viscosity: float,
) -> Path:
    name = (
        f"burgers-ref-n{n_cells}-t{t_final!r}-dt{dt_fine!r}"
        f"-nu{viscosity!r}.csv"
    )
    return Path(cache_dir) / name


def burgers_reference(
    n_cells: int,
    dt_fine: float,
    t_final: float,
    viscosity: float = 0.01,
    cache_dir: str | Path | None = None,
) -> Field:
    """Fine-step ICN solution used as the Burgers 'exact' state at t_final.

    With a cache directory the field is persisted as a small CSV (17
    significant digits, so reloading is bit-exact) keyed by all parameters.
    """
    grid = Grid1D(n_cells)
    if t_final == 0.0:
        return initial_condition(grid)
    path = None
    if cache_dir is not None:
        path = _reference_cache_path(
            cache_dir, n_cells, dt_fine, t_final, viscosity
        )
        if path.exists():
            values = [
                float(line.split(",")[1])
                for line in path.read_text().splitlines()[1:]
            ]
            return Field(grid, values)
    steps = steps_for(t_final, dt_fine)
    final = integrate(
        initial_condition(grid),
        SchemeConfig.icn(),
        burgers(viscosity).rhs,
        dt_fine,
        steps,
    )
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ["x,u"]
        for x, v in zip(grid.nodes(), final.values):
            lines.append(f"{x:.17e},{v:.17e}")
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes("\n".join(lines).encode() + b"\n")
        os.replace(tmp, path)
    return final


def _advection_cell(spec: SweepSpec, scheme: SchemeConfig, n: int):
    grid = Grid1D(n)
    dt = spec.cfl * grid.dx / abs(spec.problem.advection_speed)
    steps = steps_for(spec.t_final, dt)
    u0 = initial_condition(grid)
    nodes = grid.nodes()
    if spec.effective_time_averaged:
        mean = _MeanNorms(grid.dx)

        def observe(i: int, state: Field) -> None:
            exact = spec.problem.exact_solution(nodes, (i + 1) * dt)
            mean.add(state.values - exact)

        integrate(u0, scheme, spec.problem.rhs, dt, steps, observer=observe)
        return mean.result()
    final = integrate(u0, scheme, spec.problem.rhs, dt, steps)
    return error_norms(final, spec.problem.exact_field(grid, spec.t_final))


def _burgers_cell(spec: SweepSpec, scheme: SchemeConfig, divisor: int,
                  reference: list[np.ndarray], sample_lcm: int):
    grid = Grid1D(spec.n_cells)
    dt_base = spec.dt_base if spec.dt_base is not None else 0.5 * grid.dx**2
    dt = dt_base / divisor
    steps = steps_for(spec.t_final, dt)
    stride = sample_lcm // divisor
    u0 = initial_condition(grid)
    if spec.effective_time_averaged:
        mean = _MeanNorms(grid.dx)

        def observe(i: int, state: Field) -> None:
            mean.add(state.values - reference[(i + 1) * stride - 1])

        integrate(u0, scheme, spec.problem.rhs, dt, steps, observer=observe)
        return mean.result()
    final = integrate(u0, scheme, spec.problem.rhs, dt, steps)
    return _norms(final.values - reference[steps * stride - 1], grid.dx)


def _assemble_rows(spec: SweepSpec, cells) -> tuple[ConvergenceRow, ...]:
    rows = []
    previous: NormTriple | None = None
    previous_label: int | None = None
    for label, norms in zip(spec.resolutions, cells):
        orders = None
        if (
            norms is not None
            and previous is not None
            and label == 2 * previous_label
            and all(previous.get(k) > 0 and norms.get(k) > 0
                    for k in NORM_KEYS)
        ):
            orders = tuple(
                observed_order(previous.get(k), norms.get(k))
                for k in NORM_KEYS
            )
        rows.append(
            ConvergenceRow(
                resolution_label=label,
                norms=norms,
                orders=orders,
                failed=norms is None,
            )
        )
        previous = norms
        previous_label = label
    return tuple(rows)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run every (scheme, resolution) cell and assemble convergence tables.

    A diverging cell is marked failed and the sweep continues.  Cells may
    be evaluated concurrently (ICN_LAB_THREADS caps the pool); results are
    assembled in a fixed order either way, so tables are deterministic.
    """
    reference = None
    sample_lcm = None
    if spec.is_burgers:
        grid = Grid1D(spec.n_cells)
        dt_base = spec.dt_base if spec.dt_base is not None else 0.5 * grid.dx**2
        sample_lcm = math.lcm(*spec.resolutions)
        cadence = spec.reference_divisor // sample_lcm
        reference = _reference_trajectory(
            grid,
            dt_base / spec.reference_divisor,
            spec.t_final,
            spec.problem.viscosity,
            cadence,
        )

    def run_cell(args):
        scheme, resolution = args
        try:
            if spec.is_burgers:
                return _burgers_cell(
                    spec, scheme, resolution, reference, sample_lcm
                )
            return _advection_cell(spec, scheme, resolution)
        except DivergenceError:
            return None

    cells = [
        (scheme, resolution)
        for scheme in spec.schemes
        for resolution in spec.resolutions
    ]
    n_threads = max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(run_cell, cells))
    else:
        results = [run_cell(c) for c in cells]

    tables = []
    per_scheme = len(spec.resolutions)
    for k, scheme in enumerate(spec.schemes):
        chunk = results[k * per_scheme:(k + 1) * per_scheme]
        tables.append(SchemeTable(scheme, _assemble_rows(spec, chunk)))
    return SweepResult(spec=spec, tables=tuple(tables))
