"""The three periodic test problems as right-hand-side operators u_t = L(u).

All problems share the initial condition u(x, 0) = sin^2(pi x) on [0, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    DivergenceError,
    Field,
    Grid1D,
    delta1_array,
    second_derivative_array,
)


class ProblemKind(str, Enum):
    LINEAR_ADVECTION = "linear"
    SEMILINEAR_ADVECTION = "semilinear"
    BURGERS = "burgers"


@dataclass(frozen=True)
class Problem:
    """A PDE u_t = L(u) with an optional closed-form solution.

    kinds:
      linear      u_t + a u_x = 0
      semilinear  u_t + u_x = -u^2        (unit advection speed, fixed)
      burgers     u_t + (u^2/2)_x = nu u_xx
    """

    kind: ProblemKind
    advection_speed: float = 1.0
    viscosity: float = 0.0

    def __post_init__(self):
        if self.kind is ProblemKind.BURGERS and not self.viscosity > 0.0:
            raise ValueError("Burgers viscosity must be positive")
        if (
            self.kind is ProblemKind.SEMILINEAR_ADVECTION
            and self.advection_speed != 1.0
        ):
            raise ValueError("semilinear problem has unit advection speed")

    @property
    def has_exact(self) -> bool:
        return self.kind is not ProblemKind.BURGERS

    def rhs(self, u: Field) -> Field:
        """Evaluate L(u) nodewise with centered differences."""
        v = u.values
        if not np.isfinite(v).all():
            raise DivergenceError("non-finite state")
        dx = u.grid.dx
        if self.kind is ProblemKind.LINEAR_ADVECTION:
            out = -self.advection_speed * delta1_array(v) / (2.0 * dx)
        elif self.kind is ProblemKind.SEMILINEAR_ADVECTION:
            out = -delta1_array(v) / (2.0 * dx) - v * v
        else:
            flux = 0.5 * v * v
            out = -delta1_array(flux) / (2.0 * dx) + self.viscosity * (
                second_derivative_array(v, dx)
            )
        return u.with_values(out)

    def exact_solution(self, x, t: float):
        """Closed-form solution at (x, t); x may be a scalar or an array."""
        if not self.has_exact:
            raise ValueError("no closed-form exact solution")
        s = np.sin(np.pi * (x - self.advection_speed * t)) ** 2
        if self.kind is ProblemKind.LINEAR_ADVECTION:
            return s
        return s / (1.0 + t * s)

    def exact_field(self, grid: Grid1D, t: float) -> Field:
        """Exact solution sampled at the grid nodes."""
        return Field(grid, self.exact_solution(grid.nodes(), t))


def linear_advection(speed: float = 1.0) -> Problem:
    return Problem(ProblemKind.LINEAR_ADVECTION, advection_speed=speed)


def semilinear_advection() -> Problem:
    return Problem(ProblemKind.SEMILINEAR_ADVECTION)


def burgers(viscosity: float = 0.01) -> Problem:
    return Problem(ProblemKind.BURGERS, viscosity=viscosity)


def initial_condition(grid: Grid1D) -> Field:
    """sin^2(pi x) sampled at the nodes; shared by all three problems."""
    return Field(grid, np.sin(np.pi * grid.nodes()) ** 2)
