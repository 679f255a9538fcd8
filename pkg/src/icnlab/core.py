"""Uniform periodic 1-D grid, nodal fields, and centered difference operators.

Everything downstream (problem right-hand sides, time steppers, stencil
oracles) is built from the wrapped-index operators defined here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DivergenceError(RuntimeError):
    """A state or step result stopped being finite."""

    def __init__(self, message: str, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid with ``n_cells`` nodes, x_j = x_min + j*dx.

    The point x_max is identified with x_min, so there is no duplicated
    endpoint node and dx = (x_max - x_min) / n_cells.
    """

    n_cells: int
    x_min: float = 0.0
    x_max: float = 1.0

    def __post_init__(self):
        if self.n_cells < 4:
            # the widest stencil reaches j +- 3; wrap needs at least 4 nodes
            raise ValueError("n_cells must be at least 4")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    def nodes(self) -> np.ndarray:
        """Node coordinates x_0 .. x_{N-1}."""
        return self.x_min + np.arange(self.n_cells) * self.dx


@dataclass(eq=False)
class Field:
    """Real nodal values bound to a grid; values[j] lives at node j."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"expected {self.grid.n_cells} nodal values, "
                f"got shape {self.values.shape}"
            )

    def with_values(self, values) -> "Field":
        """Same grid, new nodal values."""
        return Field(self.grid, values)

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())


def wrap_index(j: int, n: int) -> int:
    """Map any integer node index into [0, n) periodically."""
    return j % n


def delta1(u: Field, j: int) -> float:
    """u[j+1] - u[j-1] with periodic wrap."""
    v = u.values
    n = u.grid.n_cells
    return v[wrap_index(j + 1, n)] - v[wrap_index(j - 1, n)]


def delta2(u: Field, j: int) -> float:
    """u[j+2] - 2 u[j] + u[j-2] with periodic wrap."""
    v = u.values
    n = u.grid.n_cells
    return v[wrap_index(j + 2, n)] - 2.0 * v[j] + v[wrap_index(j - 2, n)]


def delta3(u: Field, j: int) -> float:
    """u[j+3] - 3 u[j+1] + 3 u[j-1] - u[j-3] with periodic wrap."""
    v = u.values
    n = u.grid.n_cells
    return (
        v[wrap_index(j + 3, n)]
        - 3.0 * v[wrap_index(j + 1, n)]
        + 3.0 * v[wrap_index(j - 1, n)]
        - v[wrap_index(j - 3, n)]
    )


def second_derivative(u: Field, j: int, dx: float) -> float:
    """Centered three-point u_xx estimate at node j."""
    v = u.values
    n = u.grid.n_cells
    return (
        v[wrap_index(j + 1, n)] - 2.0 * v[j] + v[wrap_index(j - 1, n)]
    ) / (dx * dx)


# Whole-field versions of the operators above. np.roll realizes the same
# periodic wrap, so these agree with the scalar forms bit for bit.

def delta1_array(values: np.ndarray) -> np.ndarray:
    return np.roll(values, -1) - np.roll(values, 1)


def delta2_array(values: np.ndarray) -> np.ndarray:
    return np.roll(values, -2) - 2.0 * values + np.roll(values, 2)


def delta3_array(values: np.ndarray) -> np.ndarray:
    return (
        np.roll(values, -3)
        - 3.0 * np.roll(values, -1)
        + 3.0 * np.roll(values, 1)
        - np.roll(values, 3)
    )


def second_derivative_array(values: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(values, -1) - 2.0 * values + np.roll(values, 1)) / (dx * dx)
