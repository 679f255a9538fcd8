"""Von Neumann amplification factors and (theta, beta) stability maps.

A Fourier mode acquires a complex factor g per step; |g| <= 1 for every
mode means the scheme is stable.  The mode enters only through
beta = R sin(k dx) with R = a dt / (2 dx), so maps are scanned over beta
directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .schemes import SchemeVariant

# |g| <= 1 + this counts as stable; marginal modes (|g| = 1) are classically
# stable and the epsilon absorbs rounding.
STABILITY_TOLERANCE = 1e-12


class AmplificationResult(NamedTuple):
    g: complex
    modulus: float


def g_ga(theta1: float, beta: float) -> AmplificationResult:
    """Per-step factor of the geometric-weight scheme on linear advection.

    g = 1 - 2 beta^2 + i (-2 beta + 4 theta1 beta^3)
    """
    b2 = beta * beta
    g = complex(1.0 - 2.0 * b2, -2.0 * beta + 4.0 * theta1 * b2 * beta)
    return AmplificationResult(g, abs(g))


def g_theta_step(theta: float, beta: float) -> AmplificationResult:
    """Per-step factor of one unswapped weighted step.

    g = 1 - 4 theta beta^2 + i (-2 beta + 8 theta^2 beta^3)
    """
    b2 = beta * beta
    g = complex(
        1.0 - 4.0 * theta * b2,
        -2.0 * beta + 8.0 * theta * theta * b2 * beta,
    )
    return AmplificationResult(g, abs(g))


def g_aa_composed(theta_odd: float, beta: float) -> AmplificationResult:
    """Two-step factor of the alternating scheme: g(theta_odd) g(theta_even).

    The pair of weights is derived from the larger of theta_odd and its
    complement; 1 - hi is exact in floating point for hi >= 1/2, so calling
    with theta_odd and with 1 - theta_odd multiplies bitwise-identical
    factors and the map symmetry about 1/2 is exact.
    """
    hi = max(theta_odd, 1.0 - theta_odd)
    lo = 1.0 - hi
    g = g_theta_step(hi, beta).g * g_theta_step(lo, beta).g
    return AmplificationResult(g, abs(g))


@dataclass(frozen=True)
class StabilityMap:
    """Modulus samples on a (theta, beta) grid.

    ``modulus[i, j]`` holds |g| at beta_axis[i], theta_axis[j]; for the aa
    variant it is the modulus of the composed two-step factor.
    """

    variant: SchemeVariant
    theta_axis: np.ndarray
    beta_axis: np.ndarray
    modulus: np.ndarray
    stable_mask: np.ndarray


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    ax = np.linspace(lo, hi, n)
    if lo + hi == 1.0:
        # complement-symmetric range: force ax[n-1-k] == 1 - ax[k] exactly
        half = n // 2
        k = np.arange(half)
        ax[n - 1 - k] = 1.0 - ax[k]
    return ax


def scan_region(
    variant: SchemeVariant | str,
    theta_range: tuple[float, float] = (0.0, 1.0),
    beta_range: tuple[float, float] = (0.0, 1.2),
    resolution: int = 241,
) -> StabilityMap:
    """Grid-evaluate |g| over the requested rectangle.

    Only the ga and aa variants have amplification factors here; aa is
    judged on the two-step product without per-step normalization.
    """
    variant = SchemeVariant(variant)
    if variant not in (SchemeVariant.GA, SchemeVariant.AA):
        raise ValueError("stability scans cover the ga and aa variants only")
    if resolution < 2:
        raise ValueError("resolution must be at least 2 points per axis")
    t_lo, t_hi = theta_range
    b_lo, b_hi = beta_range
    if t_lo > t_hi or b_lo > b_hi:
        raise ValueError("malformed scan range")
    theta_axis = _axis(t_lo, t_hi, resolution)
    beta_axis = np.linspace(b_lo, b_hi, resolution)
    point = g_ga if variant is SchemeVariant.GA else g_aa_composed
    modulus = np.empty((resolution, resolution))
    for i, beta in enumerate(beta_axis):
        for j, theta in enumerate(theta_axis):
            modulus[i, j] = point(theta, beta).modulus
    return StabilityMap(
        variant=variant,
        theta_axis=theta_axis,
        beta_axis=beta_axis,
        modulus=modulus,
        stable_mask=modulus <= 1.0 + STABILITY_TOLERANCE,
    )
