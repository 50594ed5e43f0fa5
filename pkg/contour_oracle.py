"""
Floating-point oracle for the circle-method split PL(n) = J(n) + E_min(n).

On the circle |x| = e^(-1/N), x = e^(-z) with z = 1/N - i theta, Cauchy's formula becomes

    PL(n) = 1/(2 pi) * integral_{-pi}^{pi} f(e^(-z)) e^(nz) d theta,

the major arc being |theta| < 1/N. log f(e^(-z)) = sum_m e^(-mz) / (m (1 - e^(-mz))^2).
Nothing here is certified; results are compared against exact values in tests.
"""

import heapq
import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config import Config
from utils import InvalidArgumentError, QuadratureError, log_operation

logger = logging.getLogger(__name__)

ZETA3 = 1.2020569031595942
LOW_ORDER = 10
HIGH_ORDER = 2 * LOW_ORDER + 1
INITIAL_PANELS = 8
RESIDUAL_LIMIT = 1e-6


@lru_cache(maxsize=None)
def _legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class ContourParams:
    """Geometry of the integration circle for one n."""

    n: int
    N: float
    truncation: int
    tolerance: float

    @classmethod
    def for_n(cls, n: int, tolerance: Optional[float] = None) -> "ContourParams":
        if n < 1:
            raise InvalidArgumentError(f"contour parameters need n >= 1, got {n}")
        tolerance = tolerance or Config.ORACLE_TOLERANCE
        N = (n / (2 * ZETA3)) ** (1 / 3)
        return cls(n=n, N=N, truncation=series_truncation(1 / N, tolerance), tolerance=tolerance)

    @property
    def split(self) -> float:
        return 1 / self.N

    def z(self, theta):
        return 1 / self.N - 1j * np.asarray(theta)

    def rho(self, theta):
        return np.abs(self.z(theta))

    def phi(self, theta):
        return np.angle(self.z(theta))

    def w(self, theta):
        """Re(pi / (2z)) = pi cos(phi) / (2 rho)."""
        return np.pi * np.cos(self.phi(theta)) / (2 * self.rho(theta))


def tail_bound(real_part: float, truncation: int) -> float:
    """Bound on sum_{m > M} |e^(-mz) / (m (1 - e^(-mz))^2)| given Re z."""
    q = math.exp(-real_part)
    q_next = q ** (truncation + 1)
    return q_next / ((1 - q) * (truncation + 1) * (1 - q_next) ** 2)


def series_truncation(real_part: float, tolerance: float) -> int:
    """Least M (from a geometric guess upward) whose tail bound is below tolerance."""
    if real_part <= 0:
        raise InvalidArgumentError(f"log f needs Re z > 0, got {real_part}")
    truncation = max(8, int(math.log(tolerance) / -real_part))
    while tail_bound(real_part, truncation) > tolerance:
        truncation = int(truncation * 1.25) + 1
    return truncation


def log_f(z, truncation: Optional[int] = None, tolerance: Optional[float] = None) -> Tuple[np.ndarray, float]:
    """log f(e^(-z)) for Re z > 0 (scalar or array) and the bound on the dropped tail."""
    z = np.asarray(z, dtype=complex)
    real_part = float(np.min(z.real))
    if real_part <= 0:
        raise InvalidArgumentError(f"log f needs Re z > 0, got min Re z = {real_part}")
    tolerance = tolerance or Config.ORACLE_TOLERANCE
    truncation = truncation or series_truncation(real_part, tolerance)

    m = np.arange(1, truncation + 1)
    powers = np.exp(-np.multiply.outer(z, m))
    values = (powers / (m * (1 - powers) ** 2)).sum(axis=-1)
    return values, tail_bound(real_part, truncation)


# ============================================================================
# ADAPTIVE QUADRATURE
# ============================================================================

@dataclass(frozen=True)
class ArcIntegral:
    value: float
    imag: float
    error: float
    panels: int


def _panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> Tuple[complex, float]:
    half, middle = (b - a) / 2, (a + b) / 2
    results = []
    for order in (LOW_ORDER, HIGH_ORDER):
        nodes, weights = _legendre(order)
        results.append(half * np.dot(weights, f(middle + half * nodes)))
    return results[1], abs(results[1] - results[0])


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    intervals: List[Tuple[float, float]],
    tolerance: float,
    max_panels: Optional[int] = None,
) -> Tuple[complex, float, int]:
    """Adaptive Gauss-Legendre over the union of intervals; the worst panel is split first."""
    max_panels = max_panels or Config.ORACLE_MAX_PANELS
    counter = itertools.count()
    heap = []
    for a, b in intervals:
        edges = np.linspace(a, b, INITIAL_PANELS + 1)
        for left, right in zip(edges, edges[1:]):
            value, error = _panel(f, left, right)
            heapq.heappush(heap, (-error, next(counter), left, right, value))

    while True:
        total_error = sum(-entry[0] for entry in heap)
        if total_error <= tolerance:
            break
        if len(heap) >= max_panels:
            raise QuadratureError(
                f"quadrature error {total_error:.3e} above {tolerance:.3e} after {len(heap)} panels"
            )
        _, _, left, right, _ = heapq.heappop(heap)
        middle = (left + right) / 2
        for a, b in ((left, middle), (middle, right)):
            value, error = _panel(f, a, b)
            heapq.heappush(heap, (-error, next(counter), a, b, value))

    # fixed summation order
    panels = sorted(heap, key=lambda entry: entry[2])
    total = sum((entry[4] for entry in panels), 0j)
    return total, sum(-entry[0] for entry in panels), len(panels)


def _scaled_integrand(params: ContourParams) -> Tuple[Callable[[np.ndarray], np.ndarray], float]:
    """Integrand divided by its size at theta = 0, and the log of that size."""
    shift = float(log_f(params.split, params.truncation)[0].real) + params.n / params.N

    def integrand(theta: np.ndarray) -> np.ndarray:
        z = params.z(theta)
        values, _ = log_f(z, params.truncation)
        return np.exp(values + params.n * z - shift) / (2 * np.pi)

    return integrand, shift


def _arc_integral(params: ContourParams, intervals: List[Tuple[float, float]], label: str,
                  max_panels: Optional[int]) -> ArcIntegral:
    integrand, shift = _scaled_integrand(params)
    total, error, panels = integrate(integrand, intervals, params.tolerance, max_panels)
    scale = math.exp(shift)
    log_operation(label, f"n={params.n} panels={panels} error={error * scale:.3e}", level="DEBUG", logger=logger)
    return ArcIntegral(value=total.real * scale, imag=total.imag * scale, error=error * scale, panels=panels)


def major_integral(n: int, tolerance: Optional[float] = None, max_panels: Optional[int] = None) -> ArcIntegral:
    """J(n): the integral over |theta| < 1/N."""
    params = ContourParams.for_n(n, tolerance)
    return _arc_integral(params, [(-params.split, params.split)], "major_integral", max_panels)


def minor_integral(n: int, tolerance: Optional[float] = None, max_panels: Optional[int] = None) -> ArcIntegral:
    """E_min(n): the integral over 1/N < |theta| <= pi."""
    params = ContourParams.for_n(n, tolerance)
    intervals = [(-math.pi, -params.split), (params.split, math.pi)]
    return _arc_integral(params, intervals, "minor_integral", max_panels)


def minor_bound(n: int) -> float:
    """exp((3A - 2/5) N^2) in floating point."""
    N = (n / (2 * ZETA3)) ** (1 / 3)
    return math.exp((3 * ZETA3 - 0.4) * N * N)


def check_decomposition(n: int, exact: int, tolerance: Optional[float] = None) -> Dict[str, float]:
    """J(n), E_min(n) and the relative residual of J + E_min against the exact PL(n)."""
    major = major_integral(n, tolerance)
    minor = minor_integral(n, tolerance)
    total = major.value + minor.value
    return {
        "n": n,
        "J": major.value,
        "E_min": minor.value,
        "PL": exact,
        "residual": abs(total - exact) / exact,
        "imag": major.imag + minor.imag,
        "minor_bound": minor_bound(n) if n >= 87 else None,
    }


# ============================================================================
# MINOR-ARC PROFILE
# ============================================================================

@dataclass(frozen=True)
class MinorArcProfile:
    n: int
    N: float
    max_log_modulus: float
    modulus_bound: float
    log_f_radius: float
    radius_bound: float
    min_gap: float
    gap_bound: float

    @property
    def holds(self) -> bool:
        return (
            self.max_log_modulus <= self.modulus_bound
            and self.log_f_radius <= self.radius_bound
            and self.min_gap >= self.gap_bound
        )


def minor_arc_profile(n: int, samples: int = 512) -> MinorArcProfile:
    """
    Sampled checks on the minor arc:
    log|f(x)| <= (A - 1/2) N^2 + 0.33 N,
    log f(|x|) <= A N^2 + 0.33 N - 0.5,
    |x|/(1 - |x|)^2 - |x|/|1 - x|^2 >= N^2 / 2 - 1/12.
    """
    params = ContourParams.for_n(n)
    N = params.N
    theta = np.linspace(params.split, np.pi, samples)
    values, _ = log_f(params.z(theta), params.truncation)
    radius = math.exp(-1 / N)
    radius_value = float(log_f(1 / N, params.truncation)[0].real)
    x = radius * np.exp(1j * theta)
    gaps = radius / (1 - radius) ** 2 - radius / np.abs(1 - x) ** 2

    profile = MinorArcProfile(
        n=n,
        N=N,
        max_log_modulus=float(np.max(values.real)),
        modulus_bound=(ZETA3 - 0.5) * N * N + 0.33 * N,
        log_f_radius=radius_value,
        radius_bound=ZETA3 * N * N + 0.33 * N - 0.5,
        min_gap=float(np.min(gaps)),
        gap_bound=N * N / 2 - 1 / 12,
    )
    log_operation("minor_arc_profile", f"n={n} holds={profile.holds}", level="DEBUG", logger=logger)
    return profile
