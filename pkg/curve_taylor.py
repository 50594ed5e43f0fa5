"""
Taylor coefficients along the steepest-descent curve and their certified maximum.

The curve (x^2 + y^2)^2 = x is parametrized by v = x + i sqrt(sqrt(x) - x^2),
0 < x <= 1. Along it t = -i (v - 1) sqrt(2v + 1) / v is real and nonnegative,
t^2 = 3 - 2v - v^-2, and v(t) solves the autonomous equation

    dv/dt = g(v) = i v^2 sqrt(2v + 1) / (v^2 + v + 1),

which stays regular at v = 1. The functions

    chi_s(t) = v^(2s + 25/12) sqrt(2v + 1) / (2 pi (v^2 + v + 1)) = v^(2s + 1/12) g(v) / (2 pi i)

therefore have Taylor coefficients at t0 that depend on v(t0) only. A cell of x values
is bounded by a Taylor form in t around its midpoint: the leading coefficients come
from a point evaluation, and only the remainder coefficient is enclosed over the box
of v values the cell sweeps. Cells below x = 1/cells are dyadic, since v ~ i x^(1/4)
there.
"""

import heapq
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple

from mpmath import iv, mp

from ball import BallReal, power, sqrt, working_precision
from config import Config
from utils import InvalidArgumentError, log_operation

logger = logging.getLogger(__name__)

# |chi_s| <= 0.163 |v|^(25/12) once |v| <= 0.005, and |v(tau)| <= 1.01/|tau| for |tau| >= 512
ORIGIN_CHI_FACTOR = Fraction(17, 100)
ORIGIN_V_FACTOR = Fraction(202, 100)

# order m of the Taylor remainder in cell_bound
TAYLOR_REMAINDER_ORDER = 3
MIN_RELATIVE_WIDTH = mp.ldexp(mp.mpf(1), -40)


def _csqrt(z):
    return iv.exp(iv.ln(z) / 2)


def _cpow(z, exponent: Fraction):
    return iv.exp(iv.ln(z) * (iv.mpf(exponent.numerator) / exponent.denominator))


def _clamp_nonnegative(value):
    lower, upper = value._mpi_
    if mp.make_mpf(lower) < 0:
        return iv.mpf((0, mp.make_mpf(upper)))
    return value


def curve_box(x_lower, x_upper):
    """Complex interval containing v(x) for every x in [x_lower, x_upper]."""
    x = iv.mpf((x_lower, x_upper))
    y_squared = _clamp_nonnegative(iv.sqrt(x) - x ** 2)
    return iv.mpc(x, iv.sqrt(y_squared))


def curve_t(x) -> BallReal:
    """t >= 0 at the curve point with real part x: t^2 = 3 - 4x + x^(-1/2)."""
    x = iv.mpf(x)
    return BallReal(iv.sqrt(_clamp_nonnegative(3 - 4 * x + 1 / iv.sqrt(x))))


def solution_coefficients(v0, order: int) -> Tuple[list, list]:
    """Taylor coefficients v_0..v_order of v(t0 + h) and g_0..g_order of g(v(t0 + h))."""
    v = [v0]
    p: List = []  # V^2
    s: List = []  # sqrt(2V + 1)
    q: List = []  # V^2 + V + 1
    n: List = []  # V^2 sqrt(2V + 1)
    g: List = []  # i n / q
    i_unit = iv.mpc(0, 1)

    for k in range(order + 1):
        p.append(sum((v[j] * v[k - j] for j in range(1, k + 1)), v[0] * v[k]))
        if k == 0:
            s.append(_csqrt(2 * v[0] + 1))
        else:
            cross = sum((s[j] * s[k - j] for j in range(1, k)), iv.mpc(0, 0))
            s.append((2 * v[k] - cross) / (2 * s[0]))
        q.append(p[k] + v[k] + (1 if k == 0 else 0))
        n.append(sum((p[j] * s[k - j] for j in range(1, k + 1)), p[0] * s[k]))
        carried = sum((q[j] * g[k - j] for j in range(1, k + 1)), iv.mpc(0, 0))
        g.append((i_unit * n[k] - carried) / q[0])
        if k < order:
            v.append(g[k] / (k + 1))
    return v, g


def _power_series(v: Sequence, exponent: Fraction, order: int) -> list:
    """Coefficients of V^a from k w_k v_0 = sum_j (a j - (k - j)) v_j w_{k-j}."""
    w = [_cpow(v[0], exponent)]
    a = iv.mpf(exponent.numerator) / exponent.denominator
    for k in range(1, order + 1):
        total = iv.mpc(0, 0)
        for j in range(1, k + 1):
            total += (a * j - (k - j)) * v[j] * w[k - j]
        w.append(total / (k * v[0]))
    return w




def _convolve(left: Sequence, right: Sequence, order: int) -> list:
    return [sum((left[j] * right[k - j] for j in range(k + 1)), iv.mpc(0, 0)) for k in range(order + 1)]


def chi_series(v0, r: int, order: int) -> List[list]:
    """Coefficients c_0..c_order of chi_s(t0 + h) for s = 0..r+1 at the curve point v0."""
    v, g = solution_coefficients(v0, order)
    square = _convolve(v, v, order)
    h = _power_series(v, Fraction(1, 12), order)
    factor = iv.mpc(0, -1) / (2 * iv.pi)

    series = []
    for s in range(r + 2):
        series.append([coefficient * factor for coefficient in _convolve(h, g, order)])
        if s < r + 1:
            h = _convolve(h, square, order)
    return series


def chi_coefficient_bounds(v0, r: int) -> List[BallReal]:
    """|[h^K] chi_s(t0 + h)| for s = 0..r+1 and K = 2r + 4, as real balls."""
    order = 2 * r + 4
    return [BallReal(abs(coefficients[order])) for coefficients in chi_series(v0, r, order)]


def chi_value(s: int, v) -> "iv.mpc":
    """chi_s at the curve point v, from the closed form."""
    v = iv.mpc(v) if not hasattr(v, "_mpci_") else v
    return _cpow(v, Fraction(24 * s + 25, 12)) * _csqrt(2 * v + 1) / (2 * iv.pi * (v ** 2 + v + 1))


def chi_taylor_coefficient(s: int, r: int, x) -> BallReal:
    """|chi_s^(2r+4)(t)| / (2r+4)! at the curve point with real part x."""
    if not 0 <= s <= r + 1:
        raise InvalidArgumentError(f"s must lie in 0..{r + 1}")
    return chi_coefficient_bounds(curve_box(x, x), r)[s]


def origin_tail_bound(x_min, order: int) -> BallReal:
    """Cauchy estimate for the piece 0 < x < x_min, where t >= sqrt(x_min^(-1/2) - 1)."""
    t_min = sqrt(1 / sqrt(BallReal(x_min)) - 1)
    return ORIGIN_CHI_FACTOR * power(ORIGIN_V_FACTOR / t_min, Fraction(25, 12) + order)


# ============================================================================
# CELL BOUNDS
# ============================================================================

@dataclass(frozen=True)
class CellBound:
    upper: object
    sample: object


def cell_bound(a, b, r: int) -> CellBound:
    """
    Upper bound of max_s |c_K(t)| over the x-cell [a, b] and a lower bound at its
    midpoint t0, K = 2r + 4. Around t0

        c_K(t0 + h) = sum_{j < m} C(K + j, j) c_{K+j}(t0) h^j + R,
        |R| <= C(K + m, m) sup_cell |c_{K+m}| |h|^m,

    so only the last coefficient is enclosed over the whole cell. The linear part is
    convex in h and is bounded at the two ends of [-delta, delta].
    """
    order = 2 * r + 4
    m = TAYLOR_REMAINDER_ORDER
    middle = mp.ldexp(mp.fadd(a, b, exact=True), -1)
    t0 = curve_t(middle)
    reach = max((curve_t(a) - t0).upper, (t0 - curve_t(b)).upper)
    delta = iv.mpf(reach)

    point = chi_series(curve_box(middle, middle), r, order + m - 1)
    cell = chi_series(curve_box(a, b), r, order + m)

    upper = mp.zero
    sample = mp.zero
    for s in range(r + 2):
        terms = [comb(order + j, j) * point[s][order + j] for j in range(m)]
        linear = max(BallReal(abs(terms[0] + terms[1] * delta)).upper,
                     BallReal(abs(terms[0] - terms[1] * delta)).upper)
        rest = sum((abs(terms[j]) * delta ** j for j in range(2, m)), iv.mpf(0))
        remainder = comb(order + m, m) * abs(cell[s][order + m]) * delta ** m
        upper = max(upper, (BallReal(linear) + BallReal(rest + remainder)).upper)
        sample = max(sample, BallReal(abs(terms[0])).lower)
    return CellBound(upper=upper, sample=sample)


def initial_edges(x_min, cells: int) -> list:
    """Dyadic edges from x_min up to 1/cells, then uniform steps of 1/cells."""
    edges = [mp.mpf(x_min)]
    junction = mp.mpf(1) / cells
    while edges[-1] * 2 < junction:
        edges.append(edges[-1] * 2)
    edges.extend(mp.mpf(k) / cells for k in range(1, cells + 1))
    return edges


# ============================================================================
# BRANCH AND BOUND
# ============================================================================

@dataclass(frozen=True)
class CurveMaximum:
    upper: BallReal
    best_sample: object
    evaluations: int
    converged: bool
    tail: BallReal

    @property
    def enclosure(self) -> BallReal:
        return BallReal.from_interval(min(self.best_sample, self.upper.upper), self.upper.upper)


def maximize_chi_coefficients(
    r: int,
    initial_cells: Optional[int] = None,
    budget: Optional[int] = None,
    tolerance: Optional[float] = None,
    x_min_exponent: Optional[int] = None,
    precision: Optional[int] = None,
) -> CurveMaximum:
    """Best-first branch and bound over x-cells for max_s sup_t |chi_s^(2r+4)(t)| / (2r+4)!."""
    initial_cells = initial_cells or Config.DR_INITIAL_CELLS
    budget = budget or Config.DR_EVAL_BUDGET
    tolerance = Config.DR_TOLERANCE if tolerance is None else tolerance
    x_min_exponent = x_min_exponent or Config.DR_X_MIN_EXPONENT
    precision = precision or Config.DR_PRECISION
    if r < 1:
        raise InvalidArgumentError("r must be at least 1")

    order = 2 * r + 4
    counter = itertools.count()
    heap: list = []
    best_sample = mp.zero
    evaluations = 0

    def push(a, b) -> None:
        nonlocal best_sample, evaluations
        bound = cell_bound(a, b, r)
        evaluations += 1
        best_sample = max(best_sample, bound.sample)
        heapq.heappush(heap, (-float(bound.upper), next(counter), a, b, bound.upper))

    with working_precision(precision):
        x_min = mp.ldexp(mp.mpf(1), -x_min_exponent)
        edges = initial_edges(x_min, initial_cells)
        for a, b in zip(edges, edges[1:]):
            push(a, b)

        converged = False
        while True:
            top_upper = heap[0][4]
            if best_sample > 0 and top_upper <= best_sample * (1 + tolerance):
                converged = True
                break
            if evaluations >= budget:
                break
            _, _, a, b, _ = heap[0]
            if b - a < b * MIN_RELATIVE_WIDTH:
                break
            heapq.heappop(heap)
            middle = mp.ldexp(mp.fadd(a, b, exact=True), -1)
            push(a, middle)
            push(middle, b)

        tail = origin_tail_bound(x_min, order)
        upper = max(entry[4] for entry in heap)
        total = BallReal(upper) + tail

    log_operation(
        "maximize_chi_coefficients",
        f"r={r} upper={mp.nstr(total.upper, 8)} sample={mp.nstr(best_sample, 8)} "
        f"cells={len(heap)} evaluations={evaluations} converged={converged}",
        logger=logger,
    )
    return CurveMaximum(
        upper=total.upper_ball(),
        best_sample=best_sample,
        evaluations=evaluations,
        converged=converged,
        tail=tail,
    )
