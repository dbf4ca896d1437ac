"""Analyses combining the exact series with the Floquet oracle."""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .exceptions import DegenerateFit, InsufficientData, InvalidSpec, OrderMismatch
from .floquet import NumericProblem, TongueRecord, boundary0, tongue_boundaries
from .hillseries import (
    CouplingSpec,
    EigenBranch,
    HillCoefficientSeries,
    Parity,
    compose_G,
    eigen_series,
)
from .lindstedt import LindstedtExpansion, OscillatorSpec, expand
from .trigpoly import CosPoly, cauchy_product, compose, project, second_derivative

logger = logging.getLogger(__name__)


class ShapeClassification:
    TRUMPET = "Trumpet"
    HORN = "Horn"
    COLLAPSED = "Collapsed"
    UNDETERMINED = "Undetermined"

    choices = (
        (TRUMPET, TRUMPET),
        (HORN, HORN),
        (COLLAPSED, COLLAPSED),
        (UNDETERMINED, UNDETERMINED),
    )


@dataclass(frozen=True)
class ShapeVerdict:
    N: int
    classification: str
    leading_orders: Tuple[Optional[int], Optional[int]]
    leading_signs: Tuple[int, int]


def _leading(series: Sequence[Fraction]) -> Tuple[Optional[int], int]:
    for n, value in enumerate(series):
        if n and value != 0:
            return n, 1 if value > 0 else -1
    return None, 0


def classify_shape(plus: EigenBranch, minus: EigenBranch) -> ShapeVerdict:
    """Trumpet when beta_N^+ - N**2 and beta_N^- - N**2 start with opposite signs."""
    if plus.N != minus.N or plus.order != minus.order:
        raise OrderMismatch(plus.order, minus.order)
    order_plus, sign_plus = _leading(plus.B)
    order_minus, sign_minus = _leading(minus.B)
    if plus.B == minus.B:
        classification = ShapeClassification.COLLAPSED
    elif order_plus is None or order_minus is None:
        classification = ShapeClassification.UNDETERMINED
    elif sign_plus != sign_minus:
        classification = ShapeClassification.TRUMPET
    else:
        classification = ShapeClassification.HORN
    return ShapeVerdict(
        N=plus.N,
        classification=classification,
        leading_orders=(order_plus, order_minus),
        leading_signs=(sign_plus, sign_minus),
    )


def second_tongue_sign(alpha2, gamma1, gamma2) -> Fraction:
    """Leading q**2 coefficient of L_2."""
    alpha2, gamma1, gamma2 = Fraction(alpha2), Fraction(gamma1), Fraction(gamma2)
    return gamma1 * gamma1 / 8 - gamma1 * alpha2 / 24 - gamma2 / 2


@dataclass(frozen=True)
class AsymptoticFit:
    N: int
    slope: float = math.nan
    intercept: float = math.nan
    coefficient: float = math.nan
    points: int = 0
    collapsed: bool = False

    @property
    def intercept_coefficient(self) -> float:
        return math.exp(self.intercept)


def asymptotic_order(records: Sequence[TongueRecord], floor: Optional[float] = None) -> AsymptoticFit:
    """Log-log fit of the tongue length against q.

    ``coefficient`` estimates |C_N| with the slope fixed at N and the first
    correction in q extrapolated away.
    """
    if not records:
        raise InsufficientData("no tongue records to fit")
    N = records[0].N
    if any(record.N != N for record in records):
        raise ValueError("records must share the same tongue index")
    if floor is None:
        floor = records[0].zero_length_floor
    kept = [record for record in records if record.length >= floor]
    if not kept:
        return AsymptoticFit(N=N, collapsed=True)
    if len(kept) < 4:
        raise InsufficientData(f"{len(kept)} usable points for N={N}, need at least 4")
    q = np.array([record.q for record in kept])
    length = np.array([record.length for record in kept])
    slope, intercept = np.polyfit(np.log(q), np.log(length), 1)
    _, log_coefficient = np.polyfit(q, np.log(length) - N * np.log(q), 1)
    return AsymptoticFit(
        N=N,
        slope=float(slope),
        intercept=float(intercept),
        coefficient=float(np.exp(log_coefficient)),
        points=len(kept),
    )


@dataclass(frozen=True)
class CoexistenceReport:
    detected: bool
    A: Optional[Fraction]
    B: Tuple[Fraction, ...]
    residual: Fraction
    scale: Optional[Fraction] = None
    quadratic: Optional[Fraction] = None
    n_ince: Optional[int] = None
    failing_order: Optional[int] = None


def _sympy_rational(value: Fraction):
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def ince_index(scale: Fraction) -> Optional[int]:
    """n with n(n+1) = 2 * scale, if it is a positive integer."""
    target = 2 * scale
    if target.denominator != 1 or target <= 0:
        return None
    n = (math.isqrt(1 + 4 * target.numerator) - 1) // 2
    return n if n * (n + 1) == target.numerator else None


def coexistence_check(osc: OscillatorSpec, coupling: CouplingSpec, L: LindstedtExpansion) -> CoexistenceReport:
    """Fit ``Omega g'' + A g + B~(q) + s g**2 = 0`` to the composed series g(u).

    The fit is linear in A, s and B~_1..B~_M and is solved exactly, one order
    of q at a time.  Detection needs every order consistent and s != 0; then
    ``g(u) = c Q`` with ``c = 3 / s`` and ``Q'' + A Q + B + 3 Q**2 = 0``.
    """
    if not osc.order == coupling.order == L.order:
        raise OrderMismatch(coupling.order, L.order)
    if coupling.is_zero:
        raise DegenerateFit("coupling g vanishes identically")
    order = L.order
    zero = CosPoly.zero()
    g = compose(coupling.gamma_k, coupling.max_power, L.u, order, zero)
    if all(p.is_zero() for p in g):
        raise DegenerateFit(f"g(u) vanishes through order {order}")
    square = cauchy_product(g, g, order, zero)

    A, s = sympy.symbols("A s")
    B_tilde = sympy.symbols(f"B1:{order + 1}")
    unknowns = [A, s, *B_tilde]

    levels = []
    for n in range(1, order + 1):
        fixed = sum((second_derivative(g[n - j]) * L.omega2[j] for j in range(n)), zero)
        size = max(len(fixed.coeffs), len(g[n].coeffs), len(square[n].coeffs), 1)
        equations = []
        for k in range(size):
            expr = (
                _sympy_rational(project(fixed, k))
                + A * _sympy_rational(project(g[n], k))
                + s * _sympy_rational(project(square[n], k))
            )
            if k == 0:
                expr += B_tilde[n - 1]
            if expr != 0:
                equations.append(expr)
        levels.append(equations)

    system = []
    solution = {}
    failing = None
    for n, equations in enumerate(levels, start=1):
        system.extend(equations)
        result = sympy.linsolve(system, unknowns)
        if result == sympy.S.EmptySet:
            failing = n
            logger.debug(f"coexistence fit inconsistent at order {n}")
            break
        solution = dict(zip(unknowns, next(iter(result))))

    free = set().union(*(value.free_symbols for value in solution.values()))
    # unconstrained unknowns are reported as zero
    substitution = {
        symbol: sympy.sympify(solution.get(symbol, 0)).subs({f: 0 for f in free}) for symbol in unknowns
    }
    residual = max(
        (abs(_fraction(expr.subs(substitution))) for equations in levels for expr in equations),
        default=Fraction(0),
    )

    determined = bool(solution) and not solution[A].free_symbols and not solution[s].free_symbols
    if failing is None and not determined:
        raise DegenerateFit(f"A and s are not determined through order {order}")

    fitted_A = _fraction(substitution[A]) if solution else None
    quadratic = _fraction(substitution[s]) if solution else None
    detected = failing is None and quadratic != 0
    scale = n_ince = None
    B = ()
    if detected:
        scale = 3 / quadratic
        B = tuple(_fraction(substitution[b]) / scale for b in B_tilde)
        n_ince = ince_index(scale)
        if n_ince is None:
            logger.warning(f"Lame structure found but Ince multiplier 2c = {2 * scale} is not n(n+1)")
    logger.info(f"coexistence fit: detected={detected}, A={fitted_A}, c={scale}, n={n_ince}")
    return CoexistenceReport(
        detected=detected,
        A=fitted_A,
        B=B,
        residual=residual,
        scale=scale,
        quadratic=quadratic,
        n_ince=n_ince,
        failing_order=failing,
    )


def expected_open_tongues(n_ince: int, half_period: bool = False) -> Tuple[int, ...]:
    """Tongue indices left open by an n-gap Lame coefficient.

    With odd f and even g the coefficient has period T/2, so only even
    indices survive.
    """
    step = 2 if half_period else 1
    return tuple(step * k for k in range(1, n_ince + 1))


def example1_closed_form(alpha, gamma_tilde, N: int) -> Fraction:
    """C_N for f = alpha x**2, g = 2 gamma_tilde alpha x."""
    if N < 1:
        raise InvalidSpec("N must be positive")
    alpha, gamma_tilde = Fraction(alpha), Fraction(gamma_tilde)
    product = Fraction(1)
    for k in range(N):
        product *= 2 * gamma_tilde - Fraction(k * (k + 1), 6)
    prefactor = Fraction((-1) ** N) * alpha ** N / (8 ** (N - 1) * math.factorial(N - 1) ** 2)
    return prefactor * product


def example2_energy(alpha, q) -> Fraction:
    """Rescaled energy 2q**2 + alpha q**4 / 4 of u'' + 4u + alpha u**3 = 0."""
    alpha, q = Fraction(alpha), Fraction(q)
    return 2 * q ** 2 + alpha * q ** 4 / 4


def example2_B_series(alpha, order: int) -> Tuple[Fraction, ...]:
    """Coefficients of B(q) = -4 alpha E(q) up to q**order, index 0 included."""
    alpha = Fraction(alpha)
    B = [Fraction(0)] * (order + 1)
    if order >= 2:
        B[2] = -8 * alpha
    if order >= 4:
        B[4] = -alpha ** 2
    return tuple(B)


def branch_pairs(series: HillCoefficientSeries, n_max: int) -> Dict[int, Tuple[EigenBranch, EigenBranch]]:
    return {
        N: (eigen_series(series, N, Parity.EVEN), eigen_series(series, N, Parity.ODD))
        for N in range(1, n_max + 1)
    }


def series_boundaries(plus: EigenBranch, minus: EigenBranch, q: float) -> Tuple[float, float]:
    """Truncated-series values (beta_N^+(q), beta_N^-(q))."""
    return plus.beta(q), minus.beta(q)


def trumpet_count_scenario(K: int, alphaK1, gammaK, order: Optional[int] = None) -> List[ShapeVerdict]:
    """Shapes of tongues 1..K when alpha_{K+1} and gamma_K lead f and g."""
    if K < 1 or K % 2 == 0:
        raise InvalidSpec(f"K must be an odd positive integer, got {K}")
    if Fraction(gammaK) == 0:
        raise InvalidSpec("gamma_K must be nonzero")
    order = order or K
    osc = OscillatorSpec(alpha={K + 1: alphaK1}, order=order)
    coupling = CouplingSpec(gamma={K: gammaK}, order=order)
    series = compose_G(coupling, expand(osc))
    return [classify_shape(*pair) for pair in branch_pairs(series, K).values()]


@dataclass(frozen=True)
class ChartRow:
    q: float
    beta0: float
    records: Tuple[TongueRecord, ...] = field(default_factory=tuple)

    def boundaries(self) -> List[float]:
        values = [self.beta0]
        for record in self.records:
            values.extend([record.beta_minus, record.beta_plus])
        return values

    def is_ordered(self) -> bool:
        """beta_0^+ < beta_1^- <= beta_1^+ < beta_2^- <= ..."""
        values = self.boundaries()
        for i in range(1, len(values)):
            strict = i % 2 == 1
            if values[i] < values[i - 1] or (strict and values[i] == values[i - 1]):
                return False
        return True


def stability_chart(problem_factory: Callable[[float], NumericProblem], q_grid: Iterable[float],
                    n_max: int) -> List[ChartRow]:
    rows = []
    for q in q_grid:
        problem = problem_factory(q)
        records = tuple(tongue_boundaries(problem, N) for N in range(1, n_max + 1))
        rows.append(ChartRow(q=float(q), beta0=boundary0(problem), records=records))
    return rows
