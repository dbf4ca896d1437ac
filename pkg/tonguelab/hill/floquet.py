"""Double-precision Floquet oracle.

Integrates ``u'' + 4u + f(u) = 0`` together with the Hill equation
``z'' + (beta + g(u)) z = 0`` and locates the tongue boundaries beta_N^+- at a
finite amplitude q.  Nothing here uses the perturbation series.

Because g(u(t)) is even in t, periodic and anti-periodic eigenvalues split by
parity into simple zeros of the half-period values of the fundamental
solutions ``y1`` (y1(0) = 1, y1'(0) = 0) and ``y2`` (y2(0) = 0, y2'(0) = 1):

    ==========  ================  ================
    N           even branch       odd branch
    ==========  ================  ================
    even        y1'(T/2) = 0      y2(T/2) = 0
    odd         y1(T/2) = 0       y2'(T/2) = 0
    ==========  ================  ================
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Mapping, NamedTuple, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .conf import hill_setting
from .exceptions import (
    AmbiguousBracket,
    BracketNotFound,
    InadmissibleAmplitude,
    IntegratorFailure,
    NoTurningPoint,
    QuadratureNonConvergent,
)
from .hillseries import CouplingSpec, Parity
from .lindstedt import OscillatorSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleSettings:
    method: str
    rtol: float
    atol: float
    refinement_factor: int
    quadrature_tolerance: float
    quadrature_max_nodes: int
    root_tolerance: float
    scan_points: int
    window_factor: float
    tangency_tolerance: float
    zero_length_floor: float
    determinant_tolerance: float
    max_amplitude: float
    turning_point_search: int

    _SETTING_NAMES = {
        "method": "INTEGRATOR_METHOD",
        "rtol": "INTEGRATOR_RTOL",
        "atol": "INTEGRATOR_ATOL",
    }

    @classmethod
    def from_settings(cls, **overrides) -> "OracleSettings":
        """Defaults from ``settings.HILL``; keyword overrides win."""
        values = {}
        for fld in dataclasses.fields(cls):
            name = cls._SETTING_NAMES.get(fld.name, fld.name.upper())
            value = overrides.pop(fld.name, hill_setting(name))
            if fld.type is int and not isinstance(value, int):
                # JSON and settings files may spell counts as floats
                if not float(value).is_integer():
                    raise TypeError(f"oracle setting {fld.name} must be an integer, got {value!r}")
                value = int(value)
            values[fld.name] = value
        if overrides:
            raise TypeError(f"unknown oracle settings: {sorted(overrides)}")
        return cls(**values)

    def refined(self) -> "OracleSettings":
        """Same settings with the integrator tolerances tightened."""
        return dataclasses.replace(
            self,
            rtol=self.rtol / self.refinement_factor,
            atol=self.atol / self.refinement_factor,
        )


def _polynomial(coeffs: Mapping[int, object], scale: float = 1.0) -> Polynomial:
    degree = max(coeffs, default=0)
    values = [0.0] * (degree + 1)
    for k, value in coeffs.items():
        values[k] = scale * float(value)
    return Polynomial(values)


class HalfPeriod(NamedTuple):
    y1: float
    dy1: float
    y2: float
    dy2: float

    def discriminant(self) -> float:
        """Trace of the monodromy matrix from the half-period values."""
        return 2.0 * (self.y1 * self.dy2 + self.dy1 * self.y2)


class NumericProblem:
    """The coupled system at one amplitude, with polynomial f and g."""

    def __init__(self, alpha: Mapping[int, object], gamma: Mapping[int, object], q: float,
                 settings: Optional[OracleSettings] = None, coupling_scale: float = 1.0):
        self.settings = settings or OracleSettings.from_settings()
        self.alpha = dict(alpha)
        self.gamma = dict(gamma)
        self.q = float(q)
        self.coupling_scale = coupling_scale
        if not 0.0 < self.q <= self.settings.max_amplitude:
            raise InadmissibleAmplitude(
                f"amplitude {q!r} outside (0, {self.settings.max_amplitude}]"
            )
        self.f = _polynomial(self.alpha)
        self.g = _polynomial(self.gamma, coupling_scale)
        self.force = Polynomial([0.0, 4.0]) + self.f
        self.potential = Polynomial([0.0, 0.0, 2.0]) + self.f.integ()
        self.energy = float(self.potential(self.q))

        grid = np.linspace(0.0, self.q, 257)[1:]
        if np.any(self.force(grid) <= 0.0):
            raise InadmissibleAmplitude(f"4x + f(x) vanishes on (0, {self.q!r}]")

    @classmethod
    def from_specs(cls, osc: OscillatorSpec, coupling: CouplingSpec, q: float,
                   settings: Optional[OracleSettings] = None) -> "NumericProblem":
        return cls(osc.alpha, coupling.gamma, q, settings)

    def with_settings(self, settings: OracleSettings) -> "NumericProblem":
        return NumericProblem(self.alpha, self.gamma, self.q, settings, self.coupling_scale)

    def with_coupling_scale(self, scale: float) -> "NumericProblem":
        return NumericProblem(self.alpha, self.gamma, self.q, self.settings, scale)

    def __repr__(self):
        return f"<NumericProblem q={self.q!r} alpha={self.alpha} gamma={self.gamma}>"

    @cached_property
    def turning_points(self) -> Tuple[float, float]:
        """(x-, x+) with V = E; x+ is the amplitude itself."""
        excess = self.potential - self.energy
        steps = self.settings.turning_point_search
        grid = -self.q * np.arange(1, 4 * steps + 1) / steps
        values = excess(grid)
        previous_x = 0.0
        for x, value in zip(grid, values):
            if self.force(x) >= 0.0:
                # potential stopped decreasing towards the left before reaching E
                break
            if value >= 0.0:
                x_minus = brentq(excess, x, previous_x, xtol=1e-15)
                return x_minus, self.q
            previous_x = x
        raise NoTurningPoint(f"V(x) = E has no root left of the origin for q={self.q!r}")

    @cached_property
    def period(self) -> float:
        x_minus, x_plus = self.turning_points
        mid, half = (x_plus + x_minus) / 2, (x_plus - x_minus) / 2
        reduced, _ = divmod(self.potential - self.energy, Polynomial.fromroots([x_minus, x_plus]))

        def estimate(nodes):
            theta, weights = leggauss(nodes)
            x = mid + half * np.sin(theta * np.pi / 2)
            w = reduced(x)
            if np.any(w <= 0.0):
                raise InadmissibleAmplitude(f"energy well is not simple for q={self.q!r}")
            return np.pi * float(np.sum(weights / np.sqrt(2.0 * w)))

        nodes = 16
        previous = estimate(nodes)
        while nodes < self.settings.quadrature_max_nodes:
            nodes *= 2
            current = estimate(nodes)
            if abs(current - previous) <= self.settings.quadrature_tolerance * current:
                logger.debug(f"period {current!r} at q={self.q!r} with {nodes} nodes")
                return current
            previous = current
        raise QuadratureNonConvergent(f"period quadrature did not settle for q={self.q!r}")

    @property
    def half_period(self) -> float:
        return self.period / 2

    @property
    def omega2(self) -> float:
        """Numerical Omega = (pi / T)**2."""
        return (math.pi / self.period) ** 2

    def rhs(self, beta: float) -> Callable:
        f, g = self.f, self.g

        def rhs(t, y):
            u, v, z1, w1, z2, w2 = y
            k = beta + g(u)
            return [v, -4.0 * u - f(u), w1, -k * z1, w2, -k * z2]

        return rhs

    def integrate(self, beta: float, t_end: float) -> np.ndarray:
        y0 = [self.q, 0.0, 1.0, 0.0, 0.0, 1.0]
        solution = solve_ivp(
            self.rhs(beta),
            (0.0, t_end),
            y0,
            method=self.settings.method,
            rtol=self.settings.rtol,
            atol=self.settings.atol,
        )
        if not solution.success:
            raise IntegratorFailure(f"beta={beta!r}, q={self.q!r}: {solution.message}")
        return solution.y[:, -1]


def period(problem: NumericProblem) -> float:
    return problem.period


def return_map_period(problem: NumericProblem) -> float:
    """Period from direct integration until u' next changes sign upwards."""

    def turning(t, y):
        return y[1]

    turning.terminal = True
    turning.direction = 1

    solution = solve_ivp(
        lambda t, y: [y[1], -4.0 * y[0] - problem.f(y[0])],
        (0.0, 10 * math.pi),
        [problem.q, 0.0],
        method=problem.settings.method,
        rtol=problem.settings.rtol,
        atol=problem.settings.atol,
        events=turning,
    )
    if not solution.success or not len(solution.t_events[0]):
        raise IntegratorFailure(f"no return to a turning point for q={problem.q!r}")
    return 2.0 * float(solution.t_events[0][0])


def energy_drift(problem: NumericProblem, samples: int = 257) -> float:
    """Largest relative energy error of the oscillator over one period."""
    times = np.linspace(0.0, problem.period, samples)
    solution = solve_ivp(
        lambda t, y: [y[1], -4.0 * y[0] - problem.f(y[0])],
        (0.0, problem.period),
        [problem.q, 0.0],
        method=problem.settings.method,
        rtol=problem.settings.rtol,
        atol=problem.settings.atol,
        t_eval=times,
    )
    if not solution.success:
        raise IntegratorFailure(solution.message)
    u, v = solution.y
    energy = problem.potential(u) + 0.5 * v * v
    drift = float(np.max(np.abs(energy - problem.energy))) / problem.energy
    if drift > 1e-10:
        logger.warning(f"energy drift {drift:.3e} at q={problem.q!r}")
    return drift


def monodromy(problem: NumericProblem, beta: float) -> np.ndarray:
    """Fundamental matrix [[y1, y2], [y1', y2']] after one period."""
    state = problem.integrate(beta, problem.period)
    matrix = np.array([[state[2], state[4]], [state[3], state[5]]])
    error = abs(float(np.linalg.det(matrix)) - 1.0)
    if error > problem.settings.determinant_tolerance:
        logger.warning(f"monodromy determinant off by {error:.3e} at beta={beta!r}, q={problem.q!r}")
    return matrix


def half_period_solutions(problem: NumericProblem, beta: float) -> HalfPeriod:
    state = problem.integrate(beta, problem.half_period)
    return HalfPeriod(y1=state[2], dy1=state[3], y2=state[4], dy2=state[5])


@dataclass(frozen=True)
class FloquetResult:
    beta: float
    discriminant: float
    determinant: float

    @property
    def stable(self) -> bool:
        return abs(self.discriminant) < 2.0


def discriminant(problem: NumericProblem, beta: float) -> FloquetResult:
    matrix = monodromy(problem, beta)
    return FloquetResult(
        beta=beta,
        discriminant=float(np.trace(matrix)),
        determinant=float(np.linalg.det(matrix)),
    )


def _boundary_condition(N: int, parity: str) -> Callable[[HalfPeriod], float]:
    if N % 2 == 0:
        return (lambda h: h.dy1) if parity == Parity.EVEN else (lambda h: h.y2)
    return (lambda h: h.y1) if parity == Parity.EVEN else (lambda h: h.dy2)


def scan_window(problem: NumericProblem, N: int) -> Tuple[float, float]:
    omega2 = problem.omega2
    centre = N * N * omega2
    half_width = problem.settings.window_factor * max(1, 2 * N - 1) * min(1.0, omega2)
    return centre - half_width, centre + half_width


def _brackets(func, lo: float, hi: float, points: int) -> Tuple[List[Tuple[float, float]], float]:
    grid = np.linspace(lo, hi, points)
    values = [func(beta) for beta in grid]
    brackets = []
    for i in range(points - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            brackets.append((grid[i], grid[i]))
        elif a * b < 0.0:
            brackets.append((grid[i], grid[i + 1]))
    if values[-1] == 0.0:
        brackets.append((grid[-1], grid[-1]))
    return brackets, float(grid[1] - grid[0])


def _eigenvalue(problem: NumericProblem, N: int, parity: str, window) -> Tuple[float, float]:
    condition = _boundary_condition(N, parity)

    def func(beta):
        return condition(half_period_solutions(problem, beta))

    lo, hi = window
    brackets, width = _brackets(func, lo, hi, problem.settings.scan_points)
    if not brackets:
        raise BracketNotFound(N, problem.q, window)
    if len(brackets) > 1:
        raise AmbiguousBracket(N, problem.q, len(brackets))
    a, b = brackets[0]
    if a == b:
        return float(a), width
    root = brentq(func, a, b, xtol=problem.settings.root_tolerance)
    logger.debug(f"N={N}{parity} q={problem.q!r}: root {root!r} in [{a!r}, {b!r}]")
    return float(root), width


@dataclass(frozen=True)
class TongueRecord:
    N: int
    q: float
    beta_even: float
    beta_odd: float
    residual_even: float
    residual_odd: float
    bracket_width: float
    zero_length_floor: float = 1e-10

    @property
    def beta_minus(self) -> float:
        return min(self.beta_even, self.beta_odd)

    @property
    def beta_plus(self) -> float:
        return max(self.beta_even, self.beta_odd)

    @property
    def length(self) -> float:
        return self.beta_plus - self.beta_minus

    @property
    def signed_length(self) -> float:
        """beta_N^+ - beta_N^-, the quantity whose leading term is C_N q**N."""
        return self.beta_even - self.beta_odd

    @property
    def numerically_zero(self) -> bool:
        return self.length < self.zero_length_floor


def tongue_boundaries(problem: NumericProblem, N: int) -> TongueRecord:
    if N < 1:
        raise ValueError("tongue index must be positive; use boundary0 for N = 0")
    window = scan_window(problem, N)
    sigma = 2.0 if N % 2 == 0 else -2.0
    beta_even, width = _eigenvalue(problem, N, Parity.EVEN, window)
    beta_odd, _ = _eigenvalue(problem, N, Parity.ODD, window)
    residual_even = abs(half_period_solutions(problem, beta_even).discriminant() - sigma)
    residual_odd = abs(half_period_solutions(problem, beta_odd).discriminant() - sigma)
    record = TongueRecord(
        N=N,
        q=problem.q,
        beta_even=beta_even,
        beta_odd=beta_odd,
        residual_even=residual_even,
        residual_odd=residual_odd,
        bracket_width=width,
        zero_length_floor=problem.settings.zero_length_floor,
    )
    if record.numerically_zero:
        middle = (beta_even + beta_odd) / 2
        gap = abs(half_period_solutions(problem, middle).discriminant() - sigma)
        if gap > problem.settings.tangency_tolerance:
            logger.warning(f"collapsed tongue N={N} at q={problem.q!r} misses tangency by {gap:.3e}")
    logger.debug(f"tongue N={N} q={problem.q!r}: [{record.beta_minus!r}, {record.beta_plus!r}]")
    return record


def boundary0(problem: NumericProblem) -> float:
    """beta_0^+, the right end of the unbounded instability interval."""
    half_width = problem.settings.window_factor * min(1.0, problem.omega2)
    window = (-half_width, half_width)
    beta, _ = _eigenvalue(problem, 0, Parity.EVEN, window)
    return beta
