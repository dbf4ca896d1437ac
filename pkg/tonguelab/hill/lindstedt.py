"""Poincare-Lindstedt expansion of the driving oscillator.

The oscillator ``u'' + 4u + f(u) = 0, u(0) = q, u'(0) = 0`` is rescaled to a
fixed period pi by ``tau = omega(q) t``.  With ``Omega = omega**2`` the
solution is ``u = sum_n q**n u_n(tau)``; each level removes the secular
cos(2 tau) term from its source to fix one coefficient of ``Omega``.

All outputs are formal power series in q; no convergence radius is estimated.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from .exceptions import InvalidSpec
from .trigpoly import CosPoly, as_fraction, mul, project, second_derivative, solve_harmonic

logger = logging.getLogger(__name__)


def clean_taylor(coeffs: Mapping[int, object], lowest: int, what: str) -> Dict[int, Fraction]:
    clean = {}
    for k, value in dict(coeffs).items():
        if not isinstance(k, int) or k < lowest:
            raise InvalidSpec(f"{what} index {k!r} must be an integer >= {lowest}")
        value = as_fraction(value)
        if value != 0:
            clean[k] = value
    return clean


@dataclass(frozen=True)
class OscillatorSpec:
    """Taylor data of ``f(x) = sum_{k>=2} alpha_k x**k`` and the truncation order."""

    alpha: Mapping[int, Fraction] = field(default_factory=dict)
    order: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", clean_taylor(self.alpha, 2, "alpha"))
        if not isinstance(self.order, int) or self.order < 1:
            raise InvalidSpec(f"truncation order must be a positive integer, got {self.order!r}")

    def alpha_k(self, k: int) -> Fraction:
        return self.alpha.get(k, Fraction(0))

    @property
    def max_power(self) -> int:
        return max(self.alpha, default=0)

    @property
    def is_odd(self) -> bool:
        """True when f only has odd powers."""
        return all(k % 2 == 1 for k in self.alpha)


@dataclass(frozen=True)
class LindstedtExpansion:
    """The series u_n (``u[0]`` is the zero polynomial), Omega_n and 1/Omega."""

    spec: OscillatorSpec
    u: Tuple[CosPoly, ...]
    omega2: Tuple[Fraction, ...]
    kappa: Tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return self.spec.order


def reciprocal_series(series, order: int) -> Tuple[Fraction, ...]:
    """1 / series for a series with unit constant term."""
    if series[0] != 1:
        raise InvalidSpec("reciprocal needs a unit constant term")
    inverse = [Fraction(1)]
    for n in range(1, order + 1):
        # terms past the end of a short series are zero
        terms = range(1, min(n, len(series) - 1) + 1)
        inverse.append(-sum((series[j] * inverse[n - j] for j in terms), Fraction(0)))
    return tuple(inverse)


def expand(spec: OscillatorSpec) -> LindstedtExpansion:
    order = spec.order
    u = [CosPoly.zero(), CosPoly.harmonic(1)]
    omega2 = [Fraction(1)]
    # powers[m][n] is the q**n coefficient of u**m, filled level by level
    powers = {1: {1: u[1]}}

    for n in range(2, order + 2):
        nonlinear = CosPoly.zero()
        # u**m past the highest power of f is never needed
        for m in range(2, min(n, spec.max_power) + 1):
            row = powers.setdefault(m, {})
            row[n] = _power_coefficient(powers, u, m, n)
            alpha = spec.alpha_k(m)
            if alpha:
                nonlinear = nonlinear + row[n] * alpha
        # F_n without its unknown Omega_{n-1} u_1'' = -4 Omega_{n-1} cos(2 tau) term
        source = -nonlinear
        for j in range(1, n - 1):
            source = source - second_derivative(u[n - j]) * omega2[j]
        omega_next = -project(source, 1) / 4
        omega2.append(omega_next)
        if n > order:
            break
        source = source + CosPoly.harmonic(1, 4 * omega_next)
        u.append(solve_harmonic(source))
        powers[1][n] = u[n]
        logger.debug(f"lindstedt level {n}: Omega_{n - 1} = {omega_next}, deg u_{n} = {u[n].degree}")

    kappa = reciprocal_series(omega2, order)
    logger.info(f"Lindstedt expansion to order {order} for alpha={dict(spec.alpha)}")
    return LindstedtExpansion(spec=spec, u=tuple(u), omega2=tuple(omega2), kappa=kappa)


def _power_coefficient(powers, u, m: int, n: int) -> CosPoly:
    """q**n coefficient of u**m from lower powers; every index is >= 1."""
    total = CosPoly.zero()
    lower = powers[m - 1]
    for i in range(1, n - m + 2):
        term = lower.get(n - i)
        if term is not None and i < len(u):
            total = total + mul(u[i], term)
    return total


def source_term(expansion: LindstedtExpansion, n: int) -> CosPoly:
    """F_n rebuilt from the stored expansion by explicit products.

    ``u_n'' + 4 u_n = F_n`` holds for every ``2 <= n <= order``.
    """
    if not 2 <= n <= expansion.order:
        raise ValueError(f"source term defined for 2 <= n <= {expansion.order}")
    u = expansion.u
    source = CosPoly.zero()
    for k in range(1, n):
        source = source - second_derivative(u[n - k]) * expansion.omega2[k]
    series = list(u[: n + 1])
    power = list(series)
    for m in range(2, min(n, expansion.spec.max_power) + 1):
        power = [
            sum((mul(power[i], series[j - i]) for i in range(j + 1)), CosPoly.zero())
            for j in range(n + 1)
        ]
        alpha = expansion.spec.alpha_k(m)
        if alpha:
            source = source - power[n] * alpha
    return source


def diagonal_A(spec: OscillatorSpec) -> Tuple[Fraction, ...]:
    """Leading harmonic coefficients A_n = P_{2n}[u_n] / 2, index 0 unused.

    Obtained without the full expansion from
    ``4(n**2 - 1) A_n = sum_m alpha_m [psi**m]_n`` with ``psi = sum A_n q**n``.
    """
    order = spec.order
    A = [Fraction(0), Fraction(1, 2)]
    powers = {1: {1: A[1]}}
    for n in range(2, order + 1):
        total = Fraction(0)
        for m in range(2, n + 1):
            lower = powers[m - 1]
            value = sum((A[i] * lower.get(n - i, 0) for i in range(1, n - m + 2)), Fraction(0))
            powers.setdefault(m, {})[n] = value
            total += spec.alpha_k(m) * value
        A.append(total / (4 * (n * n - 1)))
        powers[1][n] = A[n]
    return tuple(A[: order + 1])


def secular_integral(p: CosPoly, K: int) -> Fraction:
    """(2/pi) * integral of p(tau) cos(2 K tau) over a period, by orthogonality.

    For ``K = 0`` the mean value of ``p`` is returned.
    """
    return project(p, K)
