"""Exact arithmetic on even, pi-periodic cosine polynomials.

A :class:`CosPoly` stores ``sum_k c_k cos(2 k tau)`` with rational coefficients.
Every series module builds on it, so values are immutable and comparisons are
exact.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence, Tuple, TypeVar, Union

from .conf import hill_setting
from .exceptions import CoefficientOverflow, ResonantRHS

T = TypeVar("T")

Scalar = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational, str)):
        return Fraction(value)
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def check_bits(values: Iterable[Fraction], limit=None) -> None:
    if limit is None:
        limit = hill_setting("COEFFICIENT_BIT_LIMIT")
    for value in values:
        bits = max(value.numerator.bit_length(), value.denominator.bit_length())
        if bits > limit:
            raise CoefficientOverflow(bits, limit)


@dataclass(frozen=True)
class CosPoly:
    """Even cosine polynomial; ``coeffs[k]`` multiplies ``cos(2 k tau)``."""

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [as_fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def zero(cls) -> "CosPoly":
        return cls(())

    @classmethod
    def constant(cls, value: Scalar) -> "CosPoly":
        return cls((value,))

    @classmethod
    def harmonic(cls, k: int, value: Scalar = 1) -> "CosPoly":
        """``value * cos(2 k tau)``."""
        if k < 0:
            raise ValueError("harmonic index must be non-negative")
        return cls((0,) * k + (value,))

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, c in enumerate(self.coeffs) if c != 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        if not isinstance(other, CosPoly):
            other = CosPoly.constant(as_fraction(other))
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return CosPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CosPoly):
            return mul(self, other)
        factor = as_fraction(other)
        return CosPoly(tuple(c * factor for c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / as_fraction(other))

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = CosPoly.constant(1)
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def at_origin(self) -> Fraction:
        """Exact value at tau = 0, the coefficient sum."""
        return sum(self.coeffs, Fraction(0))

    def __call__(self, tau: float) -> float:
        return math.fsum(float(c) * math.cos(2 * k * tau) for k, c in enumerate(self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if k == 0 else f"{c}*cos({2 * k}t)")
        return " + ".join(terms)


def add(a: CosPoly, b: CosPoly) -> CosPoly:
    size = max(len(a.coeffs), len(b.coeffs))
    padded_a = a.coeffs + (Fraction(0),) * (size - len(a.coeffs))
    padded_b = b.coeffs + (Fraction(0),) * (size - len(b.coeffs))
    return CosPoly(tuple(x + y for x, y in zip(padded_a, padded_b)))


def mul(a: CosPoly, b: CosPoly) -> CosPoly:
    """Product via cos(2i)cos(2j) = (cos(2(i+j)) + cos(2|i-j|)) / 2."""
    if a.is_zero() or b.is_zero():
        return CosPoly.zero()
    out = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ci in enumerate(a.coeffs):
        if ci == 0:
            continue
        for j, dj in enumerate(b.coeffs):
            if dj == 0:
                continue
            half = ci * dj / 2
            out[i + j] += half
            out[abs(i - j)] += half
    check_bits(out)
    return CosPoly(tuple(out))


def second_derivative(a: CosPoly) -> CosPoly:
    return CosPoly(tuple(-4 * k * k * c for k, c in enumerate(a.coeffs)))


def project(a: CosPoly, n: int) -> Fraction:
    """The cos(2 n tau) coefficient of ``a``."""
    if n < 0:
        raise ValueError("harmonic index must be non-negative")
    if n >= len(a.coeffs):
        return Fraction(0)
    return a.coeffs[n]


def solve_harmonic(rhs: CosPoly) -> CosPoly:
    """Solve w'' + 4w = rhs with w(0) = w'(0) = 0.

    The right-hand side must be free of the resonant cos(2 tau) harmonic.
    """
    resonant = project(rhs, 1)
    if resonant != 0:
        raise ResonantRHS(resonant)
    coeffs = [Fraction(0)] * max(len(rhs.coeffs), 2)
    for k, c in enumerate(rhs.coeffs):
        if k != 1:
            coeffs[k] = c / (4 - 4 * k * k)
    # homogeneous cos(2 tau) term fixes w(0) = 0
    coeffs[1] = -sum(coeffs, Fraction(0))
    check_bits(coeffs)
    return CosPoly(tuple(coeffs))


def cauchy_product(a: Sequence[T], b: Sequence[T], order: int, zero: T) -> Tuple[T, ...]:
    """Truncated product of two power series in q given by coefficient lists."""
    out = []
    for n in range(order + 1):
        total = zero
        for i in range(n + 1):
            if i < len(a) and n - i < len(b):
                total = total + a[i] * b[n - i]
        out.append(total)
    return tuple(out)


def compose(
    taylor: Callable[[int], Fraction],
    max_power: int,
    series: Sequence[T],
    order: int,
    zero: T,
) -> Tuple[T, ...]:
    """Coefficients of ``sum_k taylor(k) * series**k`` up to q**order.

    ``series`` must have a vanishing constant term, so powers beyond ``order``
    never contribute and ``max_power`` may be capped there.
    """
    series = tuple(series[: order + 1]) + (zero,) * max(0, order + 1 - len(series))
    result = [zero] * (order + 1)
    power = series
    for k in range(1, min(max_power, order) + 1):
        if k > 1:
            power = cauchy_product(power, series, order, zero)
        c = taylor(k)
        if c != 0:
            result = [r + p * c for r, p in zip(result, power)]
    return tuple(result)
