"""Hill coefficient series and the eigenvalue recursions.

In the rescaled time the Hill equation reads ``z'' + (lambda + G(tau, q)) z = 0``
with ``G = g(u) / Omega`` and ``beta = lambda * Omega``.  Each eigenvalue
branch starting from ``N**2`` is expanded as ``lambda = sum Lambda_n q**n`` with
Fourier coefficients ``z[k, n]`` of the eigenfunction.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .exceptions import InvalidSpec, OrderMismatch, UnsupportedParity
from .lindstedt import LindstedtExpansion, OscillatorSpec, clean_taylor, diagonal_A
from .trigpoly import CosPoly, cauchy_product, check_bits, compose, project

logger = logging.getLogger(__name__)


class Parity:
    EVEN = "+"
    ODD = "-"

    choices = (
        (EVEN, "even"),
        (ODD, "odd"),
    )

    values = (EVEN, ODD)


@dataclass(frozen=True)
class CouplingSpec:
    """Taylor data of ``g(x) = sum_{k>=1} gamma_k x**k``."""

    gamma: Mapping[int, Fraction] = field(default_factory=dict)
    order: int = 1

    def __post_init__(self):
        object.__setattr__(self, "gamma", clean_taylor(self.gamma, 1, "gamma"))
        if not isinstance(self.order, int) or self.order < 1:
            raise InvalidSpec(f"truncation order must be a positive integer, got {self.order!r}")

    def gamma_k(self, k: int) -> Fraction:
        return self.gamma.get(k, Fraction(0))

    @property
    def max_power(self) -> int:
        return max(self.gamma, default=0)

    @property
    def is_zero(self) -> bool:
        return not self.gamma

    @property
    def is_even(self) -> bool:
        return all(k % 2 == 0 for k in self.gamma)

    @property
    def leading_power(self) -> Optional[int]:
        return min(self.gamma, default=None)


@dataclass(frozen=True)
class HillCoefficientSeries:
    """``G[n]`` for n = 0..M (``G[0]`` is zero) and the Omega series used for beta."""

    G: Tuple[CosPoly, ...]
    omega2: Tuple[Fraction, ...]
    source: Optional[LindstedtExpansion] = None

    def __post_init__(self):
        if not self.G or not self.G[0].is_zero():
            raise InvalidSpec("G[0] must be the zero polynomial")
        if len(self.omega2) != len(self.G):
            raise OrderMismatch(len(self.G) - 1, len(self.omega2) - 1)

    @classmethod
    def handcrafted(cls, polys: Sequence[CosPoly]) -> "HillCoefficientSeries":
        """Series ``G[1], G[2], ...`` given directly, with Omega identically 1."""
        order = len(polys)
        return cls(
            G=(CosPoly.zero(),) + tuple(polys),
            omega2=(Fraction(1),) + (Fraction(0),) * order,
        )

    @property
    def order(self) -> int:
        return len(self.G) - 1

    @property
    def reach(self) -> int:
        """Largest growth of the harmonic support per order of q."""
        return max([1] + [math.ceil(self.G[s].degree / s) for s in range(1, len(self.G))])

    def diagonal(self) -> Tuple[Fraction, ...]:
        return tuple(project(self.G[n], n) for n in range(len(self.G)))


@dataclass(frozen=True)
class EigenBranch:
    """One eigenvalue branch; ``Lambda[0] = B[0] = N**2``."""

    N: int
    parity: str
    Lambda: Tuple[Fraction, ...]
    B: Tuple[Fraction, ...]
    z_table: Mapping[Tuple[int, int], Fraction]

    @property
    def order(self) -> int:
        return len(self.B) - 1

    def z(self, k: int, n: int) -> Fraction:
        return self.z_table.get((k, n), Fraction(0))

    def beta(self, q: float) -> float:
        """Truncated series for beta evaluated in double precision."""
        value = 0.0
        for coefficient in reversed(self.B):
            value = value * q + float(coefficient)
        return value


def compose_G(coupling: CouplingSpec, L: LindstedtExpansion) -> HillCoefficientSeries:
    if coupling.order != L.order:
        raise OrderMismatch(coupling.order, L.order)
    order = L.order
    zero = CosPoly.zero()
    g = compose(coupling.gamma_k, coupling.max_power, L.u, order, zero)
    G = cauchy_product(g, L.kappa, order, zero)
    logger.debug(f"composed G to order {order}: degrees {[p.degree for p in G]}")
    return HillCoefficientSeries(G=G, omega2=L.omega2, source=L)


def eigen_series(series: HillCoefficientSeries, N: int, parity: str) -> EigenBranch:
    if not isinstance(N, int) or N < 0:
        raise InvalidSpec(f"tongue index must be a non-negative integer, got {N!r}")
    if parity not in Parity.values:
        raise InvalidSpec(f"unknown parity {parity!r}")
    if N == 0 and parity == Parity.ODD:
        raise UnsupportedParity("the N = 0 branch only has an even eigenfunction")

    order = series.order
    reach = series.reach
    harmonics = [
        tuple((i, c) for i, c in enumerate(series.G[s].coeffs) if c != 0) for s in range(order + 1)
    ]
    z: Dict[Tuple[int, int], Fraction] = {}
    if N == 0:
        z[(0, 0)] = Fraction(1)
    else:
        z[(N, 0)] = Fraction(1)
        z[(-N, 0)] = Fraction(1 if parity == Parity.EVEN else -1)

    def coupling(k: int, n: int) -> Fraction:
        total = Fraction(0)
        for s in range(1, n + 1):
            for i, c in harmonics[s]:
                pair = z.get((k - 2 * i, n - s), 0) + z.get((k + 2 * i, n - s), 0)
                if pair:
                    total += c * pair
        return total / 2

    Lambda = [Fraction(N * N)]
    for n in range(1, order + 1):
        Lambda.append(-coupling(N, n))
        bound = N + 2 * reach * n
        level = []
        for k in range(-bound, bound + 1, 2):
            if k * k == N * N:
                continue
            rhs = -coupling(k, n) - sum(
                (Lambda[s] * z.get((k, n - s), 0) for s in range(1, n + 1)), Fraction(0)
            )
            value = rhs / (N * N - k * k)
            if value:
                z[(k, n)] = value
                level.append(value)
        check_bits(level + [Lambda[n]])
        logger.debug(f"N={N}{parity} level {n}: Lambda={Lambda[n]}, {len(level)} harmonics")

    B = tuple(
        sum((Lambda[j] * series.omega2[n - j] for j in range(n + 1)), Fraction(0))
        for n in range(order + 1)
    )
    return EigenBranch(N=N, parity=parity, Lambda=tuple(Lambda), B=B, z_table=z)


def in_cone(N: int, k: int, n: int) -> bool:
    """Support predicate: (k, n) lies in a forward cone from (N, 0) or (-N, 0)."""
    return abs(k - N) <= 2 * n or abs(k + N) <= 2 * n


def cone_violations(branch: EigenBranch):
    return [(k, n) for (k, n), value in branch.z_table.items() if value and not in_cone(branch.N, k, n)]


def region_coincidence_violations(plus: EigenBranch, minus: EigenBranch):
    """Entries with ``k > 2n - N`` where the two parities disagree."""
    if plus.N != minus.N or plus.order != minus.order:
        raise OrderMismatch(plus.order, minus.order)
    N = plus.N
    keys = set(plus.z_table) | set(minus.z_table)
    return sorted((k, n) for k, n in keys if k > 2 * n - N and plus.z(k, n) != minus.z(k, n))


def leading_coefficient_fast(diagonal: Sequence[Fraction], N: int) -> Fraction:
    """C_N from the diagonal entries ``diagonal[s] = G_{s,s}`` alone."""
    if N < 1:
        raise InvalidSpec("leading coefficient needs N >= 1")

    def G(s):
        return Fraction(diagonal[s]) if s < len(diagonal) else Fraction(0)

    r = [Fraction(2)]
    for p in range(1, N):
        total = sum((G(s) * r[p - s] for s in range(1, p + 1)), Fraction(0))
        r.append(-total / (8 * p * (N - p)))
    return -sum((G(N - p) * r[p] for p in range(N)), Fraction(0)) / 2


def diagonal_G(osc: OscillatorSpec, coupling: CouplingSpec) -> Tuple[Fraction, ...]:
    """G_{n,n} for n = 0..M (index 0 is zero), through the A_n coefficients."""
    if osc.order != coupling.order:
        raise OrderMismatch(osc.order, coupling.order)
    A = diagonal_A(osc)
    composed = compose(coupling.gamma_k, coupling.max_power, A, osc.order, Fraction(0))
    return tuple(2 * c for c in composed)


@dataclass(frozen=True)
class MathieuCheck:
    ok: bool
    violation: Optional[Tuple[int, int]] = None
    predicted_coefficient: Optional[Fraction] = None

    def __bool__(self):
        return self.ok

    @property
    def predicted_order(self) -> Optional[int]:
        """Order in q of L_k predicted for the violating harmonic k."""
        return self.violation[0] if self.violation else None


def check_generalized_mathieu(series: HillCoefficientSeries) -> MathieuCheck:
    """Is every G_n of harmonic degree at most n?

    The first offending ``(n, k)`` predicts ``L_k(q) = -G_{k,n} q**n + ...``.
    """
    for n in range(1, series.order + 1):
        for k in series.G[n].support:
            if k > n:
                coefficient = -project(series.G[n], k)
                logger.info(f"G_{n} has harmonic {k}: L_{k} predicted of order {n}")
                return MathieuCheck(ok=False, violation=(n, k), predicted_coefficient=coefficient)
    return MathieuCheck(ok=True)


def leading_coefficient_binomial(K: int, N: int, gamma_K) -> Fraction:
    """Coefficient of q**K in L_N when gamma_K is the first nonzero Taylor coefficient."""
    if K < 1 or N < 1:
        raise InvalidSpec("K and N must be positive")
    if N > K or (K - N) % 2:
        return Fraction(0)
    return -Fraction(gamma_K) * Fraction(2, 2 ** K) * math.comb(K, (K - N) // 2)
