"""Verification suite behind ``manage.py verify``.

Exact checks compare rational series identities with ``==``.  Oracle checks
integrate the coupled system and can be skipped with ``--skip-oracle``.
"""
import logging
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Mapping, Sequence, Tuple

import numpy as np

from .config import RunConfig
from .exceptions import HillError, VerificationFailure
from .floquet import (
    NumericProblem,
    OracleSettings,
    TongueRecord,
    energy_drift,
    half_period_solutions,
    monodromy,
    return_map_period,
    tongue_boundaries,
)
from .hillseries import (
    CouplingSpec,
    HillCoefficientSeries,
    Parity,
    check_generalized_mathieu,
    compose_G,
    cone_violations,
    diagonal_G,
    eigen_series,
    leading_coefficient_binomial,
    leading_coefficient_fast,
    region_coincidence_violations,
)
from .lindstedt import OscillatorSpec, diagonal_A, expand, source_term
from .tongues import (
    ShapeClassification,
    asymptotic_order,
    branch_pairs,
    classify_shape,
    coexistence_check,
    example1_closed_form,
    example2_B_series,
    expected_open_tongues,
    series_boundaries,
    stability_chart,
    trumpet_count_scenario,
)
from .trigpoly import CosPoly, cauchy_product, project, second_derivative

logger = logging.getLogger(__name__)

# random specs are drawn from a fixed stream so reports are reproducible
SEED = 1729

NOISE_FLOOR = 1e-9
CLOSED_LENGTH = 1e-8
FIRST_OPEN_LENGTH = 1e-4
# higher surviving tongues are O(q**N) and fall well below 1e-4 at q = 0.1
OPEN_LENGTH = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def expect(condition, message: str) -> None:
    if not condition:
        raise VerificationFailure(message)


def random_rational(rng: random.Random, bound: int = 9, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if value or not nonzero:
            return value


def _key(coeffs: Mapping[int, object]) -> Tuple:
    return tuple(sorted((k, Fraction(v)) for k, v in coeffs.items()))


@lru_cache(maxsize=None)
def _cached_record(alpha: Tuple, gamma: Tuple, q: float, N: int, settings: OracleSettings) -> TongueRecord:
    return tongue_boundaries(NumericProblem(dict(alpha), dict(gamma), q, settings), N)


def oracle_record(alpha, gamma, q: float, N: int, settings: OracleSettings = None) -> TongueRecord:
    """Tongue record shared between checks that visit the same problem."""
    settings = settings or OracleSettings.from_settings()
    return _cached_record(_key(alpha), _key(gamma), float(q), N, settings)


def _series(osc: OscillatorSpec, coupling: CouplingSpec) -> HillCoefficientSeries:
    return compose_G(coupling, expand(osc))


def _specs(alpha, gamma, order) -> Tuple[OscillatorSpec, CouplingSpec]:
    return OscillatorSpec(alpha=alpha, order=order), CouplingSpec(gamma=gamma, order=order)


# per-configuration invariants


def lindstedt_invariants(config: RunConfig) -> str:
    L = expand(config.osc)
    for n in range(2, L.order + 1):
        u = L.u[n]
        expect(second_derivative(u) + 4 * u == source_term(L, n), f"u_{n} does not solve its level equation")
        expect(u.at_origin() == 0, f"u_{n}(0) != 0")
    for n in range(1, L.order + 1):
        expect(L.u[n].degree <= n, f"u_{n} has harmonic degree {L.u[n].degree}")
    unit = cauchy_product(L.omega2, L.kappa, L.order, Fraction(0))
    expect(unit == (1,) + (0,) * L.order, "Omega * (1/Omega) is not the unit series")
    A = diagonal_A(config.osc)
    for n in range(1, L.order + 1):
        expect(A[n] == project(L.u[n], n) / 2, f"A_{n} disagrees with the expansion")
    return f"order {L.order}, Omega_2 = {L.omega2[2] if L.order >= 2 else 'n/a'}"


def coefficient_invariants(config: RunConfig) -> str:
    series = _series(config.osc, config.coupling)
    check = check_generalized_mathieu(series)
    expect(check.ok, f"composed series violates the degree bound at {check.violation}")
    expect(diagonal_G(config.osc, config.coupling) == series.diagonal(), "diagonal_G disagrees with compose_G")
    return f"max degree {max(p.degree for p in series.G)}"


def eigen_invariants(config: RunConfig) -> str:
    series = _series(config.osc, config.coupling)
    diagonal = series.diagonal()
    pairs = branch_pairs(series, config.n_max)
    for N, (plus, minus) in pairs.items():
        for branch in (plus, minus):
            expect(not cone_violations(branch), f"N={N}{branch.parity}: entries outside the support cones")
            sign = 1 if branch.parity == Parity.EVEN else -1
            for (k, n), value in branch.z_table.items():
                expect(branch.z(-k, n) == sign * value, f"N={N}{branch.parity}: z[{k},{n}] breaks symmetry")
        expect(not region_coincidence_violations(plus, minus), f"N={N}: parities differ above k = 2n - N")
        for n in range(1, min(N, series.order + 1)):
            expect(plus.Lambda[n] == minus.Lambda[n], f"N={N}: Lambda_{n} differs below order N")
        fast = leading_coefficient_fast(diagonal, N)
        full = plus.Lambda[N] - minus.Lambda[N]
        expect(fast == full, f"C_{N}: diagonal recursion {fast} != full recursion {full}")
    if config.coupling.gamma_k(1):
        verdict = classify_shape(*pairs[1])
        expect(verdict.classification == ShapeClassification.TRUMPET, "first tongue is not trumpet shaped")
    if config.half_period_coupling:
        for N, (plus, minus) in pairs.items():
            if N % 2:
                expect(plus.B == minus.B, f"odd tongue N={N} does not vanish for odd f and even g")
    return f"N = 1..{config.n_max}"


def oracle_consistency(config: RunConfig) -> str:
    series = _series(config.osc, config.coupling)
    pairs = branch_pairs(series, config.n_max)
    settings = config.oracle_settings()
    constants = []
    for N, (plus, minus) in pairs.items():
        gaps = []
        for q in config.q_grid:
            record = oracle_record(config.f_coeffs, config.g_coeffs, q, N, settings)
            series_minus, series_plus = sorted(series_boundaries(plus, minus, q))
            gap = max(abs(record.beta_minus - series_minus), abs(record.beta_plus - series_plus))
            expect(record.beta_minus <= record.beta_plus, f"N={N}, q={q}: endpoints out of order")
            gaps.append(gap)
            constants.append(gap / q ** (config.order + 1))
        for small, large in zip(gaps, gaps[1:]):
            if small > NOISE_FLOOR:
                expect(small <= large * (1 + 1e-6), f"N={N}: series gap does not shrink with q ({gaps})")
    K = max(constants)
    expect(math.isfinite(K), "series-oracle constant is not finite")
    return f"K = {K:.3e}"


def config_checks(config: RunConfig, skip_oracle: bool = False) -> Iterator[Tuple[str, Callable[[], str]]]:
    yield f"{config.name}: lindstedt invariants", lambda: lindstedt_invariants(config)
    yield f"{config.name}: coefficient series", lambda: coefficient_invariants(config)
    yield f"{config.name}: eigenvalue tables", lambda: eigen_invariants(config)
    if not skip_oracle and config.wants("tongues"):
        yield f"{config.name}: oracle against series", lambda: oracle_consistency(config)


# acceptance criteria


def omega2_identity() -> str:
    rng = random.Random(SEED)
    for _ in range(20):
        a, b = random_rational(rng), random_rational(rng)
        L = expand(OscillatorSpec(alpha={2: a, 3: b}, order=3))
        expected = -Fraction(5, 96) * a * a + Fraction(3, 16) * b
        expect(L.omega2[2] == expected, f"Omega_2 = {L.omega2[2]} for alpha2={a}, alpha3={b}")
        expect(L.omega2[1] == 0, "Omega_1 != 0")
    return "20 random (alpha2, alpha3)"


def expected_b_table(a: Fraction, c1: Fraction, c2: Fraction) -> Dict[Tuple[int, str, int], Fraction]:
    """{(N, parity, n): B_n} for f = a x**2 and g = c1 x + c2 x**2."""
    mean_drift = a * c1 / 8 - c2 / 2
    table = {
        (1, Parity.EVEN, 1): -c1 / 2,
        (1, Parity.ODD, 1): c1 / 2,
        (0, Parity.EVEN, 2): c1 * (a - c1) / 8 - c2 / 2,
    }
    second = {
        (1, Parity.EVEN): -c1 * c1 / 32 + mean_drift - a * c1 / 24 - Fraction(5, 96) * a * a,
        (1, Parity.ODD): -c1 * c1 / 32 + mean_drift + a * c1 / 24 - Fraction(5, 96) * a * a,
        (2, Parity.EVEN): 5 * c1 * c1 / 48 + 5 * a * c1 / 48 - 3 * c2 / 4 - Fraction(5, 24) * a * a,
        (2, Parity.ODD): -c1 * c1 / 48 + 7 * a * c1 / 48 - c2 / 4 - Fraction(5, 24) * a * a,
    }
    for N in (3, 4):
        value = mean_drift + c1 * c1 / (8 * (N * N - 1)) - Fraction(5, 96) * a * a * N * N
        second[(N, Parity.EVEN)] = second[(N, Parity.ODD)] = value
    table.update({(N, parity, 2): value for (N, parity), value in second.items()})
    return table


def b_coefficient_table() -> str:
    rng = random.Random(SEED + 1)
    for _ in range(20):
        a, c1, c2 = random_rational(rng), random_rational(rng), random_rational(rng)
        osc, coupling = _specs({2: a}, {1: c1, 2: c2}, 2)
        series = _series(osc, coupling)
        for (N, parity, n), value in expected_b_table(a, c1, c2).items():
            branch = eigen_series(series, N, parity)
            expect(branch.B[n] == value,
                   f"B_{n}^{parity}({N}) = {branch.B[n]}, expected {value} (alpha2={a}, gamma=({c1}, {c2}))")
    return "20 random (alpha2, gamma1, gamma2)"


def two_route_equality() -> str:
    rng = random.Random(SEED + 2)
    cases = [({}, {1: 1})]
    cases += [({2: 1}, {1: 2 * gamma}) for gamma in (Fraction(1), Fraction(1, 6), Fraction(1, 2))]
    cases.append((
        {2: random_rational(rng, nonzero=True), 3: random_rational(rng)},
        {1: random_rational(rng, nonzero=True), 2: random_rational(rng)},
    ))
    for alpha, gamma in cases:
        osc, coupling = _specs(alpha, gamma, 8)
        series = _series(osc, coupling)
        diagonal = diagonal_G(osc, coupling)
        for N in range(1, 9):
            fast = leading_coefficient_fast(diagonal, N)
            full = eigen_series(series, N, Parity.EVEN).Lambda[N] - eigen_series(series, N, Parity.ODD).Lambda[N]
            expect(fast == full, f"C_{N} for alpha={alpha}, gamma={gamma}: {fast} != {full}")
    return f"{len(cases)} specs, N <= 8"


def closed_products() -> str:
    mathieu = diagonal_G(*_specs({}, {1: 1}, 8))
    for N in range(1, 9):
        expected = Fraction((-1) ** N, math.factorial(N - 1) ** 2 * 8 ** (N - 1))
        expect(leading_coefficient_fast(mathieu, N) == expected, f"Mathieu C_{N}")
    for alpha in (Fraction(1), Fraction(-2, 3)):
        for gamma in (Fraction(1), Fraction(1, 6), Fraction(1, 2), Fraction(5, 2)):
            diagonal = diagonal_G(*_specs({2: alpha}, {1: 2 * gamma * alpha}, 8))
            for N in range(1, 9):
                expect(leading_coefficient_fast(diagonal, N) == example1_closed_form(alpha, gamma, N),
                       f"closed product for alpha={alpha}, gamma~={gamma}, N={N}")
    return "Mathieu and 8 Example-1 instances, N <= 8"


def cone_and_region() -> str:
    rng = random.Random(SEED + 3)
    for _ in range(10):
        alpha = {2: random_rational(rng), 3: random_rational(rng)}
        gamma = {1: random_rational(rng, nonzero=True), 2: random_rational(rng)}
        series = _series(*_specs(alpha, gamma, 6))
        for N in range(1, 7):
            plus, minus = eigen_series(series, N, Parity.EVEN), eigen_series(series, N, Parity.ODD)
            expect(not cone_violations(plus) and not cone_violations(minus), f"support cones, N={N}")
            expect(not region_coincidence_violations(plus, minus), f"region coincidence, N={N}")
            for n in range(1, N):
                expect(plus.Lambda[n] == minus.Lambda[n], f"Lambda_{n}(N={N}) differs between parities")
    return "10 random generalized-Mathieu specs"


ORDER_GRID = tuple(float(q) for q in np.geomspace(0.02, 0.15, 6))


def oracle_order() -> str:
    details = []
    for label, alpha, gamma in (("mathieu", {}, {1: 1}), ("example1", {2: 1}, {1: 2})):
        diagonal = diagonal_G(*_specs(alpha, gamma, 4))
        for N in range(1, 5):
            exact = leading_coefficient_fast(diagonal, N)
            if exact == 0:
                continue
            fit = asymptotic_order([oracle_record(alpha, gamma, q, N) for q in ORDER_GRID])
            expect(not fit.collapsed, f"{label} N={N}: all lengths below the floor")
            expect(abs(fit.slope - N) <= 0.15, f"{label} N={N}: slope {fit.slope:.4f}")
            expect(abs(fit.coefficient - abs(float(exact))) <= 0.1 * abs(float(exact)),
                   f"{label} N={N}: |C_N| estimate {fit.coefficient:.6g} vs {float(exact):.6g}")
            details.append(f"{label} N={N} slope {fit.slope:.3f}")
    return "; ".join(details)


COEXISTENCE_CASES = (
    ("example1 n=1", {2: 1}, {1: Fraction(1, 3)}, 1, 4),
    ("example1 n=2", {2: 1}, {1: 1}, 2, 4),
    ("example2 n=1", {3: 1}, {2: 1}, 1, 16),
    ("example2 n=2", {3: 1}, {2: 3}, 2, 16),
    ("example4 n=1", {2: 1, 3: Fraction(1, 18)}, {1: Fraction(2, 3), 2: Fraction(1, 18)}, 1, 4),
    ("example4 n=2", {2: 1, 3: Fraction(1, 18)}, {1: 2, 2: Fraction(1, 6)}, 2, 4),
)


def coexistence_exact() -> str:
    for label, alpha, gamma, n, A in COEXISTENCE_CASES:
        osc, coupling = _specs(alpha, gamma, 8)
        report = coexistence_check(osc, coupling, expand(osc))
        expect(report.detected, f"{label}: Lame structure not found (failing order {report.failing_order})")
        expect(report.residual == 0, f"{label}: residual {report.residual}")
        expect(report.n_ince == n, f"{label}: Ince index {report.n_ince}, expected {n}")
        expect(report.A == A, f"{label}: A = {report.A}, expected {A}")
        if label.startswith("example1"):
            expect(not any(report.B), f"{label}: B(q) should vanish")
        if label.startswith("example2"):
            expect(report.B == example2_B_series(1, 8)[1:], f"{label}: B(q) = {report.B}")
    return f"{len(COEXISTENCE_CASES)} instances through order 8"


def coexistence_oracle() -> str:
    for label, alpha, gamma, n, _ in COEXISTENCE_CASES:
        osc, coupling = _specs(alpha, gamma, 1)
        half_period = osc.is_odd and coupling.is_even
        open_tongues = expected_open_tongues(n, half_period)
        leading = n if n in open_tongues else open_tongues[0]
        for N in range(1, 7):
            length = oracle_record(alpha, gamma, 0.1, N).length
            if N == leading:
                expect(length > FIRST_OPEN_LENGTH, f"{label}: L_{N}(0.1) = {length:.3e} should stay open")
            elif N in open_tongues:
                expect(length > OPEN_LENGTH, f"{label}: L_{N}(0.1) = {length:.3e} should stay open")
            else:
                expect(length < CLOSED_LENGTH, f"{label}: L_{N}(0.1) = {length:.3e} should vanish")
    return f"{len(COEXISTENCE_CASES)} instances, N <= 6 at q = 0.1"


def parity_vanishing_exact() -> str:
    series = _series(*_specs({3: 1}, {2: 1}, 8))
    for N in range(1, 9, 2):
        plus, minus = eigen_series(series, N, Parity.EVEN), eigen_series(series, N, Parity.ODD)
        expect(plus.B == minus.B, f"odd tongue N={N} does not vanish through order 8")
    rng = random.Random(SEED + 4)
    for K in range(1, 7):
        gamma_K = random_rational(rng, nonzero=True)
        series = _series(*_specs({K + 1: random_rational(rng)}, {K: gamma_K}, K))
        for N in range(1, K + 1):
            difference = eigen_series(series, N, Parity.EVEN).Lambda[K] - eigen_series(series, N, Parity.ODD).Lambda[K]
            expect(difference == leading_coefficient_binomial(K, N, gamma_K), f"C_({K},{N}) = {difference}")
    return "odd N through order 8; binomial table K <= 6"


def parity_vanishing_oracle() -> str:
    lengths = [oracle_record({3: 1}, {2: 1}, 0.1, N).length for N in (1, 3)]
    for N, length in zip((1, 3), lengths):
        expect(length < CLOSED_LENGTH, f"L_{N}(0.1) = {length:.3e}")
    return f"L_1 = {lengths[0]:.1e}, L_3 = {lengths[1]:.1e}"


EXAMPLE1_SHAPE_SAMPLES = tuple(
    Fraction(value) for value in ("-3", "-2", "-3/2", "-1/2", "1/4", "2/3", "3/4", "5/6", "3/2", "2", "3", "4")
)


def example1_second_tongue_is_trumpet(gamma: Fraction) -> bool:
    return gamma < -1 or Fraction(1, 2) < gamma < 1 or gamma > Fraction(5, 2)


def shape_suite() -> str:
    series = _series(*_specs({}, {1: 1}, 8))
    verdicts = [classify_shape(*pair).classification for pair in branch_pairs(series, 4).values()]
    T, H = ShapeClassification.TRUMPET, ShapeClassification.HORN
    expect(verdicts == [T, T, H, H], f"Mathieu shapes {verdicts}")
    for gamma in EXAMPLE1_SHAPE_SAMPLES:
        series = _series(*_specs({2: 1}, {1: 2 * gamma}, 2))
        verdict = classify_shape(eigen_series(series, 2, Parity.EVEN), eigen_series(series, 2, Parity.ODD))
        expected = T if example1_second_tongue_is_trumpet(gamma) else H
        expect(verdict.classification == expected, f"Example 1 gamma~={gamma}: {verdict.classification}")
    for verdict in trumpet_count_scenario(3, 1, 1):
        if verdict.N % 2:
            expect(verdict.classification == T and verdict.leading_orders == (3, 3),
                   f"K=3, N={verdict.N}: {verdict}")
    return "Mathieu, 12 Example-1 samples, K = 3"


def oracle_self_consistency() -> str:
    worst_shift = worst_det = 0.0
    settings = OracleSettings.from_settings()
    for alpha, gamma, N_max in (({}, {1: 1}, 4), ({2: 1}, {1: 2}, 3)):
        for N in range(1, N_max + 1):
            record = oracle_record(alpha, gamma, 0.1, N, settings)
            refined = oracle_record(alpha, gamma, 0.1, N, settings.refined())
            shift = max(abs(record.beta_minus - refined.beta_minus), abs(record.beta_plus - refined.beta_plus))
            problem = NumericProblem(alpha, gamma, 0.1, settings)
            for beta in (record.beta_minus, record.beta_plus):
                worst_det = max(worst_det, abs(float(np.linalg.det(monodromy(problem, beta))) - 1.0))
            worst_shift = max(worst_shift, shift)
    expect(worst_shift < 1e-9, f"refinement moved an endpoint by {worst_shift:.3e}")
    expect(worst_det < settings.determinant_tolerance, f"monodromy determinant off by {worst_det:.3e}")
    return f"max shift {worst_shift:.2e}, max |det - 1| {worst_det:.2e}"


def oracle_period_and_energy() -> str:
    problem = NumericProblem({3: 1}, {}, 0.3)
    difference = abs(problem.period - return_map_period(problem))
    expect(difference < 1e-9, f"quadrature and return-map periods differ by {difference:.3e}")
    drift = energy_drift(problem)
    expect(drift <= 1e-10, f"energy drift {drift:.3e}")
    weak = NumericProblem({}, {1: 1}, 0.1).with_coupling_scale(1e-6)
    for beta in (0.5, 2.0, 5.0):
        delta = half_period_solutions(weak, beta).discriminant()
        free = 2 * math.cos(math.sqrt(beta) * weak.period)
        expect(abs(delta - free) < 1e-4, f"scaling limit at beta={beta}: {delta} vs {free}")
    return f"period difference {difference:.1e}, energy drift {drift:.1e}"


CHART_GRID = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)


def mathieu_chart() -> str:
    rows = stability_chart(lambda q: NumericProblem({}, {1: 1}, q), CHART_GRID, 4)
    for row in rows:
        expect(row.is_ordered(), f"boundaries out of order at q={row.q}: {row.boundaries()}")
    return f"{len(rows)} amplitudes, N <= 4"


def violation_demonstration() -> str:
    series = HillCoefficientSeries.handcrafted([CosPoly.harmonic(1), CosPoly.harmonic(3)])
    check = check_generalized_mathieu(series)
    expect(not check.ok and check.violation == (2, 3), f"violation {check.violation}")
    plus, minus = eigen_series(series, 3, Parity.EVEN), eigen_series(series, 3, Parity.ODD)
    expect(plus.Lambda[1] == minus.Lambda[1], "L_3 should vanish at first order")
    observed = plus.Lambda[2] - minus.Lambda[2]
    expect(observed == check.predicted_coefficient, f"L_3 order-2 coefficient {observed}")
    return f"L_3 = {observed} q**2 + ..."


ACCEPTANCE_CHECKS = (
    ("Omega_2 identity", False, omega2_identity),
    ("B coefficient table", False, b_coefficient_table),
    ("two-route C_N", False, two_route_equality),
    ("closed products", False, closed_products),
    ("support cones and parity region", False, cone_and_region),
    ("coexistence fit", False, coexistence_exact),
    ("odd-f even-g parity vanishing", False, parity_vanishing_exact),
    ("shape classification", False, shape_suite),
    ("degree-bound violation", False, violation_demonstration),
    ("oracle asymptotic order", True, oracle_order),
    ("oracle coexistence lengths", True, coexistence_oracle),
    ("oracle parity vanishing", True, parity_vanishing_oracle),
    ("oracle self-consistency", True, oracle_self_consistency),
    ("oracle period and energy", True, oracle_period_and_energy),
    ("Mathieu chart ordering", True, mathieu_chart),
)


def run_check(name: str, func: Callable[[], str]) -> CheckResult:
    started = time.perf_counter()
    try:
        detail = func()
        passed = True
    except HillError as exc:
        detail, passed = str(exc), False
    seconds = time.perf_counter() - started
    log = logger.info if passed else logger.error
    log(f"{'PASS' if passed else 'FAIL'} {name} ({seconds:.2f}s): {detail}")
    return CheckResult(name=name, passed=passed, detail=detail, seconds=seconds)


def run_checks(configs: Sequence[RunConfig], skip_oracle: bool = False) -> List[CheckResult]:
    results = []
    for config in configs:
        for name, func in config_checks(config, skip_oracle):
            results.append(run_check(name, func))
    for name, oracle, func in ACCEPTANCE_CHECKS:
        if oracle and skip_oracle:
            continue
        results.append(run_check(name, func))
    return results
