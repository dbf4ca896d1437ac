"""Deterministic table emitters for the management commands.

Every CSV starts with a comment line recording the config hash and the app
version, then a header row.  Floats use 17 significant digits and exact
rationals are written as "p/q" strings next to their decimal rendering.
"""
import csv
import io
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from rest_framework.renderers import JSONRenderer

from . import __version__
from .floquet import TongueRecord
from .hillseries import EigenBranch, HillCoefficientSeries, leading_coefficient_fast
from .lindstedt import LindstedtExpansion
from .tongues import AsymptoticFit, CoexistenceReport, ShapeVerdict

logger = logging.getLogger(__name__)


def decimal(value) -> str:
    return format(float(value), ".17g")


def exact(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class SeriesReport:
    expansion: LindstedtExpansion
    series: HillCoefficientSeries
    branches: Dict[int, Tuple[EigenBranch, Optional[EigenBranch]]]

    def leading_coefficients(self) -> List[Tuple[int, Fraction, Fraction]]:
        """(N, C_N by the diagonal recursion, C_N from the full branches)."""
        diagonal = self.series.diagonal()
        rows = []
        for N, (plus, minus) in sorted(self.branches.items()):
            if N == 0:
                continue
            rows.append((N, leading_coefficient_fast(diagonal, N), plus.Lambda[N] - minus.Lambda[N]))
        return rows


class TableWriter:
    """Writes comment-prefixed CSV tables into one output directory."""

    def __init__(self, out_dir, config_hash: str):
        self.out_dir = Path(out_dir)
        self.config_hash = config_hash
        self.written: List[Path] = []

    def render(self, header: Sequence[str], rows: Iterable[Sequence]) -> str:
        buffer = io.StringIO()
        buffer.write(f"# config={self.config_hash} version={__version__}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue()

    def write(self, filename: str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / filename
        path.write_text(self.render(header, rows))
        self.written.append(path)
        logger.debug(f"wrote {path}")
        return path

    def write_json(self, filename: str, data) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / filename
        path.write_bytes(JSONRenderer().render(data) + b"\n")
        self.written.append(path)
        return path


def write_series(writer: TableWriter, report: SeriesReport) -> None:
    from .serializers import EigenBranchSerializer

    L = report.expansion
    writer.write(
        "omega.csv",
        ["n", "Omega", "Omega_decimal", "kappa", "kappa_decimal"],
        ([n, exact(w), decimal(w), exact(k), decimal(k)] for n, (w, k) in enumerate(zip(L.omega2, L.kappa))),
    )
    writer.write(
        "u.csv",
        ["n", "k", "coefficient", "coefficient_decimal"],
        ([n, k, exact(c), decimal(c)] for n, p in enumerate(L.u) for k, c in enumerate(p.coeffs)),
    )
    writer.write(
        "G.csv",
        ["n", "k", "coefficient", "coefficient_decimal"],
        ([n, k, exact(c), decimal(c)] for n, p in enumerate(report.series.G) for k, c in enumerate(p.coeffs)),
    )
    rows = []
    for N, pair in sorted(report.branches.items()):
        for branch in pair:
            if branch is None:
                continue
            for n, (lam, b) in enumerate(zip(branch.Lambda, branch.B)):
                rows.append([N, branch.parity, n, exact(lam), decimal(lam), exact(b), decimal(b)])
    writer.write("branches.csv", ["N", "parity", "n", "Lambda", "Lambda_decimal", "B", "B_decimal"], rows)
    branches = [branch for _, pair in sorted(report.branches.items()) for branch in pair if branch is not None]
    writer.write_json("branches.json", EigenBranchSerializer(branches, many=True).data)
    writer.write(
        "leading.csv",
        ["N", "C", "C_decimal", "C_recursion", "agree"],
        ([N, exact(fast), decimal(fast), exact(full), int(fast == full)]
         for N, fast, full in report.leading_coefficients()),
    )


def write_shapes(writer: TableWriter, verdicts: Sequence[ShapeVerdict]) -> None:
    from .serializers import ShapeVerdictSerializer

    writer.write(
        "shapes.csv",
        ["N", "classification", "order_plus", "order_minus", "sign_plus", "sign_minus"],
        ([v.N, v.classification, *("" if o is None else o for o in v.leading_orders), *v.leading_signs]
         for v in verdicts),
    )
    writer.write_json("shapes.json", ShapeVerdictSerializer(verdicts, many=True).data)


def write_coexistence(writer: TableWriter, report: CoexistenceReport) -> None:
    from .serializers import CoexistenceReportSerializer

    writer.write_json("coexistence.json", CoexistenceReportSerializer(report).data)


TONGUE_COLUMNS = [
    "N",
    "q",
    "beta_minus",
    "beta_plus",
    "length",
    "series_beta_minus",
    "series_beta_plus",
    "abs_gap",
]


def tongue_row(record: TongueRecord, series: Tuple[float, float]) -> List[str]:
    series_minus, series_plus = sorted(series)
    gap = max(abs(record.beta_minus - series_minus), abs(record.beta_plus - series_plus))
    return [
        record.N,
        decimal(record.q),
        decimal(record.beta_minus),
        decimal(record.beta_plus),
        decimal(record.length),
        decimal(series_minus),
        decimal(series_plus),
        decimal(gap),
    ]


def write_tongues(writer: TableWriter, rows: Sequence[Tuple[TongueRecord, Tuple[float, float]]]) -> Path:
    ordered = sorted(rows, key=lambda row: (row[0].N, row[0].q))
    return writer.write("tongues.csv", TONGUE_COLUMNS, (tongue_row(record, series) for record, series in ordered))


def write_fits(writer: TableWriter, fits: Sequence[AsymptoticFit]) -> None:
    from .serializers import AsymptoticFitSerializer

    writer.write(
        "order.csv",
        ["N", "slope", "coefficient", "points", "collapsed"],
        ([fit.N, decimal(fit.slope), decimal(fit.coefficient), fit.points, int(fit.collapsed)] for fit in fits),
    )
    writer.write_json("order.json", AsymptoticFitSerializer(fits, many=True).data)
