import logging

from ...exceptions import DegenerateFit
from ...hillseries import Parity, compose_G, eigen_series
from ...lindstedt import expand
from ...reporting import SeriesReport, TableWriter, write_coexistence, write_series, write_shapes
from ...tongues import branch_pairs, classify_shape, coexistence_check
from ..base import HillCommand

logger = logging.getLogger(__name__)


class Command(HillCommand):
    help = "Write the exact perturbation series of a run configuration as CSV tables."

    def run(self, config, out, **options):
        config = self.load(config)
        writer = TableWriter(self.out_dir(config, out), config.config_hash)

        expansion = expand(config.osc)
        series = compose_G(config.coupling, expansion)
        pairs = branch_pairs(series, config.n_max)
        branches = {0: (eigen_series(series, 0, Parity.EVEN), None), **pairs}
        report = SeriesReport(expansion=expansion, series=series, branches=branches)
        write_series(writer, report)
        logger.info(f"{config.name}: series through order {config.order}, N <= {config.n_max}")

        failures = []
        if config.wants("shape"):
            write_shapes(writer, [classify_shape(plus, minus) for plus, minus in pairs.values()])
        if config.wants("coexist") and not config.coupling.is_zero:
            try:
                write_coexistence(writer, coexistence_check(config.osc, config.coupling, expansion))
            except DegenerateFit as exc:
                failures.append(("coexist", exc))
        self.emit_warnings(failures)
        self.report(writer.written)
