import logging
from collections import defaultdict

from django.db import transaction

from ...exceptions import InsufficientData
from ...hillseries import compose_G
from ...lindstedt import expand
from ...models import TongueMeasurement, TongueRun
from ...reporting import TableWriter, write_fits, write_tongues
from ...tongues import asymptotic_order, branch_pairs, series_boundaries
from ..base import HillCommand, locate_grid

logger = logging.getLogger(__name__)


class Command(HillCommand):
    help = "Locate tongue boundaries with the Floquet oracle and compare them with the series."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--save",
            action="store_true",
            help="Store the run and its measurements in the database.",
        )

    def run(self, config, out, threads, save, **options):
        config = self.load(config)
        writer = TableWriter(self.out_dir(config, out), config.config_hash)
        settings = config.oracle_settings()

        pairs = branch_pairs(compose_G(config.coupling, expand(config.osc)), config.n_max)
        records = locate_grid(config, settings, threads)
        rows = [(record, series_boundaries(*pairs[record.N], record.q)) for record in records]
        write_tongues(writer, rows)
        logger.info(f"{config.name}: {len(records)} tongue records")

        failures = []
        if config.wants("order"):
            by_index = defaultdict(list)
            for record in records:
                by_index[record.N].append(record)
            fits = []
            for N, group in sorted(by_index.items()):
                try:
                    fits.append(asymptotic_order(group))
                except InsufficientData as exc:
                    failures.append((f"order N={N}", exc))
            write_fits(writer, fits)

        if save:
            with transaction.atomic():
                run, _ = TongueRun.objects.update_or_create_from_config(config)
                for record, series in rows:
                    TongueMeasurement.objects.update_or_create_from_record(run, record, series)
            self.stdout.write(self.style.SUCCESS(f"saved run {run}"))

        self.emit_warnings(failures)
        self.report(writer.written)
