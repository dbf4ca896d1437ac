import hashlib
import logging
from pathlib import Path

from ...checks import run_checks
from ...config import bundled_configs
from ...exceptions import VerificationFailure
from ...reporting import TableWriter
from ...serializers import CheckResultSerializer
from ..base import HillCommand

logger = logging.getLogger(__name__)


class Command(HillCommand):
    help = "Run the invariant and acceptance checks; exits with status 3 if any check fails."

    def add_config_argument(self, parser):
        parser.add_argument(
            "--config",
            action="append",
            help="Configuration to check, repeatable. Defaults to every bundled configuration.",
        )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--skip-oracle",
            action="store_true",
            help="Run only the exact rational checks.",
        )

    def run(self, config, out, skip_oracle, **options):
        configs = [self.load(value) for value in config] if config else bundled_configs()
        results = run_checks(configs, skip_oracle=skip_oracle)

        if out:
            suite_hash = hashlib.sha256(" ".join(c.config_hash for c in configs).encode()).hexdigest()
            writer = TableWriter(Path(out), suite_hash)
            writer.write(
                "checks.csv",
                ["name", "passed", "detail"],
                ([r.name, int(r.passed), r.detail] for r in results),
            )
            writer.write_json("checks.json", CheckResultSerializer(results, many=True).data)

        for result in results:
            style = self.style.SUCCESS if result.passed else self.style.ERROR
            self.stdout.write(style(f"{'PASS' if result.passed else 'FAIL'}  {result.name}: {result.detail}"))

        failed = [result.name for result in results if not result.passed]
        if failed:
            raise VerificationFailure(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        self.stdout.write(self.style.SUCCESS(f"all {len(results)} checks passed"))
