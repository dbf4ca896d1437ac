import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Sequence, Tuple

import sentry_sdk
from django.core.management.base import BaseCommand, CommandError

from ..config import CONFIG_DIR, RunConfig, load_config
from ..exceptions import AnalysisError, ConfigError, HillError, InvalidSpec, VerificationFailure
from ..floquet import NumericProblem, OracleSettings, TongueRecord, tongue_boundaries

logger = logging.getLogger(__name__)

VALIDATION_ERROR = 1
NUMERICAL_ERROR = 2
VERIFICATION_ERROR = 3


def resolve_config_path(value) -> Path:
    """A file path, or the name of a bundled configuration."""
    path = Path(value)
    if path.exists():
        return path
    bundled = CONFIG_DIR / f"{value}.json"
    if bundled.exists():
        return bundled
    raise ConfigError(f"no configuration file {value!r} and no bundled configuration of that name")


def _locate(task) -> TongueRecord:
    alpha, gamma, q, N, settings = task
    return tongue_boundaries(NumericProblem(alpha, gamma, q, settings), N)


def locate_grid(config: RunConfig, settings: OracleSettings, threads: int = 1) -> List[TongueRecord]:
    """Tongue records for every (N, q) of the config, N-major and q-minor."""
    tasks = [
        (dict(config.f_coeffs), dict(config.g_coeffs), q, N, settings)
        for N in range(1, config.n_max + 1)
        for q in config.q_grid
    ]
    logger.info(f"locating {len(tasks)} tongue boundaries with {threads} worker(s)")
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            # map keeps the submission order
            return list(executor.map(_locate, tasks))
    return [_locate(task) for task in tasks]


class HillCommand(BaseCommand):
    """Shared options and exit-code mapping of the hill commands."""

    def add_config_argument(self, parser):
        parser.add_argument(
            "--config",
            required=True,
            help="Run configuration JSON file, or the name of a bundled one.",
        )

    def add_arguments(self, parser):
        self.add_config_argument(parser)
        parser.add_argument("--out", help="Output directory; defaults to the config's out_dir or out/<name>.")
        parser.add_argument("--threads", type=int, default=1, help="Worker processes for the oracle grid.")
        parser.add_argument("--seed", type=int, default=None, help="Reserved; every run is deterministic.")

    def load(self, value) -> RunConfig:
        return load_config(resolve_config_path(value))

    def out_dir(self, config: RunConfig, out) -> Path:
        return Path(out or config.out_dir or Path("out") / config.name)

    def handle(self, *args, **options):
        if options["threads"] < 1:
            raise CommandError("--threads must be at least 1", returncode=VALIDATION_ERROR)
        try:
            return self.run(**options)
        except (ConfigError, InvalidSpec) as exc:
            raise CommandError(str(exc), returncode=VALIDATION_ERROR) from exc
        except VerificationFailure as exc:
            raise CommandError(str(exc), returncode=VERIFICATION_ERROR) from exc
        except HillError as exc:
            logger.exception(f"{type(exc).__name__} during {self.__module__.rsplit('.', 1)[-1]}")
            sentry_sdk.capture_exception(exc)
            raise CommandError(str(exc), returncode=NUMERICAL_ERROR) from exc

    def run(self, **options):
        raise NotImplementedError("subclasses of HillCommand must provide a run() method")

    def report(self, paths: Sequence[Path]) -> None:
        for path in paths:
            self.stdout.write(str(path))

    def emit_warnings(self, failures: Sequence[Tuple[str, AnalysisError]]) -> None:
        for label, exc in failures:
            self.stderr.write(self.style.WARNING(f"{label}: {exc}"))
