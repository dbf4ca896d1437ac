"""Run configurations read by the management commands."""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from . import __version__
from .exceptions import ConfigError
from .floquet import NumericProblem, OracleSettings
from .hillseries import CouplingSpec
from .lindstedt import OscillatorSpec

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parent / "configs"

ANALYSES = ("series", "tongues", "shape", "order", "coexist", "verify")


@dataclass(frozen=True)
class RunConfig:
    name: str
    f_coeffs: Mapping[int, Fraction]
    g_coeffs: Mapping[int, Fraction]
    order: int
    q_grid: Tuple[float, ...]
    n_max: int
    analyses: Tuple[str, ...] = ANALYSES
    tolerances: Mapping[str, float] = field(default_factory=dict)
    out_dir: Optional[str] = None

    @classmethod
    def from_data(cls, data) -> "RunConfig":
        from .serializers import RunConfigSerializer

        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise ConfigError(f"invalid run configuration: {dict(serializer.errors)}", serializer.errors)
        return cls(**serializer.validated_data)

    @property
    def osc(self) -> OscillatorSpec:
        return OscillatorSpec(alpha=self.f_coeffs, order=self.order)

    @property
    def coupling(self) -> CouplingSpec:
        return CouplingSpec(gamma=self.g_coeffs, order=self.order)

    @property
    def version(self) -> str:
        return __version__

    @property
    def document(self) -> Dict:
        """Canonical JSON-ready form; the config hash is taken over it."""
        return {
            "name": self.name,
            "f_coeffs": [[k, str(v)] for k, v in sorted(self.f_coeffs.items())],
            "g_coeffs": [[k, str(v)] for k, v in sorted(self.g_coeffs.items())],
            "order": self.order,
            "q_grid": list(self.q_grid),
            "n_max": self.n_max,
            "analyses": list(self.analyses),
            "tolerances": dict(sorted(self.tolerances.items())),
        }

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.document, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def wants(self, analysis: str) -> bool:
        return analysis in self.analyses

    def oracle_settings(self) -> OracleSettings:
        return OracleSettings.from_settings(**self.tolerances)

    def problem(self, q: float, settings: Optional[OracleSettings] = None) -> NumericProblem:
        return NumericProblem(self.f_coeffs, self.g_coeffs, q, settings or self.oracle_settings())

    @property
    def half_period_coupling(self) -> bool:
        """Odd f with even g: the Hill coefficient has period T/2."""
        return self.osc.is_odd and self.coupling.is_even and not self.coupling.is_zero


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}",
            {"json": [f"line {exc.lineno} column {exc.colno}: {exc.msg}"]},
        ) from exc
    config = RunConfig.from_data(data)
    logger.info(f"loaded {config.name} from {path} ({config.config_hash[:12]})")
    return config


def bundled_configs() -> List[RunConfig]:
    return [load_config(path) for path in sorted(CONFIG_DIR.glob("*.json"))]
