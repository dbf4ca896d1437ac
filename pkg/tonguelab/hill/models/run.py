import logging

from django.db import models

from .base import BaseModel, DefaultFieldsMixin, NameModel, TimestampModel

logger = logging.getLogger(__name__)


class TongueRunManager(models.Manager):
    def update_or_create_from_config(self, config):
        obj, created = self.model.objects.update_or_create(
            id=config.config_hash,
            defaults=self.model.get_default_fields(config),
        )
        logger.info(f"{'created' if created else 'updated'} run {obj.name} ({obj.id[:12]})")
        return obj, created


class TongueRun(BaseModel, NameModel, TimestampModel):
    """One oracle sweep, keyed by the SHA-256 of its canonical configuration."""

    DEFAULT_FIELDS_EXCLUDED = ("id", "created_at", "updated_at")

    objects = TongueRunManager()

    order = models.PositiveSmallIntegerField(
        help_text="Truncation order M of the perturbation series.",
    )

    n_max = models.PositiveSmallIntegerField(
        help_text="Largest tongue index computed.",
    )

    version = models.CharField(
        max_length=16,
        help_text="Version of the hill app that produced the run.",
    )

    document = models.JSONField(
        help_text="The canonical run configuration.",
    )

    class Meta(TimestampModel.Meta):
        pass

    def __str__(self):
        return f"{self.name} ({self.id[:12]})"


class TongueMeasurementManager(models.Manager):
    def update_or_create_from_record(self, run, record, series_boundaries=None):
        defaults = self.model.get_default_fields(record)
        if series_boundaries is not None:
            defaults["series_beta_minus"], defaults["series_beta_plus"] = sorted(series_boundaries)
        return self.model.objects.update_or_create(
            run=run,
            N=record.N,
            q=record.q,
            defaults=defaults,
        )


class TongueMeasurement(DefaultFieldsMixin, models.Model):
    """Tongue boundaries located by the Floquet oracle at one amplitude."""

    DEFAULT_FIELDS_EXCLUDED = ("id", "run", "N", "q", "series_beta_minus", "series_beta_plus")

    objects = TongueMeasurementManager()

    run = models.ForeignKey(
        to=TongueRun,
        on_delete=models.CASCADE,
        related_name="measurements",
        help_text="The run this measurement belongs to.",
    )

    N = models.PositiveSmallIntegerField(
        help_text="Tongue index; the tongue emanates from beta = N**2.",
    )

    q = models.FloatField(
        help_text="Amplitude of the driving oscillator.",
    )

    beta_even = models.FloatField(
        help_text="Eigenvalue with an even eigenfunction (the + branch).",
    )

    beta_odd = models.FloatField(
        help_text="Eigenvalue with an odd eigenfunction (the - branch).",
    )

    beta_minus = models.FloatField(
        help_text="Lower tongue boundary.",
    )

    beta_plus = models.FloatField(
        help_text="Upper tongue boundary.",
    )

    length = models.FloatField(
        help_text="Tongue width beta_plus - beta_minus.",
    )

    signed_length = models.FloatField(
        help_text="beta_even - beta_odd.",
    )

    residual_even = models.FloatField(
        help_text="Discriminant residue |Delta - sigma| at beta_even.",
    )

    residual_odd = models.FloatField(
        help_text="Discriminant residue |Delta - sigma| at beta_odd.",
    )

    bracket_width = models.FloatField(
        help_text="Spacing of the scan grid that bracketed the roots.",
    )

    numerically_zero = models.BooleanField(
        default=False,
        help_text="Whether the length is below the numerically-zero floor.",
    )

    series_beta_minus = models.FloatField(
        blank=True,
        null=True,
        help_text="Lower boundary from the truncated perturbation series.",
    )

    series_beta_plus = models.FloatField(
        blank=True,
        null=True,
        help_text="Upper boundary from the truncated perturbation series.",
    )

    class Meta:
        ordering = ["run", "N", "q"]
        unique_together = [("run", "N", "q")]

    def __str__(self):
        return f"L_{self.N}({self.q:g})"

    @property
    def abs_gap(self):
        if self.series_beta_minus is None or self.series_beta_plus is None:
            return None
        return max(abs(self.beta_minus - self.series_beta_minus), abs(self.beta_plus - self.series_beta_plus))
