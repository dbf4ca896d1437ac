import dataclasses
import math
from fractions import Fraction

from rest_framework import serializers

from .config import ANALYSES
from .floquet import OracleSettings
from .hillseries import Parity
from .models import TongueMeasurement, TongueRun
from .tongues import ShapeClassification


class TongueRunSerializer(serializers.HyperlinkedModelSerializer):
    class Meta:
        model = TongueRun
        fields = ['url', 'id'] + [fld.name for fld in TongueRun.DEFAULT_FIELDS] + ['measurements']


class TongueMeasurementSerializer(serializers.HyperlinkedModelSerializer):
    abs_gap = serializers.FloatField(read_only=True)

    class Meta:
        model = TongueMeasurement
        fields = ['url', 'run', 'N', 'q'] + [fld.name for fld in TongueMeasurement.DEFAULT_FIELDS] + [
            'series_beta_minus',
            'series_beta_plus',
            'abs_gap',
        ]


class RationalField(serializers.Field):
    """Exact rational given as an integer or a "p/q" string."""

    default_error_messages = {
        'invalid': 'Expected an integer or a "p/q" string, got {value!r}.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (int, str)):
            self.fail('invalid', value=data)
        try:
            return Fraction(data)
        except (ValueError, ZeroDivisionError):
            self.fail('invalid', value=data)

    def to_representation(self, value):
        return str(value)


class TaylorField(serializers.ListField):
    """``[[k, "p/q"], ...]`` pairs mapped to ``{k: Fraction}``."""

    def __init__(self, lowest, **kwargs):
        self.lowest = lowest
        super().__init__(child=serializers.ListField(min_length=2, max_length=2), **kwargs)

    def to_internal_value(self, data):
        pairs = super().to_internal_value(data)
        coeffs = {}
        rational = RationalField()
        for index, value in pairs:
            if isinstance(index, bool) or not isinstance(index, int) or index < self.lowest:
                raise serializers.ValidationError(f"power {index!r} must be an integer >= {self.lowest}")
            if index in coeffs:
                raise serializers.ValidationError(f"power {index} given twice")
            coeffs[index] = rational.to_internal_value(value)
        return coeffs

    def to_representation(self, value):
        return [[k, str(v)] for k, v in sorted(value.items())]


class GeometricGridSerializer(serializers.Serializer):
    start = serializers.FloatField(min_value=0.0)
    stop = serializers.FloatField(min_value=0.0)
    count = serializers.IntegerField(min_value=2)

    def validate(self, attrs):
        if not 0.0 < attrs['start'] < attrs['stop']:
            raise serializers.ValidationError('need 0 < start < stop')
        return attrs


class QGridField(serializers.Field):
    """An explicit ascending list of amplitudes or a geometric grid spec."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            spec = GeometricGridSerializer(data=data)
            spec.is_valid(raise_exception=True)
            start, stop, count = (spec.validated_data[key] for key in ('start', 'stop', 'count'))
            ratio = (stop / start) ** (1.0 / (count - 1))
            grid = [start * ratio ** i for i in range(count - 1)] + [stop]
        elif isinstance(data, list):
            grid = [serializers.FloatField().to_internal_value(value) for value in data]
        else:
            raise serializers.ValidationError('expected a list of amplitudes or {start, stop, count}')
        if not grid or grid[0] <= 0.0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise serializers.ValidationError('amplitudes must be strictly positive and ascending')
        return tuple(grid)

    def to_representation(self, value):
        return list(value)


class RunConfigSerializer(serializers.Serializer):
    name = serializers.CharField(max_length=64)
    f_coeffs = TaylorField(lowest=2, required=False, default=dict)
    g_coeffs = TaylorField(lowest=1, required=False, default=dict)
    order = serializers.IntegerField(min_value=1, max_value=64)
    q_grid = QGridField()
    n_max = serializers.IntegerField(min_value=1)
    analyses = serializers.MultipleChoiceField(choices=ANALYSES, required=False, default=ANALYSES)
    tolerances = serializers.DictField(child=serializers.FloatField(), required=False, default=dict)
    out_dir = serializers.CharField(required=False, allow_null=True, default=None)

    def validate_analyses(self, value):
        return tuple(name for name in ANALYSES if name in value)

    def validate_tolerances(self, value):
        types = {fld.name: fld.type for fld in dataclasses.fields(OracleSettings) if fld.name != 'method'}
        unknown = sorted(set(value) - set(types))
        if unknown:
            raise serializers.ValidationError(f'unknown tolerance keys: {unknown}')
        tolerances = {}
        for key, number in sorted(value.items()):
            if types[key] is int:
                if not number.is_integer() or number < 1:
                    raise serializers.ValidationError(f'{key} must be a positive integer, got {number!r}')
                number = int(number)
            tolerances[key] = number
        return tolerances

    def validate(self, attrs):
        if attrs['order'] < attrs['n_max']:
            raise serializers.ValidationError({'order': 'order must be at least n_max'})
        return attrs


class FractionField(serializers.Field):
    """Read-only exact rational rendered as a "p/q" string."""

    def __init__(self, **kwargs):
        kwargs['read_only'] = True
        super().__init__(**kwargs)

    def to_representation(self, value):
        return None if value is None else str(value)


class EigenBranchSerializer(serializers.Serializer):
    N = serializers.IntegerField()
    parity = serializers.ChoiceField(choices=Parity.choices)
    Lambda = serializers.ListField(child=FractionField())
    B = serializers.ListField(child=FractionField())


class ShapeVerdictSerializer(serializers.Serializer):
    N = serializers.IntegerField()
    classification = serializers.ChoiceField(choices=ShapeClassification.choices)
    leading_orders = serializers.ListField(child=serializers.IntegerField(allow_null=True))
    leading_signs = serializers.ListField(child=serializers.IntegerField())


class CoexistenceReportSerializer(serializers.Serializer):
    detected = serializers.BooleanField()
    n_ince = serializers.IntegerField(allow_null=True)
    A = FractionField()
    B = serializers.ListField(child=FractionField())
    scale = FractionField()
    residual = FractionField()
    failing_order = serializers.IntegerField(allow_null=True)


class AsymptoticFitSerializer(serializers.Serializer):
    N = serializers.IntegerField()
    slope = serializers.FloatField()
    intercept = serializers.FloatField()
    coefficient = serializers.FloatField()
    points = serializers.IntegerField()
    collapsed = serializers.BooleanField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        # collapsed fits carry NaN, which strict JSON rejects
        return {key: None if isinstance(value, float) and math.isnan(value) else value for key, value in data.items()}


class CheckResultSerializer(serializers.Serializer):
    name = serializers.CharField()
    passed = serializers.BooleanField()
    detail = serializers.CharField()
