# Generated by Django 3.2.15 on 2026-10-18 09:12

from django.db import migrations, models
import django.db.models.deletion
import hill.models.base


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='TongueRun',
            fields=[
                ('id', models.CharField(max_length=64, primary_key=True, serialize=False)),
                ('name', models.CharField(help_text='The name of the run configuration.', max_length=64)),
                ('created_at', models.DateTimeField(auto_now_add=True, help_text='The date/time the object was created. Returned in UTC.')),
                ('updated_at', models.DateTimeField(auto_now=True, help_text='The date/time the object was updated. Returned in UTC.')),
                ('order', models.PositiveSmallIntegerField(help_text='Truncation order M of the perturbation series.')),
                ('n_max', models.PositiveSmallIntegerField(help_text='Largest tongue index computed.')),
                ('version', models.CharField(help_text='Version of the hill app that produced the run.', max_length=16)),
                ('document', models.JSONField(help_text='The canonical run configuration.')),
            ],
            options={
                'ordering': ['-created_at'],
                'abstract': False,
            },
            bases=(hill.models.base.DefaultFieldsMixin, models.Model),
        ),
        migrations.CreateModel(
            name='TongueMeasurement',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('N', models.PositiveSmallIntegerField(help_text='Tongue index; the tongue emanates from beta = N**2.')),
                ('q', models.FloatField(help_text='Amplitude of the driving oscillator.')),
                ('beta_even', models.FloatField(help_text='Eigenvalue with an even eigenfunction (the + branch).')),
                ('beta_odd', models.FloatField(help_text='Eigenvalue with an odd eigenfunction (the - branch).')),
                ('beta_minus', models.FloatField(help_text='Lower tongue boundary.')),
                ('beta_plus', models.FloatField(help_text='Upper tongue boundary.')),
                ('length', models.FloatField(help_text='Tongue width beta_plus - beta_minus.')),
                ('signed_length', models.FloatField(help_text='beta_even - beta_odd.')),
                ('residual_even', models.FloatField(help_text='Discriminant residue |Delta - sigma| at beta_even.')),
                ('residual_odd', models.FloatField(help_text='Discriminant residue |Delta - sigma| at beta_odd.')),
                ('bracket_width', models.FloatField(help_text='Spacing of the scan grid that bracketed the roots.')),
                ('numerically_zero', models.BooleanField(default=False, help_text='Whether the length is below the numerically-zero floor.')),
                ('series_beta_minus', models.FloatField(blank=True, help_text='Lower boundary from the truncated perturbation series.', null=True)),
                ('series_beta_plus', models.FloatField(blank=True, help_text='Upper boundary from the truncated perturbation series.', null=True)),
                ('run', models.ForeignKey(help_text='The run this measurement belongs to.', on_delete=django.db.models.deletion.CASCADE, related_name='measurements', to='hill.tonguerun')),
            ],
            options={
                'ordering': ['run', 'N', 'q'],
                'unique_together': {('run', 'N', 'q')},
            },
            bases=(hill.models.base.DefaultFieldsMixin, models.Model),
        ),
    ]
