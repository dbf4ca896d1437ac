from django.urls import reverse
from django.utils.html import mark_safe

from django.contrib import admin
from . import models


class ReadOnlyAdmin(admin.ModelAdmin):
    readonly_fields = []

    def get_readonly_fields(self, request, obj=None):
        if obj is None:
            return list(self.readonly_fields)
        return list(self.readonly_fields) + \
               [field.name for field in obj._meta.fields] + \
               [field.name for field in obj._meta.many_to_many]

    def has_add_permission(self, request, obj=None):
        return False

    def has_delete_permission(self, request, obj=None):
        return False


class TongueMeasurementInline(admin.TabularInline):
    model = models.TongueMeasurement
    fields = ["N", "q", "beta_minus", "beta_plus", "length", "numerically_zero"]
    readonly_fields = fields
    extra = 0
    can_delete = False

    def has_add_permission(self, request, obj=None):
        return False


@admin.register(models.TongueRun)
class TongueRunAdmin(ReadOnlyAdmin):
    list_display = [
        "name",
        "order",
        "n_max",
        "version",
        "created_at",
    ]
    search_fields = ["name", "id"]
    fieldsets = (
        (
            None,
            {
                "fields": (
                    "id",
                    "name",
                    "version",
                    "created_at",
                    "updated_at",
                ),
            },
        ),
        (
            "Series",
            {
                "fields": (
                    "order",
                    "n_max",
                    "document",
                ),
            },
        ),
    )
    inlines = [
        TongueMeasurementInline,
    ]


@admin.register(models.TongueMeasurement)
class TongueMeasurementAdmin(ReadOnlyAdmin):
    list_display = [
        "__str__",
        "run_link",
        "beta_minus",
        "beta_plus",
        "length",
        "numerically_zero",
    ]
    list_filter = ["N", "numerically_zero"]
    readonly_fields = ["run_link"]

    def run_link(self, obj):
        run = obj.run
        url = reverse(
            f"admin:{run._meta.app_label}_{run._meta.model_name}_change",
            args=[run.id],
        )
        return mark_safe(f'<a href="{url}">{run.__str__()}</a>')

    run_link.short_description = "run"
