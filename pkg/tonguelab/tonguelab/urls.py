"""tonguelab URL Configuration

Read-only browsing of stored oracle runs:
    /runs/            TongueRun list and detail
    /measurements/    TongueMeasurement list, filterable with ?run=<id>&N=<index>
    /admin/           Django admin
"""
from django.contrib import admin
from django.urls import include, path
from rest_framework import routers
from hill.views import TongueMeasurementViewSet, TongueRunViewSet

router = routers.DefaultRouter()
router.register(r'runs', TongueRunViewSet)
router.register(r'measurements', TongueMeasurementViewSet)

urlpatterns = [
    path('', include(router.urls)),
    path('api-auth/', include('rest_framework.urls', namespace='rest_framework')),
    path('admin/', admin.site.urls),
]
