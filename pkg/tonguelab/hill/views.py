from rest_framework import viewsets
from rest_framework import permissions

from .models import TongueMeasurement, TongueRun
from .serializers import TongueMeasurementSerializer, TongueRunSerializer


class TongueRunViewSet(viewsets.ReadOnlyModelViewSet):
    """
    API endpoint that lists stored oracle runs.
    """
    queryset = TongueRun.objects.prefetch_related("measurements")
    serializer_class = TongueRunSerializer
    permission_classes = [permissions.IsAuthenticatedOrReadOnly]


class TongueMeasurementViewSet(viewsets.ReadOnlyModelViewSet):
    queryset = TongueMeasurement.objects.select_related("run")
    serializer_class = TongueMeasurementSerializer
    permission_classes = [permissions.IsAuthenticatedOrReadOnly]

    def get_queryset(self):
        queryset = super().get_queryset()
        run = self.request.query_params.get("run")
        if run:
            queryset = queryset.filter(run_id=run)
        N = self.request.query_params.get("N")
        if N and N.isdigit():
            queryset = queryset.filter(N=int(N))
        return queryset
