"""Settings for the hill app.

Defaults below can be overridden from the Django settings module with a single
``HILL`` dict, e.g. ``HILL = {"ROOT_TOLERANCE": 1e-12}``.
"""
from django.conf import settings

DEFAULTS = {
    # exact series
    "COEFFICIENT_BIT_LIMIT": 1_000_000,
    # floquet oracle
    "INTEGRATOR_METHOD": "DOP853",
    "INTEGRATOR_RTOL": 1e-12,
    "INTEGRATOR_ATOL": 1e-14,
    "REFINEMENT_FACTOR": 16,
    "QUADRATURE_TOLERANCE": 1e-13,
    "QUADRATURE_MAX_NODES": 2048,
    "ROOT_TOLERANCE": 1e-13,
    "SCAN_POINTS": 9,
    "WINDOW_FACTOR": 0.75,
    "TANGENCY_TOLERANCE": 1e-9,
    "ZERO_LENGTH_FLOOR": 1e-10,
    "DETERMINANT_TOLERANCE": 1e-9,
    "MAX_AMPLITUDE": 1.0,
    # turning point search extends to this many amplitudes
    "TURNING_POINT_SEARCH": 64,
}


def hill_setting(name):
    user_settings = getattr(settings, "HILL", {})
    if name not in DEFAULTS:
        raise KeyError(f"unknown HILL setting {name!r}")
    return user_settings.get(name, DEFAULTS[name])
