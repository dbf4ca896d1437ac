"""Pytest wiring for the Django project under tonguelab/.

Configures Django settings and creates the test database with Django's
own test utilities, so django.test.TestCase classes run under pytest.
"""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tonguelab.settings")
django.setup()

_state = {}


def pytest_sessionstart(session):
    from django.test.runner import DiscoverRunner
    from django.test.utils import setup_test_environment

    setup_test_environment()
    runner = DiscoverRunner(verbosity=0, interactive=False)
    _state["runner"] = runner
    _state["old_config"] = runner.setup_databases()


def pytest_sessionfinish(session, exitstatus):
    from django.test.utils import teardown_test_environment

    runner = _state.get("runner")
    if runner is not None:
        runner.teardown_databases(_state["old_config"])
        teardown_test_environment()
