import csv
import io
import json
import tempfile
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, tag

from hill.checks import CheckResult
from hill.exceptions import IntegratorFailure
from hill.management.base import NUMERICAL_ERROR, VALIDATION_ERROR, VERIFICATION_ERROR
from hill.models import TongueMeasurement, TongueRun

SMALL = {
    "name": "small",
    "g_coeffs": [[1, "1"]],
    "order": 4,
    "q_grid": [0.04, 0.06, 0.08, 0.1],
    "n_max": 2,
    "analyses": ["series", "tongues", "shape", "order"],
}


class CommandTestMixin:
    def setUp(self):
        super().setUp()
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = Path(tmp.name)

    def write_config(self, data, name="config.json"):
        path = self.tmp / name
        path.write_text(json.dumps(data))
        return str(path)

    def call(self, *args, **options):
        stdout, stderr = io.StringIO(), io.StringIO()
        call_command(*args, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue(), stderr.getvalue()

    def read_rows(self, path):
        lines = Path(path).read_text().splitlines()
        return list(csv.DictReader(lines[1:]))


class SeriesCommandTests(CommandTestMixin, SimpleTestCase):
    def test_mathieu(self):
        out = self.tmp / "mathieu"
        stdout, _ = self.call("series", config="mathieu", out=str(out))
        for name in ("omega.csv", "u.csv", "G.csv", "branches.csv", "leading.csv", "shapes.csv"):
            self.assertIn(str(out / name), stdout)
        leading = self.read_rows(out / "leading.csv")
        self.assertEqual([row["C"] for row in leading[:2]], ["-1", "1/8"])
        self.assertTrue(all(row["agree"] == "1" for row in leading))
        shapes = self.read_rows(out / "shapes.csv")
        self.assertEqual([row["classification"] for row in shapes], ["Trumpet", "Trumpet", "Horn", "Horn"])

    def test_rerun_is_byte_identical(self):
        first, second = self.tmp / "first", self.tmp / "second"
        self.call("series", config="example1", out=str(first))
        self.call("series", config="example1", out=str(second))
        for path in sorted(first.iterdir()):
            self.assertEqual(path.read_bytes(), (second / path.name).read_bytes(), path.name)
        report = json.loads((first / "coexistence.json").read_text())
        self.assertTrue(report["detected"])
        self.assertEqual(report["n_ince"], 3)

    def test_uncoupled_config(self):
        config = self.write_config({**SMALL, "f_coeffs": [[2, "1"]], "g_coeffs": []})
        self.call("series", config=config, out=str(self.tmp / "free"))
        leading = self.read_rows(self.tmp / "free" / "leading.csv")
        self.assertEqual({row["C"] for row in leading}, {"0"})

    def test_validation_error(self):
        config = self.write_config({**SMALL, "order": 1})
        with self.assertRaises(CommandError) as ctx:
            self.call("series", config=config, out=str(self.tmp / "bad"))
        self.assertEqual(ctx.exception.returncode, VALIDATION_ERROR)
        self.assertFalse((self.tmp / "bad").exists())

    def test_unknown_config(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("series", config="no-such-config")
        self.assertEqual(ctx.exception.returncode, VALIDATION_ERROR)

    def test_threads_must_be_positive(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("series", config="mathieu", threads=0)
        self.assertEqual(ctx.exception.returncode, VALIDATION_ERROR)


class TonguesCommandTests(CommandTestMixin, TestCase):
    def test_numerical_failure(self):
        config = self.write_config(SMALL)
        failure = IntegratorFailure("step size underflow")
        with mock.patch("hill.management.commands.tongues.locate_grid", side_effect=failure), \
                mock.patch("hill.management.base.sentry_sdk.capture_exception") as capture:
            with self.assertRaises(CommandError) as ctx:
                self.call("tongues", config=config, out=str(self.tmp / "out"))
        self.assertEqual(ctx.exception.returncode, NUMERICAL_ERROR)
        capture.assert_called_once_with(failure)
        self.assertFalse(TongueRun.objects.exists())

    @tag("slow")
    def test_save(self):
        config = self.write_config(SMALL)
        out = self.tmp / "out"
        stdout, stderr = self.call("tongues", config=config, out=str(out), save=True)
        self.assertIn("saved run small", stdout)
        self.assertEqual(TongueRun.objects.get().name, "small")
        self.assertEqual(TongueMeasurement.objects.count(), 8)
        rows = self.read_rows(out / "tongues.csv")
        self.assertEqual([int(row["N"]) for row in rows], [1] * 4 + [2] * 4)
        for row in rows:
            self.assertLessEqual(float(row["beta_minus"]), float(row["beta_plus"]))
            self.assertLess(float(row["abs_gap"]), 1e-5)
        fits = self.read_rows(out / "order.csv")
        self.assertAlmostEqual(float(fits[0]["slope"]), 1.0, delta=0.05)
        self.assertAlmostEqual(float(fits[1]["slope"]), 2.0, delta=0.1)
        self.assertEqual(stderr, "")


class VerifyCommandTests(CommandTestMixin, SimpleTestCase):
    def test_failure_exit_code(self):
        results = [CheckResult("passes", True, "ok"), CheckResult("fails", False, "C_2 = 0")]
        with mock.patch("hill.management.commands.verify.run_checks", return_value=results):
            with self.assertRaises(CommandError) as ctx:
                self.call("verify", config=["mathieu"], out=str(self.tmp / "checks"))
        self.assertEqual(ctx.exception.returncode, VERIFICATION_ERROR)
        rows = self.read_rows(self.tmp / "checks" / "checks.csv")
        self.assertEqual([(row["name"], row["passed"]) for row in rows], [("passes", "1"), ("fails", "0")])
        report = json.loads((self.tmp / "checks" / "checks.json").read_text())
        self.assertEqual(report[1], {"name": "fails", "passed": False, "detail": "C_2 = 0"})

    @tag("slow")
    def test_exact_checks_pass(self):
        stdout, _ = self.call("verify", config=["mathieu"], skip_oracle=True)
        self.assertIn("PASS  mathieu: eigenvalue tables", stdout)
        self.assertIn("checks passed", stdout)
        self.assertNotIn("FAIL", stdout)
