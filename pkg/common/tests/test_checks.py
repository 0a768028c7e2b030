"""
Unit Tests for the TAILDEP system checks
"""

from django.test import SimpleTestCase, override_settings

from common.checks import check_taildep_settings


def check_ids(**taildep):
    """Helper: ids reported for a TAILDEP block"""
    with override_settings(TAILDEP=taildep):
        return [message.id for message in check_taildep_settings(None)]


class TaildepChecksTest(SimpleTestCase):
    """Test suite for check_taildep_settings"""

    def test_defaults_pass(self):
        self.assertEqual(check_ids(), [])

    def test_unknown_key(self):
        self.assertIn("common.W002", check_ids(N_BOOTSTAP=10))

    def test_non_positive_count(self):
        self.assertIn("common.E001", check_ids(N_BOOTSTRAP=0))

    def test_exponents(self):
        self.assertIn("common.E002", check_ids(TAIL_K_EXPONENTS=(0.5, 1.0)))

    def test_copula_method(self):
        self.assertIn("common.E004", check_ids(COPULA_METHOD="moments"))
        self.assertEqual(check_ids(COPULA_METHOD="both"), [])

    def test_gate_alpha(self):
        self.assertIn("common.E005", check_ids(GATE_ALPHA=1.5))

    def test_report_format(self):
        self.assertIn("common.E006", check_ids(REPORT_FORMATS=("csv", "pdf")))
