"""
Pipeline Configuration Forms

Django forms validate the JSON run configuration before any computation:
PipelineConfigForm for the scalar and list keys, AssetSourceFormSet for
the asset list.
"""

import re

from django import forms

from common.utils import taildep_setting
from copula.constants import CopulaFamily, EstimationMethod
from dists.constants import DistributionFamily

from .constants import Calendar, ReportFormat

_LABEL_PATTERN = re.compile(r"^[A-Za-z0-9_.-]+$")


def _lag_choices():
    return [(str(i), str(i)) for i in range(int(taildep_setting("MAX_LAG_ORDER")) + 1)]


class PipelineConfigForm(forms.Form):
    """
    Scalar and list settings of one run.

    List-valued keys arrive as JSON lists; lag orders are restricted to
    0..TAILDEP['MAX_LAG_ORDER'].
    """

    ar_orders = forms.TypedMultipleChoiceField(choices=_lag_choices, coerce=int)
    ma_orders = forms.TypedMultipleChoiceField(choices=_lag_choices, coerce=int)
    garch_orders = forms.JSONField()
    distributions = forms.MultipleChoiceField(choices=DistributionFamily.CHOICES)
    long_memory = forms.BooleanField(required=False)
    long_memory_dist = forms.ChoiceField(choices=DistributionFamily.CHOICES)
    sghyd_index = forms.FloatField()
    ljung_box_lags = forms.JSONField()
    adf_lags = forms.IntegerField(min_value=0)
    gate_alpha = forms.FloatField(min_value=0.0, max_value=1.0)
    copula_families = forms.MultipleChoiceField(choices=CopulaFamily.CHOICES)
    copula_method = forms.ChoiceField(choices=EstimationMethod.RUN_CHOICES)
    n_bootstrap = forms.IntegerField(min_value=1)
    n_permutations = forms.IntegerField(min_value=1)
    tail_k = forms.IntegerField(min_value=1, required=False)
    tail_k_exponents = forms.JSONField()
    master_seed = forms.IntegerField(min_value=0)
    threads = forms.IntegerField(min_value=1)
    output_dir = forms.CharField(max_length=1024)
    report_formats = forms.MultipleChoiceField(choices=ReportFormat.CHOICES)

    def clean_garch_orders(self):
        """List of [k, l] pairs within the lag limit, not both zero."""
        value = self.cleaned_data.get("garch_orders")
        max_order = int(taildep_setting("MAX_LAG_ORDER"))
        if not isinstance(value, list) or not value:
            raise forms.ValidationError("Must be a non-empty list of [k, l] pairs.")
        orders = []
        for item in value:
            if (
                not isinstance(item, (list, tuple))
                or len(item) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) and 0 <= v <= max_order for v in item)
            ):
                raise forms.ValidationError(f"Invalid GARCH order {item!r}: expected [k, l] with 0 <= k, l <= {max_order}.")
            orders.append((int(item[0]), int(item[1])))
        return tuple(orders)

    def clean_ljung_box_lags(self):
        value = self.cleaned_data.get("ljung_box_lags")
        if not isinstance(value, list) or not value or not all(isinstance(v, int) and v >= 1 for v in value):
            raise forms.ValidationError("Must be a non-empty list of positive integers.")
        return tuple(value)

    def clean_tail_k_exponents(self):
        value = self.cleaned_data.get("tail_k_exponents")
        if not isinstance(value, list) or not value:
            raise forms.ValidationError("Must be a non-empty list of exponents.")
        try:
            exponents = tuple(float(v) for v in value)
        except (TypeError, ValueError):
            raise forms.ValidationError("Exponents must be numbers.") from None
        if any(not 0.0 < e < 1.0 for e in exponents):
            raise forms.ValidationError("Exponents must lie in (0, 1).")
        return exponents

    def clean_gate_alpha(self):
        alpha = self.cleaned_data.get("gate_alpha")
        if alpha is not None and not 0.0 < alpha < 1.0:
            raise forms.ValidationError("Must be strictly between 0 and 1.")
        return alpha


class AssetSourceForm(forms.Form):
    """One price file of the panel."""

    label = forms.CharField(max_length=64)
    path = forms.CharField(max_length=1024)
    date_column = forms.CharField(max_length=128, required=False)
    price_column = forms.CharField(max_length=128, required=False)
    calendar = forms.ChoiceField(choices=Calendar.CHOICES, required=False)
    date_format = forms.CharField(max_length=64, required=False)

    def clean_label(self):
        label = self.cleaned_data["label"]
        if not _LABEL_PATTERN.match(label):
            raise forms.ValidationError("Use letters, digits, '_', '-' or '.' only.")
        return label

    def clean(self):
        cleaned_data = super().clean()
        cleaned_data["date_column"] = cleaned_data.get("date_column") or "date"
        cleaned_data["price_column"] = cleaned_data.get("price_column") or "price"
        cleaned_data["calendar"] = cleaned_data.get("calendar") or Calendar.GREGORIAN
        if cleaned_data["calendar"] == Calendar.JALALI and cleaned_data.get("date_format"):
            self.add_error("date_format", "Jalali dates are always read as YYYY/MM/DD.")
        return cleaned_data


class BaseAssetSourceFormSet(forms.BaseFormSet):
    def clean(self):
        """Asset labels must be unique."""
        if any(self.errors):
            return
        labels = [form.cleaned_data.get("label") for form in self.forms]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise forms.ValidationError(f"Duplicate asset labels: {', '.join(duplicates)}")


AssetSourceFormSet = forms.formset_factory(
    AssetSourceForm,
    formset=BaseAssetSourceFormSet,
    extra=0,
    min_num=2,
    validate_min=True,
)
