"""
Jalali (Persian) calendar conversion.

Conversion is delegated to jdatetime, which implements the arithmetic
33-year cycle (leap years are those with year mod 33 in 1, 5, 9, 13, 17,
22, 26, 30). Only years 1300-1500 are accepted.

Usage:
    from pipeline.jalali import jalali_to_gregorian, parse_jalali

    jalali_to_gregorian(1384, 1, 1)      # date(2005, 3, 21)
    parse_jalali("1384/01/01")
"""

import datetime
import re
from typing import Tuple

import jdatetime

from common.exceptions import DataValidationError

from .constants import JalaliRange

_JALALI_PATTERN = re.compile(r"^\s*(\d{4})[/-](\d{1,2})[/-](\d{1,2})\s*$")


def _check_year(jy: int) -> None:
    if not JalaliRange.MIN_YEAR <= jy <= JalaliRange.MAX_YEAR:
        raise DataValidationError(
            f"Jalali year {jy} outside the supported range {JalaliRange.MIN_YEAR}-{JalaliRange.MAX_YEAR}",
            errors={"year": jy},
        )


def jalali_to_gregorian(jy: int, jm: int, jd: int) -> datetime.date:
    """
    Convert a Jalali date to a Gregorian date.

    Raises:
        DataValidationError: Year out of range, or invalid month/day
    """
    _check_year(int(jy))
    try:
        return jdatetime.date(int(jy), int(jm), int(jd)).togregorian()
    except ValueError as exc:
        raise DataValidationError(
            f"invalid Jalali date {jy:04d}/{jm:02d}/{jd:02d}: {exc}",
            errors={"date": f"{jy}/{jm}/{jd}"},
        ) from None


def gregorian_to_jalali(value: datetime.date) -> Tuple[int, int, int]:
    """Inverse of jalali_to_gregorian."""
    j = jdatetime.date.fromgregorian(date=value)
    _check_year(j.year)
    return j.year, j.month, j.day


def is_leap_year(jy: int) -> bool:
    return bool(jdatetime.date(int(jy), 1, 1).isleap())


def parse_jalali(text: str) -> datetime.date:
    """Parse "YYYY/MM/DD" (or "YYYY-MM-DD") in the Jalali calendar."""
    match = _JALALI_PATTERN.match(str(text))
    if not match:
        raise DataValidationError(f"'{text}' is not a Jalali date of the form YYYY/MM/DD")
    return jalali_to_gregorian(*(int(part) for part in match.groups()))
