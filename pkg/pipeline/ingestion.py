"""
Price file ingestion, log returns and calendar alignment.

Files are read with every column as text so that each row can be parsed
and reported by its line number (header = line 1). Dates are ISO-8601
(python-dateutil) or Jalali "YYYY/MM/DD" per the file's calendar flag, or
follow an explicit strptime format when one is configured.

Usage:
    from pipeline.ingestion import parse_price_csv, align_by_date

    gold = parse_price_csv("gold.csv", label="gold")
    tse = parse_price_csv("tse.csv", label="tse", calendar="jalali")
    panel = align_by_date(gold, tse)
"""

import datetime
import logging
import math
from functools import reduce
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from dateutil import parser as date_parser

from common.exceptions import DataValidationError

from .constants import Calendar
from .jalali import parse_jalali
from .types import AlignedPanel, AssetSource, PriceSeries

logger = logging.getLogger(__name__)


def _parse_date(text: str, calendar: str, date_format: str, line: int) -> datetime.date:
    try:
        if calendar == Calendar.JALALI:
            return parse_jalali(text)
        if date_format:
            return datetime.datetime.strptime(text.strip(), date_format).date()
        return date_parser.isoparse(text.strip()).date()
    except DataValidationError as exc:
        raise DataValidationError(exc.message, errors={"date": text}, line=line) from None
    except (ValueError, OverflowError):
        raise DataValidationError(f"unparseable date '{text}'", errors={"date": text}, line=line) from None


def _parse_price(text: str, line: int) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise DataValidationError(f"unparseable price '{text}'", errors={"price": text}, line=line) from None
    if not math.isfinite(value) or value <= 0.0:
        raise DataValidationError(f"price must be positive, got '{text}'", errors={"price": text}, line=line)
    return value


def parse_price_csv(
    path: Union[str, Path],
    label: str = "",
    date_column: str = "date",
    price_column: str = "price",
    calendar: str = Calendar.GREGORIAN,
    date_format: str = "",
) -> PriceSeries:
    """
    Read, validate and sort one price file.

    Args:
        path: Delimited text file with a header row
        label: Asset label (file stem by default)
        date_column: Name of the date column
        price_column: Name of the price column
        calendar: Calendar.GREGORIAN or Calendar.JALALI
        date_format: Optional strptime format for Gregorian dates

    Returns:
        PriceSeries sorted by ascending date

    Raises:
        DataValidationError: Missing file or column, malformed row,
            non-positive price or duplicate date (with line number)
    """
    path = Path(path)
    label = label or path.stem
    if not path.is_file():
        raise DataValidationError(f"price file {path} does not exist", errors={"path": str(path)})
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    missing = [c for c in (date_column, price_column) if c not in frame.columns]
    if missing:
        raise DataValidationError(
            f"{path.name}: missing column(s) {', '.join(missing)}; found {', '.join(frame.columns)}",
            errors={"columns": missing},
        )
    if frame.empty:
        raise DataValidationError(f"{path.name}: no data rows")

    seen = {}
    records = []
    for index, (raw_date, raw_price) in enumerate(zip(frame[date_column], frame[price_column])):
        line = index + 2
        date = _parse_date(raw_date, calendar, date_format, line)
        price = _parse_price(raw_price, line)
        if date in seen:
            raise DataValidationError(
                f"duplicate date {date.isoformat()} (first seen on line {seen[date]})",
                errors={"date": date.isoformat()},
                line=line,
            )
        seen[date] = line
        records.append((date, price))

    records.sort(key=lambda item: item[0])
    logger.info(f"Read {len(records)} prices for {label} from {path.name}")
    return PriceSeries(label=label, dates=tuple(d for d, _ in records), prices=np.array([p for _, p in records]))


def parse_asset(source: AssetSource) -> PriceSeries:
    return parse_price_csv(
        source.path,
        label=source.label,
        date_column=source.date_column,
        price_column=source.price_column,
        calendar=source.calendar,
        date_format=source.date_format,
    )


def log_returns(s: PriceSeries) -> np.ndarray:
    """r_t = ln(S_t / S_{t-1}), length T - 1."""
    return np.diff(np.log(s.prices))


def align_by_date(*series: PriceSeries) -> AlignedPanel:
    """
    Inner join on dates, then log returns between consecutive common dates.

    A return is kept only when, for every asset, the previous common date
    is also that asset's previous raw observation. Rows that would span a
    raw price dropped by the join are removed, so every cell is the log
    ratio of two consecutive raw prices of the same asset.

    Raises:
        DataValidationError: Fewer than two series, repeated labels, or
            no consecutive common dates
    """
    if len(series) < 2:
        raise DataValidationError(f"alignment needs at least 2 series, got {len(series)}")
    labels = [s.label for s in series]
    if len(set(labels)) != len(labels):
        raise DataValidationError(f"asset labels must be unique, got {labels}")

    common = reduce(lambda acc, s: acc.intersection(s.dates), series[1:], set(series[0].dates))
    if len(common) < 2:
        raise DataValidationError(
            f"empty panel: {len(common)} common date(s) across {', '.join(labels)}",
            errors={"common_dates": len(common)},
        )
    for s in series:
        logger.info(f"Alignment: {s.label} keeps {len(common)} of {s.n} dates ({s.n - len(common)} dropped)")

    prices = pd.concat([s.to_series() for s in series], axis=1, join="inner").sort_index()
    dates = list(prices.index)
    previous_raw = [dict(zip(s.dates[1:], s.dates[:-1])) for s in series]
    consecutive = [
        all(previous.get(date) == before for previous in previous_raw)
        for before, date in zip(dates[:-1], dates[1:])
    ]
    returns = np.log(prices).diff().iloc[1:][consecutive]
    n_gaps = len(consecutive) - len(returns)
    if n_gaps:
        logger.warning(f"Alignment: dropped {n_gaps} return(s) spanning a price missing from another asset")
    if returns.empty:
        raise DataValidationError(
            f"empty panel: no consecutive common dates across {', '.join(labels)}",
            errors={"common_dates": len(common), "gap_returns": n_gaps},
        )
    return AlignedPanel(prices=prices, returns=returns)
