"""
Report Service - Write ReportTables to disk.

csv   one <table>.csv per table (fixed float format, "\n" line endings)
json  report.json with every table as a list of records plus run metadata
xlsx  report.xlsx with one sheet per table (openpyxl)

csv and json output is byte-identical for identical tables. The workbook
carries timestamps and is not.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Union

import pandas as pd

from common.exceptions import ConfigurationError
from common.utils import ensure_dir, taildep_setting, write_csv, write_json

from ..constants import ReportFormat
from ..types import ReportTables

logger = logging.getLogger(__name__)


def _records(frame: pd.DataFrame) -> list:
    frame = frame.astype(object).where(pd.notna(frame), None)
    return frame.to_dict(orient="records")


class ReportService:
    """Service for report emission"""

    @staticmethod
    def summary(tables: ReportTables) -> dict:
        """Structured summary of all tables and the run metadata."""
        return {
            "metadata": tables.metadata,
            "tables": {name: _records(frame) for name, frame in tables.tables().items()},
        }

    @staticmethod
    def emit_report(
        tables: ReportTables,
        output_dir: Union[str, Path],
        formats: Optional[Iterable[str]] = None,
    ) -> List[Path]:
        """
        Serialize every table in the requested formats.

        Returns:
            Written paths, in a fixed order

        Raises:
            ConfigurationError: Unknown format
        """
        formats = list(formats if formats is not None else taildep_setting("REPORT_FORMATS"))
        unknown = [f for f in formats if f not in ReportFormat.values()]
        if unknown:
            raise ConfigurationError(f"unknown report format(s): {', '.join(unknown)}", errors={"formats": unknown})
        output_dir = ensure_dir(output_dir)
        paths = []

        if ReportFormat.CSV in formats:
            for name, frame in tables.tables().items():
                paths.append(write_csv(frame, output_dir / f"{name}.csv"))

        if ReportFormat.JSON in formats:
            paths.append(write_json(ReportService.summary(tables), output_dir / "report.json"))

        if ReportFormat.XLSX in formats:
            path = output_dir / "report.xlsx"
            with pd.ExcelWriter(path, engine="openpyxl") as writer:
                for name, frame in tables.tables().items():
                    frame.to_excel(writer, sheet_name=name[:31], index=False)
            paths.append(path)

        logger.info(f"Wrote {len(paths)} report files to {output_dir}")
        return paths


def emit_report(tables: ReportTables, output_dir: Union[str, Path], formats: Optional[Iterable[str]] = None) -> List[Path]:
    return ReportService.emit_report(tables, output_dir, formats=formats)


def report_summary(tables: ReportTables) -> dict:
    return ReportService.summary(tables)
