"""
Pipeline services package.

Model selection, end-to-end runs, report and plot-data output, and
synthetic panels for fixtures.
"""

from .model_selection_service import CandidateResult, ModelSelection, ModelSelectionService, select_model
from .pipeline_service import PipelineService, run_pipeline, stage
from .plot_data_service import PlotDataService, acf_data, emit_plot_data, qq_data
from .report_service import ReportService, emit_report, report_summary
from .synthetic_service import (
    SyntheticPanel,
    SyntheticService,
    default_margin,
    default_spec,
    simulate_panel,
    write_price_files,
)

__all__ = [
    'CandidateResult',
    'ModelSelection',
    'ModelSelectionService',
    'PipelineService',
    'PlotDataService',
    'ReportService',
    'SyntheticPanel',
    'SyntheticService',
    'acf_data',
    'default_margin',
    'default_spec',
    'emit_plot_data',
    'emit_report',
    'qq_data',
    'report_summary',
    'run_pipeline',
    'select_model',
    'simulate_panel',
    'stage',
    'write_price_files',
]
