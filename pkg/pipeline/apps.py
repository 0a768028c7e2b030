from django.apps import AppConfig


class PipelineConfig(AppConfig):
    """Price ingestion, end-to-end analysis runs and report output."""

    name = 'pipeline'
