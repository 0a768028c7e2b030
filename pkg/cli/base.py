"""
Shared base for the analysis management commands.

Every command accepts --config, --seed, --threads and --output-dir; flags
override the matching config keys. Typed analysis errors become a
CommandError with exit status 1 and a stage-labeled message; argparse
usage errors exit with status 2.
"""

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from django.core.management.base import BaseCommand, CommandError

from common.exceptions import TailDepError
from common.utils import clean_for_json, ensure_dir, write_json
from pipeline.config import default_run_config, load_run_config
from pipeline.types import RunConfig

logger = logging.getLogger(__name__)


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {value}")
    return value


def file_slug(*labels: str) -> str:
    """Filename-safe join of asset labels."""
    return "__".join(labels)


class TailDepCommand(BaseCommand):
    """
    Base class for analysis commands.

    Subclasses set `stage`, add their own flags in add_command_arguments()
    and implement run(**options).
    """

    stage: str = ""

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Run config (JSON); flags override its keys')
        parser.add_argument('--seed', type=non_negative_int, help='Master seed for every random stream')
        parser.add_argument('--threads', type=positive_int, help='Worker limit for parallel stages')
        parser.add_argument('--output-dir', dest='output_dir', help='Directory for output files')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except TailDepError as exc:
            exc.with_stage(self.stage)
            logger.error(f"{self.__module__.rsplit('.', 1)[-1]} failed: {exc}")
            raise CommandError(str(exc), returncode=1) from exc

    def run(self, **options):
        raise NotImplementedError

    # ==== Helpers ====

    def load_config(self, options: Dict[str, Any], **overrides: Any) -> RunConfig:
        """Config file (or settings defaults) with flag overrides applied."""
        config = load_run_config(options["config"]) if options.get("config") else default_run_config()
        output_dir = options.get("output_dir")
        return config.with_overrides(
            master_seed=options.get("seed"),
            threads=options.get("threads"),
            output_dir=Path(output_dir).resolve() if output_dir else None,
            **overrides,
        )

    def output_dir(self, config: RunConfig) -> Path:
        return ensure_dir(config.output_dir)

    def emit_summary(self, summary: Dict[str, Any], path: Path, title: Optional[str] = None) -> Path:
        """Write the summary as JSON and print the same values."""
        write_json(summary, path)
        if title:
            self.stdout.write(title)
        self._print_items(clean_for_json(summary), indent=1)
        self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))
        return path

    def _print_items(self, mapping: Dict[str, Any], indent: int):
        pad = '  ' * indent
        for key, value in mapping.items():
            if isinstance(value, dict):
                self.stdout.write(f'{pad}{key}:')
                self._print_items(value, indent + 1)
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                self.stdout.write(f'{pad}{key}:')
                for item in value:
                    self.stdout.write(f'{pad}  - ' + ', '.join(f'{k}={_text(v)}' for k, v in item.items()))
            else:
                self.stdout.write(f'{pad}{key}: {_text(value)}')


def _text(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return json.dumps(list(value), default=str)
    return str(value)
