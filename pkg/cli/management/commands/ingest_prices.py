"""
Management command to validate price files and write the aligned returns
Usage: python manage.py ingest_prices gold=gold.csv tse=tse.csv --jalali tse [--output-dir out/]
       python manage.py ingest_prices --config run.json
"""

from pathlib import Path

from cli.base import TailDepCommand
from common.exceptions import ConfigurationError
from common.utils import write_csv
from pipeline.constants import Calendar, Stage
from pipeline.ingestion import align_by_date, parse_asset
from pipeline.types import AssetSource


class Command(TailDepCommand):
    help = 'Validate price files, align them on common dates and write the log-return panel'
    stage = Stage.INGEST

    def add_command_arguments(self, parser):
        parser.add_argument(
            'files',
            nargs='*',
            metavar='LABEL=PATH',
            help='Price files (LABEL= defaults to the file stem); the config assets are used when omitted',
        )
        parser.add_argument('--jalali', action='append', default=[], metavar='LABEL', help='Read this asset\'s dates as Jalali')
        parser.add_argument('--date-column', default='date')
        parser.add_argument('--price-column', default='price')
        parser.add_argument('--date-format', default='', help='strptime format for Gregorian dates')

    def sources(self, options, config):
        if not options['files']:
            return list(config.assets)
        sources = []
        for item in options['files']:
            label, _, path = item.rpartition('=')
            path = Path(path)
            label = label or path.stem
            calendar = Calendar.JALALI if label in options['jalali'] else Calendar.GREGORIAN
            sources.append(AssetSource(
                label=label,
                path=path,
                date_column=options['date_column'],
                price_column=options['price_column'],
                calendar=calendar,
                date_format='' if calendar == Calendar.JALALI else options['date_format'],
            ))
        return sources

    def run(self, **options):
        config = self.load_config(options)
        sources = self.sources(options, config)
        if len(sources) < 2:
            raise ConfigurationError(f"ingestion needs at least 2 price files, got {len(sources)}")

        series = [parse_asset(source) for source in sources]
        panel = align_by_date(*series)
        out = self.output_dir(config)
        write_csv(panel.returns.reset_index(), out / 'returns.csv')

        dates = list(panel.prices.index)
        summary = {
            'assets': {
                s.label: {
                    'n_prices': s.n,
                    'first_date': s.dates[0].isoformat(),
                    'last_date': s.dates[-1].isoformat(),
                    'dropped': s.n - len(dates),
                }
                for s in series
            },
            'panel': {
                'n_prices': len(dates),
                'n_returns': panel.n_obs,
                'gap_returns_dropped': len(dates) - 1 - panel.n_obs,
                'first_date': dates[0].isoformat(),
                'last_date': dates[-1].isoformat(),
            },
        }
        self.emit_summary(summary, out / 'ingest_summary.json', title='Ingestion summary')
