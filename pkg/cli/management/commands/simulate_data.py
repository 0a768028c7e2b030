"""
Management command to generate a synthetic price panel
Usage: python manage.py simulate_data --output-dir fixtures/ --n-obs 1500 --rho 0.3 --seed 11 [--jalali asset2]
"""

from cli.base import TailDepCommand, non_negative_int, positive_int
from common.utils import write_json
from copula.constants import CopulaFamily
from pipeline.constants import Calendar, Stage
from pipeline.services import simulate_panel, write_price_files


class Command(TailDepCommand):
    help = 'Simulate GARCH price paths coupled by a copula and write price files plus a ready-to-run config'
    stage = Stage.SIMULATE

    def add_command_arguments(self, parser):
        parser.add_argument('--n-obs', dest='n_obs', type=positive_int, default=1500, help='Returns per asset')
        parser.add_argument('--n-assets', dest='n_assets', type=positive_int, default=3)
        parser.add_argument('--family', choices=CopulaFamily.values(), default=CopulaFamily.GAUSSIAN)
        parser.add_argument('--rho', type=float, default=0.3, help='Correlation of elliptical families')
        parser.add_argument('--theta', type=float, help='Archimedean parameter')
        parser.add_argument('--nu', type=float, help='Degrees of freedom of the t copula')
        parser.add_argument('--labels', nargs='+', help='Asset labels (default asset1..n)')
        parser.add_argument('--jalali', action='append', default=[], metavar='LABEL', help='Write this asset\'s dates as Jalali')
        parser.add_argument('--burn-in', dest='burn_in', type=non_negative_int, help='Discarded leading observations')

    def run(self, **options):
        config = self.load_config(options)
        seed = config.master_seed
        panel = simulate_panel(
            options['n_obs'],
            n_assets=options['n_assets'],
            family=options['family'],
            rho=options['rho'],
            theta=options.get('theta'),
            nu=options.get('nu'),
            labels=options.get('labels'),
            seed=seed,
            burn_in=options.get('burn_in'),
        )
        out = self.output_dir(config)
        calendars = {label: Calendar.JALALI for label in options['jalali']}
        paths = write_price_files(panel, out, calendars=calendars)

        run_config = {
            'assets': [
                {'label': s.label, 'path': path.name, 'calendar': calendars.get(s.label, Calendar.GREGORIAN)}
                for s, path in zip(panel.series, paths)
            ],
            'master_seed': seed,
            'output_dir': 'report',
        }
        write_json(run_config, out / 'run.json')

        summary = {
            'seed': seed,
            'n_obs': options['n_obs'],
            'assets': panel.labels,
            'truth': panel.truth,
            'files': [path.name for path in paths] + ['run.json'],
        }
        self.emit_summary(summary, out / 'truth.json', title='Synthetic panel')
