"""
Management command to fit copula families to one asset pair
Usage: python manage.py fit_copula --residuals residuals_gold.csv residuals_tse.csv --family gumbel --family t
       python manage.py fit_copula --config run.json --pair gold tse --n-bootstrap 500 --seed 7
"""

import pandas as pd

from cli.base import TailDepCommand, file_slug, positive_int
from cli.inputs import add_pair_arguments, pair_sample
from common.utils import write_csv
from copula.constants import CopulaFamily, EstimationMethod
from copula.empirical import kendall_tau
from pipeline.constants import ReportTable, Stage
from pipeline.services import PipelineService
from pipeline.types import pair_label


class Command(TailDepCommand):
    help = 'Fit copula families to a residual pair with a bootstrap goodness-of-fit p value'
    stage = Stage.COPULA_FIT

    def add_command_arguments(self, parser):
        add_pair_arguments(parser)
        parser.add_argument('--family', action='append', choices=CopulaFamily.values(), help='Family to fit (repeatable; default: config families)')
        parser.add_argument('--method', choices=EstimationMethod.run_values(), help='Estimation method, or both side by side')
        parser.add_argument('--n-bootstrap', dest='n_bootstrap', type=positive_int, help='Bootstrap replicates')

    def run(self, **options):
        config = self.load_config(
            options,
            copula_families=tuple(options['family']) if options.get('family') else None,
            copula_method=options.get('method'),
            n_bootstrap=options.get('n_bootstrap'),
        )
        a, b, s = pair_sample(config, options)
        pair = pair_label(a, b)
        rows, _ = PipelineService.fit_pair(pair, s, config)
        out = self.output_dir(config)
        write_csv(pd.DataFrame(rows, columns=ReportTable.COLUMNS[ReportTable.COPULA_FITS]), out / f'copula_{file_slug(a, b)}.csv')

        methods = EstimationMethod.expand(config.copula_method)
        fits = sorted(rows, key=lambda row: (methods.index(row['method']), row['rank'] != row['rank'], row['rank']))
        summary = {
            'pair': pair,
            'n_obs': s.n,
            'kendall_tau': kendall_tau(s),
            'seed': config.master_seed,
            'fits': [
                {key: row[key] for key in ('family', 'method', 'status', 'theta', 'nu', 'aic', 'gof_statistic', 'gof_p_value', 'rank')}
                for row in fits
            ],
        }
        self.emit_summary(summary, out / f'copula_{file_slug(a, b)}.json', title=f'{pair}: copula fits ({EstimationMethod.get_display(config.copula_method)})')
