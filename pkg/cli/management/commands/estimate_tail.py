"""
Management command to estimate tail dependence coefficients of one pair
Usage: python manage.py estimate_tail --residuals residuals_gold.csv residuals_tse.csv --k 40
       python manage.py estimate_tail --config run.json --pair gold tse --family gumbel --k-exponent 0.4 --k-exponent 0.6
"""

import logging

import pandas as pd

from cli.base import TailDepCommand, file_slug, positive_int
from cli.inputs import add_pair_arguments, pair_sample
from common.exceptions import InfeasibleFitError
from common.utils import write_csv
from copula.constants import CopulaFamily, EstimationMethod, TailSource
from copula.empirical import tail_coeff_estimates, tail_k_sweep
from copula.families import tail_coeffs_analytic
from copula.services import fit_copula, tail_agreement
from pipeline.constants import ReportTable, Stage
from pipeline.types import pair_label

logger = logging.getLogger(__name__)


class Command(TailDepCommand):
    help = 'Empirical tail copula estimates at a scaling factor k, a k sweep, and fitted-family tails'
    stage = Stage.TAIL

    def add_command_arguments(self, parser):
        add_pair_arguments(parser)
        parser.add_argument('--k', type=positive_int, help='Scaling factor (default floor(sqrt(T)))')
        parser.add_argument('--k-exponent', dest='k_exponents', type=float, action='append', help='Sweep k = floor(T^e) (repeatable)')
        parser.add_argument('--family', action='append', default=[], choices=CopulaFamily.values(), help='Add analytic tails of a fitted family')
        parser.add_argument('--method', choices=EstimationMethod.run_values(), help='Estimation method for --family fits, or both')

    def run(self, **options):
        config = self.load_config(
            options,
            tail_k=options.get('k'),
            tail_k_exponents=tuple(options['k_exponents']) if options.get('k_exponents') else None,
            copula_method=options.get('method'),
        )
        a, b, s = pair_sample(config, options)
        pair = pair_label(a, b)

        empirical = tail_coeff_estimates(s, k=config.tail_k)
        rows = [{
            'pair': pair, 'family': 'empirical', 'method': '', 'source': TailSource.EMPIRICAL, 'k': empirical.k,
            'lambda_lower': empirical.lambda_lower, 'lambda_upper': empirical.lambda_upper,
            'tail_agreement': float('nan'),
        }]
        for method in EstimationMethod.expand(config.copula_method):
            for family in options['family']:
                try:
                    fit = fit_copula(family, s, method=method)
                except InfeasibleFitError as exc:
                    logger.warning(f"{pair}: {family} copula not fitted by {method}: {exc}")
                    continue
                estimate = tail_coeffs_analytic(fit.model)
                rows.append({
                    'pair': pair, 'family': family, 'method': method, 'source': TailSource.ANALYTIC, 'k': float('nan'),
                    'lambda_lower': estimate.lambda_lower, 'lambda_upper': estimate.lambda_upper,
                    'tail_agreement': tail_agreement(estimate, empirical),
                })
        sweep = tail_k_sweep(s, config.tail_k_exponents).assign(pair=pair)[ReportTable.COLUMNS[ReportTable.TAIL_SENSITIVITY]]

        out = self.output_dir(config)
        slug = file_slug(a, b)
        write_csv(pd.DataFrame(rows, columns=ReportTable.COLUMNS[ReportTable.TAIL_COEFFICIENTS]), out / f'tail_{slug}.csv')
        write_csv(sweep, out / f'tail_sensitivity_{slug}.csv')

        summary = {
            'pair': pair,
            'n_obs': s.n,
            'estimates': [{key: row[key] for key in ('family', 'method', 'k', 'lambda_lower', 'lambda_upper', 'tail_agreement')} for row in rows],
            'sweep': sweep.drop(columns='pair').to_dict(orient='records'),
        }
        self.emit_summary(summary, out / f'tail_{slug}.json', title=f'{pair}: tail dependence')
