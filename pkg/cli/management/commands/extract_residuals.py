"""
Management command to write standardized residuals and their PIT series
Usage: python manage.py extract_residuals --config run.json --asset gold
"""

import numpy as np
import pandas as pd

from cli.base import TailDepCommand
from cli.inputs import add_margin_arguments, asset_returns, fit_margin
from common.utils import write_csv
from pipeline.constants import Stage
from stattests.services import ks_uniform, ljung_box
from tsmodel.services import pit_series


class Command(TailDepCommand):
    help = 'Filter one asset through its fitted model and write eps_t and F(eps_t)'
    stage = Stage.RESIDUALS

    def add_command_arguments(self, parser):
        add_margin_arguments(parser)

    def run(self, **options):
        config = self.load_config(options)
        label, dates, r = asset_returns(config, options)
        fitted, _ = fit_margin(r, label, config, options)
        out = self.output_dir(config)

        eps = np.asarray(fitted.filtered.eps)
        pit = pit_series(fitted.dist, eps)
        frame = pd.DataFrame({
            'date': [d.isoformat() for d in dates],
            'return': r,
            'a': fitted.filtered.a,
            'sigma': fitted.filtered.sigma,
            'eps': eps,
            'pit': pit,
        })
        write_csv(frame, out / f'residuals_{label}.csv')

        ks = ks_uniform(pit)
        summary = {
            'asset': label,
            'spec': fitted.spec.label,
            'n_obs': len(eps),
            'eps_mean': float(eps.mean()),
            'eps_std': float(eps.std(ddof=1)),
            'pit_ks_statistic': ks.statistic,
            'pit_ks_p_value': ks.p_value,
            'ljung_box': {
                f'lag_{lag}': {
                    'eps_p_value': ljung_box(eps, lag).p_value,
                    'eps_sq_p_value': ljung_box(eps ** 2, lag).p_value,
                }
                for lag in config.ljung_box_lags
            },
        }
        self.emit_summary(summary, out / f'residuals_{label}.json', title=f'{label}: residuals of {fitted.spec.label}')
