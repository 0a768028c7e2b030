"""
Management command to fit the marginal model of one asset
Usage: python manage.py fit_margin --config run.json --asset gold
       python manage.py fit_margin --prices gold.csv --ar-order 1 --dist std
"""

from cli.base import TailDepCommand
from cli.inputs import add_margin_arguments, asset_returns, fit_margin
from common.utils import write_csv
from pipeline.constants import Stage


class Command(TailDepCommand):
    help = 'Fit an ARMA/FARIMA-GARCH model by maximum likelihood, or select one over the config grid'
    stage = Stage.MODEL_SELECTION

    def add_command_arguments(self, parser):
        add_margin_arguments(parser)

    def run(self, **options):
        config = self.load_config(options)
        label, _, r = asset_returns(config, options)
        fitted, selection = fit_margin(r, label, config, options)
        out = self.output_dir(config)

        write_csv(fitted.param_table(), out / f'params_{label}.csv')
        if selection is not None:
            write_csv(selection, out / f'model_selection_{label}.csv')

        summary = {'asset': label, **fitted.summary()}
        self.emit_summary(summary, out / f'fit_{label}.json', title=f'{label}: {fitted.spec.label}')
