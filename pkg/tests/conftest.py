"""
Pytest configuration and fixtures for cross-app tests

The fixture panel is simulated once per session: three GARCH(1,1) assets
with Normal innovations coupled by a Gaussian copula (rho = 0.3), one of
them written with Jalali dates.
"""

import json
from io import StringIO

import pytest
from django.core.management import call_command

FIXTURE_SEED = 11
FIXTURE_OBS = 400


@pytest.fixture(scope='session')
def fixture_obs():
    return FIXTURE_OBS


@pytest.fixture(scope='session')
def fixture_panel_dir(tmp_path_factory):
    """Directory with asset1..asset3 price files written by simulate_data"""
    path = tmp_path_factory.mktemp('panel')
    call_command(
        'simulate_data',
        stdout=StringIO(),
        output_dir=str(path),
        n_obs=FIXTURE_OBS,
        n_assets=3,
        rho=0.3,
        jalali=['asset3'],
        burn_in=200,
        seed=FIXTURE_SEED,
    )
    return path


@pytest.fixture
def fast_config(fixture_panel_dir, tmp_path):
    """
    Run config over the fixture panel with a small model grid and few
    resamples. Returns a factory: fast_config(output_dir, **overrides).
    """
    def make(output_dir='report', **overrides):
        raw = json.loads((fixture_panel_dir / 'run.json').read_text(encoding='utf-8'))
        for asset in raw['assets']:
            asset['path'] = str(fixture_panel_dir / asset['path'])
        raw.update({
            'ar_orders': [0],
            'ma_orders': [0, 1],
            'distributions': ['norm'],
            'long_memory': False,
            'copula_families': ['gaussian', 't', 'clayton', 'gumbel', 'frank'],
            'n_bootstrap': 19,
            'n_permutations': 49,
            'output_dir': str(output_dir),
        })
        raw.update(overrides)
        path = tmp_path / f'run_{len(list(tmp_path.glob("run_*.json")))}.json'
        path.write_text(json.dumps(raw), encoding='utf-8')
        return path

    return make
