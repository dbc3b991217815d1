import pytest

import zreadout as z


@pytest.fixture(scope="session")
def bundle():
    return z.load_config(None)


@pytest.fixture(scope="session")
def prepared(bundle):
    """Calibrated seed, noise floor, basis, seed projection, weights."""
    return z.prepare_run(bundle)


@pytest.fixture(scope="session")
def comparison(bundle):
    """Full reference training run (500 iterations); shared because it is
    the expensive fixture behind several acceptance criteria."""
    return z.run_comparison(bundle)
