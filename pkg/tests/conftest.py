import numpy as np
import pytest

from octkcf.synth import write_fixtures


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def synth_root(tmp_path_factory):
    """OTB-layout synthetic sequences written once per session."""
    return write_fixtures(tmp_path_factory.mktemp("dataset"))
