import numpy as np
import pytest

from nfbm.beamspace import decompose
from nfbm.presets import default_config, link_channel


@pytest.fixture(scope="session")
def fig3_cfg():
    return default_config("fig3")


@pytest.fixture(scope="session")
def fig3_channels(fig3_cfg):
    """Uplink channels of the 48x256 setup at the acceptance distance grid."""
    return {r: link_channel(fig3_cfg, r) for r in (50.0, 25.0, 20.0, 10.0, 5.0, 1.0)}


@pytest.fixture(scope="session")
def fig3_decompositions(fig3_channels):
    return {r: decompose(h) for r, h in fig3_channels.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
