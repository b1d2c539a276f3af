"""
Shared fixtures for the edge congestion control test suite.
"""

from pathlib import Path

import numpy as np
import pytest

from src.analytic.fluid import FluidParams
from src.cce.engine import CceConfig
from src.cce.profile import peak_hour_profile
from src.cce.traffic import ContentItem, TrafficClass, default_policy
from src.harness.config import parse_config
from src.meetsim.model import DisseminationMode, MeetingModel

SAMPLE_CONFIGS = Path(__file__).resolve().parent.parent / "sample_configs"

# r0=50, M_λ=3.3e-5/s and h0 ∈ {10, 20, 30}: the canned experiment population
REFERENCE_R0 = 50
REFERENCE_M_LAMBDA = 3.3e-5
REFERENCE_H0 = (10, 20, 30)


# ── Analytic fixtures ──────────────────────────────────────────────


@pytest.fixture
def reference_params():
    """FluidParams for each canned h0, keyed by h0."""
    return {
        h0: FluidParams(r0=REFERENCE_R0, h0=h0, m_lambda=REFERENCE_M_LAMBDA) for h0 in REFERENCE_H0
    }


@pytest.fixture
def rng():
    """Seeded generator for property tests."""
    return np.random.default_rng(20240601)


# ── Simulator fixtures ─────────────────────────────────────────────


@pytest.fixture
def small_epidemic_model():
    return MeetingModel(n_requesters=50, n_holders=10, m_lambda=REFERENCE_M_LAMBDA)


@pytest.fixture
def small_fixed_model():
    return MeetingModel(
        n_requesters=50,
        n_holders=10,
        m_lambda=REFERENCE_M_LAMBDA,
        mode=DisseminationMode.FIXED_HOLDERS,
    )


# ── CCE fixtures ───────────────────────────────────────────────────


@pytest.fixture
def peak_profile():
    """Canned busy hour: 50 Mbit/s base, 95 Mbit/s in [1800, 2400), 8 Mbit DT every 10 s."""
    return peak_hour_profile()


@pytest.fixture
def peak_config():
    """Engine settings matching sample_configs/peak_hour.cfg."""
    return CceConfig(policy=default_policy(1800.0))


@pytest.fixture
def make_item():
    """Build a content item; DT by default."""
    def _build(item_id="c1", size=8e6, created_at=0.0, traffic_class=TrafficClass.DELAY_TOLERANT):
        return ContentItem(
            id=item_id, size=size, traffic_class=traffic_class, created_at=created_at
        )
    return _build


# ── Configuration fixtures ─────────────────────────────────────────


@pytest.fixture
def sample_configs():
    return SAMPLE_CONFIGS


@pytest.fixture
def minimal_config_text():
    """Only the required keys."""
    return (
        "[population]\n"
        "n_mn = 100\n"
        "r0 = 50\n"
        "h0 = 10, 20, 30\n"
        "\n"
        "[meeting]\n"
        "m_lambda = 3.3e-5\n"
        "\n"
        "[deadlines]\n"
        "ttl_s = 600, 1800, 3600\n"
    )


@pytest.fixture
def quick_config_text():
    """One (h0, TTL) cell with enough replications to validate quickly."""
    return (
        "[population]\n"
        "n_mn = 100\n"
        "r0 = 50\n"
        "h0 = 10\n"
        "\n"
        "[meeting]\n"
        "m_lambda = 3.3e-5\n"
        "\n"
        "[deadlines]\n"
        "ttl_s = 600\n"
        "\n"
        "[sim]\n"
        "replications = 200\n"
        "seed = 7\n"
    )


@pytest.fixture
def quick_config(quick_config_text):
    return parse_config(quick_config_text)


@pytest.fixture
def write_config(tmp_path):
    """Write config text to a temporary .cfg file and return its path."""
    def _write(text, name="scenario.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
