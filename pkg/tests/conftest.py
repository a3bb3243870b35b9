"""
Pytest configuration and shared fixtures for EntangleOps tests.
"""
import sys
import os
from pathlib import Path
import pytest

# Set up ENTANGLEOPS_HOME environment variable before any imports
REPO_ROOT = Path(__file__).parent.parent
os.environ['ENTANGLEOPS_HOME'] = str(REPO_ROOT)

# Add py directory to Python path
PY_DIR = REPO_ROOT / "py"
sys.path.insert(0, str(PY_DIR))

# Seed for every randomized test; ensembles spawn children from it
TEST_SEED = 20240607


@pytest.fixture(autouse=True)
def fresh_configuration():
    """Every test starts from config/defaults.cfg alone."""
    import configuration_manager as cm

    cm.reset_configuration()
    yield
    cm.reset_configuration()


@pytest.fixture
def seeds():
    """Factory: count independent child seeds of TEST_SEED."""
    from states import spawn_seeds

    def make(count, base=TEST_SEED):
        return spawn_seeds(base, count)

    return make


@pytest.fixture
def write_state(tmp_path):
    """Factory: save a state to a file in tmp_path and return the path as str."""
    from schemas import save_state_file

    def write(state, name="state.json"):
        path = tmp_path / name
        save_state_file(state, str(path))
        return str(path)

    return write


@pytest.fixture
def write_config(tmp_path):
    """Factory: write an override config file and return its absolute path."""

    def write(content, name="override.cfg"):
        path = tmp_path / name
        path.write_text(content)
        return str(path)

    return write


@pytest.fixture
def bell():
    from states import bell_state
    return bell_state()


@pytest.fixture
def singlet():
    from states import singlet_state
    return singlet_state()
