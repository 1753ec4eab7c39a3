import numpy as np
import pytest

from cartankit.models import builtin_model


@pytest.fixture(scope="session")
def ek_model():
    return builtin_model("extremal_kahler")


@pytest.fixture(scope="session")
def su21_model():
    return builtin_model("ek_su21")


@pytest.fixture(scope="session")
def cc2_model():
    return builtin_model("constant_curvature", n=2)


@pytest.fixture(scope="session")
def cc3_model():
    return builtin_model("constant_curvature", n=3)


@pytest.fixture(scope="session")
def trivial_model():
    return builtin_model("trivial")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def status_line(request):
    """Write a line through the terminal reporter so it shows without -s."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def write(text):
        if reporter is not None:
            reporter.ensure_newline()
            reporter.write_line(text)
        else:  # pragma: no cover - plugin always present under pytest
            print(text)

    return write
