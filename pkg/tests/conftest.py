import pytest

from dcpsampler import build_context, count_paths


@pytest.fixture(scope="session")
def counts300():
    """Exact path counts to 300; enough that sum c_n x^n converges for x <= 0.6."""
    return count_paths(300).counts


@pytest.fixture(scope="session")
def ctx03():
    return build_context(0.3)


@pytest.fixture(scope="session")
def ctx05():
    return build_context(0.5)


def series_value(counts, x):
    """Independent evaluation of the counting series from exact coefficients."""
    total = 0.0
    xn = 1.0
    for c in counts:
        total += c * xn
        xn *= x
    return total
