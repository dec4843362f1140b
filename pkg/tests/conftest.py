import pytest

from okdens import parse_field

# published reference tables: (n, m) -> (empirical, predicted), 50000 samples
# at B = 3, five decimals
TABLE_Z = {
    (1, 2): (0.66896, 0.60792),
    (1, 3): (0.84234, 0.83190),
    (2, 3): (0.53026, 0.50573),
    (1, 4): (0.92652, 0.92393),
    (2, 4): (0.77268, 0.76863),
    (3, 4): (0.47866, 0.46727),
    (1, 5): (0.96530, 0.96438),
    (2, 5): (0.89246, 0.89103),
    (3, 5): (0.74122, 0.74125),
    (4, 5): (0.45820, 0.45063),
}
TABLE_SQRT2 = {
    (1, 2): (0.70308, 0.69687),
    (1, 3): (0.86826, 0.86803),
    (2, 3): (0.60542, 0.60491),
    (1, 4): (0.93628, 0.93654),
    (2, 4): (0.81370, 0.81295),
    (3, 4): (0.56878, 0.56652),
    (1, 5): (0.96812, 0.96861),
    (2, 5): (0.90542, 0.90714),
    (3, 5): (0.79024, 0.78743),
    (4, 5): (0.54838, 0.54874),
}
TABLE_CUBIC = {
    (1, 2): (0.84256, 0.83941),
    (1, 3): (0.95892, 0.95813),
    (2, 3): (0.80680, 0.80427),
    (1, 4): (0.98754, 0.98713),
    (2, 4): (0.94656, 0.94581),
    (3, 4): (0.79298, 0.79393),
    (1, 5): (0.99620, 0.99582),
    (2, 5): (0.98416, 0.98302),
    (3, 5): (0.94072, 0.94186),
    (4, 5): (0.79192, 0.79061),
}
TABLE_QUINTIC = {
    (1, 2): (0.83346, 0.84149),
    (1, 3): (0.96832, 0.97000),
    (2, 3): (0.81210, 0.81625),
    (1, 4): (0.99328, 0.99371),
    (2, 4): (0.96516, 0.96391),
    (3, 4): (0.81040, 0.81112),
    (1, 5): (0.99876, 0.99860),
    (2, 5): (0.99244, 0.99232),
    (3, 5): (0.96278, 0.96256),
    (4, 5): (0.80914, 0.80999),
}

FIELD_SPECS = {
    "Q": ((0, 1), TABLE_Z),
    "Q(sqrt2)": ((-2, 0, 1), TABLE_SQRT2),
    "x^3+x+1": ((1, 1, 0, 1), TABLE_CUBIC),
    "x^5-13x-7": ((-7, -13, 0, 0, 0, 1), TABLE_QUINTIC),
}

TABLE_SHAPES = sorted(TABLE_Z)


@pytest.fixture(scope="session")
def field_q():
    return parse_field("Q")


@pytest.fixture(scope="session")
def field_sqrt2():
    return parse_field("Q(sqrt2)")


@pytest.fixture(scope="session")
def field_cubic():
    return parse_field("x^3+x+1")


@pytest.fixture(scope="session")
def field_quintic():
    return parse_field("x^5-13x-7")


@pytest.fixture(scope="session")
def all_fields(field_q, field_sqrt2, field_cubic, field_quintic):
    return {
        "Q": field_q,
        "Q(sqrt2)": field_sqrt2,
        "x^3+x+1": field_cubic,
        "x^5-13x-7": field_quintic,
    }
