import numpy as np
import pytest

from gaugequad import Gauge


def const_gauge(c: float) -> Gauge:
    return Gauge(lambda x, _c=c: np.full_like(np.asarray(x, dtype=float), _c))


@pytest.fixture
def unit_interval():
    from gaugequad import Interval

    return Interval(0.0, 1.0)
