import pytest

from ostrowski import ContinuedFraction

GOLDEN = ContinuedFraction.from_text("1;(1)")
SQRT2 = ContinuedFraction.from_text("1;(2)")
MIXED = ContinuedFraction.from_text("0;1,(1,2)")
LONG_PERIOD = ContinuedFraction.from_text("1;(3,1,2)")

ALL_CFS = [GOLDEN, SQRT2, MIXED, LONG_PERIOD]


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def sqrt2():
    return SQRT2


@pytest.fixture
def mixed():
    return MIXED


@pytest.fixture(params=ALL_CFS, ids=[str(cf) for cf in ALL_CFS])
def any_cf(request):
    return request.param
