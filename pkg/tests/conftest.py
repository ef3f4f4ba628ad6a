import warnings

import pytest

from sigcurve.jets import CurveInput, GroupId
from sigcurve.parser import parse


@pytest.fixture(autouse=True)
def _quiet_nongeneric_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


@pytest.fixture
def ellipse():
    return CurveInput.from_poly(parse("x^2 + x*y + y^2 - 1"))


@pytest.fixture
def circle():
    return CurveInput.from_poly(parse("x^2 + y^2 - 1"))


@pytest.fixture
def worked_cubic():
    return CurveInput.from_poly(parse("x^2*y + y^2 + y + 64/121"))


@pytest.fixture
def cusp_cubic():
    return CurveInput.from_poly(parse("y^2 - x^3"))


ALL_GROUPS = (GroupId.SE2, GroupId.SA2, GroupId.A2, GroupId.PGL3)
