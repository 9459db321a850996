from fractions import Fraction

import pytest

from tiltwall import CurveCharge, ThreefoldData


@pytest.fixture
def quintic() -> ThreefoldData:
    return ThreefoldData(h3=5, c2H=50, b2=1)


@pytest.fixture
def unit_threefold() -> ThreefoldData:
    """Minimal Picard-rank-one data with H^3 = 1 (c2.H chosen divisible by 12)."""
    return ThreefoldData(h3=1, c2H=12, b2=1)


@pytest.fixture
def worked_charge() -> CurveCharge:
    """The running worked example: beta.H = 2, m = 3, n = 10."""
    return CurveCharge(betaH=Fraction(2), m=Fraction(3), n=10)
