import pytest

from ellqa.context import EllipticContext


@pytest.fixture
def ctx():
    return EllipticContext(q=0.5, r=4.0, c=1.0)


@pytest.fixture
def ctx0():
    return EllipticContext(q=0.5, r=4.0, c=0.0)
