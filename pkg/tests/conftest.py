import pytest

from liecurv.model import f4_model
from liecurv.root_system import CartanType, build_root_system


@pytest.fixture(scope="session")
def model():
    return f4_model()


@pytest.fixture(scope="session")
def f4():
    return build_root_system(CartanType("F", 4))
