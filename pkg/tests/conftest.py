import os

import pytest
from hypothesis import settings

from flatwalsh import gf2n

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

RUN_SLOW = os.environ.get("FLATWALSH_SLOW") == "1"
RUN_STRETCH = os.environ.get("FLATWALSH_STRETCH") == "1"

slow = pytest.mark.skipif(not RUN_SLOW, reason="set FLATWALSH_SLOW=1 to run")
stretch = pytest.mark.skipif(not RUN_STRETCH, reason="set FLATWALSH_STRETCH=1 to run")


@pytest.fixture(scope="session")
def field1():
    return gf2n.make_field(1)


@pytest.fixture(scope="session")
def field2():
    return gf2n.make_field(2)


@pytest.fixture(scope="session")
def field3():
    return gf2n.make_field(3)


@pytest.fixture(scope="session")
def field9():
    return gf2n.make_field(9)


@pytest.fixture(scope="session")
def field15():
    return gf2n.make_field(15)
