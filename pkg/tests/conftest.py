import pytest

import suites


@pytest.fixture(scope="session")
def tiny_fo_suite():
    # solved once; several test modules assert different slices of it
    return suites.build_tiny_fo_suite()
