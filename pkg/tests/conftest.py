import pytest

from wentzell_disk.discretize import assemble
from wentzell_disk.roots import root_table


@pytest.fixture(scope="session")
def table60():
    """Certified n = 0 roots up to k = 60 (shared across modules)."""
    return root_table(0, 60)


@pytest.fixture(scope="session")
def table200():
    return root_table(0, 200)


@pytest.fixture(scope="session")
def pencil4000():
    return assemble(0, 4000)


@pytest.fixture(scope="session")
def pencil2000():
    return assemble(0, 2000)
