import pytest

from franson_dwdm import GridSpec, SourceSpec, get_model


@pytest.fixture
def smf():
    return get_model("smf-effective")


@pytest.fixture
def silica():
    return get_model("fused-silica")


@pytest.fixture
def default_source():
    return SourceSpec()


@pytest.fixture
def grid100():
    return GridSpec()
