import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cothdelta import _backend  # noqa: E402


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run a test once per available kernel backend."""
    prev = _backend.name
    _backend.use(request.param)
    yield request.param
    _backend.use(prev)
