from __future__ import annotations

import pytest

from cskpoly.measures import TABLE_SPECS


@pytest.fixture(params=list(TABLE_SPECS.values()), ids=lambda s: str(s))
def table_spec(request):
    return request.param
