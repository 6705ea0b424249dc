from __future__ import annotations

import pytest

from aimaturity import Organization, load_bundled_questionnaire


@pytest.fixture(scope="session")
def questionnaire():
    return load_bundled_questionnaire()


@pytest.fixture
def org():
    return Organization(org_id="acme", name="ACME Corp")
