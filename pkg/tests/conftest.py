"""Shared fixtures: group contexts and small quotient contexts."""

import pytest

from burnmat import GroupContext, SContext


@pytest.fixture(scope="session")
def s2():
    return SContext.for_q(2)


@pytest.fixture(scope="session")
def s3():
    return SContext.for_q(3)


@pytest.fixture(scope="session")
def free_ctx():
    return GroupContext("free")


@pytest.fixture(scope="session")
def meta_ctx():
    return GroupContext("metabelian")
