"""
Setup for pytest.
"""

import pytest
from beartype import beartype
from sybil import Sybil
from sybil.parsers.rest import PythonCodeBlockParser


@beartype
def pytest_collection_modifyitems(items: list[pytest.Item]) -> None:
    """
    Apply the beartype decorator to all collected test functions except
    property based tests, which Hypothesis wraps itself.
    """
    for item in items:
        if not isinstance(item, pytest.Function):
            continue
        if getattr(item.obj, "is_hypothesis_test", False):
            continue
        item.obj = beartype(obj=item.obj)


pytest_collect_file = Sybil(
    parsers=[PythonCodeBlockParser()],
    patterns=["*.rst"],
).pytest()
