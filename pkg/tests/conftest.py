from __future__ import annotations

import functools

import pytest

from tuple_interp.problem import CORPUS, Problem, load_corpus


@functools.lru_cache(maxsize=None)
def corpus(name: str) -> Problem:
    return load_corpus(name)


@pytest.fixture(params=CORPUS)
def system(request) -> Problem:
    return corpus(request.param)


def nest(outer: str, times: int, inner: str) -> str:
    """outer(outer(...(inner)...)) with ``times`` applications."""
    return f"{outer}(" * times + inner + ")" * times


def numeral(n: int) -> str:
    return nest("s", n, "0")
