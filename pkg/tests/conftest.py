from functools import lru_cache

import pytest

from qcdisk.pipeline import solve_field


@lru_cache(maxsize=64)
def cached_solve(mu: str, N: int, M=None):
    return solve_field(mu, N, M)


@pytest.fixture(scope="session")
def solve():
    return cached_solve
