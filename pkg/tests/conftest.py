import itertools

import pytest

from pseudodet.chainring import ChainAlgebra, finite_field_4


def span_set(rows, q, ncols=None):
    """Every Z/q-combination of ``rows`` (brute force)."""
    n = len(rows[0]) if rows else ncols
    out = {(0,) * n} if n is not None else set()
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        out.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % q for j in range(n)))
    return out


@pytest.fixture(scope="session")
def F2():
    return ChainAlgebra.zmod(2)


@pytest.fixture(scope="session")
def F4():
    return finite_field_4()


@pytest.fixture(scope="session")
def Z4():
    return ChainAlgebra.zmod(2, 2)


@pytest.fixture(scope="session")
def Z9():
    return ChainAlgebra.zmod(3, 2)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
