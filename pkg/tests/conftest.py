import numpy as np
import pytest

from qstarlab.algebra import (corner_state, cyclic_group_algebra,
                              group_trace_state, matrix_unit_algebra,
                              normalized_trace_state, scalar_algebra)


@pytest.fixture(scope="session")
def m2():
    return matrix_unit_algebra(2)


@pytest.fixture(scope="session")
def m3():
    return matrix_unit_algebra(3)


@pytest.fixture(scope="session")
def z4():
    return cyclic_group_algebra(4)


@pytest.fixture(scope="session")
def scalars():
    return scalar_algebra()


@pytest.fixture(scope="session")
def trace2():
    return normalized_trace_state(2)


@pytest.fixture(scope="session")
def corner2():
    return corner_state(2)


@pytest.fixture(scope="session")
def ztrace4():
    return group_trace_state(4)


def coeffs_to_matrix(coeffs, n):
    """Oracle: reassemble the dense matrix from matrix-unit coordinates."""
    return np.asarray(coeffs, dtype=complex).reshape(n, n)


def matrix_to_coeffs(mat):
    return np.asarray(mat, dtype=complex).reshape(-1)
