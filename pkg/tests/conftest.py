"""Shared fixtures: the matrix families used by the Jordanizability tests.

Three families exercise the three failure modes of the holomorphic
Jordanization criterion, and a fourth stays inside a single bundle.
"""

import pytest

from strata.polynomials import Poly


def X(d, a):
    return Poly.variable(d, a, exact=True)


def C(d, v):
    return Poly.constant(d, v, exact=True)


def Z(d):
    return Poly(d, None, True)


@pytest.fixture(scope="session")
def family_upper_3x3():
    """d=1 family [[z,1,0],[0,z^2,z],[0,0,z^2]]: limits fail to span.

    Pointwise similar to diag-block J(z) everywhere, but the plane of
    generalized-eigenvector limits at z=0 contains span e1, so the
    direct-sum condition fails there.
    """
    from strata.families import MatrixFamily

    z = X(1, 0)
    entries = [
        [z, C(1, 1), Z(1)],
        [Z(1), z * z, z],
        [Z(1), Z(1), z * z],
    ]
    branches = [(z, 1), (z * z, 2)]
    return MatrixFamily(1, 3, entries, branches)


@pytest.fixture(scope="session")
def family_block_swap_4x4():
    """d=1 family with a size-2 nilpotent block migrating between branches.

    diag blocks [[z,1],[0,-z]] and [[1+z,z],[0,1+z]]: off 0 the first
    block is diagonalizable and the second is not; the per-branch Segre
    data is constant but the merged structure at 0 breaks constancy.
    """
    from strata.families import MatrixFamily

    z = X(1, 0)
    one = C(1, 1)
    entries = [
        [z, one, Z(1), Z(1)],
        [Z(1), -z, Z(1), Z(1)],
        [Z(1), Z(1), one + z, z],
        [Z(1), Z(1), Z(1), one + z],
    ]
    branches = [(z, 1), (-z, 1), (one + z, 2)]
    return MatrixFamily(1, 4, entries, branches)


@pytest.fixture(scope="session")
def family_planar_3x3():
    """d=2 family [[x1,0,x2],[0,x1,x2],[0,0,0]].

    The eigenvalue-0 generalized eigenspace off the coalescence locus is
    span (-x2,-x2,x1); its limit at (0,0) depends on the approach path,
    while at (0,1) the limits exist but fail to span.
    """
    from strata.families import MatrixFamily

    x1, x2 = X(2, 0), X(2, 1)
    entries = [
        [x1, Z(2), x2],
        [Z(2), x1, x2],
        [Z(2), Z(2), Z(2)],
    ]
    branches = [(x1, 2), (Z(2), 1)]
    return MatrixFamily(2, 3, entries, branches)


@pytest.fixture(scope="session")
def family_single_bundle():
    """d=1 family diag(x, x+1): constant Segre type, empty coalescence locus."""
    from strata.families import MatrixFamily

    x = X(1, 0)
    entries = [[x, Z(1)], [Z(1), x + C(1, 1)]]
    branches = [(x, 1), (x + C(1, 1), 1)]
    return MatrixFamily(1, 2, entries, branches)
