import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszmd.errors import DimensionError, InvalidOrderError, OutOfRangeError, PartitionError
from rieszmd.functions import BENJAMIN_ONO, GAUSS, LORENTZ, powerlaw
from rieszmd.tridomain import Domain, DomainPartition, RationalOrder, TriDomainFunction, TriDomainGrid


# --- orders -----------------------------------------------------------------

def test_order_basics():
    o = RationalOrder(4, 5)
    assert o.alpha == 0.8 and o.fraction == Fraction(4, 5) and str(o) == "4/5"
    assert RationalOrder(2, 5).half() == RationalOrder(1, 5)
    assert RationalOrder(1, 3).half() == RationalOrder(1, 6)


@pytest.mark.parametrize("p,q", [(0, 3), (3, 3), (5, 3), (2, 4), (-1, 2), (1, 129)])
def test_order_rejects(p, q):
    with pytest.raises(InvalidOrderError):
        RationalOrder(p, q)


def test_order_parse():
    assert RationalOrder.parse("4/5") == RationalOrder(4, 5)
    assert RationalOrder.parse(" 5/13 ") == RationalOrder(5, 13)
    assert RationalOrder.parse("0.8") == RationalOrder(4, 5)
    assert RationalOrder.parse(0.4) == RationalOrder(2, 5)
    assert RationalOrder.parse(Fraction(19, 50)) == RationalOrder(19, 50)
    for bad in ("4/x", "abc", "2/4", "1.5"):
        with pytest.raises(InvalidOrderError):
            RationalOrder.parse(bad)


@given(q=st.integers(2, 128), data=st.data())
def test_order_parse_round_trip(q, data):
    p = data.draw(st.integers(1, q - 1).filter(lambda p: math.gcd(p, q) == 1))
    o = RationalOrder(p, q)
    assert RationalOrder.parse(str(o)) == o


# --- partitions and grids ---------------------------------------------------

def test_partition_validation():
    DomainPartition.uniform(-1e-3, 1e-3, 400, 5e-4)  # delta at its bound is accepted
    with pytest.raises(PartitionError):
        DomainPartition.uniform(1.0, 2.0, 10)
    with pytest.raises(PartitionError):
        DomainPartition.uniform(-1.0, 1.0, 10, delta=0.6)
    with pytest.raises(PartitionError):
        DomainPartition.uniform(-5.0, 5.0, 10, delta=0.0)
    with pytest.raises(PartitionError):
        DomainPartition(-1.0, 1.0, 1e-2, 1, 10, 10)


def test_gamma_rule():
    P = DomainPartition.uniform(-2, 2, 10, 1e-2)
    assert P.gamma(0.0) == 100.0
    assert P.gamma(0.001) == 100.0
    assert P.gamma(0.1) == pytest.approx(5.0)
    assert P.gamma(0.3) > 1.0


@pytest.fixture
def grid():
    return TriDomainGrid(DomainPartition(-2.0, 3.0, 1e-2, 20, 24, 16), RationalOrder(2, 5))


def test_grid_geometry(grid):
    assert grid.tau_minus == pytest.approx(2.0 ** -0.2)
    assert grid.tau_plus == pytest.approx(3.0 ** -0.2)
    assert grid.sizes == (21, 25, 17) and grid.size == 63
    sl = grid.slices()
    assert sl[Domain.II] == slice(21, 46)
    # the boundary nodes are the same physical points
    assert grid.physical_x(Domain.I, grid.tau_minus) == pytest.approx(-2.0, rel=1e-14)
    assert grid.physical_x(Domain.III, grid.tau_plus) == pytest.approx(3.0, rel=1e-14)
    assert grid.physical_x(Domain.III, 0.0) == math.inf
    assert grid.physical_x(Domain.I, 0.0) == -math.inf
    assert grid.xi_minus_nodes[0] == grid.tau_minus and grid.xi_minus_nodes[-1] == 0.0
    assert grid.x_nodes[0] == 3.0 and grid.x_nodes[-1] == -2.0


def test_coordinate_maps_are_monotone(grid):
    for dom in (Domain.I, Domain.III):
        x = grid.physical_x(dom, grid.nodes(dom)[:-1])
        assert np.all(np.diff(np.abs(x)) > 0)


def test_reflection(grid):
    r = grid.reflected()
    assert (r.partition.a, r.partition.b) == (-3.0, 2.0)
    assert r.sizes == (17, 25, 21)
    assert not grid.is_symmetric
    u = TriDomainFunction.from_stack(grid, np.arange(grid.size, dtype=float))
    np.testing.assert_array_equal(u.reflected().stack(), u.stack()[grid.reflection_permutation()])


def test_check_coordinate(grid):
    grid.check_coordinate(Domain.II, 0.0)
    with pytest.raises(OutOfRangeError):
        grid.check_coordinate(Domain.II, 3.5)
    with pytest.raises(OutOfRangeError):
        grid.check_coordinate(Domain.I, -0.1)


# --- functions ------------------------------------------------------------

def _lorentz_on(order, a=-2.0, b=2.0, N=40):
    return LORENTZ.sample(TriDomainGrid(DomainPartition.uniform(a, b, N), order))


@pytest.mark.parametrize("order", [RationalOrder(1, 2), RationalOrder(2, 5), RationalOrder(5, 13)])
def test_builtin_traces_match(order):
    for fn in (LORENTZ, GAUSS, powerlaw(order), BENJAMIN_ONO):
        u = fn.sample(TriDomainGrid(DomainPartition.uniform(-1.5, 2.5, 30), order))
        assert u.matching_mismatch() <= 1e-12
        assert np.all(np.isfinite(u.stack()))
        u.check()


def test_lorentz_trace_vanishes_at_infinity():
    u = _lorentz_on(RationalOrder(1, 2))
    assert u.uI[-1] == 0.0 and u.uIII[-1] == 0.0
    assert u.evaluate(Domain.I, 0.0) == 0.0


def test_powerlaw_trace_is_one_at_infinity():
    o = RationalOrder(2, 5)
    u = powerlaw(o).sample(TriDomainGrid(DomainPartition.uniform(-2, 2, 20), o))
    assert u.uI[-1] == 1.0 and u.uIII[-1] == 1.0


def test_dimension_errors(grid):
    with pytest.raises(DimensionError):
        TriDomainFunction(grid, np.zeros(20), np.zeros(25), np.zeros(17))
    with pytest.raises(DimensionError):
        TriDomainFunction.from_stack(grid, np.zeros(62))


def test_check_warns_and_rejects():
    u = _lorentz_on(RationalOrder(1, 2))
    uI = u.uI.copy()
    uI[0] *= 1 + 1e-6
    with pytest.warns(UserWarning):
        TriDomainFunction(u.grid, uI, u.uII, u.uIII).check()
    uI[0] *= 1.01
    with pytest.raises(ValueError):
        TriDomainFunction(u.grid, uI, u.uII, u.uIII).check()
    bad = u.uIII.copy()
    bad[-1] = np.inf
    with pytest.raises(ValueError):
        TriDomainFunction(u.grid, u.uI, u.uII, bad).check()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        u.check()


def test_evaluation_everywhere():
    o = RationalOrder(1, 2)
    u = _lorentz_on(o, N=80)
    x = np.array([-1e6, -50.0, -2.0, -0.3, 0.0, 1.7, 2.0, 9.0, 1e8, np.inf, -np.inf])
    expected = np.where(np.isfinite(x), 1.0 / (1.0 + np.where(np.isfinite(x), x, 0) ** 2), 0.0)
    np.testing.assert_allclose(u.at(x), expected, rtol=1e-12, atol=1e-15)
    # uII = x^2 at the midpoint
    g = u.grid
    sq = TriDomainFunction(g, u.uI, g.x_nodes**2, u.uIII)
    assert sq.evaluate(Domain.II, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert sq.evaluate(Domain.II, 1.0) == pytest.approx(1.0, rel=1e-13)


def test_even_part_and_parity():
    o = RationalOrder(2, 5)
    g = TriDomainGrid(DomainPartition.uniform(-1.0, 1.0, 30), o)
    u = TriDomainFunction.from_callables(g, lambda x: np.exp(-(x - 0.2) ** 2), lambda xi: 0 * xi)
    e = u.even_part()
    assert e.odd_size() == 0.0
    assert u.odd_size() > 0.1
    np.testing.assert_allclose(e.at([-0.4, 0.4]), 0.5 * (u.at([0.4])[0] + u.at([-0.4])[0]), rtol=1e-13)
    with pytest.raises(PartitionError):
        TriDomainFunction.zeros(TriDomainGrid(DomainPartition.uniform(-1.0, 2.0, 10), o)).even_part()
