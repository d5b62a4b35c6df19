"""The 2-periodic model, the transfer phi^*, and the chain-map verification."""

import pytest

from hochbv.algebra import TruncatedPolyAlgebra
from hochbv.arith import GF, QQ, ZZ, ModuleDescriptor
from hochbv.barcomplex import monomial_cochain, tbar, ubar, xbar_power
from hochbv.errors import LevelOutOfRange
from hochbv.resolution import (
    PeriodicComplex,
    PeriodicElement,
    class_of,
    classes_equal,
    hh_modules,
    level_homology,
    periodic_differential,
    phi_image,
    transfer,
    verify_chain_map,
)


def PZ(n, m=1):
    return PeriodicComplex(TruncatedPolyAlgebra(ZZ, n, m))


# ---------------------------------------------------------------------------
# differential and shifts


def test_periodic_differential_examples():
    P = PZ(2)
    A = P.parent
    d = periodic_differential(P, PeriodicElement(0, A.x_power(1)))
    assert d.level == 1 and d.value.is_zero()
    d = periodic_differential(P, PeriodicElement(1, A.one()))
    assert d.level == 2 and d.value.coeffs == A.x_power(2, 3).coeffs
    P1 = PZ(1)
    d = periodic_differential(P1, PeriodicElement(1, P1.parent.x_power(1)))
    assert d.value.is_zero()  # 2x * x = 2x^2 = 0


def test_level_validation():
    A = TruncatedPolyAlgebra(ZZ, 2)
    with pytest.raises(LevelOutOfRange):
        PeriodicElement(-1, A.zero())


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_degrees_of_distinguished_classes(n, m):
    P = PZ(n, m)
    assert P.total_degree(0, 1) == -2 * m  # x
    assert P.total_degree(1, 1) == -1  # u
    assert P.total_degree(2, 0) == 2 * m * n + 2 * (m - 1)  # t


# ---------------------------------------------------------------------------
# module structure


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("m", [1, 2])
def test_hh_modules_pattern(n, m):
    mods = hh_modules(PZ(n, m), 6)
    assert mods[0] == ModuleDescriptor(ZZ, n + 1)
    for k in (1, 3, 5):
        assert mods[k] == ModuleDescriptor(ZZ, n)
    for k in (2, 4, 6):
        assert mods[k] == ModuleDescriptor(ZZ, n, (n + 1,))


def test_hh_modules_periodicity():
    mods = hh_modules(PZ(3), 10)
    for k in range(1, 9):
        assert mods[k] == mods[k + 2]


def test_hh_modules_over_fields():
    P = PeriodicComplex(TruncatedPolyAlgebra(QQ, 2))
    mods = hh_modules(P, 4)
    assert [d.free_rank for d in mods] == [3, 2, 2, 2, 2]
    # p | n+1: the differential vanishes entirely
    P2 = PeriodicComplex(TruncatedPolyAlgebra(GF(3), 2))
    assert [d.free_rank for d in hh_modules(P2, 4)] == [3, 3, 3, 3, 3]


# ---------------------------------------------------------------------------
# phi and the transfer


def test_phi_image_small():
    A = TruncatedPolyAlgebra(ZZ, 2)
    assert phi_image(A, 0).terms == (((), 0),)
    assert phi_image(A, 1).terms == (((1,), 0),)
    # level 2, n = 2: indices a_1 in {0, 1}
    assert set(phi_image(A, 2).terms) == {((2, 1), 0), ((1, 1), 1)}


def test_transfer_of_generators():
    for n in (1, 2, 3):
        A = TruncatedPolyAlgebra(ZZ, n)
        assert transfer(xbar_power(A)).value.coeffs == A.x_power(1).coeffs
        assert transfer(ubar(A)).value.coeffs == A.x_power(1).coeffs
        assert transfer(tbar(A)).value.coeffs == A.one().coeffs


@pytest.mark.parametrize("n", [1, 2, 3])
def test_transfer_of_monomial_families(n):
    A = TruncatedPolyAlgebra(ZZ, n)
    for q in (0, 1, 2):
        for l in range(n + 1):
            f = monomial_cochain(A, q, 0, l)
            assert transfer(f).value.coeffs == A.x_power(l).coeffs
            g = monomial_cochain(A, q, 1, l)
            assert transfer(g).value.coeffs == A.x_power(l + 1).coeffs


# ---------------------------------------------------------------------------
# chain map


@pytest.mark.parametrize("n,m,qmax", [(1, 1, 3), (2, 1, 3), (3, 1, 3), (2, 2, 2)])
def test_chain_map_no_violations(n, m, qmax):
    assert verify_chain_map(PZ(n, m), qmax) == []


def test_chain_map_over_fields():
    P = PeriodicComplex(TruncatedPolyAlgebra(GF(3), 2))
    assert verify_chain_map(P, 2) == []


# ---------------------------------------------------------------------------
# classes


def test_class_of_examples():
    P = PZ(2)
    A = P.parent
    # value 1 at level 2 generates a free summand (the class of t)
    c1 = class_of(P, PeriodicElement(2, A.one()))
    assert any(c != 0 for c in c1)
    # (n+1)x^n at level 2 is a coboundary
    assert class_of(P, PeriodicElement(2, A.x_power(2, 3))) == tuple(
        0 for _ in c1
    )
    assert class_of(P, PeriodicElement(1, A.zero())) == (0, 0)


def test_class_of_rejects_non_cycle():
    P = PZ(2)
    A = P.parent
    # at odd levels the cycles are span(x, ..., x^n); 1 is not a cycle
    with pytest.raises(ValueError):
        class_of(P, PeriodicElement(1, A.one()))


def test_classes_surject_onto_homology():
    # transfers of monomial cocycles hit a full generating set at levels <= 4
    for n in (1, 2, 3):
        P = PZ(n)
        A = P.parent
        for level in range(5):
            k, eps = divmod(level, 2)
            h = level_homology(P, level)
            seen = set()
            for l in range(n + 1):
                f = monomial_cochain(A, k, eps, l)
                e = transfer(f)
                seen.add(class_of(P, e))
            # the classes of the monomials span: the coordinate vectors
            # contain the full standard basis up to sign
            dim = len(h.representatives)
            units = {
                tuple(abs(v) for v in c) for c in seen if sum(1 for v in c if v) == 1
            }
            assert len(units) >= dim, (n, level, seen)


def test_classes_equal_requires_same_level():
    P = PZ(2)
    A = P.parent
    assert not classes_equal(
        P, PeriodicElement(1, A.zero()), PeriodicElement(3, A.zero())
    )
