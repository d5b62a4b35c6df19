"""Bounded isomorphism search between presented BV-algebras."""

import pytest

from hochbv.arith import QQ, ZZ
from hochbv.bvalgebra import (
    delta_closed_form,
    gerstenhaber_bracket,
    main_theorem_algebra,
    menichi_loop_s2,
    multiply,
)
from hochbv.errors import InvalidParameters
from hochbv.isocheck import (
    GradedMap,
    SearchSpace,
    bv_isomorphism_exists,
    degree_basis,
    enumerate_algebra_isomorphisms,
    is_bv_map,
    is_gerstenhaber_map,
    is_graded_bijection,
)


def HH11():
    return main_theorem_algebra(ZZ, 1, 1)


def gmap(src, dst, t_img, u_img, x_img):
    return GradedMap(src, dst, (("t", t_img), ("u", u_img), ("x", x_img)))


# ---------------------------------------------------------------------------
# degree bases


def test_degree_basis():
    HH = HH11()
    assert degree_basis(HH, -2) == [(0, 0, 1)]  # x
    assert degree_basis(HH, -1) == [(0, 1, 0)]  # u
    names = {HH.monomial_degree(mn) for mn in degree_basis(HH, 2)}
    assert names == {2}
    # degree 2 holds t and the torsion class t^2 x
    assert len(degree_basis(HH, 2)) == 2


def test_search_space_validation():
    with pytest.raises(InvalidParameters):
        SearchSpace(0, 1)


# ---------------------------------------------------------------------------
# graded maps


def test_graded_map_validation():
    HH, M = HH11(), menichi_loop_s2()
    with pytest.raises(InvalidParameters):
        # wrong degree for x
        gmap(HH, M, M.monomial({"v": 1}), M.monomial({"b": 1}), M.monomial({"v": 1}))


def test_graded_map_apply_is_multiplicative():
    HH, M = HH11(), menichi_loop_s2()
    phi = gmap(HH, M, M.monomial({"v": 1}), M.monomial({"b": 1}, -1), M.monomial({"a": 1}))
    for mn1 in degree_basis(HH, 1):
        for mn2 in degree_basis(HH, -2):
            a = HH.element([({g.name: e for g, e in zip(HH.generators, mn1)}, 1)])
            b = HH.element([({g.name: e for g, e in zip(HH.generators, mn2)}, 1)])
            assert phi.apply(multiply(a, b)) == multiply(phi.apply(a), phi.apply(b))


# ---------------------------------------------------------------------------
# enumeration


def test_self_isomorphisms_include_identity_and_signs():
    HH = HH11()
    found = enumerate_algebra_isomorphisms(HH, HH, SearchSpace(6, 1))
    assert found
    descriptions = {phi.describe() for phi in found}
    assert "t |-> t, u |-> u, x |-> x" in descriptions
    # every found map sends x to +-x
    for phi in found:
        img = dict(phi.images)["x"]
        assert img in (HH.monomial({"x": 1}), HH.monomial({"x": 1}, -1))


def test_enumeration_empty_across_different_n():
    A = main_theorem_algebra(ZZ, 1, 1)
    B = main_theorem_algebra(ZZ, 2, 1)
    assert enumerate_algebra_isomorphisms(A, B, SearchSpace(6, 1)) == []


def test_candidates_to_menichi_are_the_paper_sign_family():
    # x |-> +-a, u |-> +-b, t |-> +-v or +-v + a v^2: 2*2*4 distinct maps
    # (the torsion coefficient of a v^2 is only meaningful mod 2)
    HH, M = HH11(), menichi_loop_s2()
    found = enumerate_algebra_isomorphisms(HH, M, SearchSpace(8, 1))
    expected = set()
    for sx in (1, -1):
        for su in (1, -1):
            for sv in (1, -1):
                for c in (0, 1):
                    t_img = M.monomial({"v": 1}, sv) + M.monomial({"a": 1, "v": 2}, c)
                    expected.add(
                        (
                            tuple(sorted(t_img.terms.items())),
                            tuple(sorted(M.monomial({"b": 1}, su).terms.items())),
                            tuple(sorted(M.monomial({"a": 1}, sx).terms.items())),
                        )
                    )
    got = {
        (
            tuple(sorted(dict(phi.images)["t"].terms.items())),
            tuple(sorted(dict(phi.images)["u"].terms.items())),
            tuple(sorted(dict(phi.images)["x"].terms.items())),
        )
        for phi in found
    }
    assert got == expected
    assert len(found) == 16


def test_found_maps_recheck():
    HH, M = HH11(), menichi_loop_s2()
    for phi in enumerate_algebra_isomorphisms(HH, M, SearchSpace(8, 1)):
        assert is_graded_bijection(phi, 8)


# ---------------------------------------------------------------------------
# BV / Gerstenhaber compatibility


def test_identity_is_bv_map():
    HH = main_theorem_algebra(ZZ, 2, 1)
    ident = GradedMap(
        HH, HH, tuple((g.name, HH.monomial({g.name: 1})) for g in HH.generators)
    )
    ok, wit = is_bv_map(ident, 10)
    assert ok and wit is None
    ok, wit = is_gerstenhaber_map(ident, 6)
    assert ok


def test_plain_sign_maps_fail_bv_with_witness_u():
    HH, M = HH11(), menichi_loop_s2()
    phi = gmap(HH, M, M.monomial({"v": 1}), M.monomial({"b": 1}), M.monomial({"a": 1}))
    ok, wit = is_bv_map(phi, 8)
    assert not ok
    # witness u or u t^k: Delta(Phi(u)) has the a v-term that Phi(Delta(u)) lacks
    assert wit[1] == 1  # the u-exponent of the witness monomial


def test_av2_variant_fails_bv_with_even_k_witness():
    HH, M = HH11(), menichi_loop_s2()
    t_img = M.monomial({"v": 1}, -1) + M.monomial({"a": 1, "v": 2})
    phi = gmap(HH, M, t_img, M.monomial({"b": 1}, -1), M.monomial({"a": 1}))
    ok, wit = is_bv_map(phi, 8)
    assert not ok
    assert wit[1] == 1 and wit[0] % 2 == 0  # witness u t^k with k even


def test_gerstenhaber_map_minus_b():
    HH, M = HH11(), menichi_loop_s2()
    phi = gmap(
        HH, M, M.monomial({"v": 1}), M.monomial({"b": 1}, -1), M.monomial({"a": 1})
    )
    ok, wit = is_gerstenhaber_map(phi, 8)
    assert ok and wit is None


def test_gerstenhaber_map_plus_b_fails():
    HH, M = HH11(), menichi_loop_s2()
    phi = gmap(HH, M, M.monomial({"v": 1}), M.monomial({"b": 1}), M.monomial({"a": 1}))
    ok, wit = is_gerstenhaber_map(phi, 8)
    assert not ok and wit is not None


# ---------------------------------------------------------------------------
# verdicts


def test_s2_verdict_no():
    verdict = bv_isomorphism_exists(HH11(), menichi_loop_s2(), SearchSpace(8, 1))
    assert not verdict.exists
    assert len(verdict.refutations) == 16
    for phi, wit in verdict.refutations:
        assert wit is not None
    assert "NO" in verdict.summary()


def test_self_verdict_yes():
    HH = HH11()
    verdict = bv_isomorphism_exists(HH, HH, SearchSpace(8, 1))
    assert verdict.exists
    ok, _ = is_bv_map(verdict.witness, 8)
    assert ok


def test_yes_certificate_stable_at_larger_bounds():
    HH = HH11()
    verdict = bv_isomorphism_exists(HH, HH, SearchSpace(6, 1))
    assert verdict.exists
    ok, _ = is_bv_map(verdict.witness, 12)
    assert ok


def test_over_Q_menichi_becomes_bv_isomorphic():
    # with 2 invertible the a v^{k+1} obstruction dies: Felix-Thomas agreement
    HHQ = main_theorem_algebra(QQ, 1, 1)
    MQ = menichi_loop_s2(QQ)
    verdict = bv_isomorphism_exists(HHQ, MQ, SearchSpace(8, 2))
    assert verdict.exists
