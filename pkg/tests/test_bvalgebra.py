"""Presented BV-algebras: normal forms, closed-form Delta, brackets, identities."""

import json
from itertools import product

import pytest

from hochbv.arith import GF, QQ, ZZ
from hochbv.bvalgebra import (
    crosscheck_against_barcomplex,
    delta_closed_form,
    from_payload,
    gerstenhaber_bracket,
    main_theorem_algebra,
    menichi_loop_s2,
    multiply,
    to_payload,
    verify_bv_identities,
)
from hochbv.errors import InhomogeneousElement, InvalidParameters


# ---------------------------------------------------------------------------
# presentations


def test_invalid_parameters():
    with pytest.raises(InvalidParameters):
        main_theorem_algebra(ZZ, 0, 1)


def test_presentation_selection():
    assert [g.name for g in main_theorem_algebra(ZZ, 1, 1).generators] == ["t", "u", "x"]
    assert [g.name for g in main_theorem_algebra(GF(3), 2, 1).generators] == ["t", "v", "x"]
    assert [g.name for g in main_theorem_algebra(GF(3), 3, 1).generators] == ["t", "u", "x"]
    assert [g.name for g in main_theorem_algebra(GF(2), 2, 1).generators] == ["t", "u", "x"]
    assert [g.name for g in main_theorem_algebra(GF(2), 1, 1).generators] == ["t", "v", "x"]


def test_generator_degrees():
    P = main_theorem_algebra(ZZ, 1, 1)
    degs = {g.name: g.degree for g in P.generators}
    assert degs == {"x": -2, "u": -1, "t": 2}
    P2 = main_theorem_algebra(GF(3), 2, 2)
    degs2 = {g.name: g.degree for g in P2.generators}
    assert degs2 == {"x": -4, "v": 3, "t": 2 * 2 * 2 + 2}


def test_normal_form_relations_Z():
    P = main_theorem_algebra(ZZ, 2, 1)
    x = P.monomial({"x": 1})
    u = P.monomial({"u": 1})
    t = P.monomial({"t": 1})
    assert not multiply(x, x).is_zero()
    assert multiply(multiply(x, x), x).is_zero()  # x^3 = 0
    assert multiply(u, u).is_zero()  # u^2 = 0
    assert multiply(u, multiply(x, x)).is_zero()  # u x^n = 0
    tx2 = multiply(t, multiply(x, x))
    assert not tx2.is_zero()
    assert tx2.scale(3).is_zero()  # (n+1) x^n t = 0
    assert tx2.scale(4) == tx2  # coefficient lives in Z_3


def test_normal_form_relations_field():
    P = main_theorem_algebra(QQ, 2, 1)
    t = P.monomial({"t": 1})
    x2 = P.monomial({"x": 2})
    assert multiply(t, x2).is_zero()  # x^n t = 0 once n+1 is invertible
    assert not multiply(P.monomial({"u": 1}), P.monomial({"x": 1})).is_zero()


def test_normal_form_confluence():
    P = main_theorem_algebra(ZZ, 2, 1)
    gens = [P.monomial({nm: 1}) for nm in ("t", "u", "x")]
    for a, b, c in product(gens, repeat=3):
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_degree_additivity():
    P = main_theorem_algebra(ZZ, 3, 1)
    for ka, la in product(range(3), range(4)):
        for kb, lb in product(range(3), range(4)):
            a = P.monomial({"t": ka, "x": la})
            b = P.monomial({"t": kb, "u": 1, "x": lb})
            ab = multiply(a, b)
            if not ab.is_zero():
                assert ab.degree() == a.degree() + b.degree()


def test_inhomogeneous_rejected():
    P = main_theorem_algebra(ZZ, 2, 1)
    mixed = P.monomial({"x": 1}) + P.monomial({"t": 1})
    with pytest.raises(InhomogeneousElement):
        gerstenhaber_bracket(mixed, P.monomial({"u": 1}))


# ---------------------------------------------------------------------------
# the F_p branch and characteristic 2


def test_pbranch_v_squared_zero_odd_p():
    for p, n in ((3, 2), (3, 5), (5, 4)):
        P = main_theorem_algebra(GF(p), n, 1)
        v = P.monomial({"v": 1})
        assert multiply(v, v).is_zero()
        # x^n t survives here (no x^n t relation in this branch)
        assert not multiply(P.monomial({"t": 1}), P.monomial({"x": n})).is_zero()


def test_f2_v_squared_rewrite():
    # n = 1: v^2 = t, so the ring is Lambda[x] (x) F2[v]
    P = main_theorem_algebra(GF(2), 1, 1)
    v = P.monomial({"v": 1})
    assert multiply(v, v) == P.monomial({"t": 1})
    # n = 3: (n+1)/2 = 2 = 0 in F2, so v^2 = 0
    P3 = main_theorem_algebra(GF(2), 3, 1)
    v3 = P3.monomial({"v": 1})
    assert multiply(v3, v3).is_zero()
    # n = 5: (n+1)/2 = 3 = 1, so v^2 = t x^4
    P5 = main_theorem_algebra(GF(2), 5, 1)
    v5 = P5.monomial({"v": 1})
    assert multiply(v5, v5) == P5.monomial({"t": 1, "x": 4})


def test_f2_n1_delta_table():
    # Delta(v^k) = 0 and Delta(v^k x) = k v^{k-1}, written in t, v, x normal form
    P = main_theorem_algebra(GF(2), 1, 1)
    for k in range(5):
        q, r = divmod(k, 2)
        vk = P.monomial({"t": q, "v": r})
        assert delta_closed_form(vk).is_zero()
        vkx = P.monomial({"t": q, "v": r, "x": 1})
        d = delta_closed_form(vkx)
        if k % 2 == 0:
            assert d.is_zero()  # k v^{k-1} = 0 mod 2 for even k
        else:
            q2, r2 = divmod(k - 1, 2)
            assert d == P.monomial({"t": q2, "v": r2}, k)


# ---------------------------------------------------------------------------
# closed-form Delta


@pytest.mark.parametrize("ring", [ZZ, QQ, GF(3)])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_delta_closed_form_main(ring, n):
    if ring == GF(3) and (n + 1) % 3 == 0:
        pytest.skip("p | n+1 handled in the branch test")
    P = main_theorem_algebra(ring, n, 1)
    for k in range(4):
        for l in range(n + 1):
            assert delta_closed_form(P.monomial({"t": k, "x": l})).is_zero()
            got = delta_closed_form(P.monomial({"t": k, "u": 1, "x": l}))
            want = P.monomial({"t": k, "x": l}, -(k + 1) * n - k + l)
            assert got == want, (k, l)


def test_delta_examples():
    P = main_theorem_algebra(ZZ, 2, 1)
    assert delta_closed_form(P.monomial({"u": 1})) == P.one().scale(-2)
    assert delta_closed_form(P.monomial({"t": 1, "u": 1})) == P.monomial({"t": 1}, -5)
    P3 = main_theorem_algebra(GF(3), 2, 1)
    assert delta_closed_form(P3.monomial({"v": 1, "x": 2})) == P3.monomial({"x": 1}, 2)


@pytest.mark.parametrize("p,n", [(3, 2), (3, 5), (5, 4)])
def test_delta_closed_form_pbranch(p, n):
    P = main_theorem_algebra(GF(p), n, 1)
    for k in range(4):
        for l in range(n + 1):
            assert delta_closed_form(P.monomial({"t": k, "x": l})).is_zero()
            got = delta_closed_form(P.monomial({"t": k, "v": 1, "x": l}))
            want = P.monomial({"t": k, "x": l - 1}, l) if l else P.zero()
            assert got == want


def test_delta_lowers_degree_by_minus_one():
    # |Delta a| = |a| + 1 in the grading where |x| = -2m
    P = main_theorem_algebra(ZZ, 2, 1)
    for k in range(3):
        for l in range(2):
            a = P.monomial({"t": k, "u": 1, "x": l})
            d = delta_closed_form(a)
            if not d.is_zero():
                assert d.degree() == a.degree() + 1


# ---------------------------------------------------------------------------
# menichi


def test_menichi_delta_values():
    M = menichi_loop_s2()
    assert delta_closed_form(M.monomial({"b": 1})) == M.one() + M.monomial(
        {"a": 1, "v": 1}
    )
    assert delta_closed_form(M.monomial({"v": 1, "a": 1})).is_zero()
    d = delta_closed_form(M.monomial({"v": 2, "b": 1}))
    assert d == M.monomial({"v": 2}, 5) + M.monomial({"a": 1, "v": 3})


def test_menichi_relations():
    M = menichi_loop_s2()
    a, b, v = (M.monomial({g: 1}) for g in ("a", "b", "v"))
    assert multiply(a, a).is_zero() and multiply(b, b).is_zero()
    assert multiply(a, b).is_zero()
    av = multiply(a, v)
    assert av.scale(2).is_zero() and not av.is_zero()


# ---------------------------------------------------------------------------
# the Gerstenhaber bracket


@pytest.mark.parametrize("ring", [ZZ, QQ, GF(3)])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bracket_families_even_even_and_even_odd(ring, n):
    if ring == GF(3) and (n + 1) % 3 == 0:
        pytest.skip("p | n+1 handled separately")
    P = main_theorem_algebra(ring, n, 1)
    for k1, l1, k2, l2 in product(range(4), range(n + 1), range(2), range(n + 1)):
        E1 = P.monomial({"t": k1, "x": l1})
        E2 = P.monomial({"t": k2, "x": l2})
        assert gerstenhaber_bracket(E1, E2).is_zero()
        O2 = P.monomial({"t": k2, "u": 1, "x": l2})
        got = gerstenhaber_bracket(E1, O2)
        want = P.monomial({"t": k1 + k2, "x": l1 + l2}, -k1 * n - k1 + l1)
        assert got == want, (k1, l1, k2, l2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bracket_odd_odd_antisymmetric_form(n):
    # The published symmetric coefficient ((k1+k2+2)n + k1+k2 - l1-l2) cannot
    # be a Lie bracket (it would force {u,u} = -{u,u} != 0); the bracket
    # derived from Delta gives the antisymmetric form (k2-k1)(n+1) + (l1-l2).
    P = main_theorem_algebra(ZZ, n, 1)
    for k1, l1, k2, l2 in product(range(3), range(n + 1), range(3), range(n + 1)):
        O1 = P.monomial({"t": k1, "u": 1, "x": l1})
        O2 = P.monomial({"t": k2, "u": 1, "x": l2})
        got = gerstenhaber_bracket(O1, O2)
        want = P.monomial(
            {"t": k1 + k2, "u": 1, "x": l1 + l2}, (k2 - k1) * (n + 1) + (l1 - l2)
        )
        assert got == want, (k1, l1, k2, l2)


@pytest.mark.parametrize("p,n", [(3, 2), (3, 5), (5, 4)])
def test_bracket_families_pbranch(p, n):
    P = main_theorem_algebra(GF(p), n, 1)
    for k1, l1, k2, l2 in product(range(2), range(n + 1), range(2), range(n + 1)):
        E1 = P.monomial({"t": k1, "x": l1})
        E2 = P.monomial({"t": k2, "x": l2})
        assert gerstenhaber_bracket(E1, E2).is_zero()
        O2 = P.monomial({"t": k2, "v": 1, "x": l2})
        got = gerstenhaber_bracket(E1, O2)
        want = P.monomial({"t": k1 + k2, "x": l1 + l2 - 1}, l1) if l1 else P.zero()
        assert got == want
        O1 = P.monomial({"t": k1, "v": 1, "x": l1})
        got3 = gerstenhaber_bracket(O1, O2)
        want3 = (
            P.monomial({"t": k1 + k2, "v": 1, "x": l1 + l2 - 1}, l1 - l2)
            if l1 + l2
            else P.zero()
        )
        assert got3 == want3


def test_bracket_antisymmetry_sweep():
    P = main_theorem_algebra(ZZ, 2, 1)
    monos = P.monomials_within(2)
    for m1 in monos:
        for m2 in monos:
            a = P.element([({g.name: e for g, e in zip(P.generators, m1)}, 1)])
            b = P.element([({g.name: e for g, e in zip(P.generators, m2)}, 1)])
            if a.is_zero() or b.is_zero():
                continue
            da, db = a.degree(), b.degree()
            sign = -1 if ((da - 1) * (db - 1)) % 2 else 1
            assert gerstenhaber_bracket(a, b) == gerstenhaber_bracket(b, a).scale(
                -sign
            )


# ---------------------------------------------------------------------------
# identity sweeps


@pytest.mark.parametrize(
    "alg,kmax",
    [
        (main_theorem_algebra(ZZ, 1, 1), 3),
        (main_theorem_algebra(ZZ, 2, 1), 2),
        (main_theorem_algebra(QQ, 2, 1), 2),
        (main_theorem_algebra(GF(3), 2, 1), 2),
        (main_theorem_algebra(GF(2), 1, 1), 3),
        (main_theorem_algebra(GF(2), 3, 1), 2),
        (menichi_loop_s2(), 3),
    ],
)
def test_bv_identities(alg, kmax):
    assert verify_bv_identities(alg, kmax=kmax) == []


# ---------------------------------------------------------------------------
# crosscheck against the bar complex


@pytest.mark.parametrize("ring,n", [(ZZ, 1), (ZZ, 2), (ZZ, 3), (GF(3), 2), (GF(2), 1)])
def test_crosscheck(ring, n):
    records = crosscheck_against_barcomplex(ring, n, 1, kmax=2)
    assert records, "crosscheck must cover the seed monomials"
    for r in records:
        assert r.ok, r


def test_crosscheck_includes_seeds():
    records = crosscheck_against_barcomplex(ZZ, 2, 1, kmax=2)
    seen = {tuple(sorted(r.monomial.items())) for r in records}
    for seed in (
        {"t": 0, "u": 0, "x": 1},  # x
        {"t": 0, "u": 0, "x": 2},  # x^2
        {"t": 0, "u": 1, "x": 0},  # u
        {"t": 1, "u": 0, "x": 0},  # t
        {"t": 2, "u": 0, "x": 0},  # t^2
        {"t": 1, "u": 0, "x": 1},  # tx
        {"t": 1, "u": 1, "x": 0},  # tu
        {"t": 0, "u": 1, "x": 1},  # ux
    ):
        assert tuple(sorted(seed.items())) in seen


# ---------------------------------------------------------------------------
# graded ranks match the resolution


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("m", [1, 2])
def test_graded_ranks_match_hh_modules(n, m):
    from hochbv.algebra import TruncatedPolyAlgebra
    from hochbv.resolution import PeriodicComplex, hh_modules

    P = main_theorem_algebra(ZZ, n, m)
    mods = hh_modules(PeriodicComplex(TruncatedPolyAlgebra(ZZ, n, m)), 6)
    # count presentation monomials per level 2k + eps
    for level in range(7):
        k, eps = divmod(level, 2)
        free = 0
        torsion = []
        for l in range(n + 1):
            mono = P.monomial({"t": k, "u": eps, "x": l})
            if mono.is_zero():
                continue
            if k >= 1 and eps == 0 and l == n:
                torsion.append(n + 1)  # the Z_{n+1} class x^n t^k
            else:
                free += 1
        assert mods[level].free_rank == free, level
        assert list(mods[level].torsion) == torsion, level


# ---------------------------------------------------------------------------
# serialization


def test_payload_roundtrip():
    for alg in (
        main_theorem_algebra(ZZ, 2, 1),
        main_theorem_algebra(GF(2), 3, 2),
        main_theorem_algebra(GF(3), 5, 1),
        menichi_loop_s2(),
    ):
        payload = to_payload(alg)
        assert from_payload(json.loads(json.dumps(payload))) == alg


def test_payload_rejects_garbage():
    with pytest.raises(InvalidParameters):
        from_payload({"format": "something-else"})
