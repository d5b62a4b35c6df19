"""Bounded-degree exhaustive search for graded / Gerstenhaber / BV isomorphisms.

Candidate maps assign to each source generator a target element of the same
degree with coefficients searched in [-C, C]; a candidate survives if it
kills every source relation and is bijective on every graded piece with
|degree| <= D.  Bijectivity over Z is descriptor equality plus surjectivity
(f.g. abelian groups are Hopfian, so a surjection between isomorphic graded
pieces is an isomorphism); surjectivity is certified by the Smith form of
the map's matrix augmented with the target's torsion relations.

Verdicts are certified only up to (D, C) and say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .arith import ExactMatrix, smith_normal_form
from .bvalgebra import (
    BVElement,
    PresentedBVAlgebra,
    delta_closed_form,
    gerstenhaber_bracket,
    multiply,
)
from .errors import InvalidParameters, ParentMismatch


@dataclass(frozen=True)
class SearchSpace:
    degree_bound: int
    coeff_bound: int

    def __post_init__(self):
        if self.degree_bound < 1 or self.coeff_bound < 1:
            raise InvalidParameters("bounds must be >= 1")


# ---------------------------------------------------------------------------
# degree-homogeneous monomial bases


def degree_basis(P: PresentedBVAlgebra, d: int) -> list:
    """All normal-form monomials of total degree d (a finite set: the
    unbounded generators have positive degree, the rest are capped)."""
    floor_neg = sum(
        (g.cap - 1) * g.degree
        for g in P.generators
        if g.cap is not None and g.degree < 0
    )
    bound = 0
    for g in P.generators:
        if g.cap is None:
            if g.degree <= 0:
                raise InvalidParameters(
                    f"generator {g.name} is unbounded with degree {g.degree}"
                )
            bound = max(bound, (abs(d) + abs(floor_neg)) // g.degree + 1)
    monos = P.monomials_within(bound)
    return [mn for mn in monos if P.monomial_degree(mn) == d]


def _mono_element(P, mono) -> BVElement:
    return BVElement(P, P._normalize({mono: P.ring.canon(1)}))


# ---------------------------------------------------------------------------
# graded maps


@dataclass(frozen=True)
class GradedMap:
    source: PresentedBVAlgebra
    target: PresentedBVAlgebra
    images: tuple  # of (generator name, BVElement), aligned with source gens

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise ParentMismatch("source and target rings differ")
        for g, (name, img) in zip(self.source.generators, self.images):
            if g.name != name:
                raise InvalidParameters("images misaligned with generators")
            if not img.is_zero() and img.degree() != g.degree:
                raise InvalidParameters(
                    f"image of {g.name} has degree {img.degree()}, want {g.degree}"
                )
        if not _kills_relations(self.source, self.target, self.image_dict()):
            raise InvalidParameters("map does not kill the source relations")

    def image_dict(self) -> dict:
        return dict(self.images)

    def apply(self, a: BVElement) -> BVElement:
        if a.parent != self.source:
            raise ParentMismatch("element not in the source algebra")
        imgs = self.image_dict()
        out = self.target.zero()
        for mono, coeff in a.terms.items():
            term = self.target.one().scale(coeff)
            for g, e in zip(self.source.generators, mono):
                for _ in range(e):
                    term = multiply(term, imgs[g.name])
            out = out + term
        return out

    def describe(self) -> str:
        return ", ".join(f"{name} |-> {img}" for name, img in self.images)


def _image_of_pattern(target, images, gens, pattern) -> BVElement:
    out = None
    for i, e in pattern:
        g = gens[i]
        for _ in range(e):
            out = images[g.name] if out is None else multiply(out, images[g.name])
    return out if out is not None else target.one()


def _kills_relations(source, target, images) -> bool:
    gens = source.generators
    for g in gens:
        if g.cap is not None:
            img = target.one()
            for _ in range(g.cap):
                img = multiply(img, images[g.name])
            if not img.is_zero():
                return False
    for pat in source.kill_rules:
        if not _image_of_pattern(target, images, gens, pat).is_zero():
            return False
    for pat, mod in source.torsion_rules:
        if not _image_of_pattern(target, images, gens, pat).scale(mod).is_zero():
            return False
    for pat, deltas, c in source.rewrite_rules:
        lhs = _image_of_pattern(target, images, gens, pat)
        full = {i: e for i, e in pat}
        for i, de in deltas:
            full[i] = full.get(i, 0) + de
        rhs = _image_of_pattern(
            target, images, gens, tuple((i, e) for i, e in full.items() if e)
        ).scale(c)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# graded bijectivity


def _piece_descriptor(P: PresentedBVAlgebra, monos):
    """(free count, sorted torsion moduli) of the graded piece."""
    free = 0
    tors = []
    for mn in monos:
        mod = None
        for pat, d in P.torsion_rules:
            if P._matches(mn, pat):
                mod = d
                break
        if mod is None or P.ring.is_field():
            free += 1
        else:
            tors.append(mod)
    return free, sorted(tors)


def _bijective_on_piece(phi: GradedMap, d: int) -> bool:
    src = degree_basis(phi.source, d)
    dst = degree_basis(phi.target, d)
    if _piece_descriptor(phi.source, src) != _piece_descriptor(phi.target, dst):
        return False
    if not dst:
        return True
    R = phi.source.ring
    col_index = {mn: i for i, mn in enumerate(dst)}
    cols = []
    for mn in src:
        img = phi.apply(_mono_element(phi.source, mn))
        vec = [R.canon(0)] * len(dst)
        for mo, c in img.terms.items():
            vec[col_index[mo]] = c
        cols.append(vec)
    # augment with the target torsion relations d_j * e_j
    for j, mn in enumerate(dst):
        for pat, mod in phi.target.torsion_rules:
            if phi.target._matches(mn, pat):
                vec = [R.canon(0)] * len(dst)
                vec[j] = R.canon(mod)
                cols.append(vec)
                break
    M = ExactMatrix.build(R, [[col[i] for col in cols] for i in range(len(dst))], cols=len(cols))
    D, _, _ = smith_normal_form(M)
    diag = [D.entries[i][i] for i in range(min(D.rows, D.cols))]
    one = R.canon(1)
    return len(diag) >= len(dst) and all(v == one for v in diag[: len(dst)])


def is_graded_bijection(phi: GradedMap, degree_bound: int) -> bool:
    return all(
        _bijective_on_piece(phi, d) for d in range(-degree_bound, degree_bound + 1)
    )


# ---------------------------------------------------------------------------
# enumeration


def _candidate_images(P: PresentedBVAlgebra, degree: int, C: int):
    """Nonzero degree-homogeneous elements with coefficients in [-C, C],
    deduplicated by canonical form."""
    basis = degree_basis(P, degree)
    seen = set()
    out = []
    for coeffs in product(range(-C, C + 1), repeat=len(basis)):
        if all(c == 0 for c in coeffs):
            continue
        elt = P.element(
            [
                ({g.name: e for g, e in zip(P.generators, mn)}, c)
                for mn, c in zip(basis, coeffs)
                if c
            ]
        )
        if elt.is_zero():
            continue
        key = tuple(sorted(elt.terms.items()))
        if key in seen:
            continue
        seen.add(key)
        out.append(elt)
    return out


def enumerate_algebra_isomorphisms(
    A: PresentedBVAlgebra, B: PresentedBVAlgebra, s: SearchSpace
) -> list[GradedMap]:
    """All graded algebra isomorphisms (up to degree/coefficient bounds)."""
    per_gen = []
    for g in A.generators:
        cands = _candidate_images(B, g.degree, s.coeff_bound)
        if not cands:
            return []
        per_gen.append([(g.name, c) for c in cands])
    found = []
    for combo in product(*per_gen):
        images = {name: img for name, img in combo}
        if not _kills_relations(A, B, images):
            continue
        phi = GradedMap(A, B, tuple(combo))
        if is_graded_bijection(phi, s.degree_bound):
            found.append(phi)
    return found


# ---------------------------------------------------------------------------
# BV and Gerstenhaber compatibility


def is_bv_map(phi: GradedMap, degree_bound: int):
    """(True, None) iff phi commutes with Delta on all normal-form monomials
    of |degree| <= bound; otherwise (False, witness monomial)."""
    for d in range(-degree_bound, degree_bound + 1):
        for mn in degree_basis(phi.source, d):
            a = _mono_element(phi.source, mn)
            if phi.apply(delta_closed_form(a)) != delta_closed_form(phi.apply(a)):
                return False, mn
    return True, None


def is_gerstenhaber_map(phi: GradedMap, degree_bound: int):
    """(True, None) iff phi preserves the bracket on all monomial pairs."""
    monos = [
        mn
        for d in range(-degree_bound, degree_bound + 1)
        for mn in degree_basis(phi.source, d)
    ]
    for m1 in monos:
        a = _mono_element(phi.source, m1)
        for m2 in monos:
            b = _mono_element(phi.source, m2)
            lhs = phi.apply(gerstenhaber_bracket(a, b))
            rhs = gerstenhaber_bracket(phi.apply(a), phi.apply(b))
            if lhs != rhs:
                return False, (m1, m2)
    return True, None


# ---------------------------------------------------------------------------
# the verdict


@dataclass(frozen=True)
class IsoVerdict:
    exists: bool
    search: SearchSpace
    witness: GradedMap | None  # a passing map when exists
    refutations: tuple  # of (GradedMap, witness monomial) when not

    def summary(self) -> str:
        tag = f"(certified up to degree {self.search.degree_bound}, coefficients {self.search.coeff_bound})"
        if self.exists:
            return f"YES {tag}: {self.witness.describe()}"
        lines = [f"NO {tag}: {len(self.refutations)} candidate maps, each refuted:"]
        for phi, wit in self.refutations:
            lines.append(f"  {phi.describe()}   fails Delta at {wit}")
        return "\n".join(lines)


def bv_isomorphism_exists(
    A: PresentedBVAlgebra, B: PresentedBVAlgebra, s: SearchSpace
) -> IsoVerdict:
    candidates = enumerate_algebra_isomorphisms(A, B, s)
    refutations = []
    for phi in candidates:
        ok, witness = is_bv_map(phi, s.degree_bound)
        if ok:
            return IsoVerdict(True, s, phi, ())
        refutations.append((phi, witness))
    return IsoVerdict(False, s, None, tuple(refutations))
