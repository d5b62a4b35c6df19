"""The 2-periodic small model P^*(A) and the comparison map with the bar complex.

P^k(A) = A for every k, with differential alternating 0 (even levels) and
multiplication by (n+1)x^n (odd levels).  The chain map phi from the
periodic resolution into the bar resolution induces the transfer
phi^*: C^*(A;A) -> P^*(A),  f |-> sum over the index set of x^{sum a_k} f(word),
where the words alternate x^{n-a_k} and x (with a leading x at odd levels)
and the indices run over 0 <= a_k < n with sum a_k <= n.

Levels carry internal shifts 2m q(n+1) (even level 2q) and 2m q(n+1) + 2m
(odd level 2q+1); the cohomological degree of x^e at level k is
shift(k) - 2m e - k, which the transfer preserves.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .algebra import AlgebraElement, TruncatedPolyAlgebra, multiply
from .arith import ExactMatrix, HomologyData, ModuleDescriptor, class_coordinates, homology_of_pair
from .barcomplex import Cochain, beta
from .errors import LevelOutOfRange

# -- the periodic complex ----------------------------------------------------


@dataclass(frozen=True)
class PeriodicComplex:
    """Hom of the 2-periodic resolution into A: 0 -> A -> A -> ... ."""

    parent: TruncatedPolyAlgebra

    def shift(self, level: int) -> int:
        q, odd = divmod(level, 2)
        return 2 * self.parent.m * (q * (self.parent.n + 1) + (1 if odd else 0))

    def total_degree(self, level: int, exp: int) -> int:
        return self.shift(level) - 2 * self.parent.m * exp - level

    def differential_matrix(self, level: int) -> ExactMatrix:
        """Matrix of d: P^level -> P^{level+1} on the basis {1, x, ..., x^n}."""
        A = self.parent
        dim = A.dim
        if level % 2 == 0:
            return ExactMatrix.zero(A.ring, dim, dim)
        rows = [[0] * dim for _ in range(dim)]
        for j in range(dim):
            if j + A.n <= A.n:  # only j = 0 survives truncation
                rows[j + A.n][j] = A.n + 1
        return ExactMatrix.build(A.ring, rows)


@dataclass(frozen=True)
class PeriodicElement:
    level: int
    value: AlgebraElement

    def __post_init__(self):
        if self.level < 0:
            raise LevelOutOfRange(f"level {self.level} negative")


def periodic_differential(P: PeriodicComplex, e: PeriodicElement) -> PeriodicElement:
    A = P.parent
    if e.level % 2 == 0:
        return PeriodicElement(e.level + 1, A.zero())
    return PeriodicElement(e.level + 1, multiply(A.x_power(A.n, A.n + 1), e.value))


# -- homology of the periodic complex ----------------------------------------


@lru_cache(maxsize=None)
def level_homology(P: PeriodicComplex, level: int) -> HomologyData:
    A = P.parent
    if level == 0:
        d_in = ExactMatrix.zero(A.ring, A.dim, 0)
    else:
        d_in = P.differential_matrix(level - 1)
    return homology_of_pair(d_in, P.differential_matrix(level))


def hh_modules(P: PeriodicComplex, max_level: int) -> list[ModuleDescriptor]:
    """HH^0, ..., HH^max_level as modules over the coefficient ring."""
    return [level_homology(P, k).descriptor for k in range(max_level + 1)]


def class_of(P: PeriodicComplex, e: PeriodicElement) -> tuple:
    """Coordinates of e's class in the generators found by level_homology.

    Free coordinates first, then torsion coordinates reduced mod d_i."""
    h = level_homology(P, e.level)
    coords = class_coordinates(h, e.value.coeffs)
    if coords is None:
        raise ValueError(f"value at level {e.level} is not a cycle")
    return coords


def classes_equal(P: PeriodicComplex, e1: PeriodicElement, e2: PeriodicElement) -> bool:
    if e1.level != e2.level:
        return False
    return class_of(P, e1) == class_of(P, e2)


# -- bigraded components (for the oracle comparison) --------------------------


def periodic_component_dim(P: PeriodicComplex, level: int, D: int) -> int:
    """The (level, D) component of P^* is spanned by at most one x^e."""
    A = P.parent
    q, odd = divmod(level, 2)
    e = q * (A.n + 1) + odd - D
    return 1 if 0 <= e <= A.n else 0


def periodic_component_matrices(P: PeriodicComplex, level: int, D: int):
    """(d_in, d_out) restricted to internal degree D around the given level."""
    A = P.parent
    R = A.ring

    def comp_exp(lv):
        q, odd = divmod(lv, 2)
        return q * (A.n + 1) + odd - D

    def restricted(src_level):
        src_dim = periodic_component_dim(P, src_level, D) if src_level >= 0 else 0
        dst_dim = periodic_component_dim(P, src_level + 1, D)
        if src_level < 0 or src_level % 2 == 0:
            return ExactMatrix.zero(R, dst_dim, src_dim)
        rows = [[0] * src_dim for _ in range(dst_dim)]
        if src_dim and dst_dim and comp_exp(src_level) + A.n == comp_exp(src_level + 1):
            rows[0][0] = A.n + 1
        return ExactMatrix.build(R, rows, cols=src_dim)

    return restricted(level - 1), restricted(level)


def periodic_component_descriptor(P: PeriodicComplex, level: int, D: int) -> ModuleDescriptor:
    d_in, d_out = periodic_component_matrices(P, level, D)
    return homology_of_pair(d_in, d_out).descriptor


# -- the comparison map phi and the transfer ---------------------------------


def phi_index_set(A: TruncatedPolyAlgebra, q: int):
    """Tuples (a_1, ..., a_q) with 0 <= a_k < n and sum a_k <= n."""
    return (
        a for a in product(range(A.n), repeat=q) if sum(a) <= A.n
    )


@dataclass(frozen=True)
class BarResolutionElement:
    """Formal sum  1 [word] x^{coef_exp}  describing phi(1 (x) 1)."""

    level: int
    terms: tuple  # of (word, coefficient exponent)


def phi_image(A: TruncatedPolyAlgebra, level: int) -> BarResolutionElement:
    q, odd = divmod(level, 2)
    terms = []
    for a in phi_index_set(A, q):
        word = ()
        if odd:
            word += (1,)
        for ak in a:
            word += (A.n - ak, 1)
        terms.append((word, sum(a)))
    return BarResolutionElement(level, tuple(terms))


def transfer(f: Cochain) -> PeriodicElement:
    """phi^*(f): evaluate f on the phi words, weighted by x^{sum a_k}."""
    A = f.parent
    img = phi_image(A, f.word_length)
    val = A.zero()
    for word, cexp in img.terms:
        val = val + multiply(A.x_power(cexp), f.evaluate(word))
    return PeriodicElement(f.word_length, val)


# -- machine verification of the chain-map lemma ------------------------------


@dataclass(frozen=True)
class ChainMapViolation:
    word_length: int
    word: tuple
    value_exp: int
    transferred_beta: tuple
    differential_transfer: tuple

    def __str__(self):
        return (
            f"elementary cochain {self.word} |-> x^{self.value_exp}: "
            f"phi*(beta f) = {self.transferred_beta} but "
            f"d(phi* f) = {self.differential_transfer}"
        )


def verify_chain_map(
    P: PeriodicComplex, max_word_length: int, D_window=None
) -> list[ChainMapViolation]:
    """Check phi^*(beta f) = d(phi^* f) on every elementary cochain.

    Violations are returned as data (sorted by witness), never raised.
    """
    from .barcomplex import component_words, elementary_cochain, internal_degree_range

    A = P.parent
    violations = []
    for q in range(max_word_length + 1):
        window = D_window if D_window is not None else internal_degree_range(A, q)
        for D in window:
            for w in component_words(A, q, D):
                e = sum(w) - D
                f = elementary_cochain(A, w, e)
                lhs = transfer(beta(f))
                rhs = periodic_differential(P, transfer(f))
                if lhs.value.coeffs != rhs.value.coeffs:
                    violations.append(
                        ChainMapViolation(q, w, e, lhs.value.coeffs, rhs.value.coeffs)
                    )
    violations.sort(key=lambda v: (v.word_length, v.word, v.value_exp))
    return violations
