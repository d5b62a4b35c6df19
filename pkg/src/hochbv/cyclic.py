"""Negative cyclic cohomology of A = k[x]/(x^{n+1}) via the mixed complex.

The periodic model (P^*, d) carries the transported Delta as a second
operator B with B = 0 on even levels and, on level 2q+1 -> 2q,

    t^q u x^l  |->  (-q(n+1) - n + l) t^q x^l

in the monomial dictionary; in value coordinates (the transfer identifies
the class of t^q u x^l with x^{l+1} at level 2q+1 and t^q x^l with x^l at
level 2q) this is x^k |-> (-q(n+1) - n + k - 1) x^{k-1}, with 1 |-> 0.

A negative cyclic cochain of total degree m is a sequence of components at
levels -m, -m+2, -m+4, ...; the total differential sends the slot at level
L to d(component at L-1) + B(component at L+1), and the B-image of the
lowest slot falls off the bottom of the double complex (it is exactly the
connecting map of the Connes exact sequence).  The complex is an inverse
limit over window truncations, so hc_minus reports the classes of a window
that survive projection from a deeper window, and certifies stability by
comparing two consecutive windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import AlgebraElement, TruncatedPolyAlgebra, multiply
from .arith import (
    ExactMatrix,
    HomologyData,
    ModuleDescriptor,
    class_coordinates,
    class_is_zero,
    homology_of_pair,
    rank,
)
from .barcomplex import delta as bar_delta
from .barcomplex import monomial_cochain
from .errors import (
    InvalidParameters,
    NotACocycle,
    TransferMismatch,
    UnstableTruncation,
)
from .resolution import PeriodicComplex, PeriodicElement, classes_equal, transfer


@dataclass(frozen=True)
class MixedComplex:
    """(P^*(A), d, B) with the closed-form B on odd levels."""

    base: PeriodicComplex

    @property
    def parent(self) -> TruncatedPolyAlgebra:
        return self.base.parent

    def b_matrix(self, level: int) -> ExactMatrix:
        """Matrix of B: P^level -> P^{level-1} (zero on even levels)."""
        A = self.parent
        R = A.ring
        dim = A.dim
        if level % 2 == 0 or level == 0:
            return ExactMatrix.zero(R, dim, dim)
        q = level // 2
        rows = [[0] * dim for _ in range(dim)]
        for k in range(1, dim):
            rows[k - 1][k] = -q * (A.n + 1) - A.n + (k - 1)
        return ExactMatrix.build(R, rows)

    def apply_B(self, e: PeriodicElement) -> PeriodicElement:
        if e.level == 0:
            return PeriodicElement(0, self.parent.zero())
        vec = self.b_matrix(e.level).apply(e.value.coeffs)
        return PeriodicElement(e.level - 1, AlgebraElement(self.parent, vec))

    def axioms_hold(self, max_level: int) -> bool:
        """d B + B d = 0 and B^2 = 0 through the given level."""
        for lv in range(1, max_level):
            B1 = self.b_matrix(lv)
            d_out = self.base.differential_matrix(lv - 1)
            d_in = self.base.differential_matrix(lv)
            BB = self.b_matrix(lv - 1) * B1 if lv >= 1 else None
            if not (d_out * B1 + self.b_matrix(lv + 1) * d_in).is_zero():
                return False
            if BB is not None and not BB.is_zero():
                return False
        return True


def derive_B_from_delta(ring, n: int, m: int, q_max: int = 2) -> MixedComplex:
    """Build the mixed complex and certify its closed form against the bar
    complex: for each class of level 2q+1, transfer Delta of a representing
    cocycle and compare with the closed form.  Raises TransferMismatch on any
    disagreement (a sign-convention bug upstream would surface here)."""
    A = TruncatedPolyAlgebra(ring, n, m)
    P = PeriodicComplex(A)
    MC = MixedComplex(P)
    for q in range(q_max + 1):
        for l in range(n):  # monomials t^q u x^l, l < n (u x^n = 0)
            f = monomial_cochain(A, q, 1, l, odd_gen="u")
            rep = transfer(f)
            if rep.value.coeffs != A.x_power(l + 1).coeffs:
                raise TransferMismatch(
                    f"transfer of t^{q} u x^{l} is {rep.value}, expected x^{l + 1}"
                )
            got = transfer(bar_delta(f))
            want = MC.apply_B(rep)
            if not classes_equal(P, got, want):
                raise TransferMismatch(
                    f"Delta(t^{q} u x^{l}) transfers to {got.value} at level {2 * q}, "
                    f"closed form gives {want.value}"
                )
    if not MC.axioms_hold(2 * q_max + 2):
        raise TransferMismatch("mixed complex axioms fail")
    return MC


# ---------------------------------------------------------------------------
# the negative cyclic total complex


@dataclass(frozen=True)
class NegativeCyclicElement:
    """Cochain of the total complex: components at levels -m, -m+2, ..."""

    total_degree: int  # the public degree m
    window: int
    components: tuple  # of (level, AlgebraElement), ascending levels


def _slots(delta_deg: int, window: int) -> list[int]:
    """Levels carrying the total-degree -delta_deg ... in internal indexing:
    levels congruent to delta_deg mod 2, from max(delta_deg, parity), up to
    the window."""
    start = delta_deg if delta_deg >= 0 else delta_deg % 2
    return list(range(start, window + 1, 2))


class NegativeCyclicComplex:
    """Window-truncated total complex for one algebra; degrees are public
    (the table's m), internally delta_deg = -m."""

    def __init__(self, algebra: TruncatedPolyAlgebra):
        if not algebra.ring.is_field():
            raise InvalidParameters(
                "negative cyclic cohomology requires field coefficients"
            )
        self.A = algebra
        self.P = PeriodicComplex(algebra)
        self.MC = MixedComplex(self.P)

    def slots(self, m: int, window: int) -> list[int]:
        return _slots(-m, window)

    def _total_matrix(self, delta_deg: int, window: int) -> ExactMatrix:
        """The differential CC(delta_deg) -> CC(delta_deg + 1)."""
        A = self.A
        R = A.ring
        src = _slots(delta_deg, window)
        dst = _slots(delta_deg + 1, window)
        dim = A.dim
        col = {lv: i for i, lv in enumerate(src)}
        rows = [
            [R.canon(0)] * (dim * len(src)) for _ in range(dim * len(dst))
        ]
        for r_i, lv in enumerate(dst):
            if lv - 1 in col:
                dmat = self.P.differential_matrix(lv - 1)
                for i in range(dim):
                    for j in range(dim):
                        if dmat.entries[i][j] != R.canon(0):
                            rows[r_i * dim + i][col[lv - 1] * dim + j] = dmat.entries[i][j]
            if lv + 1 in col:
                bmat = self.MC.b_matrix(lv + 1)
                for i in range(dim):
                    for j in range(dim):
                        if bmat.entries[i][j] != R.canon(0):
                            rows[r_i * dim + i][col[lv + 1] * dim + j] = bmat.entries[i][j]
        return ExactMatrix.build(R, rows, cols=dim * len(src))

    def _window_homology(self, m: int, window: int) -> HomologyData:
        d = -m
        return homology_of_pair(
            self._total_matrix(d - 1, window), self._total_matrix(d, window)
        )

    def _project(self, m: int, vec, window_from: int, window_to: int):
        """Restrict a CC-vector to a smaller window (a chain map)."""
        src = self.slots(m, window_from)
        keep = [lv for lv in src if lv <= window_to]
        dim = self.A.dim
        out = []
        for i, lv in enumerate(src):
            if lv in keep:
                out.extend(vec[i * dim : (i + 1) * dim])
        return tuple(out)

    def _stable_classes(self, m: int, window: int):
        """Representatives from the deeper window that survive projection.

        Returns (descriptor, HomologyData at the window, surviving elements).
        """
        h_w = self._window_homology(m, window)
        h_deep = self._window_homology(m, window + 2)
        R = self.A.ring
        survivors = []
        coords = []
        for rep in h_deep.representatives:
            pvec = self._project(m, rep, window + 2, window)
            c = class_coordinates(h_w, pvec)
            if c is None:
                raise UnstableTruncation(
                    f"projected representative is not a cycle at window {window}"
                )
            coords.append(c)
            survivors.append(pvec)
        if coords:
            M = ExactMatrix.build(R, [list(c) for c in coords], cols=len(coords[0]))
            dim = rank(M)
            # choose representatives realizing independent classes
            chosen = []
            used: list = []
            for vec, c in zip(survivors, coords):
                trial = used + [list(c)]
                Mt = ExactMatrix.build(R, trial, cols=len(c))
                if rank(Mt) > len(used):
                    used = trial
                    chosen.append(vec)
                if len(chosen) == dim:
                    break
        else:
            dim = 0
            chosen = []
        return ModuleDescriptor(R, dim), h_w, chosen

    def hc_minus(self, m: int, window: int) -> ModuleDescriptor:
        """HC_-^m: the window answer, with mandatory stability certification."""
        if window < abs(m) + 4:
            raise InvalidParameters(
                f"window {window} too small for degree {m} (need >= |m| + 4)"
            )
        desc, _, _ = self._stable_classes(m, window)
        desc2, _, _ = self._stable_classes(m, window + 2)
        if desc != desc2:
            raise UnstableTruncation(
                f"degree {m}: window {window} gives {desc}, window {window + 2} gives {desc2}"
            )
        return desc

    def basis(self, m: int, window: int) -> list[NegativeCyclicElement]:
        """Representing cocycles of a basis of HC_-^m."""
        _, _, chosen = self._stable_classes(m, window)
        out = []
        for vec in chosen:
            out.append(self._element_from_vector(m, window, vec))
        return out

    def _element_from_vector(self, m, window, vec) -> NegativeCyclicElement:
        slots = self.slots(m, window)
        dim = self.A.dim
        comps = []
        for i, lv in enumerate(slots):
            coeffs = tuple(vec[i * dim : (i + 1) * dim])
            elt = AlgebraElement(self.A, coeffs)
            if not elt.is_zero():
                comps.append((lv, elt))
        return NegativeCyclicElement(m, window, tuple(comps))

    def _vector_from_element(self, e: NegativeCyclicElement):
        slots = self.slots(e.total_degree, e.window)
        dim = self.A.dim
        comp = dict(e.components)
        vec = []
        for lv in slots:
            elt = comp.get(lv)
            vec.extend(elt.coeffs if elt is not None else (self.A.ring.canon(0),) * dim)
        return tuple(vec)

    def is_cocycle(self, e: NegativeCyclicElement) -> bool:
        vec = self._vector_from_element(e)
        M = self._total_matrix(-e.total_degree, e.window)
        z = self.A.ring.canon(0)
        return all(v == z for v in M.apply(vec))

    def class_is_zero(self, e: NegativeCyclicElement) -> bool:
        """Whether e bounds in its window (hence vanishes in the limit)."""
        h = self._window_homology(e.total_degree, e.window)
        return class_is_zero(h, self._vector_from_element(e))

    # -- the Connes exact sequence and the Lie bracket -------------------

    def include_hochschild(self, c: PeriodicElement, window: int) -> NegativeCyclicElement:
        """I: place a Hochschild cocycle in the lowest slot, zeros above."""
        m = -c.level
        comps = () if c.value.is_zero() else ((c.level, c.value),)
        return NegativeCyclicElement(m, window, comps)

    def connecting_map(self, e: NegativeCyclicElement) -> PeriodicElement:
        """B of the lowest-slot component: lands one level down in P^*."""
        if not self.is_cocycle(e):
            raise NotACocycle(f"components fail the total cocycle condition")
        slots = self.slots(e.total_degree, e.window)
        lowest = slots[0]
        comp = dict(e.components)
        bottom = comp.get(lowest, self.A.zero())
        if lowest % 2 == 0 or lowest == 0:
            return PeriodicElement(max(lowest - 1, 0), self.A.zero())
        return self.MC.apply_B(PeriodicElement(lowest, bottom))

    def lie_bracket(
        self, e1: NegativeCyclicElement, e2: NegativeCyclicElement
    ) -> NegativeCyclicElement:
        """[e1, e2] = I(connecting(e1) cup connecting(e2)).

        The connecting images land at even levels, where the product of
        classes is multiplication in A at the sum of the levels."""
        b1 = self.connecting_map(e1)
        b2 = self.connecting_map(e2)
        level = b1.level + b2.level
        prod = multiply(b1.value, b2.value)
        window = max(e1.window, e2.window, level + 4)
        return self.include_hochschild(PeriodicElement(level, prod), window)
