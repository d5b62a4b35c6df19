"""The graded algebra A = R[x]/(x^{n+1}) with |x| = 2m.

Elements are coefficient vectors over the basis {1, x, ..., x^n}.  The
functional <1, .> extracting the x^n coefficient realizes the Poincare
pairing: {x^{n-k}} is the dual basis of {x^k}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import RingSpec, Scalar
from .errors import ExponentOutOfRange, InvalidParameters, ParentMismatch


@dataclass(frozen=True)
class TruncatedPolyAlgebra:
    """R[x]/(x^{n+1}) with deg(x) = 2m (m >= 1, n >= 1)."""

    ring: RingSpec
    n: int
    m: int = 1

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidParameters(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")

    @property
    def dim(self) -> int:
        return self.n + 1

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (self.ring.canon(0),) * self.dim)

    def one(self) -> "AlgebraElement":
        return self.x_power(0)

    def x_power(self, k: int, coeff=1) -> "AlgebraElement":
        """coeff * x^k; exponents beyond n give 0 (truncation)."""
        if k < 0:
            raise ExponentOutOfRange(f"exponent {k} negative")
        coeffs = [self.ring.canon(0)] * self.dim
        if k <= self.n:
            coeffs[k] = self.ring.canon(coeff)
        return AlgebraElement(self, tuple(coeffs))

    def element(self, coeffs) -> "AlgebraElement":
        vals = tuple(self.ring.canon(c) for c in coeffs)
        if len(vals) != self.dim:
            raise InvalidParameters(f"need {self.dim} coefficients")
        return AlgebraElement(self, vals)

    def dual_basis_exponent(self, k: int) -> int:
        """n - k: the pairing <1, x^k * x^{n-k}> = 1."""
        if not 0 <= k <= self.n:
            raise ExponentOutOfRange(f"exponent {k} outside [0, {self.n}]")
        return self.n - k

    def suspended_degree(self, k: int) -> int:
        """|s x^k| = 2mk - 1, the suspension controlling Koszul signs."""
        return 2 * self.m * k - 1


@dataclass(frozen=True)
class AlgebraElement:
    """Element of A as the coefficient vector of {1, x, ..., x^n}."""

    parent: TruncatedPolyAlgebra
    coeffs: tuple

    def _check(self, other: "AlgebraElement"):
        if self.parent != other.parent:
            raise ParentMismatch("elements of different algebras")

    def __add__(self, other):
        self._check(other)
        R = self.parent.ring
        return AlgebraElement(
            self.parent, tuple(R.add(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        self._check(other)
        R = self.parent.ring
        return AlgebraElement(
            self.parent, tuple(R.sub(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        R = self.parent.ring
        return AlgebraElement(self.parent, tuple(R.neg(a) for a in self.coeffs))

    def scale(self, c) -> "AlgebraElement":
        R = self.parent.ring
        return AlgebraElement(self.parent, tuple(R.mul(c, a) for a in self.coeffs))

    def is_zero(self) -> bool:
        z = self.parent.ring.canon(0)
        return all(c == z for c in self.coeffs)

    def __str__(self):
        z = self.parent.ring.canon(0)
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == z:
                continue
            mono = "1" if k == 0 else ("x" if k == 1 else f"x^{k}")
            parts.append(mono if c == self.parent.ring.canon(1) and k else f"{c}*{mono}" if k else str(c))
        return " + ".join(parts) if parts else "0"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Truncated convolution: terms with exponent > n are discarded."""
    a._check(b)
    A = a.parent
    R = A.ring
    out = [R.canon(0)] * A.dim
    for i, ca in enumerate(a.coeffs):
        if ca == R.canon(0):
            continue
        for j, cb in enumerate(b.coeffs):
            if i + j > A.n:
                break
            out[i + j] = R.canon(out[i + j] + ca * cb)
    return AlgebraElement(A, tuple(out))


def degree(a: AlgebraElement) -> int | None:
    """2mk for a nonzero multiple of x^k; None for 0 or inhomogeneous input."""
    z = a.parent.ring.canon(0)
    support = [k for k, c in enumerate(a.coeffs) if c != z]
    if len(support) != 1:
        return None
    return 2 * a.parent.m * support[0]


def top_coefficient(a: AlgebraElement) -> Scalar:
    """<1, a>: the coefficient of x^n."""
    return Scalar(a.parent.ring, a.coeffs[a.parent.n])
