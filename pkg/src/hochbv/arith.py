"""Exact scalars over Z, Q, F_p and the linear algebra under every homology computation.

Matrices are dense with raw entries (int, Fraction, or residues in [0, p));
the ring is carried by a RingSpec.  Smith normal form over Z is the naive
elimination with pivoting on least absolute value, which is plenty at the
matrix sizes this package ever produces.  Over a field the same routine
degenerates to Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CompositionNonzero, ParentMismatch


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of Z, Q, or F_p.  Compared by value."""

    kind: str  # "Z" | "Q" | "Fp"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"modulus {self.p!r} is not prime")
        elif self.p is not None:
            raise ValueError("modulus only allowed for Fp")

    # -- raw-value arithmetic ------------------------------------------
    def canon(self, v):
        """Canonical representative: reduced Fraction / residue in [0, p)."""
        if self.kind == "Z":
            return int(v)
        if self.kind == "Q":
            return Fraction(v)
        return int(v) % self.p

    def add(self, a, b):
        return self.canon(a + b)

    def sub(self, a, b):
        return self.canon(a - b)

    def mul(self, a, b):
        return self.canon(a * b)

    def neg(self, a):
        return self.canon(-a)

    def is_field(self) -> bool:
        return self.kind != "Z"

    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    def inv(self, a):
        if self.kind == "Q":
            return Fraction(1) / Fraction(a)
        if self.kind == "Fp":
            return pow(int(a) % self.p, self.p - 2, self.p)
        if a in (1, -1):
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    def divides(self, a, b) -> bool:
        """Whether a | b (over a field: a != 0 or b == 0)."""
        if self.is_field():
            return self.canon(a) != 0 or self.canon(b) == 0
        return b % a == 0 if a != 0 else b == 0

    def exact_div(self, b, a):
        if self.is_field():
            return self.mul(b, self.inv(a))
        q, r = divmod(b, a)
        if r:
            raise ZeroDivisionError(f"{a} does not divide {b} in Z")
        return q

    def zero(self) -> "Scalar":
        return Scalar(self, self.canon(0))

    def one(self) -> "Scalar":
        return Scalar(self, self.canon(1))

    def scalar(self, v) -> "Scalar":
        return Scalar(self, self.canon(v))

    def __str__(self):
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"F{self.p}")


ZZ = RingSpec("Z")
QQ = RingSpec("Q")


def GF(p: int) -> RingSpec:
    return RingSpec("Fp", p)


@dataclass(frozen=True)
class Scalar:
    """A ring element tagged with its ring; value is always canonical."""

    ring: RingSpec
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.canon(self.value))

    def _check(self, other: "Scalar"):
        if self.ring != other.ring:
            raise ParentMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        return Scalar(self.ring, self.ring.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return Scalar(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return Scalar(self.ring, self.ring.mul(self.value, other.value))

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def is_zero(self) -> bool:
        return self.value == self.ring.canon(0)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix of exact entries over a fixed ring."""

    ring: RingSpec
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples, raw canonical values

    @staticmethod
    def build(ring: RingSpec, rows_of_values, cols: int | None = None) -> "ExactMatrix":
        data = tuple(tuple(ring.canon(v) for v in row) for row in rows_of_values)
        r = len(data)
        if r:
            c = len(data[0])
            if any(len(row) != c for row in data):
                raise ValueError("ragged rows")
        else:
            c = cols or 0
        return ExactMatrix(ring, r, c, data)

    @staticmethod
    def zero(ring: RingSpec, rows: int, cols: int) -> "ExactMatrix":
        z = ring.canon(0)
        return ExactMatrix(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(ring: RingSpec, n: int) -> "ExactMatrix":
        return ExactMatrix.build(
            ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n
        )

    @staticmethod
    def from_columns(ring: RingSpec, columns, rows: int) -> "ExactMatrix":
        if not columns:
            return ExactMatrix.zero(ring, rows, 0)
        return ExactMatrix.build(
            ring, [[col[i] for col in columns] for i in range(rows)]
        )

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.ring, self.entries[i][j])

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise ParentMismatch("matrix rings differ")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        R = self.ring
        data = tuple(
            tuple(R.add(a, b) for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)
        )
        return ExactMatrix(R, self.rows, self.cols, data)

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise ParentMismatch("matrix rings differ")
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        R = self.ring
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                s = 0
                for k in range(self.cols):
                    s = s + self.entries[i][k] * other.entries[k][j]
                row.append(R.canon(s))
            out.append(row)
        return ExactMatrix(
            R, self.rows, other.cols, tuple(tuple(r) for r in out)
        )

    def apply(self, vec) -> tuple:
        """Matrix times a raw column vector."""
        R = self.ring
        return tuple(
            R.canon(sum(self.entries[i][k] * vec[k] for k in range(self.cols)))
            for i in range(self.rows)
        )

    def is_zero(self) -> bool:
        z = self.ring.canon(0)
        return all(v == z for row in self.entries for v in row)

    def transpose(self) -> "ExactMatrix":
        data = tuple(
            tuple(self.entries[i][j] for i in range(self.rows))
            for j in range(self.cols)
        )
        return ExactMatrix(self.ring, self.cols, self.rows, data)


@dataclass(frozen=True)
class ModuleDescriptor:
    """Isomorphism type of a finitely generated module over the ring.

    Over Z: free_rank plus torsion coefficients d_1 | d_2 | ... (each >= 2).
    Over a field the torsion list is empty and free_rank is the dimension.
    """

    ring: RingSpec
    free_rank: int
    torsion: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.ring.is_field() and self.torsion:
            raise ValueError("no torsion over a field")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion chain broken: {self.torsion}")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")

    def __str__(self):
        parts = []
        if self.free_rank:
            base = str(self.ring)
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        parts += [f"Z_{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Smith normal form


class _OpMatrix:
    """Mutable matrix with elementary row/column operations, tracking the
    unimodular factors and their inverses: a = U . M . V throughout."""

    def __init__(self, ring, entries, m, n):
        self.R = ring
        self.a = [list(row) for row in entries]
        self.m = m
        self.n = n
        self.U = [[ring.canon(1 if i == j else 0) for j in range(m)] for i in range(m)]
        self.Uinv = [row[:] for row in self.U]
        self.V = [[ring.canon(1 if i == j else 0) for j in range(n)] for i in range(n)]
        self.Vinv = [row[:] for row in self.V]

    def swap_rows(self, i, j):
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]
        for r in self.Uinv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for r in self.a:
            r[i], r[j] = r[j], r[i]
        for r in self.V:
            r[i], r[j] = r[j], r[i]
        self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def add_row(self, dst, src, c):
        """row_dst += c * row_src."""
        R = self.R
        if c == R.canon(0):
            return
        self.a[dst] = [R.canon(x + c * y) for x, y in zip(self.a[dst], self.a[src])]
        self.U[dst] = [R.canon(x + c * y) for x, y in zip(self.U[dst], self.U[src])]
        for r in self.Uinv:
            r[src] = R.canon(r[src] - c * r[dst])

    def add_col(self, dst, src, c):
        """col_dst += c * col_src."""
        R = self.R
        if c == R.canon(0):
            return
        for r in self.a:
            r[dst] = R.canon(r[dst] + c * r[src])
        for r in self.V:
            r[dst] = R.canon(r[dst] + c * r[src])
        self.Vinv[src] = [
            R.canon(x - c * y) for x, y in zip(self.Vinv[src], self.Vinv[dst])
        ]

    def scale_row(self, i, unit):
        R = self.R
        self.a[i] = [R.mul(unit, x) for x in self.a[i]]
        self.U[i] = [R.mul(unit, x) for x in self.U[i]]
        inv = R.inv(unit)
        for r in self.Uinv:
            r[i] = R.mul(r[i], inv)


def _smith(ring: RingSpec, entries, m: int, n: int):
    """Core elimination: returns (D, U, V, Uinv, Vinv) with U*M*V = D."""
    w = _OpMatrix(ring, entries, m, n)
    R = ring
    zero = R.canon(0)
    t = 0
    while True:
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                v = w.a[i][j]
                if v != zero:
                    if pivot is None or (
                        R.kind == "Z" and abs(v) < abs(w.a[pivot[0]][pivot[1]])
                    ):
                        pivot = (i, j)
            if pivot is not None and R.kind != "Z":
                break
        if pivot is None:
            break
        w.swap_rows(t, pivot[0])
        w.swap_cols(t, pivot[1])

        if R.is_field():
            w.scale_row(t, R.inv(w.a[t][t]))
            for i in range(t + 1, m):
                w.add_row(i, t, R.neg(w.a[i][t]))
            for j in range(t + 1, n):
                w.add_col(j, t, R.neg(w.a[t][j]))
            t += 1
            continue

        # Z: reduce until the pivot exactly divides its row and column
        dirty = False
        for i in range(t + 1, m):
            if w.a[i][t]:
                w.add_row(i, t, -(w.a[i][t] // w.a[t][t]))
                if w.a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if w.a[t][j]:
                w.add_col(j, t, -(w.a[t][j] // w.a[t][t]))
                if w.a[t][j]:
                    dirty = True
        if dirty:
            continue  # strictly smaller remainders exist; re-pivot
        # divisor chain: pivot must divide whole trailing block
        culprit = None
        for i in range(t + 1, m):
            if any(w.a[i][j] % w.a[t][t] for j in range(t + 1, n)):
                culprit = i
                break
        if culprit is not None:
            w.add_row(t, culprit, 1)
            continue
        if w.a[t][t] < 0:
            w.scale_row(t, -1)
        t += 1

    def _mk(rows, nr, nc):
        return ExactMatrix(ring, nr, nc, tuple(tuple(r) for r in rows))

    return (
        _mk(w.a, m, n),
        _mk(w.U, m, m),
        _mk(w.V, n, n),
        _mk(w.Uinv, m, m),
        _mk(w.Vinv, n, n),
    )


def _smith_of(M: ExactMatrix):
    return _smith(M.ring, M.entries, M.rows, M.cols)


def smith_normal_form(M: ExactMatrix):
    """Smith normal form D = U*M*V with U, V unimodular.

    Over Z, D is diagonal with nonnegative entries and d_i | d_{i+1};
    over a field the diagonal is 1,...,1,0,...,0.
    """
    D, U, V, _, _ = _smith_of(M)
    return D, U, V


def _diagonal(D: ExactMatrix):
    return [D.entries[i][i] for i in range(min(D.rows, D.cols))]


def rank(M: ExactMatrix) -> int:
    D, _, _, _, _ = _smith_of(M)
    zero = M.ring.canon(0)
    return sum(1 for d in _diagonal(D) if d != zero)


def kernel_basis(M: ExactMatrix) -> list[tuple]:
    """Basis of ker(M) as raw columns.

    Over a field this is a linear basis; over Z a basis of the kernel
    lattice, saturated because the columns of the unimodular V extend it
    to a basis of Z^cols.
    """
    D, _, V, _, _ = _smith_of(M)
    zero = M.ring.canon(0)
    diag = _diagonal(D)
    out = []
    for j in range(M.cols):
        if j >= len(diag) or diag[j] == zero:
            out.append(V.column(j))
    return out


def solve(M: ExactMatrix, b) -> tuple | None:
    """One solution x of M x = b over the ring, or None.

    Over Z the solution is required to be integral.
    """
    D, U, V, _, _ = _smith_of(M)
    R = M.ring
    zero = R.canon(0)
    c = U.apply(tuple(R.canon(v) for v in b))
    diag = _diagonal(D)
    y = [zero] * M.cols
    for i in range(M.rows):
        d = diag[i] if i < len(diag) else zero
        if d == zero:
            if c[i] != zero:
                return None
        else:
            if not R.divides(d, c[i]):
                return None
            y[i] = R.exact_div(c[i], d)
    return V.apply(tuple(y))


def in_image(M: ExactMatrix, b) -> bool:
    return solve(M, b) is not None


@dataclass(frozen=True)
class HomologyData:
    """ker(d_out)/im(d_in) with representing cycles.

    representatives holds one raw column per generator: free generators
    first, then one per torsion coefficient (same order as the descriptor).
    """

    descriptor: ModuleDescriptor
    representatives: list
    kernel: ExactMatrix  # columns: kernel basis adapted to the image
    factors: tuple  # (invariant factor, column index) per surviving generator


def homology_of_pair(d_in: ExactMatrix, d_out: ExactMatrix) -> HomologyData:
    """Homology at the middle of   .  --d_in-->  .  --d_out-->  .   ."""
    if d_in.ring != d_out.ring:
        raise ParentMismatch("rings differ")
    R = d_in.ring
    if d_in.rows != d_out.cols:
        raise ValueError("chain degrees misaligned")
    if d_in.cols and not (d_out * d_in).is_zero():
        raise CompositionNonzero("d_out . d_in != 0")

    kcols = kernel_basis(d_out)
    K = ExactMatrix.from_columns(R, kcols, d_out.cols)
    k = len(kcols)
    zero = R.canon(0)

    if k == 0:
        return HomologyData(ModuleDescriptor(R, 0), [], K, ())

    # coordinates of the image inside the kernel lattice (always integral:
    # the kernel lattice is saturated)
    ycols = []
    for j in range(d_in.cols):
        y = solve(K, d_in.column(j))
        if y is None:
            raise CompositionNonzero("image not contained in kernel")
        ycols.append(y)
    Y = ExactMatrix.from_columns(R, ycols, k)
    DY, _, _, UYinv, _ = _smith_of(Y)

    Kt = K * UYinv  # adapted basis: image = sum of d_i * (column i)
    diag = _diagonal(DY)
    factors = [diag[i] if i < len(diag) else zero for i in range(k)]

    one = R.canon(1)
    free_idx = [i for i, d in enumerate(factors) if d == zero]
    tors_idx = sorted(
        (i for i, d in enumerate(factors) if d not in (zero, one)),
        key=lambda i: factors[i],
    )
    torsion = tuple(int(factors[i]) for i in tors_idx)
    desc = ModuleDescriptor(R, len(free_idx), torsion)
    reps = [Kt.column(i) for i in free_idx] + [Kt.column(i) for i in tors_idx]
    gen_factors = tuple((factors[i], i) for i in free_idx + tors_idx)
    return HomologyData(desc, reps, Kt, gen_factors)


def class_coordinates(h: HomologyData, vec) -> tuple | None:
    """Coordinates of a cycle's class in the generator order of h.

    Free coordinates are ring elements; torsion coordinates are reduced
    into [0, d).  Returns None if vec does not lie in the kernel lattice.
    """
    if h.kernel.cols == 0:
        R = h.kernel.ring
        return () if all(R.canon(v) == R.canon(0) for v in vec) else None
    y = solve(h.kernel, vec)
    if y is None:
        return None
    R = h.kernel.ring
    zero = R.canon(0)
    out = []
    for d, i in h.factors:
        out.append(y[i] if d == zero else y[i] % d)
    return tuple(out)


def class_is_zero(h: HomologyData, vec) -> bool:
    coords = class_coordinates(h, vec)
    if coords is None:
        return False
    R = h.kernel.ring
    zero = R.canon(0)
    return all(c == zero for c in coords)
