"""Dense exact matrices, Krylov minimal polynomials, and Smith normal form of xI - A."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, FieldMismatch, SingularMatrix
from .fields import Field, PrimeField
from .poly import Poly, lcm as poly_lcm

MAX_DIM = 64

Vector = tuple


class Matrix:
    """Immutable dense matrix; ``rows`` is a tuple of tuples of raw field values."""

    __slots__ = ("field", "rows")

    def __init__(self, field: Field, rows: Iterable[Iterable], raw: bool = False):
        self.field = field
        if raw:
            data = tuple(tuple(r) for r in rows)
        else:
            data = tuple(tuple(field.convert(c) for c in r) for r in rows)
        if not data or not data[0]:
            raise DimensionMismatch("matrices must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionMismatch("ragged matrix rows")
        self.rows = data

    @classmethod
    def _trusted(cls, field: Field, data: tuple) -> Matrix:
        """Wrap an already validated tuple of equal-length row tuples."""
        M = object.__new__(cls)
        M.field = field
        M.rows = data
        return M

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], raw=True)

    @classmethod
    def zeros(cls, field: Field, r: int, c: int | None = None) -> Matrix:
        c = r if c is None else c
        return cls(field, [[field.zero] * c for _ in range(r)], raw=True)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence]) -> Matrix:
        return cls(field, list(zip(*cols)), raw=True)

    @classmethod
    def companion(cls, f: Poly) -> Matrix:
        """Sub-diagonal ones, last column (-c_0, ..., -c_{d-1}) for monic f."""
        F = f.field
        f = f.monic()
        d = f.degree
        if d < 1:
            raise ValueError("companion matrix needs degree >= 1")
        rows = [[F.zero] * d for _ in range(d)]
        for i in range(1, d):
            rows[i][i - 1] = F.one
        for i in range(d):
            rows[i][d - 1] = F.neg(f.coeffs[i])
        return cls(F, rows, raw=True)

    @classmethod
    def block_diag(cls, field: Field, blocks: Sequence[Matrix]) -> Matrix:
        n = sum(b.nrows for b in blocks)
        rows = [[field.zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i, r in enumerate(b.rows):
                rows[off + i][off:off + b.ncols] = r
            off += b.nrows
        return cls(field, rows, raw=True)

    # -- shape ---------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [tuple(c) for c in zip(*self.rows)]

    def transpose(self) -> Matrix:
        return Matrix(self.field, list(zip(*self.rows)), raw=True)

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.field == other.field and self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.rows))

    def is_identity(self) -> bool:
        return self.is_square() and self == Matrix.identity(self.field, self.nrows)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(c == z for r in self.rows for c in r)

    def _same(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        add = self.field.add
        return Matrix(self.field, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], raw=True)

    def __sub__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        sub = self.field.sub
        return Matrix(self.field, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], raw=True)

    def __neg__(self) -> Matrix:
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in r] for r in self.rows], raw=True)

    def scale(self, c) -> Matrix:
        F = self.field
        c = F.convert(c)
        return Matrix(F, [[F.mul(c, a) for a in r] for r in self.rows], raw=True)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        F = self.field
        cols = list(zip(*other.rows))
        if isinstance(F, PrimeField):
            p = F.p
            mul = int.__mul__
            return Matrix._trusted(F, tuple(tuple(sum(map(mul, r, c)) % p for c in cols) for r in self.rows))
        return Matrix._trusted(F, tuple(tuple(_dot(F, r, c) for c in cols) for r in self.rows))

    def apply(self, v: Sequence) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for a {self.shape} matrix")
        F = self.field
        if isinstance(F, PrimeField):
            p = F.p
            return tuple(sum(map(int.__mul__, r, v)) % p for r in self.rows)
        return tuple(_dot(F, r, v) for r in self.rows)

    def __pow__(self, t: int) -> Matrix:
        return mat_pow(self, t)

    # -- elimination ---------------------------------------------------------
    def rref(self) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form (first-nonzero pivoting) and pivot columns."""
        F = self.field
        rows = [list(r) for r in self.rows]
        pivots = _rref_inplace(F, rows, self.ncols)
        return Matrix(F, rows, raw=True), pivots

    def rank(self) -> int:
        rows = [list(r) for r in self.rows]
        return len(_rref_inplace(self.field, rows, self.ncols))

    def kernel_basis(self) -> list[Vector]:
        F = self.field
        rows = [list(r) for r in self.rows]
        pivots = _rref_inplace(F, rows, self.ncols)
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [F.zero] * self.ncols
            v[free] = F.one
            for r, pc in enumerate(pivots):
                v[pc] = F.neg(rows[r][free])
            basis.append(tuple(v))
        return basis

    def inverse(self) -> Matrix:
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        F = self.field
        n = self.nrows
        rows = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.rows)]
        pivots = _rref_inplace(F, rows, n)
        if len(pivots) < n:
            raise SingularMatrix("matrix is not invertible")
        return Matrix(F, [r[n:] for r in rows], raw=True)

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.nrows

    def det(self):
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        F = self.field
        rows = [list(r) for r in self.rows]
        n = len(rows)
        d = F.one
        for k in range(n):
            piv = next((i for i in range(k, n) if rows[i][k] != F.zero), None)
            if piv is None:
                return F.zero
            if piv != k:
                rows[k], rows[piv] = rows[piv], rows[k]
                d = F.neg(d)
            pk = rows[k][k]
            d = F.mul(d, pk)
            inv = F.inv(pk)
            for i in range(k + 1, n):
                f = rows[i][k]
                if f != F.zero:
                    f = F.mul(f, inv)
                    rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], rows[k])]
        return d

    def solve(self, b: Sequence) -> Vector | None:
        """One solution x of Mx = b (free variables zero), or None if inconsistent."""
        F = self.field
        if len(b) != self.nrows:
            raise DimensionMismatch("right-hand side length mismatch")
        m = self.ncols
        rows = [list(r) + [c] for r, c in zip(self.rows, b)]
        pivots = _rref_inplace(F, rows, m)
        for r in rows[len(pivots):]:
            if r[m] != F.zero:
                return None
        x = [F.zero] * m
        for r, pc in enumerate(pivots):
            x[pc] = rows[r][m]
        return tuple(x)

    # -- output --------------------------------------------------------------
    def encode(self) -> list:
        enc = self.field.encode
        return [[enc(c) for c in r] for r in self.rows]

    def __str__(self):
        fmt = self.field.format
        cells = [[fmt(c) for c in r] for r in self.rows]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)

    def __repr__(self):
        return f"Matrix({self.encode()}, {self.field!r})"


def _dot(F: Field, r, c):
    acc = F.zero
    for a, b in zip(r, c):
        if a != F.zero and b != F.zero:
            acc = F.add(acc, F.mul(a, b))
    return acc


def _rref_inplace(F: Field, rows: list[list], ncols: int) -> list[int]:
    """Gauss-Jordan on the first ``ncols`` columns; extra columns are carried along."""
    pivots = []
    r = 0
    nrows = len(rows)
    zero = F.zero
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != zero), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        if isinstance(F, PrimeField):
            p = F.p
            rows[r] = [a * inv % p for a in rows[r]]
            pr = rows[r]
            for i in range(nrows):
                if i != r:
                    f = rows[i][c]
                    if f:
                        rows[i] = [(a - f * b) % p for a, b in zip(rows[i], pr)]
        else:
            rows[r] = [F.mul(a, inv) for a in rows[r]]
            pr = rows[r]
            for i in range(nrows):
                if i != r:
                    f = rows[i][c]
                    if f != zero:
                        rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def mat_arith(A: Matrix, B: Matrix, op: str) -> Matrix:
    """``op`` in {'add', 'sub', 'mul'}."""
    if op == "add":
        return A + B
    if op == "sub":
        return A - B
    if op == "mul":
        return A @ B
    raise ValueError(f"unknown matrix operation {op!r}")


def mat_pow(A: Matrix, t: int) -> Matrix:
    """A^t by binary exponentiation; negative t goes through the inverse."""
    if not A.is_square():
        raise DimensionMismatch("power of a non-square matrix")
    if t < 0:
        A, t = A.inverse(), -t
    result = Matrix.identity(A.field, A.nrows)
    base = A
    first = True
    while t:
        if t & 1:
            result = base if first else result @ base
            first = False
        t >>= 1
        if t:
            base = base @ base
    return result


def kernel_basis(M: Matrix) -> list[Vector]:
    return M.kernel_basis()


def rank(M: Matrix) -> int:
    return M.rank()


def poly_eval_matrix(f: Poly, A: Matrix) -> Matrix:
    """f(A) by Horner's scheme."""
    F = A.field
    if f.field != F:
        raise FieldMismatch(f"{f.field!r} polynomial applied to {F!r} matrix")
    n = A.nrows
    result = Matrix.zeros(F, n)
    eye = Matrix.identity(F, n)
    for c in reversed(f.coeffs):
        result = result @ A + eye.scale(c)
    return result


def vec_add(F: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_sub(F: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(F.sub(a, b) for a, b in zip(u, v))


def vec_scale(F: Field, c, v: Sequence) -> Vector:
    return tuple(F.mul(c, a) for a in v)


def is_zero_vector(F: Field, v: Sequence) -> bool:
    return all(a == F.zero for a in v)


def krylov_annihilator(A: Matrix, v: Sequence) -> Poly:
    """Monic generator of {f : f(A) v = 0}, by elimination on v, Av, A^2 v, ..."""
    F = A.field
    n = A.nrows
    if len(v) != n:
        raise DimensionMismatch(f"vector of length {len(v)} for a {n}x{n} matrix")
    basis: list[tuple[int, list, list]] = []  # (pivot, reduced vector, Krylov combination)
    w = tuple(v)
    for k in range(n + 1):
        r = list(w)
        comb = [F.zero] * k + [F.one]
        for piv, b, bc in basis:
            f = r[piv]
            if f != F.zero:
                r = [F.sub(a, F.mul(f, c)) for a, c in zip(r, b)]
                for j, c in enumerate(bc):
                    comb[j] = F.sub(comb[j], F.mul(f, c))
        piv = next((i for i, a in enumerate(r) if a != F.zero), None)
        if piv is None:
            return Poly(F, comb, raw=True)
        inv = F.inv(r[piv])
        basis.append((piv, [F.mul(inv, a) for a in r], [F.mul(inv, c) for c in comb]))
        w = A.apply(w)
    raise AssertionError("Krylov sequence did not become dependent")


def minimal_polynomial(A: Matrix) -> Poly:
    """lcm over standard basis vectors of their Krylov annihilators."""
    if not A.is_square():
        raise DimensionMismatch("minimal polynomial of a non-square matrix")
    F = A.field
    n = A.nrows
    m = Poly.one(F)
    for i in range(n):
        e = tuple(F.one if j == i else F.zero for j in range(n))
        if m.degree > 0 and is_zero_vector(F, apply_poly(A, m, e)):
            continue
        m = poly_lcm(m, krylov_annihilator(A, e))
        if m.degree == n:
            break
    return m


def apply_poly(A: Matrix, f: Poly, v: Sequence) -> Vector:
    """f(A) v by Horner's scheme on vectors."""
    F = A.field
    if f.field != F:
        raise FieldMismatch(f"{f.field!r} polynomial applied to {F!r} matrix")
    if len(v) != A.ncols:
        raise DimensionMismatch(f"vector of length {len(v)} for a {A.shape} matrix")
    acc = tuple(F.zero for _ in v)
    for c in reversed(f.coeffs):
        acc = A.apply(acc)
        acc = tuple(F.add(a, F.mul(c, b)) for a, b in zip(acc, v))
    return acc


# -- polynomial matrices and Smith normal form -------------------------------

class PolyMatrix:
    """Square or rectangular matrix of polynomials over one field (mutable rows)."""

    def __init__(self, field: Field, entries: list[list[Poly]]):
        self.field = field
        self.entries = entries

    @classmethod
    def identity(cls, field: Field, n: int) -> PolyMatrix:
        return cls(field, [[Poly.one(field) if i == j else Poly.zero(field) for j in range(n)] for i in range(n)])

    @classmethod
    def char_matrix(cls, A: Matrix) -> PolyMatrix:
        """xI - A."""
        F = A.field
        n = A.nrows
        ent = []
        for i in range(n):
            row = []
            for j in range(n):
                c = F.neg(A.rows[i][j])
                row.append(Poly(F, [c, F.one] if i == j else [c], raw=True))
            ent.append(row)
        return cls(F, ent)

    @property
    def nrows(self):
        return len(self.entries)

    @property
    def ncols(self):
        return len(self.entries[0])

    def copy(self) -> PolyMatrix:
        return PolyMatrix(self.field, [list(r) for r in self.entries])

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch("polynomial matrix product shape mismatch")
        F = self.field
        out = []
        for r in self.entries:
            row = []
            for j in range(other.ncols):
                acc = Poly.zero(F)
                for k, a in enumerate(r):
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(F, out)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def det(self) -> Poly:
        """Bareiss fraction-free elimination over k[x]."""
        F = self.field
        M = [list(r) for r in self.entries]
        n = len(M)
        sign = 1
        prev = Poly.one(F)
        for k in range(n - 1):
            piv = next((i for i in range(k, n) if M[i][k]), None)
            if piv is None:
                return Poly.zero(F)
            if piv != k:
                M[k], M[piv] = M[piv], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                    q, r = divmod(num, prev)
                    assert r.is_zero()
                    M[i][j] = q
            prev = M[k][k]
        d = M[n - 1][n - 1]
        return d if sign > 0 else -d

    def encode(self) -> list:
        return [[p.encode() for p in r] for r in self.entries]


@dataclass
class SmithForm:
    invariant_factors: list[Poly]
    left: PolyMatrix
    right: PolyMatrix

    @property
    def nontrivial(self) -> list[Poly]:
        return [d for d in self.invariant_factors if d.degree > 0]


def smith_normal_form(A: Matrix) -> SmithForm:
    """SNF of xI - A with unimodular transforms, verified before returning."""
    if not A.is_square():
        raise DimensionMismatch("Smith form needs a square matrix")
    F = A.field
    n = A.nrows
    M = PolyMatrix.char_matrix(A).entries
    L = PolyMatrix.identity(F, n).entries
    R = PolyMatrix.identity(F, n).entries

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for mat in (M, R):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def row_axpy(dst, src, q):  # row_dst -= q * row_src
        for mat in (M, L):
            mat[dst] = [a - q * b if b else a for a, b in zip(mat[dst], mat[src])]

    def col_axpy(dst, src, q):  # col_dst -= q * col_src
        for mat in (M, R):
            for row in mat:
                if row[src]:
                    row[dst] = row[dst] - q * row[src]

    for k in range(n):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    e = M[i][j]
                    if e and (best is None or e.degree < best[0]):
                        best = (e.degree, i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != k:
                swap_rows(k, pi)
            if pj != k:
                swap_cols(k, pj)
            pivot = M[k][k]
            clean = True
            for i in range(k + 1, n):
                if M[i][k]:
                    q, r = divmod(M[i][k], pivot)
                    row_axpy(i, k, q)
                    if r:
                        clean = False
            for j in range(k + 1, n):
                if M[k][j]:
                    q, r = divmod(M[k][j], pivot)
                    col_axpy(j, k, q)
                    if r:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(k + 1, n) for j in range(k + 1, n) if M[i][j] and not (M[i][j] % pivot).is_zero()),
                None,
            )
            if bad is not None:
                row_axpy(k, bad, Poly.constant(F, F.neg(F.one)))
                continue
            break
        if M[k][k] and not M[k][k].is_monic():
            inv = F.inv(M[k][k].lc)
            M[k] = [p.scale(inv) for p in M[k]]
            L[k] = [p.scale(inv) for p in L[k]]

    factors = [M[i][i] for i in range(n)]
    left, right = PolyMatrix(F, L), PolyMatrix(F, R)
    diag = left @ PolyMatrix.char_matrix(A) @ right
    for i in range(n):
        for j in range(n):
            expect = factors[i] if i == j else Poly.zero(F)
            if diag.entries[i][j] != expect:
                raise AssertionError("Smith form transform verification failed")
    for a, b in zip(factors, factors[1:]):
        if not a.divides(b):
            raise AssertionError("Smith form divisibility chain broken")
    return SmithForm(factors, left, right)


def characteristic_polynomial(A: Matrix) -> Poly:
    """Product of the Smith invariant factors of xI - A."""
    out = Poly.one(A.field)
    for d in smith_normal_form(A).invariant_factors:
        out = out * d
    return out
