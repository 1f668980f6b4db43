"""Invariant subspace decompositions of a single operator A.

* primary decomposition V = (+) ker p_i(A)^{e_i} with idempotent projectors
  built from the Bezout identity of the pairwise coprime factors;
* generalized eigenspaces, when the minimal polynomial splits (possibly after
  passing to a finite splitting field);
* planar blocks [[a, b], [-b, a]] for irreducible quadratic factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .errors import CharacteristicTwo, DimensionMismatch, ExtensionTooLarge, NoSquareRoot
from .fields import MAX_ORDER, ExtensionField, Field, PrimeField
from .matrix import Matrix, apply_poly, minimal_polynomial, poly_eval_matrix
from .numtheory import lcm
from .poly import Poly, extended_gcd, factor, is_irreducible


@dataclass
class PrimaryComponent:
    factor: Poly
    multiplicity: int
    basis: list[tuple]
    projector: Matrix

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        F = self.factor.field
        return {
            "factor": self.factor.encode(),
            "multiplicity": self.multiplicity,
            "dimension": self.dimension,
            "basis": [[F.encode(c) for c in v] for v in self.basis],
            "projector": self.projector.encode(),
        }


def primary_decomposition(A: Matrix, seed: int = 0) -> list[PrimaryComponent]:
    """Split k^n into the primary components of the minimal polynomial of A.

    The projector onto V_i is h_i(A) with h_i = u_i * (m / p_i^e_i), where
    u_i * (m / p_i^e_i) + w_i * p_i^e_i = 1.
    """
    if not A.is_square():
        raise DimensionMismatch("primary decomposition needs a square matrix")
    m = minimal_polynomial(A)
    components = []
    for p, e in factor(m, seed).factors:
        pe = p**e
        cofactor = m // pe
        d, u, _ = extended_gcd(cofactor, pe)
        assert d.is_one()
        h = (u * cofactor) % m
        components.append(
            PrimaryComponent(
                factor=p,
                multiplicity=e,
                basis=poly_eval_matrix(pe, A).kernel_basis(),
                projector=poly_eval_matrix(h, A),
            )
        )
    return components


@dataclass
class NotSplit:
    """The minimal polynomial has irreducible factors of degree > 1."""

    factors: list[Poly]

    def __bool__(self):
        return False


@dataclass
class Eigenspace:
    eigenvalue: Any
    multiplicity: int
    basis: list[tuple]
    projector: Matrix

    @property
    def dimension(self) -> int:
        return len(self.basis)


def generalized_eigenspaces(A: Matrix, seed: int = 0) -> list[Eigenspace] | NotSplit:
    comps = primary_decomposition(A, seed)
    bad = [c.factor for c in comps if c.factor.degree > 1]
    if bad:
        return NotSplit(bad)
    F = A.field
    return [
        Eigenspace(F.neg(c.factor.coeffs[0]), c.multiplicity, c.basis, c.projector)
        for c in comps
    ]


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible of degree m over F_p, lexicographic on (c_0, ..., c_{m-1})."""
    F = PrimeField(p)
    if m == 1:
        return (0, 1)
    for idx in range(p**m):
        cs = []
        for _ in range(m):
            idx, r = divmod(idx, p)
            cs.append(r)
        cs.reverse()  # c_0 is the most significant digit
        if cs[0] == 0:
            continue
        if is_irreducible(Poly(F, cs + [1], raw=True)):
            return tuple(cs) + (1,)
    raise AssertionError(f"no irreducible of degree {m} over GF({p})")


def embed_matrix(A: Matrix, E: ExtensionField) -> Matrix:
    return Matrix(E, [[E.embed(c) for c in r] for r in A.rows], raw=True)


def splitting_field_lift(A: Matrix, seed: int = 0) -> tuple[Field, Matrix]:
    """Smallest F_{p^m} over which the minimal polynomial of A splits, and A embedded in it."""
    F = A.field
    if not isinstance(F, PrimeField):
        raise ValueError("splitting_field_lift expects a matrix over a prime field")
    degrees = [g.degree for g, _ in factor(minimal_polynomial(A), seed).factors]
    m = lcm(*degrees)
    if m == 1:
        return F, A
    if F.p**m >= MAX_ORDER:
        raise ExtensionTooLarge(f"splitting field GF({F.p}^{m}) exceeds 2^31 elements")
    E = ExtensionField(F.p, least_irreducible(F.p, m), check=False)
    lifted = embed_matrix(A, E)
    mp = minimal_polynomial(lifted)
    if any(g.degree != 1 for g, _ in factor(mp, seed).factors):
        raise AssertionError("minimal polynomial does not split over the constructed field")
    return E, lifted


def restriction_matrix(A: Matrix, basis: Sequence[Sequence]) -> Matrix:
    """Matrix of A on span(basis) in that basis; raises if the span is not invariant."""
    F = A.field
    B = Matrix.from_columns(F, basis)
    cols = []
    for v in basis:
        x = B.solve(A.apply(v))
        if x is None:
            raise ValueError("subspace is not A-invariant")
        cols.append(x)
    return Matrix.from_columns(F, cols)


@dataclass
class PlanarBlock:
    factor: Poly
    form: str  # "rotation" or "companion"
    basis_u: tuple
    basis_w: tuple
    a: Any = None
    b: Any = None

    def block(self) -> Matrix:
        """The expected 2x2 matrix of A in the basis (u, w)."""
        F = self.factor.field
        if self.form == "rotation":
            return Matrix(F, [[self.a, self.b], [F.neg(self.b), self.a]], raw=True)
        return Matrix.companion(self.factor)

    def to_json(self) -> dict:
        F = self.factor.field
        return {
            "factor": self.factor.encode(),
            "form": self.form,
            "a": None if self.a is None else F.encode(self.a),
            "b": None if self.b is None else F.encode(self.b),
            "basis": [[F.encode(c) for c in self.basis_u], [F.encode(c) for c in self.basis_w]],
        }


def planar_blocks(A: Matrix, seed: int = 0) -> list[PlanarBlock]:
    """Two-dimensional invariant blocks for each irreducible quadratic factor of multiplicity 1.

    For x^2 - c1 x + c0 put a = c1/2 and b = sqrt(c0 - a^2).  With a vector v of
    the component, u = v and w = (a v - A v)/b give A u = a u - b w and
    A w = b u + a w.  When c0 - a^2 is not a square the block is reported in
    companion form on (v, A v).
    """
    F = A.field
    if F.characteristic == 2:
        raise CharacteristicTwo("rotation blocks divide by 2")
    n = A.nrows
    m = minimal_polynomial(A)
    half = F.inv(F.from_int(2))
    blocks = []
    for p, e in factor(m, seed).factors:
        if p.degree != 2 or e != 1:
            continue
        c1 = F.neg(p.coeffs[1])
        c0 = p.coeffs[0]
        a = F.mul(c1, half)
        try:
            b = F.sqrt(F.sub(c0, F.mul(a, a)))
        except NoSquareRoot:
            b = None
        cofactor = m // p
        span: list[tuple] = []
        for j in range(n):
            ej = tuple(F.one if i == j else F.zero for i in range(n))
            v = apply_poly(A, cofactor, ej)
            if all(c == F.zero for c in v):
                continue
            if span and Matrix.from_columns(F, span + [v]).rank() == len(span):
                continue
            Av = A.apply(v)
            if b is None:
                blocks.append(PlanarBlock(p, "companion", v, Av))
                span += [v, Av]
            else:
                binv = F.inv(b)
                w = tuple(F.mul(binv, F.sub(F.mul(a, x), y)) for x, y in zip(v, Av))
                blocks.append(PlanarBlock(p, "rotation", v, w, a, b))
                span += [v, w]
    return blocks
