"""The state space as a k[x]-module: V = k[x]/(f_1) (+) ... (+) k[x]/(f_r), f_1 | ... | f_r."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .decomposition import primary_decomposition, restriction_matrix
from .errors import DimensionMismatch
from .matrix import Matrix, krylov_annihilator, minimal_polynomial, smith_normal_form
from .numtheory import lcm
from .poly import Poly, order_of_x_mod, x_power_minus_one
from .representation import Representation


def annihilator(rep: Representation | Matrix, v: Sequence) -> Poly:
    """Monic generator of the annihilator ideal of v (1 for the zero vector)."""
    A = rep.generator if isinstance(rep, Representation) else rep
    if len(v) != A.nrows:
        raise DimensionMismatch(f"vector of length {len(v)} for dimension {A.nrows}")
    F = A.field
    return krylov_annihilator(A, tuple(F.convert(c) for c in v))


def krylov_basis(A: Matrix, v: Sequence, d: int) -> list[tuple]:
    out = [tuple(v)]
    for _ in range(d - 1):
        out.append(A.apply(out[-1]))
    return out


@dataclass
class InvariantFactorDecomposition:
    factors: list[Poly]
    generators: list[tuple]
    basis_change: Matrix
    canonical_form: Matrix

    def to_json(self) -> dict:
        F = self.basis_change.field
        return {
            "invariant_factors": [f.encode() for f in self.factors],
            "generators": [[F.encode(c) for c in v] for v in self.generators],
            "P": self.basis_change.encode(),
            "C": self.canonical_form.encode(),
        }


def _unit_vector(F, n, j):
    return tuple(F.one if i == j else F.zero for i in range(n))


def _maximal_vector(A: Matrix, m: Poly, seed: int) -> tuple:
    """A vector whose annihilator is the minimal polynomial m."""
    F = A.field
    n = A.nrows
    for j in range(n):
        e = _unit_vector(F, n, j)
        if krylov_annihilator(A, e) == m:
            return e
    # Combine primary parts: the projection of some e_j onto each primary
    # component has the full local annihilator p^e.
    v = tuple(F.zero for _ in range(n))
    for comp in primary_decomposition(A, seed):
        target = comp.factor**comp.multiplicity
        for j in range(n):
            w = comp.projector.apply(_unit_vector(F, n, j))
            if krylov_annihilator(A, w) == target:
                v = tuple(F.add(a, b) for a, b in zip(v, w))
                break
        else:
            raise AssertionError("no vector attains the local annihilator")
    return v


def _cyclic_decomposition(A: Matrix, seed: int) -> list[tuple[Poly, tuple]]:
    """[(f_r, v_r), (f_{r-1}, v_{r-1}), ...] largest factor first."""
    F = A.field
    n = A.nrows
    m = minimal_polynomial(A)
    v = _maximal_vector(A, m, seed)
    d = m.degree
    if d == n:
        return [(m, v)]
    K = krylov_basis(A, v, d)
    # phi vanishes on A^i v for i < d-1 and is 1 on A^(d-1) v; the common kernel
    # of phi, phi A, ..., phi A^(d-1) is an A-invariant complement of <v>.
    phi = Matrix(F, K, raw=True).solve(_unit_vector(F, d, d - 1))
    At = A.transpose()
    rows = [phi]
    for _ in range(d - 1):
        rows.append(At.apply(rows[-1]))
    U = Matrix(F, rows, raw=True).kernel_basis()
    B = restriction_matrix(A, U)
    Umat = Matrix.from_columns(F, U)
    rest = [(f, Umat.apply(y)) for f, y in _cyclic_decomposition(B, seed)]
    return [(m, v)] + rest


def invariant_factors(A: Matrix, seed: int = 0) -> InvariantFactorDecomposition:
    """Rational canonical form P^-1 A P = diag(companion(f_1), ..., companion(f_r))."""
    if not A.is_square():
        raise DimensionMismatch("invariant factors need a square matrix")
    F = A.field
    expected = smith_normal_form(A).nontrivial
    parts = list(reversed(_cyclic_decomposition(A, seed)))
    factors = [f for f, _ in parts]
    if factors != expected:
        raise AssertionError("cyclic decomposition disagrees with the Smith form")
    gens = [v for _, v in parts]
    cols = []
    for f, v in parts:
        cols += krylov_basis(A, v, f.degree)
    P = Matrix.from_columns(F, cols)
    C = Matrix.block_diag(F, [Matrix.companion(f) for f in factors])
    if P @ C != A @ P or not P.is_invertible():
        raise AssertionError("rational canonical form verification failed")
    return InvariantFactorDecomposition(factors, gens, P, C)


@dataclass
class DivisibilityReport:
    T: int
    entries: list[dict]
    lcm_of_orders: int

    @property
    def passed(self) -> bool:
        return all(e["divides"] for e in self.entries) and self.lcm_of_orders == self.T

    def to_json(self) -> dict:
        return {
            "T": self.T,
            "factors": [
                {"factor": e["factor"].encode(), "order": e["order"], "divides": e["divides"]}
                for e in self.entries
            ],
            "lcm_of_orders": self.lcm_of_orders,
            "passed": self.passed,
        }


def verify_period_divisibility(dec: InvariantFactorDecomposition, T: int) -> DivisibilityReport:
    """Check f_i | x^T - 1 for every invariant factor and lcm(ord f_i) = T."""
    F = dec.basis_change.field
    xt = x_power_minus_one(F, T)
    entries = []
    for f in dec.factors:
        entries.append({"factor": f, "divides": f.divides(xt), "order": order_of_x_mod(f)})
    return DivisibilityReport(T, entries, lcm(*(e["order"] for e in entries)))
