"""Periods and orbit structure of x -> Ax.

Over a finite field every invertible A has finite order T, so each trajectory
is a cycle whose length divides T and the state space is the disjoint union of
these cycles.  The census of cycle lengths is computed twice:

* analytically, from F_d = |ker(A^d - I)| = q^(n - rank(A^d - I)) for d | T and
  Moebius inversion over the divisors of T;
* by enumerating every state and walking its orbit.

Note: Z/TZ splits as a product of prime-power cyclic groups, but the dynamics do
not split with it (the system still has one generator), so no per-prime census
is offered.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import numtheory
from .errors import DimensionMismatch, InfiniteOrder, SingularMatrix, StateSpaceTooLarge
from .fields import Field, QQ
from .matrix import Matrix, krylov_annihilator, mat_pow, minimal_polynomial
from .poly import Poly, gcd, order_of_x_mod
from .representation import Representation

DEFAULT_MAX_STATES = 10**6
HARD_MAX_STATES = 10**7


def _generator(rep) -> Matrix:
    return rep.generator if isinstance(rep, Representation) else rep


# -- order of A --------------------------------------------------------------

def order_of_matrix(A: Matrix) -> int:
    """Least T >= 1 with A^T = I.

    Over a finite field this is the order of x modulo the minimal polynomial
    (the largest invariant factor; the others divide it).  Over Q the order is
    finite only when the minimal polynomial is a squarefree product of
    cyclotomic polynomials; otherwise InfiniteOrder is raised.
    """
    if not A.is_square():
        raise DimensionMismatch("order of a non-square matrix")
    if not A.is_invertible():
        raise SingularMatrix("a singular matrix has no multiplicative order")
    m = minimal_polynomial(A)
    if A.field.is_finite:
        T = order_of_x_mod(m)
    else:
        T = _rational_order(m, A.nrows)
    if not mat_pow(A, T).is_identity():
        raise AssertionError(f"A^{T} != I")
    for ell in numtheory.factorint(T):
        if mat_pow(A, T // ell).is_identity():
            raise AssertionError(f"A^{T // ell} = I, so {T} is not minimal")
    return T


@lru_cache(maxsize=None)
def cyclotomic(N: int) -> Poly:
    """N-th cyclotomic polynomial over Q."""
    num = Poly.one(QQ)
    den = Poly.one(QQ)
    for d in numtheory.divisors(N):
        mu = numtheory.mobius(N // d)
        if mu == 0:
            continue
        term = Poly.monomial(QQ, d) - Poly.one(QQ)
        if mu == 1:
            num = num * term
        else:
            den = den * term
    q, r = divmod(num, den)
    assert r.is_zero()
    return q


def _rational_order(m: Poly, n: int) -> int:
    if any(c.denominator != 1 for c in m.coeffs):
        raise InfiniteOrder("minimal polynomial is not integral, so no root of unity")
    if gcd(m, m.derivative()).degree > 0:
        raise InfiniteOrder("minimal polynomial is not squarefree")
    rest = m
    T = 1
    # phi(N) >= sqrt(N/2), so phi(N) <= n forces N <= 2 n^2
    for N in range(1, 2 * n * n + 1):
        if rest.degree == 0:
            break
        if numtheory.euler_phi(N) > rest.degree:
            continue
        q, r = divmod(rest, cyclotomic(N))
        if r.is_zero():
            rest = q
            T = numtheory.lcm(T, N)
    if rest.degree > 0:
        raise InfiniteOrder("minimal polynomial has a non-cyclotomic factor")
    return T


def point_period(rep, x0: Sequence) -> int:
    """Least t >= 1 with A^t x0 = x0."""
    A = _generator(rep)
    if len(x0) != A.nrows:
        raise DimensionMismatch(f"state of length {len(x0)} for dimension {A.nrows}")
    if not A.is_invertible():
        raise SingularMatrix("point periods need an invertible generator")
    F = A.field
    return order_of_x_mod(krylov_annihilator(A, tuple(F.convert(c) for c in x0)))


# -- census -------------------------------------------------------------------

@dataclass
class OrbitCensus:
    states: int
    T: int
    cycles: dict[int, int] = dc_field(default_factory=dict)
    fixed_points: dict[int, int] = dc_field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, OrbitCensus):
            return NotImplemented
        return (self.states, self.T, self.cycles, self.fixed_points) == (
            other.states, other.T, other.cycles, other.fixed_points
        )

    def partition_total(self) -> int:
        return sum(t * c for t, c in self.cycles.items())

    def to_json(self) -> dict:
        return {
            "states": self.states,
            "T": self.T,
            "cycles": {str(t): c for t, c in sorted(self.cycles.items())},
            "fixed_points": {str(d): f for d, f in sorted(self.fixed_points.items())},
        }


def orbit_census_analytic(A: Matrix) -> OrbitCensus:
    """Cycle counts from ranks of A^d - I for d | T plus Moebius inversion."""
    F = A.field
    if not F.is_finite:
        raise ValueError("orbit census needs a finite field")
    T = order_of_matrix(A)
    n, q = A.nrows, F.order
    eye = Matrix.identity(F, n)
    divs = numtheory.divisors(T)
    fixed = {d: q ** (n - (mat_pow(A, d) - eye).rank()) for d in divs}
    cycles = {}
    for t in divs:
        exact = sum(numtheory.mobius(t // d) * fixed[d] for d in divs if t % d == 0)
        count, rem = divmod(exact, t)
        if rem:
            raise AssertionError(f"{exact} points of exact period {t} is not a multiple of {t}")
        if count:
            cycles[t] = count
    return OrbitCensus(q**n, T, cycles, fixed)


def state_index(F: Field, x: Sequence) -> int:
    """Odometer index of a state: coordinate 0 is the least significant digit."""
    q = F.order
    idx = 0
    for c in reversed(x):
        idx = idx * q + F.element_index(c)
    return idx


def state_from_index(F: Field, n: int, idx: int) -> tuple:
    q = F.order
    out = []
    for _ in range(n):
        idx, r = divmod(idx, q)
        out.append(F.from_index(r))
    return tuple(out)


def prime_field_matrix(A: Matrix) -> np.ndarray:
    """A as an F_p-linear map on F_p^(n m), coordinates ordered like state indices."""
    F = A.field
    n, m, p = A.nrows, F.degree, F.characteristic
    N = n * m
    M = np.zeros((N, N), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            e = [F.zero] * n
            e[i] = F.from_index(p**j)
            img = A.apply(e)
            col = i * m + j
            for k, c in enumerate(img):
                digits = F.element_index(c)
                for jj in range(m):
                    digits, r = divmod(digits, p)
                    M[k * m + jj, col] = r
    return M


def successor_table(A: Matrix, chunk: int = 1 << 16) -> list[int]:
    """succ[s] = index of A x for the state x with index s."""
    F = A.field
    p = F.characteristic
    M = prime_field_matrix(A)
    N = M.shape[0]
    S = p**N
    weights = p ** np.arange(N, dtype=np.int64)
    out = np.empty(S, dtype=np.int64)
    for start in range(0, S, chunk):
        idx = np.arange(start, min(S, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // weights) % p
        images = (digits @ M.T) % p
        out[start:start + len(idx)] = images @ weights
    return out.tolist()


def _walk_range(succ: list[int], lo: int, hi: int) -> Counter:
    """Count orbits whose smallest state lies in [lo, hi)."""
    seen = bytearray(len(succ))
    counts: Counter = Counter()
    for s in range(lo, hi):
        if seen[s]:
            continue
        length, smallest, x = 0, s, s
        while not seen[x]:
            seen[x] = 1
            if x < smallest:
                smallest = x
            x = succ[x]
            length += 1
        if lo <= smallest < hi:
            counts[length] += 1
    return counts


def orbit_census_enumerate(A: Matrix, max_states: int = DEFAULT_MAX_STATES, workers: int = 1) -> OrbitCensus:
    """Walk every orbit of the q^n states; each orbit is credited to its smallest state."""
    F = A.field
    if not F.is_finite:
        raise ValueError("orbit census needs a finite field")
    if not A.is_square():
        raise DimensionMismatch("orbit census needs a square matrix")
    n, q = A.nrows, F.order
    S = q**n
    if S > min(max_states, HARD_MAX_STATES):
        raise StateSpaceTooLarge(f"{S} states exceed the enumeration guard {min(max_states, HARD_MAX_STATES)}")
    if not A.is_invertible():
        raise SingularMatrix("orbit census needs an invertible generator")
    succ = successor_table(A)
    workers = max(1, min(workers, S))
    if workers == 1:
        cycles = _walk_range(succ, 0, S)
    else:
        bounds = [S * k // workers for k in range(workers + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda k: _walk_range(succ, bounds[k], bounds[k + 1]), range(workers))
            cycles = sum(parts, Counter())
    cycles = dict(sorted(cycles.items()))
    T = numtheory.lcm(*cycles)
    fixed = {
        d: sum(t * c for t, c in cycles.items() if d % t == 0)
        for d in numtheory.divisors(T)
    }
    return OrbitCensus(S, T, cycles, fixed)
