"""Representations of a time group on k^n generated by a single matrix.

A discrete-time system x_{t+1} = A x_t is the representation t -> A^t of the
integers (or of the naturals when A is singular).  Over a finite field the
representation factors through a finite cyclic group Z/TZ, and the state space
becomes a module over k[x]/(x^T - 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NegativeTimeForSemigroup,
    NotPeriodic,
    SingularMatrix,
    UnsupportedGroup,
    WrongTimeGroup,
)
from .fields import Field, PrimeField
from .matrix import Matrix, apply_poly, mat_pow
from .poly import Poly, x_power_minus_one

HOMOMORPHISM_RANGE = 2**16
DEFAULT_TRIALS = 256


@dataclass(frozen=True)
class TimeGroup:
    kind: str  # "integers", "naturals" or "cyclic"
    T: int | None = None

    def __post_init__(self):
        if self.kind not in ("integers", "naturals", "cyclic"):
            raise UnsupportedGroup(f"time group {self.kind!r} is not supported")
        if self.kind == "cyclic":
            if not isinstance(self.T, int) or self.T < 1:
                raise ValueError("cyclic time group needs T >= 1")
        elif self.T is not None:
            raise ValueError(f"{self.kind} time group takes no T")

    @classmethod
    def integers(cls) -> TimeGroup:
        return cls("integers")

    @classmethod
    def naturals(cls) -> TimeGroup:
        return cls("naturals")

    @classmethod
    def cyclic(cls, T: int) -> TimeGroup:
        return cls("cyclic", T)

    @property
    def invertible(self) -> bool:
        return self.kind != "naturals"

    def to_json(self) -> dict:
        if self.kind == "cyclic":
            return {"kind": "cyclic", "T": self.T}
        return {"kind": self.kind}

    def __str__(self):
        return {"integers": "Z", "naturals": "N"}.get(self.kind) or f"Z/{self.T}Z"


@dataclass(frozen=True)
class Representation:
    """rho: G -> GL(k^n), t -> A^t, with the invariants of the chosen group checked."""

    group: TimeGroup
    generator: Matrix
    _power_cache: dict = dc_field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        A = self.generator
        if not A.is_square():
            raise DimensionMismatch(f"generator must be square, got {A.shape}")
        if self.group.invertible and not A.is_invertible():
            raise SingularMatrix(f"a {self.group} representation needs an invertible generator")
        if self.group.kind == "cyclic" and not mat_pow(A, self.group.T).is_identity():
            raise NotPeriodic(f"generator does not satisfy A^{self.group.T} = I")

    @property
    def field(self) -> Field:
        return self.generator.field

    @property
    def dim(self) -> int:
        return self.generator.nrows

    @cached_property
    def inverse_generator(self) -> Matrix:
        return self.generator.inverse()

    def _numpy_ok(self) -> bool:
        F = self.field
        return isinstance(F, PrimeField) and self.dim * (F.p - 1) ** 2 < 2**62

    def _power(self, base: Matrix, key: str, t: int) -> Matrix:
        # Binary powers A^(2^k) are cached per representation; over small prime
        # fields they are kept as int64 arrays so the products run in numpy.
        if self._numpy_ok():
            return self._power_numpy(base, key, t)
        cache = self._power_cache.setdefault(key, [base])
        result = None
        k = 0
        while t:
            if k == len(cache):
                cache.append(cache[-1] @ cache[-1])
            if t & 1:
                result = cache[k] if result is None else result @ cache[k]
            t >>= 1
            k += 1
        return Matrix.identity(self.field, self.dim) if result is None else result

    def _power_numpy(self, base: Matrix, key: str, t: int) -> Matrix:
        p = self.field.p
        cache = self._power_cache.setdefault(key, [np.array(base.rows, dtype=np.int64)])
        result = None
        k = 0
        while t:
            if k == len(cache):
                cache.append(cache[-1] @ cache[-1] % p)
            if t & 1:
                result = cache[k] if result is None else result @ cache[k] % p
            t >>= 1
            k += 1
        if result is None:
            return Matrix.identity(self.field, self.dim)
        return Matrix._trusted(self.field, tuple(map(tuple, result.tolist())))

    def rho(self, t: int) -> Matrix:
        """The group element t acting on k^n."""
        if self.group.kind == "naturals" and t < 0:
            raise NegativeTimeForSemigroup(f"time {t} < 0 for a semigroup representation")
        if self.group.kind == "cyclic":
            t %= self.group.T
        if t >= 0:
            return self._power(self.generator, "pos", t)
        return self._power(self.inverse_generator, "neg", -t)

    def evolve(self, x0: Sequence, t: int) -> tuple:
        if len(x0) != self.dim:
            raise DimensionMismatch(f"state of length {len(x0)} for dimension {self.dim}")
        F = self.field
        return self.rho(t).apply(tuple(F.convert(c) for c in x0))

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "group": self.group.to_json(),
            "matrix": self.generator.encode(),
        }


def rho(rep: Representation, t: int) -> Matrix:
    return rep.rho(t)


def evolve(rep: Representation, x0: Sequence, t: int) -> tuple:
    return rep.evolve(x0, t)


@dataclass
class HomomorphismReport:
    passed: bool
    trials: int
    identity_ok: bool
    counterexample: tuple[int, int] | None = None
    time_range: int = HOMOMORPHISM_RANGE

    def to_json(self) -> dict:
        return {
            "range": self.time_range,
            "passed": self.passed,
            "trials": self.trials,
            "identity": self.identity_ok,
            "counterexample": list(self.counterexample) if self.counterexample else None,
        }


def check_homomorphism(
    rep: Representation,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    rho_fn: Callable[[int], Matrix] | None = None,
    time_range: int = HOMOMORPHISM_RANGE,
) -> HomomorphismReport:
    """Check rho(t1 + t2) = rho(t1) rho(t2) on seeded samples with |t| <= time_range.

    ``rho_fn`` overrides the map under test (used for negative controls).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    f = rho_fn or rep.rho
    rng = random.Random(seed)
    lo = 0 if rep.group.kind == "naturals" else -time_range
    identity_ok = f(0).is_identity()
    for _ in range(trials):
        t1 = rng.randint(lo, time_range)
        t2 = rng.randint(lo, time_range)
        if f(t1 + t2) != f(t1) @ f(t2):
            return HomomorphismReport(False, trials, identity_ok, (t1, t2), time_range)
    return HomomorphismReport(identity_ok, trials, identity_ok, None if identity_ok else (0, 0), time_range)


def poly_action(rep: Representation, f: Poly, v: Sequence) -> tuple:
    """f(A) v, the group-algebra element f acting on a state."""
    if f.field != rep.field:
        raise FieldMismatch(f"{f.field!r} polynomial on a {rep.field!r} representation")
    if len(v) != rep.dim:
        raise DimensionMismatch(f"vector of length {len(v)} for dimension {rep.dim}")
    return apply_poly(rep.generator, f, v)


def module_action(rep: Representation, f: Poly, v: Sequence) -> tuple:
    """Action of the class of f in k[x]/(x^T - 1) on v."""
    if rep.group.kind != "cyclic":
        raise WrongTimeGroup("module action needs a cyclic time group")
    reduced = f % x_power_minus_one(rep.field, rep.group.T)
    return poly_action(rep, reduced, v)


def induce_quotient(rep: Representation) -> Representation:
    """Z -> Z/TZ with minimal T, checked on sampled times."""
    if rep.group.kind != "integers":
        raise WrongTimeGroup("the quotient is induced from a representation of Z")
    from .dynamics import order_of_matrix

    T = order_of_matrix(rep.generator)
    quotient = Representation(TimeGroup.cyclic(T), rep.generator)
    rng = random.Random(T)
    for _ in range(8):
        t = rng.randint(-HOMOMORPHISM_RANGE, HOMOMORPHISM_RANGE)
        if quotient.rho(t % T) != rep.rho(t):
            raise AssertionError(f"quotient diagram fails at t = {t}")
    return quotient


def from_module_action(field: Field, T: int, action: Matrix) -> Representation:
    """A k[x]/(x^T - 1)-module structure (x acting by ``action``) as a Z/TZ system."""
    if action.field != field:
        raise FieldMismatch(f"{action.field!r} matrix declared over {field!r}")
    if not action.is_square():
        raise DimensionMismatch("module action matrix must be square")
    if not mat_pow(action, T).is_identity():
        raise NotPeriodic(f"x^{T} does not act as the identity")
    return Representation(TimeGroup.cyclic(T), action)

