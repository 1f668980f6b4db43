"""Exact fields: prime fields F_p, extension fields F_p[y]/(g), and the rationals.

Elements are stored as plain immutable Python values so that polynomials and
matrices can hold them without wrapping:

* ``PrimeField``: ``int`` residue in ``[0, p)``
* ``ExtensionField``: ``tuple`` of ``m`` residues, low degree first
* ``RationalField``: :class:`fractions.Fraction` (always in lowest terms)

A field object does the arithmetic on those raw values.  :class:`FieldElement`
is a small wrapper with operator overloading for interactive use.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InvalidDocument,
    NoSquareRoot,
    UnsupportedCharacteristic,
)

MAX_ORDER = 2**31


def is_prime(n: int) -> bool:
    """Trial division up to sqrt(n)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface.  Subclasses implement the arithmetic on raw values."""

    characteristic: int
    order: int | None
    zero: Any
    one: Any

    # -- identity -----------------------------------------------------------
    def descriptor(self) -> dict:
        raise NotImplementedError

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def __call__(self, value) -> FieldElement:
        return FieldElement(self, self.convert(value))

    # -- arithmetic ---------------------------------------------------------
    def neg(self, a):
        return self.sub(self.zero, a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def from_int(self, n: int):
        raise NotImplementedError

    # -- encoding -----------------------------------------------------------
    def encode(self, a):
        raise NotImplementedError

    def decode(self, obj):
        return self.convert(obj)

    def format(self, a) -> str:
        return str(self.encode(a))

    def sort_key(self, a):
        raise NotImplementedError

    # -- square roots -------------------------------------------------------
    def sqrt(self, a):
        raise NotImplementedError

    def _canonical_root(self, r):
        s = self.neg(r)
        return min(r, s, key=self.sort_key)


class PrimeField(Field):
    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"modulus {p!r} is not prime")
        if p >= MAX_ORDER:
            raise ValueError(f"prime {p} exceeds the supported bound 2^31")
        self.p = p
        self.characteristic = p
        self.order = p
        self.degree = 1
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def _key(self):
        return ("prime", self.p)

    def descriptor(self):
        return {"kind": "prime", "p": self.p}

    def convert(self, x):
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldMismatch(f"{x.field!r} element used in {self!r}")
            return x.value
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, self.convert(x.denominator))
        if isinstance(x, str):
            try:
                return self.convert(Fraction(x))
            except ValueError:
                raise InvalidDocument(f"cannot parse {x!r} in {self!r}") from None
        raise InvalidDocument(f"cannot interpret {x!r} as an element of {self!r}")

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, -1, self.p)

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0")
        return a * pow(b, -1, self.p) % self.p

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        return pow(a, e, self.p)

    def encode(self, a):
        return a

    def sort_key(self, a):
        return a

    # finite-field helpers
    def element_index(self, a) -> int:
        return a

    def from_index(self, i: int):
        return i

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def frobenius_root(self, a):
        """Inverse of a -> a^p (the identity on F_p)."""
        return a

    def sqrt(self, a):
        p = self.p
        if a == 0:
            return 0
        if p == 2:
            return a
        if p <= 1000:
            for r in range((p + 1) // 2):
                if r * r % p == a:
                    return r
            raise NoSquareRoot(f"{a} is not a square mod {p}")
        if pow(a, (p - 1) // 2, p) != 1:
            raise NoSquareRoot(f"{a} is not a square mod {p}")
        return self._canonical_root(_tonelli_shanks(self, a, p - 1))


class ExtensionField(Field):
    """F_p[y]/(g(y)) for a monic irreducible ``g`` given low degree first."""

    def __init__(self, p: int, modulus, check: bool = True):
        base = PrimeField(p)
        mod = [base.convert(c) for c in modulus]
        while mod and mod[-1] == 0:
            mod.pop()
        if len(mod) < 2:
            raise ValueError("extension modulus must have degree >= 1")
        if mod[-1] != 1:
            raise ValueError("extension modulus must be monic")
        m = len(mod) - 1
        if p**m >= MAX_ORDER:
            raise ValueError(f"field order {p}^{m} exceeds the supported bound 2^31")
        self.p = p
        self.base = base
        self.modulus = tuple(mod)
        self.degree = m
        self.characteristic = p
        self.order = p**m
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)
        if check and m > 1:
            from .poly import Poly, is_irreducible

            if not is_irreducible(Poly(base, mod)):
                raise ValueError(f"modulus {list(mod)} is not irreducible over GF({p})")

    def __repr__(self):
        return f"GF({self.p}^{self.degree}, modulus={list(self.modulus)})"

    def _key(self):
        return ("extension", self.p, self.modulus)

    def descriptor(self):
        return {"kind": "extension", "p": self.p, "modulus": list(self.modulus)}

    def convert(self, x):
        if isinstance(x, FieldElement):
            if x.field == self:
                return x.value
            if x.field == self.base:
                return self.embed(x.value)
            raise FieldMismatch(f"{x.field!r} element used in {self!r}")
        if isinstance(x, (list, tuple)):
            if len(x) > self.degree:
                raise InvalidDocument(
                    f"extension element {list(x)!r} has more than {self.degree} coefficients"
                )
            try:
                vals = [self.base.convert(c) for c in x]
            except InvalidDocument:
                raise InvalidDocument(f"cannot interpret {x!r} as an element of {self!r}") from None
            return tuple(vals) + (0,) * (self.degree - len(vals))
        if isinstance(x, (int, Fraction, str)) and not isinstance(x, bool):
            return self.embed(self.base.convert(x))
        raise InvalidDocument(f"cannot interpret {x!r} as an element of {self!r}")

    def embed(self, c: int):
        return (c % self.p,) + (0,) * (self.degree - 1)

    def from_int(self, n):
        return self.embed(n)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        p, m, g = self.p, self.degree, self.modulus
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(m):
                    prod[k - m + j] -= c * g[j]
        return tuple(c % p for c in prod[:m])

    def inv(self, a):
        if a == self.zero:
            raise DivisionByZero("inverse of 0")
        return self.pow(a, self.order - 2)

    def encode(self, a):
        return list(a)

    def format(self, a):
        return "[" + ",".join(map(str, a)) + "]"

    def sort_key(self, a):
        return a

    def element_index(self, a) -> int:
        idx = 0
        for c in reversed(a):
            idx = idx * self.p + c
        return idx

    def from_index(self, i: int):
        out = []
        for _ in range(self.degree):
            i, r = divmod(i, self.p)
            out.append(r)
        return tuple(out)

    def elements(self):
        return (self.from_index(i) for i in range(self.order))

    def random(self, rng: random.Random):
        return self.from_index(rng.randrange(self.order))

    def generator_y(self):
        """The class of y (a root of the modulus)."""
        if self.degree == 1:
            return self.embed(-self.modulus[0])
        return (0, 1) + (0,) * (self.degree - 2)

    def frobenius_root(self, a):
        """Inverse of the Frobenius a -> a^p, namely a -> a^(q/p)."""
        return self.pow(a, self.order // self.p)

    def sqrt(self, a):
        if a == self.zero:
            return a
        q = self.order
        if self.p == 2:
            return self.pow(a, q // 2)
        if q <= 1000:
            best = None
            for i in range(q):
                r = self.from_index(i)
                if self.mul(r, r) == a:
                    best = r
                    break
            if best is None:
                raise NoSquareRoot(f"{self.format(a)} is not a square in {self!r}")
            return self._canonical_root(best)
        if self.pow(a, (q - 1) // 2) != self.one:
            raise NoSquareRoot(f"{self.format(a)} is not a square in {self!r}")
        return self._canonical_root(_tonelli_shanks(self, a, q - 1))


class RationalField(Field):
    characteristic = 0
    order = None
    degree = 1

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def _key(self):
        return ("rational",)

    def descriptor(self):
        return {"kind": "rational"}

    def convert(self, x):
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldMismatch(f"{x.field!r} element used in {self!r}")
            return x.value
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except (ValueError, ZeroDivisionError):
                raise InvalidDocument(f"cannot parse {x!r} as a rational") from None
        raise InvalidDocument(f"cannot interpret {x!r} as a rational")

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0")
        return a / b

    def encode(self, a):
        return f"{a.numerator}/{a.denominator}"

    def format(self, a):
        return str(a)

    def sort_key(self, a):
        return a

    def random(self, rng: random.Random, bound: int = 5):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))

    def sqrt(self, a):
        if a < 0:
            raise NoSquareRoot(f"{a} has no rational square root")
        n, d = a.numerator, a.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn != n or rd * rd != d:
            raise NoSquareRoot(f"{a} has no rational square root")
        return Fraction(rn, rd)


QQ = RationalField()


def _tonelli_shanks(F: Field, a, group_order: int):
    """Square root in a finite field of odd order whose unit group has ``group_order`` elements."""
    q1, s = group_order, 0
    while q1 % 2 == 0:
        q1 //= 2
        s += 1
    half = group_order // 2
    # deterministic non-residue search
    i = 2
    while True:
        z = F.from_index(i)
        if F.pow(z, half) != F.one:
            break
        i += 1
    m = s
    c = F.pow(z, q1)
    t = F.pow(a, q1)
    r = F.pow(a, (q1 + 1) // 2)
    while t != F.one:
        k, tt = 0, t
        while tt != F.one:
            tt = F.mul(tt, tt)
            k += 1
        b = c
        for _ in range(m - k - 1):
            b = F.mul(b, b)
        m = k
        c = F.mul(b, b)
        t = F.mul(t, c)
        r = F.mul(r, b)
    return r


def field_from_descriptor(desc: dict) -> Field:
    """Build a field from its JSON descriptor."""
    if not isinstance(desc, dict) or "kind" not in desc:
        raise InvalidDocument("field descriptor must be an object with a 'kind'")
    kind = desc["kind"]
    try:
        if kind == "prime":
            return PrimeField(desc["p"])
        if kind == "extension":
            return ExtensionField(desc["p"], desc["modulus"])
        if kind == "rational":
            return QQ
    except KeyError as exc:
        raise InvalidDocument(f"field descriptor missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise InvalidDocument(f"invalid field descriptor: {exc}") from None
    raise InvalidDocument(f"unknown field kind {kind!r}")


@dataclass(frozen=True)
class FieldElement:
    """An element bundled with its field; supports ``+ - * / **`` and ``==``."""

    field: Field
    value: Any

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field!r} with {other.field!r}")
            return other.value
        return self.field.convert(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.convert(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def sqrt(self) -> FieldElement:
        return field_sqrt(self)

    def encode(self):
        return self.field.encode(self.value)

    def __repr__(self):
        return f"{self.field.format(self.value)} in {self.field!r}"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements of the same field."""
    if a.field != b.field:
        raise FieldMismatch(f"cannot combine {a.field!r} with {b.field!r}")
    fn = {"add": a.field.add, "sub": a.field.sub, "mul": a.field.mul, "div": a.field.div}[op]
    return FieldElement(a.field, fn(a.value, b.value))


def field_sqrt(a: FieldElement, allow_char2: bool = True) -> FieldElement:
    """Square root with the smaller canonical representative.

    Raises NoSquareRoot for non-squares.  Characteristic 2 roots always exist
    (a -> a^(q/2)); pass ``allow_char2=False`` to reject them instead.
    """
    F = a.field
    if F.characteristic == 2 and not allow_char2:
        raise UnsupportedCharacteristic("square roots in characteristic 2 are disabled")
    return FieldElement(F, F.sqrt(a.value))
