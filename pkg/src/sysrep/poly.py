"""Dense univariate polynomials over the exact fields, with factorization.

Coefficients are stored low degree first as raw field values (see
:mod:`sysrep.fields`).  The zero polynomial has an empty coefficient tuple and
degree ``-1``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable

from . import numtheory
from .errors import (
    BothZero,
    DegreeTooLarge,
    DivisionByZero,
    FieldMismatch,
    NotPeriodic,
    RationalFieldUnsupported,
    ZeroPolynomial,
)
from .fields import Field, PrimeField, RationalField

RATIONAL_DEGREE_LIMIT = 16
ORDER_LIMIT = 2**63


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = (), raw: bool = False):
        self.field = field
        if raw:
            cs = list(coeffs)
        else:
            cs = [field.convert(c) for c in coeffs]
        zero = field.zero
        while cs and cs[-1] == zero:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls(field, (), raw=True)

    @classmethod
    def one(cls, field):
        return cls(field, (field.one,), raw=True)

    @classmethod
    def constant(cls, field, c):
        return cls(field, (field.convert(c),), raw=True)

    @classmethod
    def x(cls, field):
        return cls(field, (field.zero, field.one), raw=True)

    @classmethod
    def monomial(cls, field, n: int, c=None):
        c = field.one if c is None else field.convert(c)
        return cls(field, (field.zero,) * n + (c,), raw=True)

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def sort_key(self):
        key = self.field.sort_key
        return (self.degree, tuple(key(c) for c in self.coeffs))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def _check(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.field, other)
        elif other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out, raw=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs], raw=True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(F)
        if isinstance(F, PrimeField) or isinstance(F, RationalField):
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            if isinstance(F, PrimeField):
                p = F.p
                out = [c % p for c in out]
            else:
                out = [Fraction(c) for c in out]
            return Poly(F, out, raw=True)
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x != F.zero:
                for j, y in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out, raw=True)

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        F = self.field
        c = F.convert(c)
        return Poly(F, [F.mul(c, x) for x in self.coeffs], raw=True)

    def monic(self) -> Poly:
        if not self.coeffs:
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        if self.coeffs[-1] == self.field.one:
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def __divmod__(self, other) -> tuple[Poly, Poly]:
        other = self._check(other)
        if not other.coeffs:
            raise DivisionByZero("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) <= db:
            return Poly.zero(F), self
        b = other.coeffs
        inv_lc = F.inv(b[-1])
        quot = [F.zero] * (len(rem) - db)
        if isinstance(F, PrimeField):
            p = F.p
            for k in range(len(rem) - 1, db - 1, -1):
                c = rem[k] * inv_lc % p
                if c:
                    quot[k - db] = c
                    off = k - db
                    for j in range(db + 1):
                        rem[off + j] = (rem[off + j] - c * b[j]) % p
        else:
            for k in range(len(rem) - 1, db - 1, -1):
                c = F.mul(rem[k], inv_lc)
                if c != F.zero:
                    quot[k - db] = c
                    off = k - db
                    for j in range(db + 1):
                        rem[off + j] = F.sub(rem[off + j], F.mul(c, b[j]))
        return Poly(F, quot, raw=True), Poly(F, rem[:db], raw=True)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def pow_mod(self, e: int, modulus: Poly) -> Poly:
        result = Poly.one(self.field) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            e >>= 1
            if e:
                base = (base * base) % modulus
        return result

    def divides(self, other: Poly) -> bool:
        """True when self | other."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def derivative(self) -> Poly:
        F = self.field
        return Poly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:], raw=True)

    def __call__(self, value):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, value), c)
        return acc

    # -- output ------------------------------------------------------------
    def encode(self) -> list:
        return [self.field.encode(c) for c in self.coeffs]

    def __str__(self):
        if not self.coeffs:
            return "0"
        F = self.field
        signed = isinstance(F, RationalField)
        out = ""
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == F.zero:
                continue
            negative = signed and c < 0
            if negative:
                c = -c
            cs = F.format(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                term = cs
            elif c == F.one:
                term = mono
            else:
                term = f"({cs})*{mono}" if "/" in cs else f"{cs}*{mono}"
            if not out:
                out = f"-{term}" if negative else term
            else:
                out += (" - " if negative else " + ") + term
        return out

    def __repr__(self):
        return f"Poly({self}, {self.field!r})"


def poly_arith(f: Poly, g: Poly, op: str):
    """``op`` in {'add', 'sub', 'mul', 'divmod'}."""
    if f.field != g.field:
        raise FieldMismatch(f"{f.field!r} vs {g.field!r}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    raise ValueError(f"unknown polynomial operation {op!r}")


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic() if not f.is_zero() else f


def lcm(f: Poly, g: Poly) -> Poly:
    if f.is_zero() or g.is_zero():
        return Poly.zero(f.field)
    return (f * g // gcd(f, g)).monic()


def extended_gcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (d, u, v) with d = gcd(f, g) monic and u*f + v*g = d.

    Cofactors are normalized so that deg u < deg(g/d).
    """
    F = f.field
    if f.field != g.field:
        raise FieldMismatch(f"{f.field!r} vs {g.field!r}")
    if f.is_zero() and g.is_zero():
        raise BothZero("extended_gcd(0, 0) is undefined")
    r0, r1 = f, g
    s0, s1 = Poly.one(F), Poly.zero(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    inv = F.inv(r0.lc)
    d = r0.scale(inv)
    u = s0.scale(inv)
    if g.is_zero():
        return d, u, Poly.zero(F)
    u = u % (g // d)
    v = (d - u * f) // g
    return d, u, v


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Pairwise coprime squarefree parts ``[(a_i, i)]`` with f = prod a_i^i."""
    if f.is_zero():
        raise ZeroPolynomial("squarefree decomposition of 0")
    f = f.monic()
    if f.degree == 0:
        return []
    F = f.field
    if F.characteristic == 0:
        parts = _yun(f)
    else:
        parts = _sff_char_p(f)
    merged: dict[Poly, int] = {}
    for a, i in parts:
        if a.degree > 0:
            merged[a] = merged.get(a, 0) + i
    return sorted(merged.items(), key=lambda t: (t[1], t[0].sort_key()))


def _yun(f: Poly) -> list[tuple[Poly, int]]:
    out = []
    df = f.derivative()
    a = gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def _pth_root(f: Poly) -> Poly:
    F = f.field
    p = F.characteristic
    return Poly(F, [F.frobenius_root(f.coeffs[i]) for i in range(0, len(f.coeffs), p)], raw=True)


def _sff_char_p(f: Poly) -> list[tuple[Poly, int]]:
    p = f.field.characteristic
    out = []
    c = gcd(f, f.derivative())
    w = f // c
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        fac = w // y
        if fac.degree > 0:
            out.append((fac, i))
        w = y
        c = c // y
        i += 1
    if c.degree > 0:
        for g, j in _sff_char_p(_pth_root(c)):
            out.append((g, j * p))
    return out


# -- factorization -----------------------------------------------------------

@dataclass
class Factorization:
    unit: Any
    factors: list[tuple[Poly, int]] = dc_field(default_factory=list)
    field: Field | None = None

    def expand(self) -> Poly:
        out = Poly.constant(self.field, self.unit)
        for g, e in self.factors:
            out = out * g**e
        return out

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def factor(f: Poly, seed: int = 0) -> Factorization:
    """Complete factorization into monic irreducibles (sorted by degree, then coefficients)."""
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    F = f.field
    unit = f.lc
    if f.degree == 0:
        return Factorization(unit, [], F)
    if F.characteristic == 0:
        if f.degree > RATIONAL_DEGREE_LIMIT:
            raise DegreeTooLarge(
                f"rational factorization is limited to degree {RATIONAL_DEGREE_LIMIT} (got {f.degree})"
            )
        irreducibles = _factor_rational(f.monic())
    else:
        rng = random.Random(seed)
        irreducibles = []
        for part, mult in squarefree_decomposition(f):
            for g in _factor_squarefree_finite(part, rng):
                irreducibles.append((g, mult))
    merged: dict[Poly, int] = {}
    for g, e in irreducibles:
        merged[g] = merged.get(g, 0) + e
    return Factorization(unit, sorted(merged.items(), key=lambda t: t[0].sort_key()), F)


def _frobenius_powers(f: Poly, q: int):
    """Yield x^(q^i) mod f for i = 1, 2, ..."""
    h = Poly.x(f.field) % f
    while True:
        h = h.pow_mod(q, f)
        yield h


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    F = f.field
    q = F.order
    x = Poly.x(F)
    out = []
    rest = f
    d = 0
    for h in _frobenius_powers(f, q):
        d += 1
        if rest.degree < 2 * d:
            break
        g = gcd(rest, (h - x) % rest)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    if f.degree == d:
        return [f]
    F = f.field
    q = F.order
    n = f.degree
    while True:
        a = Poly(F, [F.random(rng) for _ in range(n)], raw=True)
        if a.degree < 1:
            continue
        g = gcd(f, a)
        if 0 < g.degree < n:
            break
        if F.characteristic == 2:
            k = q.bit_length() - 1
            t, acc = a % f, a % f
            for _ in range(k * d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.pow_mod((q**d - 1) // 2, f) - Poly.one(F)
        g = gcd(f, b)
        if 0 < g.degree < n:
            break
    return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def _factor_squarefree_finite(f: Poly, rng: random.Random) -> list[Poly]:
    out = []
    for g, d in _distinct_degree(f.monic()):
        out.extend(_equal_degree(g, d, rng))
    return out


def is_irreducible(f: Poly) -> bool:
    """Rabin's test over finite fields; factorization over Q."""
    if f.degree < 1:
        return False
    if f.degree == 1:
        return True
    F = f.field
    if F.characteristic == 0:
        fac = factor(f)
        return len(fac.factors) == 1 and fac.factors[0][1] == 1
    f = f.monic()
    n = f.degree
    q = F.order
    x = Poly.x(F)
    powers = {}
    h = x
    for i in range(1, n + 1):
        h = h.pow_mod(q, f)
        powers[i] = h
    if not (powers[n] - x).is_zero():
        return False
    for r in numtheory.factorint(n):
        g = gcd(f, powers[n // r] - x)
        if g.degree > 0:
            return False
    return True


# -- rational factorization (Zassenhaus) -------------------------------------

def _to_primitive_int(f: Poly) -> list[int]:
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_divmod_exact(f: list[int], g: list[int]) -> list[int] | None:
    """Quotient f / g over Z, or None when g does not divide f."""
    rem = list(f)
    dg = len(g) - 1
    if len(rem) - 1 < dg:
        return None
    quot = [0] * (len(rem) - dg)
    lg = g[-1]
    for k in range(len(rem) - 1, dg - 1, -1):
        c, r = divmod(rem[k], lg)
        if r:
            return None
        quot[k - dg] = c
        if c:
            for j in range(dg + 1):
                rem[k - dg + j] -= c * g[j]
    if any(rem[:dg]):
        return None
    return quot


def _int_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _symmetric(a: list[int], m: int) -> list[int]:
    half = m // 2
    out = []
    for c in a:
        c %= m
        out.append(c - m if c > half else c)
    return out


def _primitive(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a = a[:-1]
    g = 0
    for c in a:
        g = math.gcd(g, c)
    a = [c // g for c in a]
    if a[-1] < 0:
        a = [-c for c in a]
    return a


def _small_primes():
    n = 2
    while True:
        if numtheory.is_probable_prime(n):
            yield n
        n += 1


def _factor_rational(f: Poly) -> list[tuple[Poly, int]]:
    out = []
    for part, mult in squarefree_decomposition(f):
        for g in _zassenhaus(_to_primitive_int(part)):
            qpoly = Poly(f.field, [Fraction(c) for c in g], raw=True).monic()
            out.append((qpoly, mult))
    return out


def _zassenhaus(f: list[int]) -> list[list[int]]:
    """Irreducible factors over Z of a squarefree primitive integer polynomial."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    lc = f[-1]
    best = None
    tried = 0
    for p in _small_primes():
        if lc % p == 0:
            continue
        Fp = PrimeField(p)
        fp = Poly(Fp, [c % p for c in f], raw=True)
        if gcd(fp, fp.derivative()).degree > 0:
            continue
        facs = _factor_squarefree_finite(fp, random.Random(p))
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        tried += 1
        if len(facs) == 1 or tried >= 5:
            break
    p, facs = best
    if len(facs) == 1:
        return [f]
    norm = math.isqrt(sum(c * c for c in f)) + 1
    bound = 2 * abs(lc) * (2**n) * norm
    k = 1
    while p**k <= bound:
        k += 1
    pk = p**k
    lifted = _multifactor_hensel(f, [g.coeffs for g in sorted(facs)], p, k)

    found = []
    cur = f
    s = 1
    while 2 * s <= len(lifted):
        hit = False
        for subset in combinations(range(len(lifted)), s):
            cand = [cur[-1]]
            for i in subset:
                cand = [c % pk for c in _int_mul(cand, lifted[i])]
            cand = _primitive(_symmetric(cand, pk))
            q = _int_divmod_exact(cur, cand)
            if q is not None:
                found.append(cand)
                cur = q
                lifted = [g for i, g in enumerate(lifted) if i not in subset]
                hit = True
                break
        if not hit:
            s += 1
    found.append(_primitive(cur))
    return found


def _poly_mod_p(a: list[int], Fp: PrimeField) -> Poly:
    return Poly(Fp, [c % Fp.p for c in a], raw=True)


def _hensel_pair(f: list[int], g: list[int], h: list[int], p: int, k: int):
    """Lift f = g*h (mod p), g monic, to f = G*H (mod p^k)."""
    Fp = PrimeField(p)
    gp, hp = _poly_mod_p(g, Fp), _poly_mod_p(h, Fp)
    d, s, t = extended_gcd(gp, hp)
    assert d.is_one()
    pk = p**k
    G, H = list(g), list(h)
    mod = p
    for _ in range(1, k):
        prod = _int_mul(G, H)
        width = max(len(prod), len(f))
        prod += [0] * (width - len(prod))
        diff = [(a - b) % pk for a, b in zip(f + [0] * (width - len(f)), prod)]
        assert all(c % mod == 0 for c in diff)
        e = _poly_mod_p([c // mod for c in diff], Fp)
        te = t * e
        qq, dg = divmod(te, gp)
        dh = s * e + qq * hp
        G = _add_scaled(G, dg.coeffs, mod, pk)
        H = _add_scaled(H, dh.coeffs, mod, pk)
        mod *= p
    return G, H


def _add_scaled(a: list[int], b, m: int, pk: int) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] += m * c
    return [c % pk for c in out]


def _multifactor_hensel(f: list[int], factors: list[tuple], p: int, k: int) -> list[list[int]]:
    """Monic lifts G_i with f = lc(f) * prod G_i (mod p^k)."""
    pk = p**k
    if len(factors) == 1:
        inv = pow(f[-1], -1, pk)
        return [[c * inv % pk for c in f]]
    Fp = PrimeField(p)
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    g = Poly.one(Fp)
    for c in left:
        g = g * Poly(Fp, c, raw=True)
    h = Poly.constant(Fp, f[-1])
    for c in right:
        h = h * Poly(Fp, c, raw=True)
    G, H = _hensel_pair([c % pk for c in f], list(g.coeffs), list(h.coeffs), p, k)
    return _multifactor_hensel(G, left, p, k) + _multifactor_hensel(H, right, p, k)


# -- multiplicative order of x -----------------------------------------------

def order_of_x_mod(f: Poly) -> int:
    """Least T >= 1 with x^T = 1 (mod f), over a finite field."""
    F = f.field
    if F.characteristic == 0:
        raise RationalFieldUnsupported("order of x is only computed over finite fields")
    if f.is_zero():
        raise ZeroPolynomial("order modulo the zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return 1
    if f.coeffs[0] == F.zero:
        raise NotPeriodic("x is a zero divisor modulo f (f(0) = 0)")
    q, p = F.order, F.characteristic
    T = 1
    for g, e in factor(f).factors:
        d = g.degree
        if q**d >= ORDER_LIMIT:
            raise DegreeTooLarge(f"q^d = {q}^{d} exceeds the 2^63 factoring cap")
        t = _order_irreducible(g, q**d - 1)
        pt = 1
        while pt < e:
            pt *= p
        T = numtheory.lcm(T, t * pt)
    return T


def _order_irreducible(g: Poly, group_order: int) -> int:
    x = Poly.x(g.field)
    T = group_order
    for ell in numtheory.factorint(group_order):
        while T % ell == 0 and x.pow_mod(T // ell, g).is_one():
            T //= ell
    return T


def x_power_minus_one(field: Field, T: int) -> Poly:
    """x^T - 1."""
    return Poly.monomial(field, T) - Poly.one(field)
