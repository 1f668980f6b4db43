"""Acceptance criteria 1-9, each at its stated tolerance and runtime budget.

Every criterion prints one PASS/FAIL line (collected again in the pytest
terminal summary).  Run standalone with ``python3 tests/test_acceptance.py``.
"""

import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus  # noqa: E402
from sysrep.decomposition import planar_blocks, primary_decomposition, restriction_matrix  # noqa: E402
from sysrep.dynamics import orbit_census_analytic, orbit_census_enumerate, order_of_matrix  # noqa: E402
from sysrep.fields import QQ, PrimeField  # noqa: E402
from sysrep.matrix import Matrix, apply_poly, minimal_polynomial, poly_eval_matrix  # noqa: E402
from sysrep.module_structure import invariant_factors  # noqa: E402
from sysrep.numtheory import factorint  # noqa: E402
from sysrep.poly import Poly, factor, x_power_minus_one  # noqa: E402
from sysrep.representation import (  # noqa: E402
    Representation,
    TimeGroup,
    check_homomorphism,
    from_module_action,
    module_action,
    poly_action,
)

HERE = Path(__file__).parent
RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS.append(line)
    print(line)


# Corpora are built once; construction time is not charged to any criterion.
_CORPUS: dict = {}


def homomorphism_corpus():
    if "hom" not in _CORPUS:
        _CORPUS["hom"] = corpus.invertible_corpus([2, 3, 5, 13], 100, 6, seed=1)
    return _CORPUS["hom"]


def decomposition_corpus():
    if "dec" not in _CORPUS:
        _CORPUS["dec"] = corpus.decomposition_corpus(seed=2)
    return _CORPUS["dec"]


def period_corpus():
    if "per" not in _CORPUS:
        _CORPUS["per"] = corpus.invertible_corpus([2, 3, 5], 100, 5, seed=4)
    return _CORPUS["per"]


# -- criterion 1 ----------------------------------------------------------------

def criterion_1():
    systems = homomorphism_corpus()
    start = time.perf_counter()
    failures = []
    for k, A in enumerate(systems):
        rep = Representation(TimeGroup.integers(), A)
        res = check_homomorphism(rep, trials=256, seed=k)
        if not res.passed:
            failures.append((k, res.counterexample))
    elapsed = time.perf_counter() - start
    # the sampled powers themselves against an independent numpy power
    rng = random.Random(11)
    spot = 0
    for A in systems[:20]:
        rep = Representation(TimeGroup.integers(), A)
        t = rng.randint(0, 2**16)
        if rep.rho(t) != Matrix(A.field, corpus.numpy_matpow_mod(A, t, A.field.p).tolist()):
            spot += 1
    ok = not failures and spot == 0 and elapsed < 10
    return ok, f"{len(systems)} systems x 256 pairs, {len(failures)} failures, {spot} power mismatches, {elapsed:.2f}s (< 10s)"


# -- criteria 2 and 3 -------------------------------------------------------------

def check_primary(A) -> str | None:
    F, n = A.field, A.nrows
    comps = primary_decomposition(A)
    if sum(c.dimension for c in comps) != n:
        return "dimensions do not sum to n"
    total = Matrix.zeros(F, n)
    for i, c in enumerate(comps):
        P = c.projector
        total = total + P
        if P @ P != P:
            return f"projector {i} not idempotent"
        if A @ P != P @ A:
            return f"projector {i} does not commute with A"
        for j, d in enumerate(comps):
            if i != j and not (P @ d.projector).is_zero():
                return f"projectors {i},{j} not orthogonal"
        for v in c.basis:
            # A v must stay in V_i = ker p_i(A)^e_i
            if any(x != F.zero for x in poly_eval_matrix(c.factor**c.multiplicity, A).apply(A.apply(v))):
                return f"V_{i} not A-invariant"
            if P.apply(v) != tuple(v):
                return f"projector {i} does not fix V_{i}"
    if total != Matrix.identity(F, n):
        return "projectors do not sum to I"
    return None


def criterion_2():
    mats = decomposition_corpus()
    start = time.perf_counter()
    bad = [(k, msg) for k, A in enumerate(mats) if (msg := check_primary(A))]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    return ok, f"{len(mats)} matrices (200 F_p, 50 Q), {len(bad)} failures {bad[:3]}, {elapsed:.2f}s (< 30s)"


def check_invariant(A) -> str | None:
    F = A.field
    dec = invariant_factors(A)
    fs = dec.factors
    for a, b in zip(fs, fs[1:]):
        if not (b % a).is_zero():
            return "f_i does not divide f_i+1"
    prod = Poly.one(F)
    for f in fs:
        prod = prod * f
    if list(prod.coeffs) != corpus.sympy_charpoly(A):
        return "product of invariant factors is not the characteristic polynomial"
    m = minimal_polynomial(A)
    if fs[-1] != m:
        return "last invariant factor is not the minimal polynomial"
    # minimality of m: m(A) = 0 and no proper divisor m/g kills A
    if not poly_eval_matrix(m, A).is_zero():
        return "m(A) != 0"
    for g, _ in factor(m).factors:
        if poly_eval_matrix(m // g, A).is_zero():
            return "minimal polynomial is not minimal"
    P, C = dec.basis_change, dec.canonical_form
    if P.inverse() @ A @ P != C:
        return "P^-1 A P != C"
    return None


def criterion_3():
    mats = decomposition_corpus()
    start = time.perf_counter()
    bad = [(k, msg) for k, A in enumerate(mats) if (msg := check_invariant(A))]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    return ok, f"{len(mats)} matrices, {len(bad)} failures {bad[:3]}, {elapsed:.2f}s (< 30s)"


# -- criterion 4 ----------------------------------------------------------------

def check_period(A) -> tuple[int, str | None]:
    p = A.field.p
    T = order_of_matrix(A)
    eye = corpus.numpy_matpow_mod(Matrix.identity(A.field, A.nrows), 0, p)
    if not (corpus.numpy_matpow_mod(A, T, p) == eye).all():
        return T, "A^T != I"
    for ell in factorint(T):
        if (corpus.numpy_matpow_mod(A, T // ell, p) == eye).all():
            return T, f"A^(T/{ell}) = I"
    xt = x_power_minus_one(A.field, T)
    for f in invariant_factors(A).factors:
        if not (xt % f).is_zero():
            return T, "an invariant factor does not divide x^T - 1"
    return T, None


def criterion_4():
    systems = period_corpus()
    start = time.perf_counter()
    bad = [(k, msg) for k, A in enumerate(systems) if (msg := check_period(A)[1])]
    fib = Matrix(PrimeField(2), [[1, 1], [1, 0]])
    rot = Matrix(PrimeField(3), [[0, -1], [1, 0]])  # companion(x^2 + 1)
    t_fib, e1 = check_period(fib)
    t_rot, e2 = check_period(rot)
    elapsed = time.perf_counter() - start
    ok = not bad and not e1 and not e2 and t_fib == 3 and t_rot == 4 and elapsed < 10
    return ok, (
        f"{len(systems)} systems, {len(bad)} failures {bad[:3]}; Fibonacci/F_2 T={t_fib} (3), "
        f"companion(x^2+1)/F_3 T={t_rot} (4), {elapsed:.2f}s (< 10s)"
    )


# -- criterion 5 ----------------------------------------------------------------

def criterion_5():
    systems = [A for A in homomorphism_corpus() + period_corpus() if A.field.order ** A.nrows <= 3**10]
    start = time.perf_counter()
    bad = []
    for k, A in enumerate(systems):
        an = orbit_census_analytic(A)
        en = orbit_census_enumerate(A, max_states=3**10)
        if an != en or en.partition_total() != A.field.order ** A.nrows:
            bad.append(k)
    named = orbit_census_enumerate(Matrix(PrimeField(3), [[0, -1], [1, 0]]))
    named_an = orbit_census_analytic(Matrix(PrimeField(3), [[0, -1], [1, 0]]))
    elapsed = time.perf_counter() - start
    ok = not bad and named.cycles == {1: 1, 4: 2} and named_an == named and elapsed < 60
    return ok, (
        f"{len(systems)} systems with q^n <= 3^10, {len(bad)} disagreements; "
        f"companion(x^2+1)/F_3 cycles {named.cycles} ({{1: 1, 4: 2}}), {elapsed:.2f}s (< 60s)"
    )


# -- criterion 6 ----------------------------------------------------------------

def criterion_6():
    rng = random.Random(6)
    start = time.perf_counter()
    bad = []
    for k, A in enumerate(period_corpus()[:60]):
        F, n = A.field, A.nrows
        T = order_of_matrix(A)
        rep = Representation(TimeGroup.cyclic(T), A)
        for _ in range(10):
            f = Poly(F, [F.random(rng) for _ in range(rng.randint(0, 7))], raw=True)
            g = Poly(F, [F.random(rng) for _ in range(rng.randint(0, 7))], raw=True)
            v = tuple(F.random(rng) for _ in range(n))
            add = lambda x, y: tuple(F.add(a, b) for a, b in zip(x, y))  # noqa: E731
            # independent evaluation: f(A) as a matrix, then applied
            if poly_action(rep, f, v) != poly_eval_matrix(f, A).apply(v):
                bad.append((k, "Phi(f) disagrees with f(A)"))
            if poly_action(rep, f + g, v) != add(poly_action(rep, f, v), poly_action(rep, g, v)):
                bad.append((k, "Phi(f+g)"))
            if poly_action(rep, f * g, v) != poly_action(rep, f, poly_action(rep, g, v)):
                bad.append((k, "Phi(fg)"))
            reduced = f % x_power_minus_one(F, T)
            if module_action(rep, f, v) != module_action(rep, reduced, v) or module_action(rep, f, v) != apply_poly(A, f, v):
                bad.append((k, "module action not constant on classes mod x^T - 1"))
        x = Poly.x(F)
        cols = [module_action(rep, x, tuple(F.one if i == j else F.zero for i in range(n))) for j in range(n)]
        back = from_module_action(F, T, Matrix.from_columns(F, cols))
        if back.generator != A or back.group != rep.group:
            bad.append((k, "round trip"))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    return ok, f"60 systems x 10 (f, g, v) triples, {len(bad)} failures {bad[:3]}, {elapsed:.2f}s (< 10s)"


# -- criterion 7 ----------------------------------------------------------------

def _planar_case(A, want_form, extra=lambda b: True):
    blocks = planar_blocks(A)
    for b in blocks:
        if b.form != want_form or not extra(b):
            continue
        if restriction_matrix(A, [b.basis_u, b.basis_w]) == b.block():
            return True, f"{b.form} a={b.a} b={b.b}"
    got = [(b.form, b.a, b.b) for b in blocks] or "no block"
    return False, f"got {got}"


def criterion_7():
    F5, F3 = PrimeField(5), PrimeField(3)
    comp = [[0, -1], [1, 0]]  # companion(x^2 + 1)
    ok5, d5 = _planar_case(
        Matrix(F5, comp), "rotation", lambda b: F5.mul(b.b, b.b) == F5.neg(F5.one)
    )
    ok3, d3 = _planar_case(Matrix(F3, comp), "companion")
    okq, dq = _planar_case(
        Matrix(QQ, [[0, 1], [-1, 0]]), "rotation", lambda b: b.a == 0 and b.b == 1
    )
    ok = ok5 and ok3 and okq
    return ok, (
        f"F_5 rotation with b^2=-1: {'ok' if ok5 else 'FAIL'} ({d5}); "
        f"F_3 companion fallback: {'ok' if ok3 else 'FAIL'} ({d3}); "
        f"Q a=0 b=1: {'ok' if okq else 'FAIL'} ({dq})"
    )


# -- criterion 8 ----------------------------------------------------------------

def _random_poly(F, rng, max_deg):
    while True:
        deg = rng.randint(0, max_deg)
        if F is QQ:
            cs = [rng.randint(-9, 9) for _ in range(deg + 1)]
        else:
            cs = [F.random(rng) for _ in range(deg + 1)]
        f = Poly(F, cs)
        if not f.is_zero():
            return f


def criterion_8():
    rng = random.Random(8)
    polys = [_random_poly(PrimeField(rng.choice([2, 3, 5])), rng, 10) for _ in range(1000)]
    polys += [_random_poly(QQ, rng, 8) for _ in range(100)]
    start = time.perf_counter()
    bad = []
    for k, f in enumerate(polys):
        fac = factor(f, seed=k)
        if fac.expand() != f:
            bad.append((k, "product"))
        for g, _ in fac.factors:
            if not corpus.sympy_is_irreducible(g):
                bad.append((k, f"reducible factor {g}"))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    return ok, f"1000 over F_2/F_3/F_5 + 100 over Q, {len(bad)} failures {bad[:3]}, {elapsed:.2f}s incl. oracle (< 30s)"


# -- criterion 9 ----------------------------------------------------------------

FIXTURES = ["fibonacci_f2", "rotation_f3", "identity_f5", "mixed_f7", "rotation_q"]


def _cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "sysrep", *args], capture_output=True, text=True, check=False
    )
    return proc.returncode, proc.stdout, proc.stderr


def criterion_9():
    problems = []
    for name in FIXTURES:
        doc = str(HERE / "fixtures" / f"{name}.json")
        runs = {
            "analyze": [["analyze", doc, "--json"]] * 2,
            "decompose": [["decompose", doc, "--json"]] * 2,
            "orbits": [["orbits", doc, "--json", "--workers", str(w)] for w in (1, 1, 2, 4)],
        }
        for cmd, argvs in runs.items():
            outs = {_cli(*a) for a in argvs}
            if len(outs) != 1:
                problems.append(f"{name}/{cmd}: runs differ")
                continue
            code, out, err = outs.pop()
            golden = HERE / "golden" / f"{name}.{cmd}"
            expected = golden.read_text() if golden.exists() else None
            if expected is None:
                problems.append(f"{name}/{cmd}: no golden file")
            elif expected != f"exit {code}\n{out}{err}":
                problems.append(f"{name}/{cmd}: differs from golden")
    ok = not problems
    return ok, f"{len(FIXTURES)} fixtures x analyze/decompose/orbits, workers 1/2/4: {problems or 'byte-identical'}"


CRITERIA = [
    (1, "homomorphism law", criterion_1),
    (2, "primary decomposition", criterion_2),
    (3, "invariant factors", criterion_3),
    (4, "period and divisibility", criterion_4),
    (5, "orbit census oracle equivalence", criterion_5),
    (6, "algebra homomorphism and module action", criterion_6),
    (7, "planar blocks", criterion_7),
    (8, "factorization round trip", criterion_8),
    (9, "CLI determinism", criterion_9),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance_criterion(number, title, fn):
    ok, detail = fn()
    report(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        report(number, title, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
