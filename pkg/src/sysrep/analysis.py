"""Report builders and property suites behind the command line."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Any

from . import __version__
from .decomposition import (
    NotSplit,
    generalized_eigenspaces,
    planar_blocks,
    primary_decomposition,
    restriction_matrix,
    splitting_field_lift,
)
from .dynamics import (
    DEFAULT_MAX_STATES,
    orbit_census_analytic,
    orbit_census_enumerate,
    order_of_matrix,
)
from .errors import (
    CharacteristicTwo,
    InfiniteOrder,
    RationalFieldUnsupported,
    StateSpaceTooLarge,
    SysrepError,
)
from .fields import PrimeField
from .io import SystemDocument, canonical_json
from .matrix import Matrix, characteristic_polynomial, minimal_polynomial
from .module_structure import invariant_factors, verify_period_divisibility
from .poly import Poly, factor
from .representation import (
    HOMOMORPHISM_RANGE,
    check_homomorphism,
    poly_action,
)

RATIONAL_TIME_RANGE = 64


def _factor_list(pairs) -> list[dict]:
    return [{"factor": g.encode(), "multiplicity": e} for g, e in pairs]


def factors_section(A: Matrix, seed: int) -> dict:
    m = minimal_polynomial(A)
    chi = characteristic_polynomial(A)
    fac = factor(m, seed)
    # chi has the same irreducible factors as m; only the multiplicities differ
    char_pairs = []
    rest = chi
    for g, _ in fac.factors:
        e = 0
        while True:
            q, r = divmod(rest, g)
            if not r.is_zero():
                break
            rest, e = q, e + 1
        char_pairs.append((g, e))
    assert rest.degree == 0
    F = A.field
    return {
        "minimal_polynomial": {"poly": m.encode(), "factors": _factor_list(fac.factors)},
        "characteristic_polynomial": {"poly": chi.encode(), "factors": _factor_list(char_pairs)},
        "unit": F.encode(F.one),
    }


def planar_section(A: Matrix, seed: int):
    try:
        return [b.to_json() for b in planar_blocks(A, seed)]
    except CharacteristicTwo:
        return {"skipped": "CharacteristicTwo"}


def period_section(doc: SystemDocument, dec) -> dict | None:
    A = doc.matrix
    if not A.is_invertible():
        return {"T": None, "finite": False, "reason": "singular generator"}
    try:
        T = order_of_matrix(A)
    except InfiniteOrder as exc:
        return {"T": None, "finite": False, "reason": str(exc)}
    out: dict[str, Any] = {"T": T, "finite": True}
    if doc.field.is_finite:
        out["divisibility"] = verify_period_divisibility(dec, T).to_json()
    return out


def homomorphism_section(doc: SystemDocument, trials: int, seed: int) -> dict:
    rng = HOMOMORPHISM_RANGE if doc.field.is_finite else RATIONAL_TIME_RANGE
    return check_homomorphism(doc.representation(), trials, seed, time_range=rng).to_json()


def analyze(doc: SystemDocument, trials: int = 256, seed: int | None = None) -> dict:
    seed = doc.seed if seed is None else seed
    A = doc.matrix
    rep = doc.representation()  # validates the group invariants
    dec = invariant_factors(A, seed)
    census = None
    if doc.field.is_finite and A.is_invertible():
        census = orbit_census_analytic(A).to_json()
    return {
        "command": "analyze",
        "version": __version__,
        "input": doc.echo() | {"seed": seed},
        "factors": factors_section(A, seed),
        "primary_components": [c.to_json() for c in primary_decomposition(A, seed)],
        "planar_blocks": planar_section(A, seed),
        "invariant_factors": dec.to_json(),
        "period": period_section(doc, dec),
        "orbit_census": census,
        "homomorphism": homomorphism_section(doc, trials, seed) if rep else None,
    }


def factors_report(doc: SystemDocument, seed: int | None = None) -> dict:
    seed = doc.seed if seed is None else seed
    doc.representation()
    return {
        "command": "factors",
        "version": __version__,
        "input": doc.echo() | {"seed": seed},
        "factors": factors_section(doc.matrix, seed),
    }


def eigenspace_section(A: Matrix, seed: int) -> dict:
    F = A.field
    if isinstance(F, PrimeField):
        F, A = splitting_field_lift(A, seed)
    spaces = generalized_eigenspaces(A, seed)
    if isinstance(spaces, NotSplit):
        return {
            "field": F.descriptor(),
            "split": False,
            "spaces": [],
            "nonlinear_factors": [f.encode() for f in spaces.factors],
        }
    return {
        "field": F.descriptor(),
        "split": True,
        "spaces": [
            {
                "eigenvalue": F.encode(s.eigenvalue),
                "multiplicity": s.multiplicity,
                "dimension": s.dimension,
                "basis": [[F.encode(c) for c in v] for v in s.basis],
            }
            for s in spaces
        ],
    }


def decompose_report(doc: SystemDocument, seed: int | None = None, split: bool = False) -> dict:
    seed = doc.seed if seed is None else seed
    A = doc.matrix
    doc.representation()
    out = {
        "command": "decompose",
        "version": __version__,
        "input": doc.echo() | {"seed": seed},
        "primary_components": [c.to_json() for c in primary_decomposition(A, seed)],
        "planar_blocks": planar_section(A, seed),
        "invariant_factors": invariant_factors(A, seed).to_json(),
    }
    if split:
        out["eigenspaces"] = eigenspace_section(A, seed)
    return out


def orbits_report(
    doc: SystemDocument,
    max_states: int = DEFAULT_MAX_STATES,
    workers: int = 1,
    enumerate_states: bool = False,
) -> dict:
    """Analytic census, cross-checked by enumeration when the state space is small enough."""
    A = doc.matrix
    doc.representation()
    if not doc.field.is_finite:
        raise RationalFieldUnsupported("orbit census needs a finite field")
    census = orbit_census_analytic(A)
    status = "skipped"
    try:
        enumerated = orbit_census_enumerate(A, max_states=max_states, workers=workers)
    except StateSpaceTooLarge:
        if enumerate_states:
            raise
    else:
        if enumerated != census:
            raise AssertionError("analytic and enumerated orbit censuses disagree")
        status = "agrees"
    return {
        "command": "orbits",
        "version": __version__,
        "input": doc.echo(),
        "census": census.to_json(),
        "enumeration": status,
    }


# -- verification suites -----------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    status: str  # "pass", "fail" or "skipped"
    detail: Any = None

    def to_json(self) -> dict:
        return {"suite": self.name, "status": self.status, "detail": self.detail}


@dataclass
class Verification:
    results: list[SuiteResult] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def first_failure(self) -> SuiteResult | None:
        return next((r for r in self.results if r.status == "fail"), None)

    def to_json(self) -> dict:
        fail = self.first_failure()
        return {
            "passed": self.passed,
            "suites": [r.to_json() for r in self.results],
            "counterexample": fail.detail if fail else None,
        }


def _random_poly(F, rng, degree):
    return Poly(F, [F.random(rng) for _ in range(degree + 1)], raw=True)


def _suite_algebra(doc: SystemDocument, trials: int, seed: int) -> SuiteResult:
    rep = doc.representation()
    F = doc.field
    rng = random.Random(seed)
    for k in range(trials):
        f = _random_poly(F, rng, rng.randint(0, 6))
        g = _random_poly(F, rng, rng.randint(0, 6))
        v = tuple(F.random(rng) for _ in range(rep.dim))
        fv, gv = poly_action(rep, f, v), poly_action(rep, g, v)
        if poly_action(rep, f + g, v) != tuple(F.add(a, b) for a, b in zip(fv, gv)):
            return SuiteResult("algebra_homomorphism", "fail", {"trial": k, "law": "sum", "f": f.encode(), "g": g.encode()})
        if poly_action(rep, f * g, v) != poly_action(rep, f, gv):
            return SuiteResult("algebra_homomorphism", "fail", {"trial": k, "law": "product", "f": f.encode(), "g": g.encode()})
    return SuiteResult("algebra_homomorphism", "pass")


def _suite_projectors(A: Matrix, comps) -> SuiteResult:
    F = A.field
    n = A.nrows
    eye = Matrix.identity(F, n)
    total = Matrix.zeros(F, n)
    for i, c in enumerate(comps):
        P = c.projector
        total = total + P
        if P @ P != P:
            return SuiteResult("projectors", "fail", {"component": i, "law": "idempotent"})
        if P @ A != A @ P:
            return SuiteResult("projectors", "fail", {"component": i, "law": "commutes"})
        for j, d in enumerate(comps):
            if i != j and not (P @ d.projector).is_zero():
                return SuiteResult("projectors", "fail", {"component": [i, j], "law": "orthogonal"})
    if total != eye:
        return SuiteResult("projectors", "fail", {"law": "sum_to_identity"})
    return SuiteResult("projectors", "pass")


def _suite_direct_sum(A: Matrix, comps) -> SuiteResult:
    F = A.field
    basis = [v for c in comps for v in c.basis]
    if len(basis) != A.nrows or not Matrix.from_columns(F, basis).is_invertible():
        return SuiteResult("direct_sum", "fail", {"law": "bases_span", "dimensions": [c.dimension for c in comps]})
    for i, c in enumerate(comps):
        try:
            restriction_matrix(A, c.basis)
        except ValueError:
            return SuiteResult("direct_sum", "fail", {"component": i, "law": "invariant"})
    return SuiteResult("direct_sum", "pass")


def _suite_chain(A: Matrix, dec) -> SuiteResult:
    fs = dec.factors
    for i, (a, b) in enumerate(zip(fs, fs[1:])):
        if not a.divides(b):
            return SuiteResult("divisibility_chain", "fail", {"index": i, "law": "f_i | f_i+1"})
    prod = Poly.one(A.field)
    for f in fs:
        prod = prod * f
    if prod != characteristic_polynomial(A):
        return SuiteResult("divisibility_chain", "fail", {"law": "product_is_charpoly"})
    if fs[-1] != minimal_polynomial(A):
        return SuiteResult("divisibility_chain", "fail", {"law": "last_is_minpoly"})
    if dec.basis_change @ dec.canonical_form != A @ dec.basis_change:
        return SuiteResult("divisibility_chain", "fail", {"law": "similarity"})
    return SuiteResult("divisibility_chain", "pass")


def run_verification(
    doc: SystemDocument,
    trials: int = 256,
    seed: int | None = None,
    max_states: int = DEFAULT_MAX_STATES,
    report: dict | None = None,
) -> Verification:
    seed = doc.seed if seed is None else seed
    A = doc.matrix
    out = Verification()
    hom = homomorphism_section(doc, trials, seed)
    out.results.append(
        SuiteResult("homomorphism", "pass" if hom["passed"] else "fail", None if hom["passed"] else hom)
    )
    out.results.append(_suite_algebra(doc, min(trials, 64), seed))
    comps = primary_decomposition(A, seed)
    out.results.append(_suite_projectors(A, comps))
    out.results.append(_suite_direct_sum(A, comps))
    dec = invariant_factors(A, seed)
    out.results.append(_suite_chain(A, dec))

    finite_invertible = doc.field.is_finite and A.is_invertible()
    if finite_invertible:
        T = order_of_matrix(A)
        rep = verify_period_divisibility(dec, T)
        out.results.append(SuiteResult("period_divisibility", "pass" if rep.passed else "fail",
                                       None if rep.passed else rep.to_json()))
        try:
            enumerated = orbit_census_enumerate(A, max_states=max_states)
        except StateSpaceTooLarge as exc:
            out.results.append(SuiteResult("census_equivalence", "skipped", str(exc)))
        else:
            analytic = orbit_census_analytic(A)
            ok = analytic == enumerated and enumerated.partition_total() == enumerated.states
            out.results.append(SuiteResult(
                "census_equivalence", "pass" if ok else "fail",
                None if ok else {"analytic": analytic.to_json(), "enumerated": enumerated.to_json()},
            ))
    else:
        out.results.append(SuiteResult("period_divisibility", "skipped", "needs an invertible system over a finite field"))
        out.results.append(SuiteResult("census_equivalence", "skipped", "needs an invertible system over a finite field"))

    if report is not None:
        out.results.append(_suite_regression(doc, report, trials, seed, max_states))
    return out


def _first_difference(a, b, path="") -> str | None:
    if type(a) is not type(b):
        return path or "<root>"
    if isinstance(a, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                return f"{path}.{k}"
            diff = _first_difference(a[k], b[k], f"{path}.{k}")
            if diff:
                return diff
        return None
    if isinstance(a, list):
        if len(a) != len(b):
            return f"{path} (length)"
        for i, (x, y) in enumerate(zip(a, b)):
            diff = _first_difference(x, y, f"{path}[{i}]")
            if diff:
                return diff
        return None
    return None if a == b else (path or "<root>")


def _suite_regression(doc: SystemDocument, report: dict, trials: int, seed: int, max_states: int) -> SuiteResult:
    command = report.get("command") if isinstance(report, dict) else None
    try:
        if command == "analyze":
            fresh = analyze(doc, trials, report.get("input", {}).get("seed", seed))
        elif command == "decompose":
            fresh = decompose_report(doc, report.get("input", {}).get("seed", seed), split="eigenspaces" in report)
        elif command == "factors":
            fresh = factors_report(doc, report.get("input", {}).get("seed", seed))
        elif command == "orbits":
            fresh = orbits_report(doc, max_states=max_states)
        else:
            return SuiteResult("regression", "fail", {"path": ".command", "reason": "unknown report kind"})
    except SysrepError as exc:
        return SuiteResult("regression", "fail", {"reason": str(exc)})
    if canonical_json(fresh) == canonical_json(report):
        return SuiteResult("regression", "pass")
    return SuiteResult("regression", "fail", {"path": _first_difference(fresh, report)})
