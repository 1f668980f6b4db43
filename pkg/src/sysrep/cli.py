"""Command-line front end.

Exit codes: 0 success, 1 property failure (verify), 2 invalid input,
3 size guard exceeded, 4 mathematical precondition not met.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import analysis
from .dynamics import DEFAULT_MAX_STATES, HARD_MAX_STATES
from .errors import GuardError, InvalidDocument, MathPreconditionError, SysrepError
from .io import SystemDocument, canonical_json, load_document, validate_report

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_GUARD, EXIT_MATH = 0, 1, 2, 3, 4


def _poly_text(F, coeffs) -> str:
    from .poly import Poly

    return str(Poly(F, [F.convert(c) for c in coeffs]))


def _factor_text(F, pairs) -> str:
    parts = []
    for item in pairs:
        s = f"({_poly_text(F, item['factor'])})"
        if item["multiplicity"] > 1:
            s += f"^{item['multiplicity']}"
        parts.append(s)
    return " ".join(parts) or "1"


def _elem_text(c) -> str:
    if isinstance(c, str):
        return c[:-2] if c.endswith("/1") else c
    return json.dumps(c, separators=(",", ":"))


def _vector_text(v) -> str:
    return " ".join(_elem_text(c) for c in v)


def _rows_text(rows, indent="    ") -> list[str]:
    return [indent + _vector_text(r) for r in rows]


def _census_text(c: dict) -> list[str]:
    lines = [f"  states: {c['states']}   T: {c['T']}"]
    lines += [f"  cycles of length {t}: {n}" for t, n in c["cycles"].items()]
    return lines


def format_text(report: dict, F) -> str:
    cmd = report["command"]
    out = [f"sysrep {cmd} (version {report['version']})"]
    inp = report["input"]
    out.append(f"field: {json.dumps(inp['field'], sort_keys=True)}   group: {json.dumps(inp['group'], sort_keys=True)}")

    if "factors" in report:
        fac = report["factors"]
        for key, label in (("minimal_polynomial", "minimal polynomial"), ("characteristic_polynomial", "characteristic polynomial")):
            out.append(f"{label}: {_poly_text(F, fac[key]['poly'])} = {_factor_text(F, fac[key]['factors'])}")
    if "primary_components" in report:
        out.append("primary components:")
        for c in report["primary_components"]:
            out.append(f"  ({_poly_text(F, c['factor'])})^{c['multiplicity']}: dimension {c['dimension']}")
    if "planar_blocks" in report:
        pb = report["planar_blocks"]
        if isinstance(pb, dict):
            out.append(f"planar blocks: skipped ({pb['skipped']})")
        elif pb:
            out.append("planar blocks:")
            for b in pb:
                extra = f" a={_elem_text(b['a'])} b={_elem_text(b['b'])}" if b["form"] == "rotation" else ""
                out.append(f"  {_poly_text(F, b['factor'])}: {b['form']}{extra}")
    if "invariant_factors" in report:
        inv = report["invariant_factors"]
        out.append("invariant factors: " + " | ".join(_poly_text(F, f) for f in inv["invariant_factors"]))
        out.append("rational canonical form:")
        out += _rows_text(inv["C"])
    if "eigenspaces" in report:
        es = report["eigenspaces"]
        if es["split"]:
            out.append(f"generalized eigenspaces over {json.dumps(es['field'], sort_keys=True)}:")
            for s in es["spaces"]:
                out.append(f"  eigenvalue {_elem_text(s['eigenvalue'])}: multiplicity {s['multiplicity']}, dimension {s['dimension']}")
        else:
            out.append("minimal polynomial does not split; no eigenspace decomposition")
    if report.get("period") is not None:
        per = report["period"]
        if per["finite"]:
            line = f"period T: {per['T']}"
            if "divisibility" in per:
                line += "   (every invariant factor divides x^T - 1: " + (
                    "yes)" if per["divisibility"]["passed"] else "NO)")
            out.append(line)
        else:
            out.append(f"period: infinite ({per['reason']})")
    if report.get("orbit_census") is not None:
        out.append("orbit census:")
        out += _census_text(report["orbit_census"])
    if "census" in report:
        out.append(f"orbit census (enumeration check: {report['enumeration']}):")
        out += _census_text(report["census"])
    if report.get("homomorphism") is not None:
        h = report["homomorphism"]
        out.append(
            f"homomorphism check: {'pass' if h['passed'] else 'FAIL'} "
            f"({h['trials']} pairs, |t| <= {h['range']})"
        )
    if cmd == "simulate":
        for row in report["trajectory"]:
            tag = f" [t mod T = {row['t_mod_T']}]" if "t_mod_T" in row else ""
            out.append(f"t={row['t']}{tag}: " + _vector_text(row["x"]))
    if cmd == "verify":
        for s in report["suites"]:
            out.append(f"  {s['suite']}: {s['status']}")
        out.append("result: " + ("pass" if report["passed"] else "FAIL"))
        if report["counterexample"] is not None:
            out.append("counterexample: " + canonical_json(report["counterexample"]))
    return "\n".join(out) + "\n"


def _parse_x0(text: str, doc: SystemDocument) -> tuple:
    text = text.strip()
    if text.startswith("["):
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidDocument(f"--x0: {exc.msg}") from None
    else:
        values = [v.strip() for v in text.split(",") if v.strip()]
        values = [int(v) if v.lstrip("-").isdigit() else v for v in values]
    n = doc.matrix.nrows
    if len(values) != n:
        raise InvalidDocument(f"--x0: expected {n} entries, got {len(values)}")
    try:
        return tuple(doc.field.convert(v) for v in values)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidDocument(f"--x0: {exc}") from None


def simulate_report(doc: SystemDocument, x0: tuple, steps: int) -> dict:
    rep = doc.representation()
    F = doc.field
    T = None
    if doc.group.kind == "cyclic":
        T = doc.group.T
    times = range(0, steps + 1) if steps >= 0 else range(0, steps - 1, -1)
    if steps < 0:
        rep.rho(-1)  # raises for a semigroup before any output
    rows = []
    step = doc.matrix if steps >= 0 else rep.inverse_generator
    x = x0
    for t in times:
        row = {"t": t, "x": [F.encode(c) for c in x]}
        if T is not None:
            row["t_mod_T"] = t % T
        rows.append(row)
        x = step.apply(x)
    return {
        "command": "simulate",
        "version": __version__,
        "input": doc.echo(),
        "x0": [F.encode(c) for c in x0],
        "steps": steps,
        "trajectory": rows,
    }


def _max_states(value: int) -> int:
    if value < 1:
        raise argparse.ArgumentTypeError("--max-states must be positive")
    if value > HARD_MAX_STATES:
        raise argparse.ArgumentTypeError(f"--max-states is capped at {HARD_MAX_STATES}")
    return value


def _positive_states(text: str) -> int:
    try:
        return _max_states(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sysrep",
        description="Analyze x_{t+1} = A x_t as a representation of a time group, in exact arithmetic.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("document", type=Path, help="JSON system document")
    common.add_argument("--json", action="store_true", help="emit canonical JSON instead of text")
    common.add_argument("--seed", type=int, default=None, help="override the document seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="run the full pipeline")
    p.add_argument("--trials", type=int, default=256, help="homomorphism check pairs")

    p = sub.add_parser("simulate", parents=[common], help="print the trajectory of x0")
    p.add_argument("--x0", required=True, help="initial state, CSV or JSON array")
    p.add_argument("--steps", type=int, default=10, help="number of steps (negative runs backwards)")

    p = sub.add_parser("verify", parents=[common], help="run the property suites")
    p.add_argument("--trials", type=int, default=256)
    p.add_argument("--max-states", type=_positive_states, default=DEFAULT_MAX_STATES)
    p.add_argument("--report", type=Path, default=None, help="regression: compare against a saved JSON report")

    sub.add_parser("factors", parents=[common], help="factor the minimal and characteristic polynomials")

    p = sub.add_parser("decompose", parents=[common], help="primary and invariant-factor decompositions")
    p.add_argument("--split", action="store_true", help="also give generalized eigenspaces over a splitting field")

    p = sub.add_parser("orbits", parents=[common], help="orbit census over a finite field")
    p.add_argument("--max-states", type=_positive_states, default=DEFAULT_MAX_STATES)
    p.add_argument("--workers", type=int, default=1, help="threads for the enumeration check")
    p.add_argument("--enumerate", action="store_true", help="fail if the enumeration check cannot run")
    return parser


def _load_report(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise InvalidDocument(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError:
        # An unreadable saved report is a regression failure, not bad input.
        return {"command": None}


def run(args) -> tuple[dict, int]:
    doc = load_document(args.document)
    seed = doc.seed if args.seed is None else args.seed
    if args.command == "analyze":
        return analysis.analyze(doc, args.trials, seed), EXIT_OK
    if args.command == "factors":
        return analysis.factors_report(doc, seed), EXIT_OK
    if args.command == "decompose":
        return analysis.decompose_report(doc, seed, split=args.split), EXIT_OK
    if args.command == "orbits":
        report = analysis.orbits_report(doc, args.max_states, max(1, args.workers), args.enumerate)
        return report, EXIT_OK
    if args.command == "simulate":
        return simulate_report(doc, _parse_x0(args.x0, doc), args.steps), EXIT_OK
    if args.command == "verify":
        saved = _load_report(args.report) if args.report else None
        ver = analysis.run_verification(doc, args.trials, seed, args.max_states, saved)
        report = {"command": "verify", "version": __version__, "input": doc.echo() | {"seed": seed}}
        report |= ver.to_json()
        return report, EXIT_OK if ver.passed else EXIT_FAIL
    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = run(args)
    except InvalidDocument as exc:
        print(f"sysrep: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GuardError as exc:
        print(f"sysrep: guard {exc.guard} exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except MathPreconditionError as exc:
        print(f"sysrep: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    except SysrepError as exc:
        print(f"sysrep: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    validate_report(report)
    if args.json:
        sys.stdout.write(canonical_json(report) + "\n")
    else:
        sys.stdout.write(format_text(report, load_document(args.document).field))
    return code


if __name__ == "__main__":
    sys.exit(main())
