"""System documents in, canonical JSON out."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import InvalidDocument, SysrepError
from .fields import Field, field_from_descriptor
from .matrix import Matrix
from .representation import Representation, TimeGroup


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("sysrep").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def canonical_json(obj) -> str:
    """Sorted keys, no insignificant whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


@dataclass
class SystemDocument:
    field: Field
    group: TimeGroup
    matrix: Matrix
    seed: int = 0

    def representation(self) -> Representation:
        return Representation(self.group, self.matrix)

    def echo(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "group": self.group.to_json(),
            "matrix": self.matrix.encode(),
            "seed": self.seed,
        }


def _describe_path(err: jsonschema.ValidationError) -> str:
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return path.lstrip(".") or "<document>"


def parse_document(obj) -> SystemDocument:
    """Validate a decoded JSON object and build the system it describes."""
    validator = jsonschema.Draft202012Validator(load_schema("system"))
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise InvalidDocument(f"{_describe_path(err)}: {err.message}")
    F = field_from_descriptor(obj["field"])
    rows = obj["matrix"]
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InvalidDocument(f"matrix[{i}]: expected {n} entries for a square matrix, got {len(row)}")
    entries = []
    for i, row in enumerate(rows):
        vals = []
        for j, c in enumerate(row):
            try:
                vals.append(F.convert(c))
            except (InvalidDocument, ValueError, ZeroDivisionError) as exc:
                raise InvalidDocument(f"matrix[{i}][{j}]: {exc}") from None
        entries.append(vals)
    group_obj = obj.get("group", {"kind": "integers"})
    try:
        if group_obj["kind"] == "cyclic":
            if "T" not in group_obj:
                raise InvalidDocument("group.T: required for a cyclic group")
            group = TimeGroup.cyclic(group_obj["T"])
        else:
            if "T" in group_obj:
                raise InvalidDocument(f"group.T: not allowed for {group_obj['kind']}")
            group = TimeGroup(group_obj["kind"])
    except SysrepError:
        raise
    except ValueError as exc:
        raise InvalidDocument(f"group: {exc}") from None
    return SystemDocument(F, group, Matrix(F, entries, raw=True), obj.get("seed", 0))


def load_document(path: str | Path) -> SystemDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidDocument(f"{path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidDocument(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return parse_document(obj)
    except InvalidDocument as exc:
        raise InvalidDocument(f"{path}: {exc}") from None


def validate_report(obj) -> None:
    jsonschema.validate(obj, load_schema("report"), cls=jsonschema.Draft202012Validator)
