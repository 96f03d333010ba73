"""JSON interchange in the ``twisted/v1`` schema.

Every document carries ``"schema": "twisted/v1"`` and a ``"kind"``.  Basis
labels are written as strings (see :func:`label`); matrices are written
degree by degree as sparse triplets ``[row, column, value]`` indexing the
ordered bases.  The shapes are documented in :mod:`twistedbundles.cli`.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .chaincore import ChainComplex, Contraction, GradedMap, GradedModule
from .coeffs import Ring, StructureError

SCHEMA = "twisted/v1"


class InputError(ValueError):
    """A document that does not parse against the schema."""


def label(x) -> str:
    """Stable string form of a basis label or simplex."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, tuple) and type(x) is tuple:
        return "(" + ", ".join(label(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ", ".join(sorted(label(y) for y in x)) + "}"
    return repr(x)


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def read_document(path, kinds=None):
    """Load a schema document; returns (object, digest)."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise InputError(f"{path}: top level must be an object")
    if obj.get("schema") != SCHEMA:
        raise InputError(f"{path}: expected \"schema\": \"{SCHEMA}\", got {obj.get('schema')!r}")
    if kinds is not None and obj.get("kind") not in kinds:
        raise InputError(f"{path}: expected kind in {sorted(kinds)}, got {obj.get('kind')!r}")
    return obj, digest(data)


def document(kind: str, body: dict) -> dict:
    out = {"schema": SCHEMA, "kind": kind}
    out.update(body)
    return out


def write_document(obj, path):
    Path(path).write_text(canonical_dumps(obj), encoding="utf-8")


# ---------------------------------------------------------------- linear data

def module_to_json(m: GradedModule) -> dict:
    return {"ring": str(m.ring), "degree_bound": m.degree_bound,
            "basis": {str(n): [label(b) for b in m.basis[n]] for n in m.degrees}}


def module_from_json(obj) -> GradedModule:
    try:
        ring = Ring.from_json(obj.get("ring", "Z"))
        basis = {int(n): [str(b) for b in bs] for n, bs in obj["basis"].items()}
        bound = obj.get("degree_bound")
        return GradedModule(ring, basis, None if bound is None else int(bound))
    except (KeyError, TypeError, ValueError, StructureError) as exc:
        raise InputError(f"bad graded module: {exc}") from None


def map_to_json(f: GradedMap) -> dict:
    src, tgt = f.source.module, f.target.module
    blocks = {}
    for n in src.degrees:
        cols = src.basis[n]
        rows = tgt.basis.get(n + f.shift, ())
        index = {label(b): i for i, b in enumerate(rows)}
        entries, undefined = [], []
        for j, b in enumerate(cols):
            if not f.defined_on(b):
                undefined.append(j)
                continue
            for y, v in f(b).items():
                entries.append([index[label(y)], j, v])
        entries.sort()
        block = {"shape": [len(rows), len(cols)], "entries": entries}
        if undefined:
            block["undefined"] = undefined
        blocks[str(n)] = block
    return {"shift": f.shift, "blocks": blocks}


def map_from_json(obj, source, target) -> GradedMap:
    src, tgt = source.module, target.module
    try:
        shift = int(obj["shift"])
        cols = {}
        for n_text, block in obj["blocks"].items():
            n = int(n_text)
            col_labels = src.labels(n)
            row_labels = tgt.basis.get(n + shift, ())
            if list(block["shape"]) != [len(row_labels), len(col_labels)]:
                raise InputError(f"block {n} has shape {block['shape']}, expected "
                                 f"{[len(row_labels), len(col_labels)]}")
            skip = set(block.get("undefined", ()))
            for j, b in enumerate(col_labels):
                if j not in skip:
                    cols[b] = {}
            for i, j, v in block["entries"]:
                if i >= len(row_labels) or j >= len(col_labels) or j in skip:
                    raise InputError(f"entry {[i, j, v]} out of range in block {n}")
                c = cols[col_labels[j]]
                c[row_labels[i]] = c.get(row_labels[i], 0) + int(v)
        ring = tgt.ring
        cols = {b: {y: ring.reduce(v) for y, v in c.items() if ring.reduce(v)} for b, c in cols.items()}
        return GradedMap(source, target, shift, cols)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graded map: {exc}") from None


def complex_to_json(C: ChainComplex) -> dict:
    out = module_to_json(C.module)
    out["differential"] = map_to_json(C.differential)
    if C.filtration is not None:
        out["filtration"] = {label(b): v for b, v in C.filtration.items()}
    return out


def complex_from_json(obj) -> ChainComplex:
    mod = module_from_json(obj)
    d = map_from_json(obj["differential"], mod, mod) if "differential" in obj else None
    filt = obj.get("filtration")
    try:
        return ChainComplex(mod, d, filt)
    except (ValueError, StructureError) as exc:
        raise InputError(f"bad chain complex: {exc}") from None


def contraction_to_json(c: Contraction) -> dict:
    return {"small": complex_to_json(c.small), "big": complex_to_json(c.big),
            "inject": map_to_json(c.inject), "project": map_to_json(c.project),
            "homotopy": map_to_json(c.homotopy)}


def contraction_from_json(obj) -> Contraction:
    try:
        small = complex_from_json(obj["small"])
        big = complex_from_json(obj["big"])
        return Contraction(small, big, map_from_json(obj["inject"], small, big),
                           map_from_json(obj["project"], big, small),
                           map_from_json(obj["homotopy"], big, big))
    except KeyError as exc:
        raise InputError(f"contraction lacks {exc.args[0]!r}") from None
    except ValueError as exc:
        raise InputError(f"bad contraction: {exc}") from None


def cochain_to_json(t) -> dict:
    """A twisting cochain or homotopy: its blocks plus its flags."""
    out = map_to_json(t.element.map)
    out["augmented"] = t.augmented
    out["coaugmented"] = t.coaugmented
    return out
