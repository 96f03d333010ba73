"""Command-line interface: ``twisted <subcommand> [options]``.

Subcommands
-----------
homology           homology of a chain complex, simplicial set or category nerve
verify             check a contraction, a twisting function, a simplicial set or a category
tcp                twisted cartesian product of a base and a group along ρ
tau                the twisting cochain τ^ρ obtained by perturbation
classify-bundles   bundle classes over a base for a finite group
classify-functors  functor classes from a category to a finite group
cover              transition-function classes on a combinatorial cover
wbar               W̄K and WK for a finite group K: homology, universal τ, canonical iso
subdivide          face poset (barycentric subdivision) of a simplicial complex

Common options: ``--ring Z|Z/m``, ``--bound N`` (N ≥ 1), ``--output PATH``
(default stdout) and ``--format json|csv``.  CSV is offered for homology
tables and orbit counts only.

Exit status: 0 success, 1 a verification failed (the report lists
witnesses), 2 bad input, 3 internal error.

Input documents
---------------
Every input is a JSON object with ``"schema": "twisted/v1"`` and a
``"kind"``:

``group``
    ``{"elements": [names], "identity": name, "table": [[names]]}`` where
    ``table[i][j]`` is the product of elements i and j.
``simplicial_group``
    ``{"levels": [group, ...], "faces": {"n": [{name: name}, ...]},
    "degeneracies": {"n": [{name: name}, ...]}}``; level n lists the
    multiplication table of K_n, ``faces[n][i]`` maps K_n → K_(n-1).
``simplicial_set``
    ``{"generators": {"n": [names]}, "faces": {g: [[word, h], ...]}}``: face i
    of generator g is the generator h pulled back along the degeneracy word
    (strictly decreasing indices, e.g. ``[[0], "v"]`` is s_0 v).
``twisting_function``
    ``{"values": {g: element}}`` on nondegenerate simplices of degree ≥ 1;
    degenerate values follow from the axioms.
``category``
    ``{"objects": [...], "morphisms": [{"name", "source", "target"}],
    "identities": {object: morphism}, "composition": [[f, g, fg], ...]}``
    with fg meaning f followed by g.  ``poset`` (``"elements"``,
    ``"relations": [[x, y], ...]`` for x ≤ y) is accepted as shorthand.
``cover``
    ``{"index": [...], "faces": [[i, j, ...], ...]}``: the index sets with
    nonempty intersection, closed under subsets.
``chain_complex``
    ``{"ring", "basis": {"n": [labels]}, "differential": map}``; a map is
    ``{"shift": k, "blocks": {"n": {"shape": [rows, cols], "entries":
    [[i, j, v], ...]}}}`` indexing the ordered bases of degrees n + k and n.
``contraction``
    ``{"small", "big": chain_complex, "inject", "project", "homotopy": map}``.

Reports are ``kind: "report"`` documents holding the tool version, the
sha256 digest of every input, the parameters, the list of checks and the
result.  Output is byte-identical for identical inputs.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import __version__
from .catnerve import (CategoryError, CoverNerve, FiniteCategory, barycentric_subdivision,
                       classify_functors, cover_classification, nerve, principal_object_report)
from .chaincore import Check, TruncationError, VerificationReport, verify_contraction
from .coeffs import CoefficientError, Ring, StructureError, homology
from .groups import FiniteGroup, GroupError, conjugacy_class_count
from .serialize import (InputError, canonical_dumps, cochain_to_json, complex_from_json,
                        contraction_from_json, document, label, read_document)
from .simplicial import (ConstantGroup, GeneratedSimplicialSet, TwistedCartesianProduct,
                         TwistingFunction, bundle_report, canonical_iso_report, chain_complex,
                         classify_bundles, homology_transfer_report, simplicial_group_from_json,
                         transfer, twisting_function_report, validate_simplicial_set, w_constructions)
from .twisting import TwistingError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class Inputs:
    """Loaded documents and their digests, in command-line order."""

    def __init__(self):
        self.digests = {}

    def read(self, role, path, kinds):
        obj, dg = read_document(path, kinds)
        self.digests[role] = {"path": Path(path).name, "digest": dg}
        return obj


def jsonable(x):
    if isinstance(x, dict):
        return {label(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, list):
        return [jsonable(y) for y in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return label(x)


def _group(obj, bound=None):
    try:
        if obj.get("kind") == "group":
            return ConstantGroup(FiniteGroup.from_json(obj), bound)
        return simplicial_group_from_json(obj, bound)
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"bad group document: {exc}") from None


def _finite_group(obj):
    K = _group(obj)
    if not getattr(K, "trivially_simplicial", False):
        raise InputError("this command needs a finite (trivially simplicial) group")
    return K.G if isinstance(K, ConstantGroup) else K.level(0)


def _base(obj):
    try:
        return GeneratedSimplicialSet.from_json(obj)
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"bad simplicial set document: {exc}") from None


def _category(obj):
    try:
        return FiniteCategory.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad category document: {exc}") from None


def _rho(obj, B, K):
    values = obj.get("values")
    if not isinstance(values, dict):
        raise InputError("twisting function needs a \"values\" object")
    out = {}
    for g, v in values.items():
        try:
            n = B.gen_degree(str(g))
        except KeyError:
            raise InputError(f"twisting function names unknown simplex {g!r}") from None
        if n < 1:
            raise InputError(f"twisting function is defined on simplices of degree ≥ 1, got vertex {g!r}")
        level = K.G if isinstance(K, ConstantGroup) else K.level(n - 1)
        out[B.generator(str(g))] = (n - 1, level.element(v))
    missing = [g for n, gs in B.generators.items() if n >= 1 for g in gs if B.generator(g) not in out]
    if missing:
        raise InputError(f"twisting function has no value for {missing[0]!r}")
    return TwistingFunction(B, K, out)


def _bound(args, default=None):
    b = args.bound if args.bound is not None else default
    if b is not None and b < 1:
        raise InputError(f"--bound must be at least 1, got {b}")
    return b


def _homology_rows(C, degrees):
    rows = []
    for n in degrees:
        try:
            h = homology(C, n)
        except TruncationError:
            continue
        rows.append({"degree": n, "group": str(h), "free_rank": h.free_rank, "torsion": list(h.torsion)})
    return rows


def _values_json(rho, bound):
    K = rho.group
    out = {}
    for b, v in rho.on_nondegenerate(bound).items():
        level = K.G if isinstance(K, ConstantGroup) else K.level(v[0])
        out[label(b)] = level.names[v[1]]
    return out


# ---------------------------------------------------------------- subcommands

def cmd_homology(args, inputs):
    obj = inputs.read("input", args.input, {"chain_complex", "simplicial_set", "category", "poset", "group"})
    ring = args.ring
    kind = obj["kind"]
    if kind == "chain_complex":
        C = complex_from_json(obj)
        if str(C.ring) != str(ring) and args.ring_given:
            raise InputError(f"complex is over {C.ring}; --ring {ring} does not apply")
        top = C.module.top
        bound = _bound(args, top)
        degrees = range(C.module.bottom, min(bound, top) + 1)
    else:
        if kind == "simplicial_set":
            X = _base(obj)
        else:
            cat = _category(obj)
            infinite = cat.longest_chain() is None
            if infinite and args.bound is None:
                raise InputError(f"the nerve of {cat.name} is infinite; --bound is required")
            X = nerve(cat, _bound(args) + 1 if infinite else None)
        if X.degree_bound is None:
            bound = _bound(args, X.max_degree)
            C = chain_complex(X, ring)
            degrees = range(min(bound, X.max_degree) + 1)
        else:
            bound = _bound(args, X.degree_bound - 1)
            C = chain_complex(X, ring, min(bound + 1, X.degree_bound))
            degrees = range(bound + 1)
    rows = _homology_rows(C, degrees)
    return VerificationReport("homology"), {"homology": rows}, ("homology", rows)


def cmd_verify(args, inputs):
    bound = _bound(args)
    if args.contraction:
        c = contraction_from_json(inputs.read("contraction", args.contraction, {"contraction"}))
        rep = verify_contraction(c)
        return rep, {"small_rank": len(c.small.module), "big_rank": len(c.big.module)}, None
    if args.category:
        C = _category(inputs.read("category", args.category, {"category", "poset", "group"}))
        rep = principal_object_report(C, bound or (None if C.longest_chain() is not None else 3))
        return rep, {"objects": len(C.objects), "morphisms": len(C.morphisms),
                     "longest_chain": C.longest_chain()}, None
    if not args.base:
        raise InputError("verify needs --contraction, --category or --base")
    B = _base(inputs.read("base", args.base, {"simplicial_set"}))
    bound = bound or B.max_degree
    rep = validate_simplicial_set(B, bound)
    if args.group:
        K = _group(inputs.read("group", args.group, {"group", "simplicial_group"}))
        if args.rho:
            rho = _rho(inputs.read("rho", args.rho, {"twisting_function"}), B, K)
            rep.extend(twisting_function_report(rho, bound))
            if rep.ok:
                rep.extend(bundle_report(TwistedCartesianProduct(B, K, rho), bound))
    return rep, {"base": B.name}, None


def _load_bundle(args, inputs, bound_default=None):
    B = _base(inputs.read("base", args.base, {"simplicial_set"}))
    K = _group(inputs.read("group", args.group, {"group", "simplicial_group"}))
    rho = _rho(inputs.read("rho", args.rho, {"twisting_function"}), B, K)
    bound = _bound(args, bound_default if bound_default is not None else B.max_degree + 1)
    return B, K, rho, bound


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"{args.command} needs --{n}")


def cmd_tcp(args, inputs):
    _require(args, "base", "group", "rho")
    B, K, rho, bound = _load_bundle(args, inputs)
    rep = twisting_function_report(rho, bound)
    result = {"twisting_function": _values_json(rho, bound)}
    if not rep.ok:
        return rep, result, None
    E = TwistedCartesianProduct(B, K, rho)
    rep.extend(bundle_report(E, bound))
    C = chain_complex(E, args.ring, bound)
    rows = _homology_rows(C, range(bound))
    result["nondegenerate_counts"] = [len(E.nondegenerate(n)) for n in range(bound + 1)]
    result["homology"] = rows
    return rep, result, ("homology", rows)


def cmd_tau(args, inputs):
    _require(args, "base", "group", "rho")
    B, K, rho, bound = _load_bundle(args, inputs, 6)
    rep = twisting_function_report(rho, bound)
    result = {"twisting_function": _values_json(rho, bound)}
    if not rep.ok:
        return rep, result, None
    try:
        t = transfer(rho, args.ring, bound)
    except TwistingError as exc:
        rep.checks.append(Check("Dτ + τ∪τ = 0", bound, False, 0, exc.witness))
        return rep, result, None
    rep.checks.append(Check("Dτ + τ∪τ = 0", bound, True, len(t.tau.element.map.columns)))
    rep.extend(t.report())
    rep.extend(homology_transfer_report(t, range(bound)))
    result["tau"] = cochain_to_json(t.tau)
    result["coalgebra_basis"] = {str(n): [label(b) for b in bs] for n, bs in t.coalg.complex.module.basis.items()}
    result["algebra_basis"] = {str(n): [label(b) for b in bs] for n, bs in t.alg.complex.module.basis.items()}
    return rep, result, None


def _classes_rows(classes):
    return [{"class": i, "orbit_size": c.orbit_size} for i, c in enumerate(classes)]


def cmd_classify_bundles(args, inputs):
    _require(args, "base", "group")
    B = _base(inputs.read("base", args.base, {"simplicial_set"}))
    G = _finite_group(inputs.read("group", args.group, {"group", "simplicial_group"}))
    bound = _bound(args, B.max_degree)
    classes = classify_bundles(B, G, bound)
    rep = VerificationReport("bundle classification")
    for c in classes:
        rep.extend(twisting_function_report(c.representative, bound))
    total = sum(c.orbit_size for c in classes)
    result = {"count": len(classes), "twisting_functions": total,
              "classes": [{"orbit_size": c.orbit_size, "representative": _values_json(c.representative, bound)}
                          for c in classes]}
    if B.max_degree == 1 and len(B.nondegenerate(0)) == 1 and len(B.nondegenerate(1)) == 1:
        k = conjugacy_class_count(G)
        rep.checks.append(Check("count = conjugacy classes (circle)", 1, k == len(classes), 1,
                                None if k == len(classes) else {"classes": len(classes), "conjugacy": k}))
    return rep, result, ("orbits", _classes_rows(classes))


def cmd_classify_functors(args, inputs):
    _require(args, "category", "group")
    C = _category(inputs.read("category", args.category, {"category", "poset", "group"}))
    G = _finite_group(inputs.read("group", args.group, {"group", "simplicial_group"}))
    classes = classify_functors(C, G)
    rep = VerificationReport("functor classification")
    total = sum(c.orbit_size for c in classes)
    result = {"count": len(classes), "functors": total, "classes": [c.to_json() for c in classes]}
    return rep, result, ("orbits", _classes_rows(classes))


def cmd_cover(args, inputs):
    _require(args, "cover", "group")
    obj = inputs.read("cover", args.cover, {"cover"})
    try:
        cov = CoverNerve.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad cover document: {exc}") from None
    G = _finite_group(inputs.read("group", args.group, {"group", "simplicial_group"}))
    cc = cover_classification(cov, G)
    result = {"count": len(cc.classes), "classes": cc.to_json()}
    return cc.report, result, ("orbits", _classes_rows(cc.classes))


def cmd_wbar(args, inputs):
    _require(args, "group")
    Kobj = inputs.read("group", args.group, {"group", "simplicial_group"})
    bound = _bound(args, 6)
    K = _group(Kobj, bound)
    Wk, Wb, u = w_constructions(K, bound)
    rows = _homology_rows(chain_complex(Wb, args.ring, bound), range(bound))
    rows_w = _homology_rows(chain_complex(Wk, args.ring, bound), range(bound))
    rep = VerificationReport(f"W constructions of {K.name}")
    trivial = all(r["free_rank"] == (1 if r["degree"] == 0 else 0) and not r["torsion"] for r in rows_w)
    rep.checks.append(Check("H(WK) = H(point)", bound - 1, trivial, len(rows_w)))
    rep.extend(twisting_function_report(u, bound))
    iso_bound = min(bound, args.iso_bound)
    rep.extend(canonical_iso_report(Wk, TwistedCartesianProduct(Wb, K, u), iso_bound))
    result = {"nondegenerate_counts": [len(Wb.nondegenerate(n)) for n in range(bound + 1)],
              "homology_wbar": rows, "homology_w": rows_w}
    if args.universal:
        t = transfer(u, args.ring, bound)
        rep.extend(t.report())
        rep.extend(homology_transfer_report(t, range(bound - 1)))
        result["tau"] = cochain_to_json(t.tau)
        result["homology_twisted_tensor"] = _homology_rows(t.twisted_tensor_product(), range(bound - 1))
    return rep, result, ("homology", rows)


def cmd_subdivide(args, inputs):
    _require(args, "base")
    B = _base(inputs.read("base", args.base, {"simplicial_set"}))
    C, N = barycentric_subdivision(B)
    rows = _homology_rows(chain_complex(N, args.ring), range(N.max_degree + 1))
    rows_b = _homology_rows(chain_complex(B, args.ring), range(B.max_degree + 1))
    rep = VerificationReport(f"subdivision of {B.name}")
    same = [(r["free_rank"], r["torsion"]) for r in rows] == [(r["free_rank"], r["torsion"]) for r in rows_b]
    rep.checks.append(Check("H(subdivision) = H(base)", N.max_degree, same, len(rows)))
    category = C.to_json()
    category["name"] = f"sd {B.name}"
    result = {"category": document("category", category),
              "nondegenerate_counts": [len(N.nondegenerate(n)) for n in range(N.max_degree + 1)],
              "homology": rows}
    return rep, result, ("homology", rows)


COMMANDS = {
    "homology": cmd_homology,
    "verify": cmd_verify,
    "tcp": cmd_tcp,
    "tau": cmd_tau,
    "classify-bundles": cmd_classify_bundles,
    "classify-functors": cmd_classify_functors,
    "cover": cmd_cover,
    "wbar": cmd_wbar,
    "subdivide": cmd_subdivide,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twisted", description="Twisting cochains and principal bundles, computed exactly.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--ring", default=None, help="Z or Z/m (default Z)")
        p.add_argument("--bound", type=int, default=None, help="truncation degree bound (≥ 1)")
        p.add_argument("--output", "-o", default=None, help="report path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "homology":
            p.add_argument("--input", required=True,
                           help="chain complex, simplicial set or category document")
        if name in ("verify", "tcp", "tau", "classify-bundles", "subdivide"):
            p.add_argument("--base")
        if name in ("verify", "tcp", "tau", "classify-bundles", "classify-functors", "cover", "wbar"):
            p.add_argument("--group")
        if name in ("verify", "tcp", "tau"):
            p.add_argument("--rho")
        if name in ("verify", "classify-functors"):
            p.add_argument("--category")
        if name == "verify":
            p.add_argument("--contraction")
        if name == "cover":
            p.add_argument("--cover")
        if name == "wbar":
            p.add_argument("--universal", action="store_true",
                           help="also perturb to the universal twisting cochain")
            p.add_argument("--iso-bound", type=int, default=5, help="degree bound for the W̄×K ≅ WK check")
    return parser


def _csv(table) -> str:
    kind, rows = table
    buf = io.StringIO()
    if kind == "homology":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "group", "free_rank", "torsion"])
        for r in rows:
            w.writerow([r["degree"], r["group"], r["free_rank"], " ".join(map(str, r["torsion"]))])
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", "orbit_size"])
        for r in rows:
            w.writerow([r["class"], r["orbit_size"]])
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    inputs = Inputs()
    try:
        args.ring_given = args.ring is not None
        args.ring = Ring.parse(args.ring or "Z")
        rep, result, table = COMMANDS[args.command](args, inputs)
        if args.format == "csv" and table is None:
            raise InputError(f"{args.command} has no tabular output; use --format json")
    except (InputError, CategoryError, GroupError, CoefficientError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except StructureError as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except (ValueError, TruncationError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - reported as a bug
        print(f"internal error ({type(exc).__name__}): {exc}\n"
              f"this is a bug in twistedbundles {__version__}; please report it with the inputs above",
              file=stderr)
        return EXIT_INTERNAL
    if args.format == "csv":
        text = _csv(table)
    else:
        params = {"ring": str(args.ring), "bound": args.bound}
        body = {"command": args.command, "tool": {"name": "twistedbundles", "version": __version__},
                "inputs": inputs.digests, "parameters": params, "ok": rep.ok,
                "checks": jsonable([c.to_json() for c in rep.checks]), "result": jsonable(result)}
        text = canonical_dumps(document("report", body))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    for line in rep.lines():
        if line.startswith("FAIL"):
            print(line, file=stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
