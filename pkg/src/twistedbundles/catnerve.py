"""Finite categories, their nerves, functors to groups and transition functions.

Composition is diagrammatic: for f: a → b and g: b → c the composite is
written fg: a → c, and a p-simplex of the nerve is a composable chain
[x_0|...|x_(p-1)] starting at an object.  Faces and degeneracies:

    ∂_0 drops x_0, ∂_p drops x_(p-1), ∂_j composes x_(j-1)x_j,
    s_j inserts an identity at the j-th vertex.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Mapping, NamedTuple

from .chaincore import Check, TruncationError, VerificationReport
from .coeffs import StructureError
from .groups import FiniteGroup
from .simplicial.bundles import (GroupValuedMap, TwistedCartesianProduct, TwistingFunction,
                                 check_twisting_function, theta_act)
from .simplicial.groups import ConstantGroup
from .simplicial.sets import GeneratedSimplicialSet, SimplicialError, SimplicialSet, validate_simplicial_set


class CategoryError(StructureError):
    pass


def _name(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "{" + ",".join(_name(y) for y in x) + "}"
    return str(x)


# ---------------------------------------------------------------- categories

class FiniteCategory:
    """Objects, morphisms with source and target, identities and a full
    composition table on composable pairs."""

    def __init__(self, objects, morphisms: Mapping, identities: Mapping, composition: Mapping,
                 name="C", check=True):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.ends = {m: tuple(st) for m, st in morphisms.items()}
        self.identities = dict(identities)
        self.composition = dict(composition)
        self.name = name
        self.group = None
        self._outgoing = {o: [] for o in self.objects}
        for m in self.morphisms:
            self._outgoing[self.source(m)].append(m)
        if check:
            self.validate()

    def source(self, m):
        return self.ends[m][0]

    def target(self, m):
        return self.ends[m][1]

    def identity(self, obj):
        return self.identities[obj]

    def is_identity(self, m):
        return self.identities.get(self.source(m)) == m

    def compose(self, f, g):
        """fg (f first, then g)"""
        try:
            return self.composition[f, g]
        except KeyError:
            raise CategoryError(f"{f!r} and {g!r} are not composable") from None

    def outgoing(self, obj):
        return self._outgoing[obj]

    def validate(self):
        obs = set(self.objects)
        for m, (s, t) in self.ends.items():
            if s not in obs or t not in obs:
                raise CategoryError(f"morphism {m!r} has an unknown end", witness=m)
        for o in self.objects:
            i = self.identities.get(o)
            if i is None or self.ends.get(i) != (o, o):
                raise CategoryError(f"object {o!r} lacks an identity", witness=o)
        for f in self.morphisms:
            for g in self.outgoing(self.target(f)):
                h = self.composition.get((f, g))
                if h is None:
                    raise CategoryError(f"composite of {f!r} and {g!r} missing", witness=(f, g))
                if self.ends[h] != (self.source(f), self.target(g)):
                    raise CategoryError(f"composite of {f!r} and {g!r} has wrong ends", witness=(f, g))
        for (f, g) in self.composition:
            if self.target(f) != self.source(g):
                raise CategoryError(f"composition table lists non-composable pair ({f!r}, {g!r})")
        for f in self.morphisms:
            if self.compose(self.identity(self.source(f)), f) != f or \
                    self.compose(f, self.identity(self.target(f))) != f:
                raise CategoryError(f"identity law fails at {f!r}", witness=f)
        for f in self.morphisms:
            for g in self.outgoing(self.target(f)):
                fg = self.compose(f, g)
                for h in self.outgoing(self.target(g)):
                    if self.compose(fg, h) != self.compose(f, self.compose(g, h)):
                        raise CategoryError(f"associativity fails at ({f!r}, {g!r}, {h!r})", witness=(f, g, h))

    def longest_chain(self):
        """Length of the longest chain of non-identity morphisms, or None if unbounded."""
        memo, active = {}, set()

        def depth(o):
            if o in memo:
                return memo[o]
            if o in active:
                return None
            active.add(o)
            best = 0
            for m in self.outgoing(o):
                if self.is_identity(m):
                    continue
                d = depth(self.target(m))
                if d is None:
                    return None
                best = max(best, d + 1)
            active.discard(o)
            memo[o] = best
            return best

        out = 0
        for o in self.objects:
            d = depth(o)
            if d is None:
                return None
            out = max(out, d)
        return out

    def generating_morphisms(self):
        """Non-identity morphisms, chosen greedily, whose composites give all morphisms.

        Returns the generators and a word over them for every morphism.
        """
        words = {self.identity(o): () for o in self.objects}
        gens = []

        def close():
            changed = True
            while changed:
                changed = False
                for f, wf in list(words.items()):
                    for g in gens:
                        if self.target(f) != self.source(g):
                            continue
                        h = self.compose(f, g)
                        if h not in words:
                            words[h] = wf + (g,)
                            changed = True

        # indecomposable morphisms first, so composites are reached by words
        composite = {h for (f, g), h in self.composition.items()
                     if not self.is_identity(f) and not self.is_identity(g)}

        def key(m):
            return (self.is_identity(m), m in composite, str(m))

        for m in sorted(self.morphisms, key=key):
            if m not in words:
                gens.append(m)
                words[m] = (m,)
                close()
        return gens, words

    # constructors
    @classmethod
    def from_poset(cls, elements, relations, name="P"):
        """x → y whenever x ≤ y, from generating relations (x, y)."""
        elements = list(elements)
        leq = {x: {x} for x in elements}
        for x, y in relations:
            leq[x].add(y)
        changed = True
        while changed:
            changed = False
            for x in elements:
                new = set().union(*(leq[y] for y in leq[x]))
                if new != leq[x]:
                    leq[x] = new
                    changed = True
        for x in elements:
            for y in leq[x]:
                if y != x and x in leq[y]:
                    raise CategoryError(f"relations force {x!r} ≤ {y!r} ≤ {x!r}; not a partial order")
        morph = {(x, y): (x, y) for x in elements for y in elements if y in leq[x]}
        ident = {x: (x, x) for x in elements}
        comp = {((x, y), (y, z)): (x, z) for (x, y) in morph for z in elements if (y, z) in morph}
        cat = cls(elements, morph, ident, comp, name)
        cat.poset = True
        return cat

    @classmethod
    def from_group(cls, G: FiniteGroup):
        obj = "*"
        morph = {g: (obj, obj) for g in G.names}
        comp = {(a, b): G.names[G.mul(G.element(a), G.element(b))] for a in G.names for b in G.names}
        cat = cls([obj], morph, {obj: G.names[G.identity]}, comp, G.name)
        cat.group = G
        return cat

    @classmethod
    def discrete(cls, objects, name="D"):
        objects = list(objects)
        return cls.from_poset(objects, [], name)

    def to_json(self):
        return {
            "kind": "category",
            "name": self.name,
            "objects": [_name(o) for o in self.objects],
            "morphisms": [{"name": _name(m), "source": _name(self.source(m)), "target": _name(self.target(m))}
                          for m in self.morphisms],
            "identities": {_name(o): _name(self.identity(o)) for o in self.objects},
            "composition": sorted([_name(f), _name(g), _name(h)] for (f, g), h in self.composition.items()),
        }

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind", "category")
        if kind == "poset":
            return cls.from_poset([str(x) for x in obj["elements"]],
                                  [(str(x), str(y)) for x, y in obj.get("relations", [])], obj.get("name", "P"))
        if kind == "group":
            return cls.from_group(FiniteGroup.from_json(obj["group"] if "group" in obj else obj))
        morph = {str(m["name"]): (str(m["source"]), str(m["target"])) for m in obj["morphisms"]}
        comp = {}
        for f, g, h in obj["composition"]:
            comp[str(f), str(g)] = str(h)
        return cls([str(o) for o in obj["objects"]], morph,
                   {str(k): str(v) for k, v in obj["identities"].items()}, comp, obj.get("name", "C"))


# ---------------------------------------------------------------- nerves

class Chain(NamedTuple):
    start: object
    arrows: tuple

    def __repr__(self):
        if not self.arrows:
            return f"[{_name(self.start)}]"
        return "[" + "|".join(_name(a) for a in self.arrows) + "]"


class Nerve(SimplicialSet):
    def __init__(self, C: FiniteCategory, bound: int | None = None):
        self.C = C
        self.name = f"N{C.name}"
        top = C.longest_chain()
        if top is None:
            if bound is None:
                raise TruncationError(f"the nerve of {C.name} is infinite; a degree bound is required")
            self.degree_bound = bound
        else:
            self.degree_bound = None
            self.max_degree = top

    def vertex_of(self, x, k):
        if k == 0:
            return x.start
        return self.C.target(x.arrows[k - 1])

    def _chains(self, n, skip_identities):
        C = self.C
        out = []

        def extend(start, cur, arrows):
            if len(arrows) == n:
                out.append(Chain(start, tuple(arrows)))
                return
            for m in C.outgoing(cur):
                if skip_identities and C.is_identity(m):
                    continue
                arrows.append(m)
                extend(start, C.target(m), arrows)
                arrows.pop()

        for o in C.objects:
            extend(o, o, [])
        return out

    def simplices(self, n):
        self.check_degree(n)
        return self._chains(n, False)

    def nondegenerate(self, n):
        self.check_degree(n)
        cache = self.__dict__.setdefault("_nondeg_cache", {})
        if n not in cache:
            cache[n] = self._chains(n, True)
        return cache[n]

    def degree(self, x):
        return len(x.arrows)

    def face(self, i, x):
        C = self.C
        a = x.arrows
        p = len(a)
        if p == 0 or i > p:
            raise SimplicialError(f"face {i} of a {p}-simplex")
        if i == 0:
            return Chain(C.target(a[0]), a[1:])
        if i == p:
            return Chain(x.start, a[:-1])
        return Chain(x.start, a[:i - 1] + (C.compose(a[i - 1], a[i]),) + a[i + 1:])

    def degeneracy(self, j, x):
        v = self.vertex_of(x, j)
        return Chain(x.start, x.arrows[:j] + (self.C.identity(v),) + x.arrows[j:])

    def degeneracy_indices(self, x):
        return frozenset(j for j, m in enumerate(x.arrows) if self.C.is_identity(m))

    def vertex(self, k, x):
        return Chain(self.vertex_of(x, k), ())


def nerve(C: FiniteCategory, bound: int | None = None) -> Nerve:
    return Nerve(C, bound)


def _nerve_bound(N: Nerve, bound=None):
    if bound is not None:
        return bound
    if N.degree_bound is not None:
        return N.degree_bound
    return N.max_degree + 1


class UniversalTwist:
    """ρ_p[x_0|...|x_(p-1)] = x_(p-1)"""

    def __init__(self, N: Nerve):
        self.nerve = N

    def __call__(self, b):
        if not b.arrows:
            raise SimplicialError("ρ is defined on simplices of degree ≥ 1")
        return b.arrows[-1]


def universal_twist_report(N: Nerve, bound: int | None = None) -> VerificationReport:
    """ρ(∂_p b)ρ(b) = ρ(∂_(p-1) b) for p ≥ 2 and ρ(s_p b) = Id_(t(ρ(b)))."""
    bound = _nerve_bound(N, bound)
    rho = UniversalTwist(N)
    C = N.C
    rep = VerificationReport(f"universal twisting function of {C.name}")
    for p in range(1, bound + 1):
        bad1 = bad2 = None
        xs = N.simplices(p)
        for b in xs:
            if p >= 2 and C.compose(rho(N.face(p, b)), rho(b)) != rho(N.face(p - 1, b)) and bad1 is None:
                bad1 = {"simplex": b}
            if p < bound and rho(N.degeneracy(p, b)) != C.identity(C.target(rho(b))) and bad2 is None:
                bad2 = {"simplex": b}
        if p >= 2:
            rep.checks.append(Check("ρ(∂p b)ρ(b) = ρ(∂(p-1) b)", p, bad1 is None, len(xs), bad1))
        if p < bound:
            rep.checks.append(Check("ρ(sp b) = Id", p, bad2 is None, len(xs), bad2))
    return rep


class PrincipalTwistedObject(SimplicialSet):
    """N(C) ×_O Mor: simplices (b, x) with x leaving the last vertex of b,
    untwisted except ∂_p(b, x) = (∂_p b, x_(p-1)x)."""

    def __init__(self, N: Nerve):
        self.N = N
        self.C = N.C
        self.name = f"{N.name}×Mor"
        self.degree_bound = N.degree_bound

    def simplices(self, n):
        C = self.C
        return [(b, x) for b in self.N.simplices(n) for x in C.outgoing(self.N.vertex_of(b, n))]

    def degree(self, s):
        return self.N.degree(s[0])

    def face(self, i, s):
        b, x = s
        p = self.N.degree(b)
        if i < p:
            return (self.N.face(i, b), x)
        return (self.N.face(p, b), self.C.compose(b.arrows[-1], x))

    def degeneracy(self, j, s):
        return (self.N.degeneracy(j, s[0]), s[1])

    def degeneracy_indices(self, s):
        return self.N.degeneracy_indices(s[0])


class PathNerve(SimplicialSet):
    """N(𝒫C): p-simplices are (p+1)-tuples of morphisms; faces delete and
    degeneracies repeat entries."""

    def __init__(self, C: FiniteCategory, bound: int):
        self.C = C
        self.degree_bound = bound
        self.name = f"P{C.name}"

    def simplices(self, n):
        self.check_degree(n)
        return list(product(self.C.morphisms, repeat=n + 1))

    def degree(self, y):
        return len(y) - 1

    def face(self, i, y):
        return y[:i] + y[i + 1:]

    def degeneracy(self, j, y):
        return y[:j + 1] + y[j:]

    def degeneracy_indices(self, y):
        return frozenset(j for j in range(len(y) - 1) if y[j] == y[j + 1])


def to_path_nerve(C: FiniteCategory, s):
    """[x_0|...|x_(p-1)]x ↦ (x_0⋯x_(p-1)x, x_1⋯x_(p-1)x, ..., x)"""
    b, x = s
    out = [x]
    for a in reversed(b.arrows):
        out.append(C.compose(a, out[-1]))
    return tuple(reversed(out))


def from_path_nerve(C: FiniteCategory, y):
    """Group case: (y_0, ..., y_p) ↦ [y_0y_1⁻¹|...|y_(p-1)y_p⁻¹]y_p"""
    G = C.group
    if G is None:
        raise CategoryError("the inverse map exists for groups only")
    el = [G.element(v) for v in y]
    arrows = tuple(G.names[G.mul(a, G.inv(b))] for a, b in zip(el, el[1:]))
    return (Chain("*", arrows), y[-1])


def principal_twisted_object(C: FiniteCategory, bound: int | None = None):
    N = nerve(C, bound)
    return PrincipalTwistedObject(N), UniversalTwist(N)


def principal_object_report(C: FiniteCategory, bound: int | None = None) -> VerificationReport:
    """Simplicial identities on N(C)×Mor, the universal twist identities, and
    that the path-nerve map and the canonical projection are simplicial.  For
    groups also that the inverse map is a two-sided inverse and that both
    maps are equivariant."""
    E, _ = principal_twisted_object(C, bound)
    N = E.N
    bound = _nerve_bound(N, bound)
    rep = validate_simplicial_set(E, bound)
    rep.extend(universal_twist_report(N, bound))
    P = PathNerve(C, bound + 1)
    for n in range(bound + 1):
        xs = E.simplices(n)
        bad_w = bad_pr = bad_inv = bad_eq = None
        for s in xs:
            y = to_path_nerve(C, s)
            for i in range(n + 1 if n else 0):
                if to_path_nerve(C, E.face(i, s)) != P.face(i, y) and bad_w is None:
                    bad_w = {"simplex": s, "face": i}
                if E.face(i, s)[0] != N.face(i, s[0]) and bad_pr is None:
                    bad_pr = {"simplex": s, "face": i}
            for j in range(n + 1):
                if to_path_nerve(C, E.degeneracy(j, s)) != P.degeneracy(j, y) and bad_w is None:
                    bad_w = {"simplex": s, "degeneracy": j}
            if C.group is not None:
                G = C.group
                if from_path_nerve(C, y) != s and bad_inv is None:
                    bad_inv = {"simplex": s}
                for g in G.names:
                    moved = (s[0], C.compose(s[1], g))
                    diag = tuple(C.compose(v, g) for v in y)
                    if to_path_nerve(C, moved) != diag and bad_eq is None:
                        bad_eq = {"simplex": s, "g": g}
        rep.checks.append(Check("path-nerve map simplicial", n, bad_w is None, len(xs), bad_w))
        rep.checks.append(Check("canonical projection simplicial", n, bad_pr is None, len(xs), bad_pr))
        if C.group is not None:
            ys = P.simplices(n)
            back = all(to_path_nerve(C, from_path_nerve(C, y)) == y for y in ys)
            rep.checks.append(Check("inverse ∘ map = Id", n, bad_inv is None, len(xs), bad_inv))
            rep.checks.append(Check("map ∘ inverse = Id", n, back, len(ys)))
            rep.checks.append(Check("G-equivariant", n, bad_eq is None, len(xs), bad_eq))
    return rep


# ---------------------------------------------------------------- functors to groups

class FunctorToGroup:
    def __init__(self, category: FiniteCategory, group: FiniteGroup, on_morphisms: Mapping, check=True):
        self.category = category
        self.group = group
        self.values = {m: group.element(g) for m, g in on_morphisms.items()}
        if check:
            self.validate()

    def __call__(self, m) -> int:
        return self.values[m]

    def validate(self):
        C, G = self.category, self.group
        missing = [m for m in C.morphisms if m not in self.values]
        if missing:
            raise CategoryError(f"functor undefined on {missing[0]!r}", witness=missing[0])
        for o in C.objects:
            if self.values[C.identity(o)] != G.identity:
                raise CategoryError(f"F(Id_{_name(o)}) != e", witness=o)
        for (f, g), h in C.composition.items():
            if G.mul(self.values[f], self.values[g]) != self.values[h]:
                raise CategoryError(f"F({_name(f)}{_name(g)}) != F({_name(f)})F({_name(g)})", witness=(f, g))
        return self

    def key(self):
        return tuple(self.values[m] for m in self.category.morphisms)

    def act(self, phi: Mapping) -> "FunctorToGroup":
        """(Φ·F)(f) = Φ(s f)F(f)Φ(t f)⁻¹"""
        C, G = self.category, self.group
        e = G.identity
        vals = {m: G.mul(G.mul(phi.get(C.source(m), e), v), G.inv(phi.get(C.target(m), e)))
                for m, v in self.values.items()}
        return FunctorToGroup(C, G, vals, check=False)

    def to_json(self):
        return {"kind": "functor", "values": {_name(m): self.group.names[v] for m, v in self.values.items()}}

    @classmethod
    def from_json(cls, C: FiniteCategory, G: FiniteGroup, obj):
        names = {_name(m): m for m in C.morphisms}
        vals = obj.get("values", obj)
        try:
            table = {names[k]: v for k, v in vals.items()}
        except KeyError as exc:
            raise CategoryError(f"functor names unknown morphism {exc.args[0]!r}") from None
        gens, words = C.generating_morphisms()
        for m in C.morphisms:
            if m not in table:
                if not all(g in table for g in words[m]):
                    raise CategoryError(f"functor value for {_name(m)!r} not determined")
                table[m] = G.names[G.prod(*(G.element(table[g]) for g in words[m]))]
        return cls(C, G, table)


def functor_twisting_function(F: FunctorToGroup, N: Nerve | None = None) -> TwistingFunction:
    """ρ(NF)[x_0|...|x_(p-1)] = F(x_(p-1))"""
    N = N if N is not None else nerve(F.category)
    K = ConstantGroup(F.group)
    return TwistingFunction(N, K, rule=lambda b: (len(b.arrows) - 1, F(b.arrows[-1])))


def functor_bundle(F: FunctorToGroup, bound: int | None = None):
    """The twisting function ρ(NF) and the bundle N(C) ×_ρ(NF) G."""
    N = nerve(F.category, bound)
    rho = functor_twisting_function(F, N)
    check_twisting_function(rho, _nerve_bound(N, bound))
    return rho, TwistedCartesianProduct(N, rho.group, rho)


def pullback_category(F: FunctorToGroup) -> FiniteCategory:
    """Objects (c, g); a morphism (f, g): (s f, F(f)g) → (t f, g)."""
    C, G = F.category, F.group
    objs = [(c, g) for c in C.objects for g in G.elements]
    morph = {(f, g): ((C.source(f), G.mul(F(f), g)), (C.target(f), g)) for f in C.morphisms for g in G.elements}
    ident = {(c, g): (C.identity(c), g) for c, g in objs}
    comp = {}
    for (f1, g1), (_, tgt) in morph.items():
        for f2 in C.outgoing(C.target(f1)):
            for g2 in G.elements:
                if morph[(f2, g2)][0] == tgt:
                    comp[(f1, g1), (f2, g2)] = (C.compose(f1, f2), g2)
    return FiniteCategory(objs, morph, ident, comp, f"P({C.name},F)")


def pullback_comparison(F: FunctorToGroup, bound: int | None = None) -> VerificationReport:
    """N(P_(C,F)) ≅ N(C)×_ρ(NF) G via (chain of (f_i, g_i)) ↦ (chain of f_i, last G-part)."""
    rho, E = functor_bundle(F, bound)
    NP = nerve(pullback_category(F), bound)
    N = E.base
    bound = _nerve_bound(N, bound)
    rep = validate_simplicial_set(E, bound)

    def iso(y):
        p = len(y.arrows)
        c0, g = y.start
        arrows = tuple(f for f, _ in y.arrows)
        last = y.arrows[-1][1] if p else g
        return (Chain(c0, arrows), (p, last))

    for n in range(bound + 1):
        ys = NP.simplices(n)
        xs = E.simplices(n)
        images = [iso(y) for y in ys]
        bij = len(ys) == len(xs) and set(images) == set(xs)
        rep.checks.append(Check("levelwise bijection", n, bij, len(ys),
                                None if bij else {"pullback": len(ys), "bundle": len(xs)}))
        bad = None
        for y, fy in zip(ys, images):
            for i in range(n + 1 if n else 0):
                if iso(NP.face(i, y)) != E.face(i, fy) and bad is None:
                    bad = {"simplex": y, "face": i}
            for j in range(n + 1):
                if n < bound and iso(NP.degeneracy(j, y)) != E.degeneracy(j, fy) and bad is None:
                    bad = {"simplex": y, "degeneracy": j}
        rep.checks.append(Check("iso commutes with faces and degeneracies", n, bad is None, len(ys), bad))
    return rep


@dataclass
class FunctorClass:
    representative: FunctorToGroup
    orbit_size: int

    def to_json(self):
        return {"orbit_size": self.orbit_size, "representative": self.representative.to_json()["values"]}


def enumerate_functors(C: FiniteCategory, G: FiniteGroup) -> list:
    """All functors C → G: choose values on generating morphisms, extend along
    words, keep the assignments that satisfy every composition."""
    gens, words = C.generating_morphisms()
    index = {m: k for k, m in enumerate(C.morphisms)}
    gpos = {g: k for k, g in enumerate(gens)}
    plans = [tuple(gpos[g] for g in words[m]) for m in C.morphisms]
    comp = [(index[f], index[g], index[h]) for (f, g), h in C.composition.items()]
    table = G.table
    out = []
    for vals in product(G.elements, repeat=len(gens)):
        key = [G.prod(*(vals[k] for k in plan)) for plan in plans]
        if all(table[key[f]][key[g]] == key[h] for f, g, h in comp):
            out.append(FunctorToGroup(C, G, dict(zip(C.morphisms, key)), check=False))
    return out


def _gauge_mover(C: FiniteCategory, G: FiniteGroup):
    """move(key, object index, g) = key of {o: g}·F on value tuples."""
    obj = {o: k for k, o in enumerate(C.objects)}
    ends = [(obj[C.source(m)], obj[C.target(m)]) for m in C.morphisms]
    table, inv = G.table, G.inverses

    def move(key, o, g):
        gi = inv[g]
        return tuple(table[table[g][v]][gi] if s == o and t == o else
                     table[g][v] if s == o else
                     table[v][gi] if t == o else v
                     for v, (s, t) in zip(key, ends))

    return move


def _orbits(C: FiniteCategory, G: FiniteGroup, keys):
    """BFS orbits of the gauge action on a set of value tuples."""
    move = _gauge_mover(C, G)
    gens = G.generators() or [G.identity]
    seen, orbits = set(), []
    for key in sorted(keys):
        if key in seen:
            continue
        seen.add(key)
        orbit = [key]
        queue = deque([key])
        while queue:
            k = queue.popleft()
            for o in range(len(C.objects)):
                for g in gens:
                    k2 = move(k, o, g)
                    if k2 not in seen:
                        seen.add(k2)
                        orbit.append(k2)
                        queue.append(k2)
        orbits.append(orbit)
    return orbits


def classify_functors(C: FiniteCategory, G: FiniteGroup) -> list[FunctorClass]:
    """Orbits of Funct(C, G) under Map(Ob C, G), acting by Φ(s f)F(f)Φ(t f)⁻¹.

    The tuple-level action used for the search is checked against
    :meth:`FunctorToGroup.act` for every generator move out of each
    representative.
    """
    by_key = {F.key(): F for F in enumerate_functors(C, G)}
    move = _gauge_mover(C, G)
    gens = G.generators() or [G.identity]
    classes = []
    for orbit in _orbits(C, G, by_key):
        rep = by_key[orbit[0]]
        for k, o in enumerate(C.objects):
            for g in gens:
                if rep.act({o: g}).key() != move(orbit[0], k, g):
                    raise RuntimeError("internal error: fast gauge action disagrees with the functor action")
        classes.append(FunctorClass(rep, len(orbit)))
    return classes


def theta_from_gauge(F: FunctorToGroup, phi: Mapping, N: Nerve) -> GroupValuedMap:
    """The θ with θ*ρ(NF) = ρ(N(Φ·F)): θ(b) = Φ(last vertex of b)."""
    K = ConstantGroup(F.group)
    e = F.group.identity
    return GroupValuedMap.from_vertices(N, K, {Chain(o, ()): phi.get(o, e) for o in F.category.objects})


def gauge_compatibility_report(F: FunctorToGroup, phi: Mapping, bound: int | None = None) -> VerificationReport:
    N = nerve(F.category, bound)
    bound = _nerve_bound(N, bound)
    rho = functor_twisting_function(F, N)
    moved = theta_act(theta_from_gauge(F, phi, N), rho, bound)
    target = functor_twisting_function(F.act(phi), N)
    rep = VerificationReport("gauge action vs θ-action")
    bad, count = None, 0
    for p in range(1, bound + 1):
        for b in N.nondegenerate(p):
            count += 1
            if moved(b) != target(b) and bad is None:
                bad = {"simplex": b}
    rep.checks.append(Check("θ*ρ(NF) = ρ(N(Φ·F))", bound, bad is None, count, bad))
    return rep


# ---------------------------------------------------------------- subdivision and covers

def _complex_faces(simplices):
    """Downward closure of a list of vertex sets, as sorted tuples."""
    out = set()
    for s in simplices:
        s = tuple(sorted(set(s), key=str))
        n = len(s)
        for mask in range(1, 1 << n):
            out.add(tuple(s[i] for i in range(n) if mask >> i & 1))
    return sorted(out, key=lambda t: (len(t), [str(v) for v in t]))


def face_poset(B):
    """The category with one morphism x → y whenever x is a face of y.

    ``B`` is a GeneratedSimplicialSet that is a simplicial complex (every
    nondegenerate simplex determined by distinct vertices) or a list of
    vertex sets.
    """
    if isinstance(B, GeneratedSimplicialSet):
        vsets = {}
        for n, gens in sorted(B.generators.items()):
            for g in gens:
                x = B.generator(g)
                vs = [B.decompose(v)[1].gen for v in B.vertices(x)]
                if len(set(vs)) != n + 1:
                    raise CategoryError(f"{g!r} has repeated vertices; not a simplicial complex", witness=g)
                key = frozenset(vs)
                if key in vsets:
                    raise CategoryError(f"{g!r} and {vsets[key]!r} have the same vertices; "
                                        "not a simplicial complex", witness=g)
                vsets[key] = g
        elements = list(vsets.values())
        rel = [(vsets[a], vsets[b]) for a in vsets for b in vsets if a < b]
        return FiniteCategory.from_poset(elements, rel, f"face poset of {B.name}")
    faces = _complex_faces(B)
    rel = [(a, b) for a in faces for b in faces if set(a) < set(b)]
    return FiniteCategory.from_poset(faces, rel, "face poset")


def barycentric_subdivision(B):
    C = face_poset(B)
    return C, nerve(C)


@dataclass
class CoverNerve:
    """A combinatorial cover: index set and the index subsets with nonempty intersection."""
    index: tuple
    faces: tuple

    def __init__(self, index, faces):
        self.index = tuple(str(i) for i in index)
        fs = {tuple(sorted({str(i) for i in f})) for f in faces if f}
        for i in self.index:
            fs.add((i,))
        self.faces = tuple(sorted(fs, key=lambda t: (len(t), t)))
        self.validate()

    def validate(self):
        fs = set(self.faces)
        for f in self.faces:
            for i in f:
                if i not in self.index:
                    raise CategoryError(f"face {f} uses unknown index {i!r}")
            for k in range(len(f)):
                sub = f[:k] + f[k + 1:]
                if sub and sub not in fs:
                    raise CategoryError(f"cover faces are not downward closed: {f} present, {sub} missing",
                                        witness=list(f))

    def category(self) -> FiniteCategory:
        """Objects the faces σ, one morphism σ → τ for τ ⊆ σ."""
        rel = [(a, b) for a in self.faces for b in self.faces if set(b) < set(a)]
        return FiniteCategory.from_poset(self.faces, rel, "cover")

    def to_json(self):
        return {"kind": "cover", "index": list(self.index), "faces": [list(f) for f in self.faces]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["index"], obj["faces"])


def transition_system(F: FunctorToGroup) -> dict:
    """g_(σ0⊆σ1) = F(σ1 → σ0)⁻¹ for every inclusion σ0 ⊆ σ1."""
    G = F.group
    return {(m[1], m[0]): G.inv(F(m)) for m in F.category.morphisms}


def functor_from_transitions(C: FiniteCategory, G: FiniteGroup, system: Mapping) -> FunctorToGroup:
    return FunctorToGroup(C, G, {(s1, s0): G.inv(g) for (s0, s1), g in system.items()})


def transition_report(C: FiniteCategory, G: FiniteGroup, system: Mapping) -> VerificationReport:
    """The cocycle rule g_(σ0⊆σ1)g_(σ1⊆σ2) = g_(σ0⊆σ2) and the unit rule g_(σ⊆σ) = e."""
    rep = VerificationReport("transition functions")
    bad1 = bad2 = None
    count = 0
    for (a, b), g in system.items():
        count += 1
        if a == b and g != G.identity and bad2 is None:
            bad2 = {"inclusion": [a, b]}
        for (b2, c), h in system.items():
            if b2 == b and G.mul(g, h) != system[(a, c)] and bad1 is None:
                bad1 = {"inclusions": [a, b, c]}
    rep.checks.append(Check("transition cocycle", 1, bad1 is None, count, bad1))
    rep.checks.append(Check("transition unit g_(σ⊆σ) = e", 0, bad2 is None, count, bad2))
    return rep


def equivalent_systems(C: FiniteCategory, G: FiniteGroup, g1: Mapping, g2: Mapping):
    """Some r: faces → G with g2 = r(σ0)⁻¹ g1 r(σ1), found by backtracking, or None."""
    objs = list(C.objects)
    pos = {o: k for k, o in enumerate(objs)}
    # constraints become checkable once both ends are assigned
    due = {k: [] for k in range(len(objs))}
    for (a, b), g in g1.items():
        due[max(pos[a], pos[b])].append((a, b, g, g2[(a, b)]))
    r = {}

    def search(k):
        if k == len(objs):
            return True
        for v in G.elements:
            r[objs[k]] = v
            if all(h == G.mul(G.mul(G.inv(r[a]), g), r[b]) for a, b, g, h in due[k]) and search(k + 1):
                return True
        del r[objs[k]]
        return False

    return dict(r) if search(0) else None


@dataclass
class CoverClassification:
    category: FiniteCategory
    classes: list
    transitions: list
    report: VerificationReport

    def to_json(self):
        C, out = self.category, []
        for cls, system in zip(self.classes, self.transitions):
            G = cls.representative.group
            out.append({"orbit_size": cls.orbit_size,
                        "transition_functions": [{"from": list(a), "to": list(b), "value": G.names[g]}
                                                 for (a, b), g in sorted(system.items()) if a != b]})
        return out


def cover_classification(cover: CoverNerve, G: FiniteGroup, exhaustive_equivalence: bool = True):
    """Functor classes on the cover poset and the matching transition systems.

    Checks, on every functor, that its transition system satisfies the cocycle and unit rules
    and converts back to the same functor, and that two functors share an
    orbit exactly when their systems are equivalent, g2 = r(σ0)⁻¹ g1 r(σ1) for some r.
    """
    C = cover.category()
    classes = classify_functors(C, G)
    rep = VerificationReport("cover dictionary")
    systems = []
    for cls in classes:
        F = cls.representative
        system = transition_system(F)
        systems.append(system)
        sub = transition_report(C, G, system)
        rep.extend(sub)
        back = functor_from_transitions(C, G, system)
        rep.checks.append(Check("system → functor roundtrip", 1, back.key() == F.key(), 1))
    if exhaustive_equivalence:
        functors = enumerate_functors(C, G)
        rep_keys = [cls.representative.key() for cls in classes]
        orbit_of = {}
        for i, orbit in enumerate(_orbits(C, G, [F.key() for F in functors])):
            for k in orbit:
                orbit_of[k] = i
        cls_of = [orbit_of[k] for k in rep_keys]
        bad, sample = None, functors[::max(1, len(functors) // 64)]
        for F in sample:
            for j in range(len(classes)):
                same = orbit_of[F.key()] == cls_of[j]
                eq = equivalent_systems(C, G, transition_system(F), systems[j]) is not None
                if same != eq and bad is None:
                    bad = {"functor": F.to_json()["values"], "class": j}
        rep.checks.append(Check("equivalent systems = same orbit", 1, bad is None, len(sample), bad))
    return CoverClassification(C, classes, systems, rep)
