"""Twisting functions, twisted cartesian products and their classification.

Twists act through the last face: for ρ: B_p → K_(p-1),

    ∂_i(b, x) = (∂_i b, ∂_i x)            for i < p
    ∂_p(b, x) = (∂_p b, ρ(b) ∂_p x)
    s_j(b, x) = (s_j b, s_j x)
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping

from ..chaincore import Check, TruncationError, VerificationReport
from ..groups import FiniteGroup
from .groups import ConstantGroup, SimplicialGroup
from .sets import SimplicialError, SimplicialSet, validate_simplicial_set


class TwistingFunctionError(SimplicialError):
    pass


def _default_bound(B: SimplicialSet, bound):
    if bound is not None:
        return bound
    if B.degree_bound is not None:
        return B.degree_bound
    return getattr(B, "max_degree", 3)


class TwistingFunction:
    """ρ stored on nondegenerate simplices of degree ≥ 1.

    On degenerate simplices ρ(s_i b) = s_i ρ(b) for i < deg b and
    ρ(s_p b) = e for p = deg b.  Alternatively ``rule`` gives ρ on every
    simplex directly.
    """

    def __init__(self, base: SimplicialSet, group: SimplicialGroup, values: Mapping | None = None,
                 rule: Callable | None = None):
        self.base = base
        self.group = group
        self.values = dict(values or {})
        self.rule = rule

    def __call__(self, b):
        if self.rule is not None:
            return self.rule(b)
        B, K = self.base, self.group
        p = B.degree(b)
        if p < 1:
            raise TwistingFunctionError("ρ is defined on simplices of degree ≥ 1")
        if b in self.values:
            return self.values[b]
        idx = B.degeneracy_indices(b)
        if not idx:
            raise TwistingFunctionError(f"no value for nondegenerate simplex {b!r}", witness=b)
        j = max(idx)
        if j == p - 1:
            return K.identity(p - 1)
        return K.degeneracy(j, self(B.face(j, b)))

    def on_nondegenerate(self, bound):
        out = {}
        for n in range(1, bound + 1):
            try:
                simplices = self.base.nondegenerate(n)
            except TruncationError:
                break
            for b in simplices:
                out[b] = self(b)
        return out

    def key(self, bound):
        return tuple(self.on_nondegenerate(bound).values())

    def __repr__(self):
        return f"TwistingFunction({self.base.name} → {self.group.name})"


@classmethod
def _from_elements(cls, base, group, assignment):
    """ρ into a trivially simplicial group from {nondegenerate simplex: element}."""
    K = group if isinstance(group, SimplicialGroup) else ConstantGroup(group)
    vals = {b: (base.degree(b) - 1, K.G.element(g)) for b, g in assignment.items()}
    return cls(base, K, vals)


TwistingFunction.from_elements = _from_elements


def check_twisting_function(rho: TwistingFunction, bound: int | None = None) -> TwistingFunction:
    """Validate all twisting-function identities on every simplex through ``bound``.

    Besides ρ(∂_p b)·∂_(p-1)ρ(b) = ρ(∂_(p-1) b) and ρ(s_p b) = e this checks
    ∂_i ρ(b) = ρ(∂_i b) for i ≤ p-2 and s_i ρ(b) = ρ(s_i b) for i ≤ p-1,
    without which the twisted product is not simplicial.
    """
    rep = twisting_function_report(rho, bound)
    bad = rep.first_failure()
    if bad is not None:
        raise TwistingFunctionError(f"twisting function fails {bad.identity} in degree {bad.degree}",
                                    witness=bad.witness)
    return rho


def twisting_function_report(rho: TwistingFunction, bound: int | None = None) -> VerificationReport:
    B, K = rho.base, rho.group
    bound = _default_bound(B, bound)
    rep = VerificationReport("twisting function")
    for p in range(1, bound + 1):
        try:
            simplices = B.simplices(p)
        except TruncationError:
            break
        counts = {"value degree": 0, "cocycle": 0, "inner faces": 0, "inner degeneracies": 0, "last degeneracy": 0}
        bad = dict.fromkeys(counts)
        for b in simplices:
            r = rho(b)
            counts["value degree"] += 1
            if K.degree(r) != p - 1 and bad["value degree"] is None:
                bad["value degree"] = {"simplex": b}
            if p >= 2:
                counts["cocycle"] += 1
                lhs = K.mul(rho(B.face(p, b)), K.face(p - 1, r))
                if lhs != rho(B.face(p - 1, b)) and bad["cocycle"] is None:
                    bad["cocycle"] = {"simplex": b}
                for i in range(p - 1):
                    counts["inner faces"] += 1
                    if K.face(i, r) != rho(B.face(i, b)) and bad["inner faces"] is None:
                        bad["inner faces"] = {"simplex": b, "i": i}
            if p < bound:
                for i in range(p):
                    counts["inner degeneracies"] += 1
                    if K.degeneracy(i, r) != rho(B.degeneracy(i, b)) and bad["inner degeneracies"] is None:
                        bad["inner degeneracies"] = {"simplex": b, "i": i}
                counts["last degeneracy"] += 1
                if rho(B.degeneracy(p, b)) != K.identity(p) and bad["last degeneracy"] is None:
                    bad["last degeneracy"] = {"simplex": b}
        names = {"value degree": "ρ(b) ∈ K_(p-1)",
                 "cocycle": "ρ(∂p b)·∂(p-1)ρ(b) = ρ(∂(p-1) b)",
                 "inner faces": "∂i ρ = ρ ∂i (i ≤ p-2)",
                 "inner degeneracies": "si ρ = ρ si (i ≤ p-1)",
                 "last degeneracy": "ρ(sp b) = e"}
        for k, c in counts.items():
            if c:
                rep.checks.append(Check(names[k], p, bad[k] is None, c, bad[k]))
    if bound >= 1:
        bad0 = None
        for v in B.simplices(0):
            if rho(B.degeneracy(0, v)) != K.identity(0):
                bad0 = {"simplex": v}
                break
        rep.checks.append(Check("ρ(s0 v) = e", 0, bad0 is None, len(B.simplices(0)), bad0))
    return rep


# ---------------------------------------------------------------- twisted products

class TwistedCartesianProduct(SimplicialSet):
    def __init__(self, base: SimplicialSet, group: SimplicialGroup, rho: TwistingFunction):
        self.base, self.group, self.rho = base, group, rho
        self.name = f"{base.name}×ρ{group.name}"
        bounds = [b for b in (base.degree_bound, group.degree_bound) if b is not None]
        self.degree_bound = min(bounds) if bounds else None

    @property
    def max_degree(self):
        tops = [getattr(Z, "max_degree", None) for Z in (self.base, self.group)]
        return None if None in tops else sum(tops)

    def simplices(self, n):
        return list(product(self.base.simplices(n), self.group.simplices(n)))

    def nondegenerate(self, n):
        cache = self.__dict__.setdefault("_nondeg_cache", {})
        if n not in cache:
            B, K = self.base, self.group
            bs = [(b, B.degeneracy_indices(b)) for b in B.simplices(n)]
            ks = [(k, K.degeneracy_indices(k)) for k in K.simplices(n)]
            cache[n] = [(b, k) for b, jb in bs for k, jk in ks if not (jb & jk)]
        return cache[n]

    def degree(self, s):
        return self.base.degree(s[0])

    def face(self, i, s):
        b, x = s
        p = self.base.degree(b)
        if i < p:
            return (self.base.face(i, b), self.group.face(i, x))
        return (self.base.face(p, b), self.group.mul(self.rho(b), self.group.face(p, x)))

    def degeneracy(self, j, s):
        return (self.base.degeneracy(j, s[0]), self.group.degeneracy(j, s[1]))

    def degeneracy_indices(self, s):
        return self.base.degeneracy_indices(s[0]) & self.group.degeneracy_indices(s[1])

    def act_right(self, s, k):
        return (s[0], self.group.mul(s[1], k))

    def projection(self, s):
        return s[0]

    def base_degree(self, s):
        return self.base.nondegenerate_degree(s[0])


def twisted_cartesian_product(base, group, rho, check: bool = True) -> TwistedCartesianProduct:
    if check:
        check_twisting_function(rho)
    return TwistedCartesianProduct(base, group, rho)


def bundle_report(E: TwistedCartesianProduct, bound: int | None = None) -> VerificationReport:
    """Simplicial identities, a free simplicial right action and a simplicial projection."""
    bound = _default_bound(E.base, bound)
    rep = validate_simplicial_set(E, bound)
    B, K = E.base, E.group
    for n in range(bound + 1):
        count, bad_act, bad_free, bad_proj = 0, None, None, None
        for s in E.simplices(n):
            for k in K.simplices(n):
                t = E.act_right(s, k)
                count += 1
                for i in range(n + 1 if n else 0):
                    if E.face(i, t) != E.act_right(E.face(i, s), K.face(i, k)) and bad_act is None:
                        bad_act = {"simplex": s, "k": k, "face": i}
                if t == s and k != K.identity(n) and bad_free is None:
                    bad_free = {"simplex": s, "k": k}
            for i in range(n + 1 if n else 0):
                if E.projection(E.face(i, s)) != B.face(i, E.projection(s)) and bad_proj is None:
                    bad_proj = {"simplex": s, "face": i}
        if count:
            rep.checks.append(Check("action commutes with faces", n, bad_act is None, count, bad_act))
            rep.checks.append(Check("action is free", n, bad_free is None, count, bad_free))
            rep.checks.append(Check("projection is simplicial", n, bad_proj is None, count, bad_proj))
    return rep


def extract_twisting_function(E: SimplicialSet, base: SimplicialSet, group: SimplicialGroup,
                              bound: int | None = None) -> TwistingFunction:
    """ρ(b) = pr_K ∂_p (b, e) for a principal structure E on pairs (b, x).

    Rejects structures whose inner faces or degeneracies are twisted, or
    whose last face is not of the form (∂_p b, ρ(b)∂_p x).
    """
    bound = _default_bound(base, bound)
    K = group
    values = {}
    for p in range(1, bound + 1):
        for b in base.nondegenerate(p):
            t = E.face(p, (b, K.identity(p)))
            if t[0] != base.face(p, b):
                raise TwistingFunctionError("last face does not cover the base face", witness=b)
            values[b] = t[1]
    rho = TwistingFunction(base, group, values)
    for p in range(0, bound + 1):
        for b in base.simplices(p):
            for x in K.simplices(p):
                s = (b, x)
                for i in range(p):
                    if E.face(i, s) != (base.face(i, b), K.face(i, x)):
                        raise TwistingFunctionError(f"face {i} is twisted; only the last face may be",
                                                    witness=s)
                if p and E.face(p, s) != (base.face(p, b), K.mul(rho(b), K.face(p, x))):
                    raise TwistingFunctionError("last face is not ρ(b)-twisted (structure not principal)",
                                                witness=s)
                if p < bound:
                    for j in range(p + 1):
                        if E.degeneracy(j, s) != (base.degeneracy(j, b), K.degeneracy(j, x)):
                            raise TwistingFunctionError(f"degeneracy {j} is twisted", witness=s)
    return check_twisting_function(rho, bound)


class TransportedSet(SimplicialSet):
    """A simplicial set carried along a levelwise bijection ``to_pair``/``from_pair``."""

    def __init__(self, E: SimplicialSet, to_pair: Callable, from_pair: Callable, name=None):
        self.E, self.to_pair, self.from_pair = E, to_pair, from_pair
        self.name = name or E.name
        self.degree_bound = E.degree_bound

    def simplices(self, n):
        return [self.to_pair(x) for x in self.E.simplices(n)]

    def degree(self, s):
        return self.E.degree(self.from_pair(s))

    def face(self, i, s):
        return self.to_pair(self.E.face(i, self.from_pair(s)))

    def degeneracy(self, j, s):
        return self.to_pair(self.E.degeneracy(j, self.from_pair(s)))


# ---------------------------------------------------------------- the action of Mor(B, K)

class GroupValuedMap:
    """A degree-0 map θ: B → K (θ(b) ∈ K_n for b ∈ B_n)."""

    def __init__(self, base: SimplicialSet, group: SimplicialGroup, fn: Callable):
        self.base, self.group, self.fn = base, group, fn

    def __call__(self, b):
        return self.fn(b)

    @classmethod
    def from_vertices(cls, base, group, assignment: Mapping):
        """θ(b) = assignment[last vertex of b] for a trivially simplicial group."""
        if not group.trivially_simplicial:
            raise SimplicialError("vertex assignments determine θ only for trivially simplicial groups")
        assignment = dict(assignment)
        e = group.identity(0)[1]

        def fn(b):
            v = base.last_vertex(b)
            return (base.degree(b), assignment.get(v, e))

        return cls(base, group, fn)

    @classmethod
    def constant(cls, base, group, g):
        return cls.from_vertices(base, group, {v: g for v in base.simplices(0)})


def theta_report(theta: GroupValuedMap, bound: int | None = None) -> VerificationReport:
    """θ∂_i = ∂_iθ (i < p), θs_j = s_jθ and ∂_(p-1)θ(∂_(p-1) b) = ∂_(p-1)∂_p θ(b)."""
    B, K = theta.base, theta.group
    bound = _default_bound(B, bound)
    rep = VerificationReport("degree-0 map θ")
    for p in range(bound + 1):
        count, bad = 0, None
        for b in B.simplices(p):
            t = theta(b)
            count += 1
            if K.degree(t) != p:
                bad = bad or {"simplex": b, "identity": "θ(b) ∈ K_p"}
            for i in range(p):
                if theta(B.face(i, b)) != K.face(i, t):
                    bad = bad or {"simplex": b, "identity": f"θ∂{i} = ∂{i}θ"}
            if p < bound:
                for j in range(p + 1):
                    if theta(B.degeneracy(j, b)) != K.degeneracy(j, t):
                        bad = bad or {"simplex": b, "identity": f"θs{j} = s{j}θ"}
            if p >= 2:
                lhs = K.face(p - 1, theta(B.face(p - 1, b)))
                rhs = K.face(p - 1, K.face(p, t))
                if lhs != rhs:
                    bad = bad or {"simplex": b, "identity": "(mort)"}
        if count:
            rep.checks.append(Check("θ compatibility", p, bad is None, count, bad))
    return rep


def theta_act(theta: GroupValuedMap, rho: TwistingFunction, bound: int | None = None) -> TwistingFunction:
    """(θ*ρ)(b) = θ(∂_p b)·ρ(b)·(∂_p θ(b))⁻¹, validated."""
    B, K = rho.base, rho.group
    bound = _default_bound(B, bound)
    rep = theta_report(theta, bound)
    bad = rep.first_failure()
    if bad is not None:
        raise TwistingFunctionError(f"θ violates {bad.witness.get('identity')} in degree {bad.degree}",
                                    witness=bad.witness)
    values = {}
    for p in range(1, bound + 1):
        for b in B.nondegenerate(p):
            values[b] = K.mul(K.mul(theta(B.face(p, b)), rho(b)), K.inv(K.face(p, theta(b))))
    return check_twisting_function(TwistingFunction(B, K, values), bound)


def compose_theta(theta2: GroupValuedMap, theta1: GroupValuedMap) -> GroupValuedMap:
    """The product θ₂θ₁ in Mor(B, K), acting as θ₂*(θ₁*ρ)."""
    K = theta1.group
    return GroupValuedMap(theta1.base, K, lambda b: K.mul(theta2(b), theta1(b)))


def theta_bundle_map(theta: GroupValuedMap, E1: TwistedCartesianProduct, E2: TwistedCartesianProduct,
                     bound: int | None = None):
    """θ*: (b, x) ↦ (b, θ(b)x) together with a report that it is a simplicial,
    equivariant bijection over the identity of B."""
    K = E1.group

    def f(s):
        return (s[0], K.mul(theta(s[0]), s[1]))

    bound = _default_bound(E1.base, bound)
    rep = VerificationReport("θ* bundle map")
    for n in range(bound + 1):
        count, bad = 0, None
        xs = E1.simplices(n)
        if len({f(s) for s in xs}) != len(xs):
            bad = {"identity": "bijective"}
        for s in xs:
            count += 1
            fs = f(s)
            for i in range(n + 1 if n else 0):
                if f(E1.face(i, s)) != E2.face(i, fs):
                    bad = bad or {"simplex": s, "face": i}
            if n < bound:
                for j in range(n + 1):
                    if f(E1.degeneracy(j, s)) != E2.degeneracy(j, fs):
                        bad = bad or {"simplex": s, "degeneracy": j}
            for k in K.simplices(n)[:4]:
                if f(E1.act_right(s, k)) != E2.act_right(fs, k):
                    bad = bad or {"simplex": s, "equivariance": k}
        rep.checks.append(Check("θ* simplicial, equivariant, bijective", n, bad is None, count, bad))
    return f, rep


# ---------------------------------------------------------------- classification

@dataclass
class BundleClass:
    representative: TwistingFunction
    orbit_size: int
    orbit: list

    def values(self, bound):
        return self.representative.on_nondegenerate(bound)


def _as_constant(group, bound):
    if isinstance(group, FiniteGroup):
        return ConstantGroup(group, bound)
    if not getattr(group, "trivially_simplicial", False):
        raise SimplicialError("bundle classification is implemented for trivially simplicial groups only")
    return group


def enumerate_twisting_functions(B: SimplicialSet, group, bound: int | None = None) -> list:
    """All twisting functions B → G (G trivially simplicial), by backtracking over
    nondegenerate simplices with every local identity checked on assignment."""
    bound = _default_bound(B, bound)
    K = _as_constant(group, bound)
    G = K.G
    order = [b for p in range(1, bound + 1) for b in B.nondegenerate(p)]
    results = []
    values = {}

    def consistent(b):
        rho = TwistingFunction(B, K, values)
        p = B.degree(b)
        r = values[b]
        try:
            if p >= 2:
                if K.mul(rho(B.face(p, b)), K.face(p - 1, r)) != rho(B.face(p - 1, b)):
                    return False
                if any(K.face(i, r) != rho(B.face(i, b)) for i in range(p - 1)):
                    return False
        except TwistingFunctionError:
            return True
        return True

    def step(k):
        if k == len(order):
            results.append(TwistingFunction(B, K, dict(values)))
            return
        b = order[k]
        p = B.degree(b)
        for g in G.elements:
            values[b] = (p - 1, g)
            if consistent(b):
                step(k + 1)
        del values[b]

    step(0)
    return [check_twisting_function(r, bound) for r in results]


def vertex_translate(rho: TwistingFunction, assignment: Mapping, bound: int) -> TwistingFunction:
    theta = GroupValuedMap.from_vertices(rho.base, rho.group, assignment)
    return theta_act(theta, rho, bound)


def classify_bundles(B: SimplicialSet, group, bound: int | None = None) -> list[BundleClass]:
    """Orbits of twisting functions B → G under Map(B_0, G), with orbit sizes.

    The orbit count is the number of isomorphism classes of principal
    G-bundles over B when G is trivially simplicial.  Orbits are explored
    with (θ*ρ)(b) = θ(v_(p-1))ρ(b)θ(v_p)⁻¹ on the value tuples; every move
    out of each representative is cross-checked against :func:`theta_act`.
    """
    bound = _default_bound(B, bound)
    K = _as_constant(group, bound)
    G = K.G
    everything = enumerate_twisting_functions(B, K, bound)
    order = [b for p in range(1, bound + 1) for b in B.nondegenerate(p)]
    verts = B.simplices(0)
    vindex = {v: i for i, v in enumerate(verts)}
    ends = [(vindex[B.vertex(B.degree(b) - 1, b)], vindex[B.vertex(B.degree(b), b)]) for b in order]
    keys = {tuple(r.values[b][1] for b in order): r for r in everything}
    gens = G.generators() or [G.identity]
    mul, inv = G.mul, G.inv

    def move(key, v, g):
        gi = inv(g)
        out = []
        for val, (a, z) in zip(key, ends):
            left = g if a == v else G.identity
            right = gi if z == v else G.identity
            out.append(mul(mul(left, val), right))
        return tuple(out)

    seen = set()
    classes = []
    for key in sorted(keys):
        if key in seen:
            continue
        seen.add(key)
        orbit = [key]
        queue = deque([key])
        while queue:
            k = queue.popleft()
            for vi in range(len(verts)):
                for g in gens:
                    k2 = move(k, vi, g)
                    if k2 not in keys:
                        raise SimplicialError("gauge action left the set of twisting functions")
                    if k2 not in seen:
                        seen.add(k2)
                        orbit.append(k2)
                        queue.append(k2)
        rep = keys[min(orbit)]
        for vi, v in enumerate(verts):
            for g in gens:
                moved = vertex_translate(rep, {v: g}, bound)
                if tuple(moved(b)[1] for b in order) != move(min(orbit), vi, g):
                    raise SimplicialError("orbit bookkeeping disagrees with theta_act", witness=(v, g))
        classes.append(BundleClass(rep, len(orbit), [keys[k] for k in sorted(orbit)]))
    return classes
