"""Normalized chains, the Alexander-Whitney coalgebra, group algebras and the
Eilenberg-Zilber contraction.

The shuffle map, the Alexander-Whitney map and the Shih homotopy are
computed once on the model pair (id_n, id_n) of Δ^n × Δ^n as lists of
monotone maps, then pushed forward to any product along (θ*x, φ*y).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from ..chaincore import (ChainComplex, Contraction, GradedMap, GradedModule, add_into,
                         normalize_side_conditions, tensor_complex, tensor_module, unit_module)
from ..coeffs import ZZ, Ring
from ..twisting import DgAlgebra, DgCoalgebra
from . import operators as ops
from .sets import Product, SimplicialError, SimplicialSet


def _bound_for(X: SimplicialSet, bound):
    if bound is None:
        bound = X.degree_bound if X.degree_bound is not None else getattr(X, "max_degree", None)
    if bound is None:
        raise ValueError(f"{X.name} is infinite; a degree bound is required")
    if X.degree_bound is not None and bound > X.degree_bound:
        raise ValueError(f"{X.name} is only represented through degree {X.degree_bound}")
    return bound


def chain_complex(X: SimplicialSet, ring: Ring = ZZ, bound: int | None = None,
                  filtration=None) -> ChainComplex:
    """|RX|: nondegenerate simplices, d = Σ (-1)^i ∂_i with degenerate faces dropped."""
    bound = _bound_for(X, bound)
    basis = {n: X.nondegenerate(n) for n in range(bound + 1)}
    top = getattr(X, "max_degree", None)
    complete = X.degree_bound is None and top is not None and bound >= top
    mod = GradedModule(ring, basis, None if complete else bound)

    def d(x):
        out = {}
        n = X.degree(x)
        if n == 0:
            return out
        for i in range(n + 1):
            y = X.face(i, x)
            if not X.is_degenerate(y):
                out[y] = out.get(y, 0) + (-1 if i % 2 else 1)
        return out

    return ChainComplex.from_function(mod, d, filtration)


def normalized_chains(X: SimplicialSet, ring: Ring = ZZ, bound: int | None = None,
                      basepoint=None, complex: ChainComplex | None = None) -> DgCoalgebra:
    """|RX| with the Alexander-Whitney diagonal Δx = Σ front_i x ⊗ back_(n-i) x.

    A coaugmentation is installed when X has one vertex or ``basepoint`` is given.
    """
    C = complex if complex is not None else chain_complex(X, ring, bound)
    CC = tensor_module(C, C)

    def diag(x):
        n = X.degree(x)
        out = {}
        for i in range(n + 1):
            a, b = X.act(ops.front(i), x), X.act(ops.back(i, n), x)
            if not X.is_degenerate(a) and not X.is_degenerate(b):
                out[(a, b)] = out.get((a, b), 0) + 1
        return out

    unit = unit_module(C.ring)
    counit = GradedMap.from_function(C, unit, 0, lambda x: {"1": 1} if X.degree(x) == 0 else {})
    coaug = None
    verts = C.labels(0)
    if basepoint is None and len(verts) == 1:
        basepoint = verts[0]
    if basepoint is not None:
        if basepoint not in verts:
            raise SimplicialError(f"basepoint {basepoint!r} is not a vertex of {X.name}")
        coaug = GradedMap.from_function(unit, C, 0, lambda _: {basepoint: 1})
    coalg = DgCoalgebra(C, GradedMap.from_function(C, CC, 0, diag), counit, coaug)
    coalg.simplicial_set = X
    return coalg


@lru_cache(maxsize=None)
def shuffle_model(p: int, q: int) -> tuple:
    """(α, β, sign) with ∇(x⊗y) = Σ sign (α*x, β*y) over (p, q)-shuffles."""
    out = []
    for xs in combinations(range(p + q), p):
        xs = set(xs)
        i = j = 0
        A, B = [0], [0]
        sign = 0
        for k in range(p + q):
            if k in xs:
                i += 1
                sign += j
            else:
                j += 1
            A.append(i)
            B.append(j)
        out.append((tuple(A), tuple(B), -1 if sign % 2 else 1))
    return tuple(out)


def _jointly_degenerate(a, b):
    return any(a[i] == a[i + 1] and b[i] == b[i + 1] for i in range(len(a) - 1))


def _face(t, i):
    return t[:i] + t[i + 1:]


def _degen(t, j):
    return t[:j + 1] + t[j:]


@lru_cache(maxsize=None)
def shih_model(n: int) -> tuple:
    """The Shih homotopy on (id_n, id_n) as ((θ, φ), coefficient) pairs.

    h(x, y) = Σ -(-1)^(m+ε(a,b)) (s_b s_(m-1) ∂_(n-q+1)...∂_n x, s_a ∂_m...∂_(n-q-1) y)

    over q ≥ 0, p ≥ 0 with p + q < n, m = n-p-q, and (p+1, q)-shuffles (a, b).
    """
    x = y = ops.identity(n)
    out = {}
    for q in range(n):
        for p in range(n - q):
            m = n - p - q
            for a in combinations(range(p + q + 1), p + 1):
                b = [i for i in range(p + q + 1) if i not in a]
                eps = sum(a[i] - i for i in range(p + 1))
                X = x
                for i in range(n, n - q, -1):
                    X = _face(X, i)
                for j in [m - 1] + [bi + m for bi in b]:
                    X = _degen(X, j)
                Y = y
                for i in range(n - q - 1, m - 1, -1):
                    Y = _face(Y, i)
                for j in [ai + m for ai in a]:
                    Y = _degen(Y, j)
                if _jointly_degenerate(X, Y):
                    continue
                key = (X, Y)
                c = out.get(key, 0) - (-1) ** (m + eps)
                if c:
                    out[key] = c
                else:
                    out.pop(key, None)
    return tuple(out.items())


def _push(P: Product, pair, model, ring):
    x, y = pair
    out = {}
    for (th, ph), c in model:
        s = (P.X.act(th, x), P.Y.act(ph, y))
        if not P.degeneracy_indices(s):
            add_into(out, {s: 1}, c, ring)
    return out


def shuffle_map(P: Product, x, y, ring: Ring = ZZ) -> dict:
    p, q = P.X.degree(x), P.Y.degree(y)
    out = {}
    for th, ph, sign in shuffle_model(p, q):
        s = (P.X.act(th, x), P.Y.act(ph, y))
        if not P.degeneracy_indices(s):
            add_into(out, {s: 1}, sign, ring)
    return out


def alexander_whitney(P: Product, s, ring: Ring = ZZ) -> dict:
    x, y = s
    n = P.degree(s)
    out = {}
    for i in range(n + 1):
        a, b = P.X.act(ops.front(i), x), P.Y.act(ops.back(i, n), y)
        if not P.X.is_degenerate(a) and not P.Y.is_degenerate(b):
            add_into(out, {(a, b): 1}, 1, ring)
    return out


def shih_homotopy(P: Product, s, ring: Ring = ZZ) -> dict:
    return _push(P, s, shih_model(P.degree(s)), ring)


def serre_filtration_tensor(C: ChainComplex):
    return lambda label: C.degree(label[0])


def serre_filtration_product(B: SimplicialSet):
    return lambda label: B.nondegenerate_degree(label[0])


def ez_contraction(X: SimplicialSet, Y: SimplicialSet, ring: Ring = ZZ, bound: int | None = None,
                   chains_x: ChainComplex | None = None, chains_y: ChainComplex | None = None,
                   product_set: SimplicialSet | None = None, serre: bool = False) -> Contraction:
    """|RX|⊗|RY| ⇄ |R(X×Y)| with ∇ the shuffle map, g Alexander-Whitney and h Shih's homotopy.

    With ``serre`` both sides carry the filtration by the degree of the X-part
    (nondegenerate degree on the product side).
    """
    P = product_set if product_set is not None else Product(X, Y)
    if bound is None:
        bound = min(_bound_for(X, None), _bound_for(Y, None))
    CX = chains_x if chains_x is not None else chain_complex(X, ring, bound)
    CY = chains_y if chains_y is not None else chain_complex(Y, ring, bound)
    small = tensor_complex(CX, CY, bound, filtration=serre_filtration_tensor(CX) if serre else None)
    big = chain_complex(P, ring, bound, filtration=serre_filtration_product(X) if serre else None)
    nab = GradedMap.from_function(small, big, 0, lambda t: shuffle_map(P, t[0], t[1], ring))
    g = GradedMap.from_function(big, small, 0, lambda s: alexander_whitney(P, s, ring))
    h = GradedMap.from_function(big, big, 1, lambda s: shih_homotopy(P, s, ring))
    c = Contraction(small, big, nab, g, h)
    c.product_set = P
    return normalize_side_conditions(c)


def normalized_group_algebra(K, ring: Ring = ZZ, bound: int | None = None,
                             complex: ChainComplex | None = None) -> DgAlgebra:
    """|RK| with multiplication |Rμ| ∘ shuffle, unit e_0 and augmentation on vertices."""
    A = complex if complex is not None else chain_complex(K, ring, bound)
    AA = tensor_module(A, A)
    KK = Product(K, K)

    def mul(t):
        out = {}
        for (x, y), c in shuffle_map(KK, t[0], t[1], ring).items():
            z = K.mul(x, y)
            if not K.is_degenerate(z):
                add_into(out, {z: 1}, c, ring)
        return out

    unit = unit_module(A.ring)
    e = K.identity(0)
    alg = DgAlgebra(A, GradedMap.from_function(AA, A, 0, mul),
                    GradedMap.from_function(unit, A, 0, lambda _: {e: 1}),
                    GradedMap.from_function(A, unit, 0, lambda a: {"1": 1} if K.degree(a) == 0 else {}))
    alg.simplicial_group = K
    return alg
