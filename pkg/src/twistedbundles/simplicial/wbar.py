"""The W and W̄ constructions of a simplicial group, with right action on W.

(WK)_n = K_0 × ... × K_n and (W̄K)_n = K_0 × ... × K_(n-1), with

    ∂_0(x_0, ..., x_n) = (∂_0 x_1, ..., ∂_0 x_n)
    ∂_j(x_0, ..., x_n) = (x_0, ..., x_(j-2), x_(j-1)·∂_j x_j, ∂_j x_(j+1), ..., ∂_j x_n)
    s_j(x_0, ..., x_n) = (x_0, ..., x_(j-1), e, s_j x_j, ..., s_j x_n)

and on W̄ the last face drops the last entry.
"""
from __future__ import annotations

from itertools import product

from ..chaincore import Check, TruncationError, VerificationReport
from .bundles import TransportedSet, TwistedCartesianProduct, TwistingFunction
from .groups import SimplicialGroup
from .sets import SimplicialSet


def _bound(K, bound):
    if bound is None:
        bound = K.degree_bound
    if bound is None:
        raise ValueError("W constructions are infinite; a degree bound is required")
    return bound


def _face(K, j, x):
    """Face j of a tuple whose entry k lies in K_k (W formula; 1 ≤ j ≤ len-1)."""
    if j == 0:
        return tuple(K.face(0, y) for y in x[1:])
    return x[:j - 1] + (K.mul(x[j - 1], K.face(j, x[j])),) + tuple(K.face(j, y) for y in x[j + 1:])


def _degeneracy(K, j, x):
    return x[:j] + (K.identity(j),) + tuple(K.degeneracy(j, y) for y in x[j:])


class WBar(SimplicialSet):
    """W̄K truncated at ``bound``; simplices are tuples (x_0, ..., x_(n-1)), x_k ∈ K_k."""

    def __init__(self, K: SimplicialGroup, bound: int | None = None):
        self.K = K
        self.degree_bound = _bound(K, bound)
        self.name = f"W̄{K.name}"

    def simplices(self, n):
        self.check_degree(n)
        return list(product(*(self.K.simplices(k) for k in range(n))))

    def degree(self, x):
        return len(x)

    def face(self, i, x):
        n = len(x)
        if n == 0 or i > n:
            raise ValueError(f"face {i} of a {n}-simplex")
        if i == n:
            return x[:-1]
        return _face(self.K, i, x)

    def degeneracy(self, j, x):
        return _degeneracy(self.K, j, x)


class W(SimplicialSet):
    """WK truncated at ``bound``; simplices (x_0, ..., x_n), right K-action on x_n."""

    def __init__(self, K: SimplicialGroup, bound: int | None = None):
        self.K = K
        self.degree_bound = _bound(K, bound)
        self.name = f"W{K.name}"

    def simplices(self, n):
        self.check_degree(n)
        return list(product(*(self.K.simplices(k) for k in range(n + 1))))

    def degree(self, x):
        return len(x) - 1

    def face(self, i, x):
        return _face(self.K, i, x)

    def degeneracy(self, j, x):
        return _degeneracy(self.K, j, x)

    def act_right(self, x, k):
        return x[:-1] + (self.K.mul(x[-1], k),)

    def projection(self, x):
        return x[:-1]


def universal_twisting_function(wbar: WBar) -> TwistingFunction:
    """ρ_n(x_0, ..., x_(n-1)) = x_(n-1)"""
    return TwistingFunction(wbar, wbar.K, rule=lambda b: b[-1])


def w_constructions(K: SimplicialGroup, bound: int | None = None):
    bound = _bound(K, bound)
    wbar = WBar(K, bound)
    return W(K, bound), wbar, universal_twisting_function(wbar)


def canonical_map(s):
    """W̄K ×_ρ K → WK, ((x_0, ..., x_(n-1)), k) ↦ (x_0, ..., x_(n-1), k)"""
    return s[0] + (s[1],)


def from_w(x):
    return (x[:-1], x[-1])


def w_as_pairs(w: W) -> TransportedSet:
    """WK presented on pairs (W̄-simplex, K-simplex), for twisting-function extraction."""
    return TransportedSet(w, from_w, canonical_map, name=w.name)


def canonical_iso_report(w: W, tcp: TwistedCartesianProduct, bound: int | None = None) -> VerificationReport:
    """The canonical map is a levelwise bijection commuting with faces,
    degeneracies and the right K-action."""
    K = w.K
    bound = w.degree_bound if bound is None else bound
    rep = VerificationReport(f"{tcp.name} → {w.name}")
    for n in range(bound + 1):
        try:
            src = tcp.simplices(n)
        except TruncationError:
            break
        images = [canonical_map(s) for s in src]
        tgt = set(w.simplices(n))
        bij = len(set(images)) == len(src) and set(images) == tgt
        rep.checks.append(Check("bijective", n, bij, len(src),
                                None if bij else {"source": len(src), "target": len(tgt)}))
        bad_f = bad_s = bad_a = None
        for s, fs in zip(src, images):
            for i in range(n + 1 if n else 0):
                if canonical_map(tcp.face(i, s)) != w.face(i, fs) and bad_f is None:
                    bad_f = {"simplex": s, "face": i}
            if n < bound:
                for j in range(n + 1):
                    if canonical_map(tcp.degeneracy(j, s)) != w.degeneracy(j, fs) and bad_s is None:
                        bad_s = {"simplex": s, "degeneracy": j}
            for k in K.simplices(n):
                if canonical_map(tcp.act_right(s, k)) != w.act_right(fs, k) and bad_a is None:
                    bad_a = {"simplex": s, "k": k}
        rep.checks.append(Check("commutes with faces", n, bad_f is None, len(src), bad_f))
        rep.checks.append(Check("commutes with degeneracies", n, bad_s is None, len(src), bad_s))
        rep.checks.append(Check("K-equivariant", n, bad_a is None, len(src), bad_a))
    return rep
