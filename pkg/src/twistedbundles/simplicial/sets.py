"""Simplicial sets.

:class:`SimplicialSet` is the common interface: simplices are hashable
values, and a subclass supplies ``simplices(n)``, ``degree``, ``face`` and
``degeneracy``.  Everything else (degeneracy detection, the Eilenberg-Zilber
decomposition, the action of monotone maps) is derived from those.
"""
from __future__ import annotations

from itertools import combinations, combinations_with_replacement, product
from typing import NamedTuple

from ..chaincore import Check, TruncationError, VerificationReport
from ..coeffs import StructureError
from . import operators as ops


class SimplicialError(StructureError):
    pass


class SimplicialSet:
    name = "X"
    degree_bound: int | None = None

    # subclasses implement these four
    def simplices(self, n: int) -> list:
        raise NotImplementedError

    def degree(self, x) -> int:
        raise NotImplementedError

    def face(self, i: int, x):
        raise NotImplementedError

    def degeneracy(self, j: int, x):
        raise NotImplementedError

    # derived structure
    def degeneracy_indices(self, x) -> frozenset:
        """All j with x in the image of s_j (then x = s_j ∂_j x)."""
        n = self.degree(x)
        return frozenset(j for j in range(n) if self.degeneracy(j, self.face(j, x)) == x)

    def is_degenerate(self, x) -> bool:
        return bool(self.degeneracy_indices(x))

    def nondegenerate(self, n: int) -> list:
        cache = self.__dict__.setdefault("_nondeg_cache", {})
        if n not in cache:
            cache[n] = [x for x in self.simplices(n) if not self.is_degenerate(x)]
        return cache[n]

    def decompose(self, x):
        """x = s_{j1} ... s_{jm} y with j1 > ... > jm and y nondegenerate."""
        word = []
        while True:
            idx = self.degeneracy_indices(x)
            if not idx:
                return tuple(word), x
            j = max(idx)
            word.append(j)
            x = self.face(j, x)

    def nondegenerate_degree(self, x) -> int:
        return self.degree(self.decompose(x)[1])

    def act(self, theta: tuple, x):
        """θ*x for a monotone θ: [k] → [deg x]."""
        faces, degens = ops.factor(tuple(theta), self.degree(x))
        for i in faces:
            x = self.face(i, x)
        for j in degens:
            x = self.degeneracy(j, x)
        return x

    def vertex(self, k: int, x):
        return self.act((k,), x)

    def vertices(self, x):
        return [self.vertex(k, x) for k in range(self.degree(x) + 1)]

    def last_vertex(self, x):
        return self.vertex(self.degree(x), x)

    def check_degree(self, n: int):
        if self.degree_bound is not None and n > self.degree_bound:
            raise TruncationError(f"{self.name}: degree {n} exceeds bound {self.degree_bound}")

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


# ---------------------------------------------------------------- standard simplices

class StandardSimplex(SimplicialSet):
    """Δ^N: simplices are nondecreasing vertex tuples."""

    def __init__(self, N: int):
        self.N = N
        self.name = f"Δ{N}"

    def simplices(self, n):
        return list(combinations_with_replacement(range(self.N + 1), n + 1))

    def nondegenerate(self, n):
        return list(combinations(range(self.N + 1), n + 1))

    def degree(self, x):
        return len(x) - 1

    def face(self, i, x):
        return x[:i] + x[i + 1:]

    def degeneracy(self, j, x):
        return x[:j + 1] + x[j:]

    def degeneracy_indices(self, x):
        return frozenset(j for j in range(len(x) - 1) if x[j] == x[j + 1])

    def act(self, theta, x):
        return tuple(x[k] for k in theta)


# ---------------------------------------------------------------- generator presentation

class Simplex(NamedTuple):
    """surj* gen: a generator pulled back along a monotone surjection."""
    gen: object
    surj: tuple

    @property
    def degree(self):
        return len(self.surj) - 1

    def __repr__(self):
        if all(a == b for a, b in zip(self.surj, range(len(self.surj)))):
            return f"{self.gen}"
        word = ops.word_from_surjection(self.surj)
        return "".join(f"s{j}" for j in word) + f"({self.gen})"


class GeneratedSimplicialSet(SimplicialSet):
    """Nondegenerate generators plus a face table in Eilenberg-Zilber normal form.

    ``faces[g][i]`` is the Simplex ∂_i g for every generator g of degree ≥ 1.
    Faces and degeneracies of arbitrary simplices are computed by the
    simplicial identities.
    """

    def __init__(self, generators, faces, degree_bound=None, name="X"):
        self.generators = {int(n): tuple(gs) for n, gs in generators.items() if gs}
        self._gen_degree = {}
        for n, gs in self.generators.items():
            for g in gs:
                if g in self._gen_degree:
                    raise SimplicialError(f"generator {g!r} listed twice")
                self._gen_degree[g] = n
        self.faces = {g: tuple(fs) for g, fs in faces.items()}
        self.degree_bound = degree_bound
        self.name = name
        self._check_table()

    def _check_table(self):
        for g, n in self._gen_degree.items():
            fs = self.faces.get(g, ())
            if n == 0:
                if fs:
                    raise SimplicialError(f"vertex {g!r} cannot have faces")
                continue
            if len(fs) != n + 1:
                raise SimplicialError(f"generator {g!r} of degree {n} needs {n + 1} faces, got {len(fs)}",
                                      witness=g)
            for i, f in enumerate(fs):
                if f.gen not in self._gen_degree:
                    raise SimplicialError(f"face {i} of {g!r} names unknown generator {f.gen!r}", witness=g)
                k = self._gen_degree[f.gen]
                if len(f.surj) != n or not ops.is_surjection(f.surj, k):
                    raise SimplicialError(f"face {i} of {g!r} is not in normal form", witness=g)

    @property
    def max_degree(self):
        return max(self.generators, default=0)

    def gen_degree(self, g):
        return self._gen_degree[g]

    def generator(self, g) -> Simplex:
        return Simplex(g, ops.identity(self._gen_degree[g]))

    def degree(self, x):
        return len(x.surj) - 1

    def simplices(self, n):
        self.check_degree(n)
        out = []
        for k in range(min(n, self.max_degree) + 1):
            for gs in [self.generators.get(k, ())]:
                for word in combinations(range(n), n - k):
                    surj = ops.surjection_from_word(word, k)
                    out.extend(Simplex(g, surj) for g in gs)
        return out

    def nondegenerate(self, n):
        return [self.generator(g) for g in self.generators.get(n, ())]

    def face(self, i, x):
        surj = x.surj
        v = surj[i]
        rest = surj[:i] + surj[i + 1:]
        if v in rest:
            return Simplex(x.gen, rest)
        f = self.faces[x.gen][v]
        lowered = tuple(s if s < v else s - 1 for s in rest)
        return Simplex(f.gen, tuple(f.surj[s] for s in lowered))

    def degeneracy(self, j, x):
        s = x.surj
        return Simplex(x.gen, s[:j + 1] + s[j:])

    def degeneracy_indices(self, x):
        s = x.surj
        return frozenset(j for j in range(len(s) - 1) if s[j] == s[j + 1])

    def decompose(self, x):
        return ops.word_from_surjection(x.surj), self.generator(x.gen)

    def nondegenerate_degree(self, x):
        return self._gen_degree[x.gen]

    @classmethod
    def from_explicit(cls, X: SimplicialSet, bound: int, label=None, name=None, complete=False):
        """Present X by its nondegenerate simplices up to ``bound``.

        With ``complete`` X has no nondegenerate simplices above ``bound`` and
        the result is untruncated; otherwise it is truncated at ``bound``.
        """
        label = label or (lambda x: x)
        gens, faces, names = {}, {}, {}
        for n in range(bound + 1):
            gens[n] = []
            for x in X.nondegenerate(n):
                lx = label(x)
                names[x] = lx
                gens[n].append(lx)
                if n:
                    fs = []
                    for i in range(n + 1):
                        word, y = X.decompose(X.face(i, x))
                        fs.append(Simplex(names[y], ops.surjection_from_word(word, X.degree(y))))
                    faces[lx] = fs
        return cls(gens, faces, None if complete else bound, name or X.name)

    def to_json(self):
        return {
            "kind": "simplicial_set",
            "name": self.name,
            "degree_bound": self.degree_bound,
            "generators": {str(n): list(gs) for n, gs in self.generators.items()},
            "faces": {str(g): [[list(ops.word_from_surjection(f.surj)), f.gen] for f in fs]
                      for g, fs in self.faces.items()},
        }

    @classmethod
    def from_json(cls, obj):
        gens = {int(n): [str(g) for g in gs] for n, gs in obj["generators"].items()}
        deg = {g: n for n, gs in gens.items() for g in gs}
        faces = {}
        for g, fs in obj.get("faces", {}).items():
            out = []
            for entry in fs:
                word, target = entry
                word = [int(j) for j in word]
                if list(word) != sorted(set(word), reverse=True):
                    raise SimplicialError(f"degeneracy word {word} of a face of {g!r} is not strictly decreasing")
                if str(target) not in deg:
                    raise SimplicialError(f"face of {g!r} names unknown generator {target!r}")
                k = deg[str(target)]
                if word and word[0] > k + len(word) - 1:
                    raise SimplicialError(f"degeneracy word {word} too large for a face of {g!r}")
                out.append(Simplex(str(target), ops.surjection_from_word(word, k)))
            faces[str(g)] = out
        bound = obj.get("degree_bound")
        return cls(gens, faces, bound if bound is None else int(bound), obj.get("name", "X"))


def _vertex_label(t):
    return "".join(map(str, t)) if all(v < 10 for v in t) else "-".join(map(str, t))


def delta(N: int) -> GeneratedSimplicialSet:
    return GeneratedSimplicialSet.from_explicit(StandardSimplex(N), N, _vertex_label, f"Δ{N}", complete=True)


def point() -> GeneratedSimplicialSet:
    return GeneratedSimplicialSet({0: ["*"]}, {}, None, "pt")


def minimal_circle() -> GeneratedSimplicialSet:
    """One vertex v, one nondegenerate edge σ with both faces v."""
    v = Simplex("v", (0,))
    return GeneratedSimplicialSet({0: ["v"], 1: ["σ"]}, {"σ": [v, v]}, None, "S1")


def boundary_of_simplex(N: int) -> GeneratedSimplicialSet:
    """∂Δ^N: all proper faces of the N-simplex."""
    full = StandardSimplex(N)
    gens, faces = {}, {}
    for n in range(N):
        gens[n] = [_vertex_label(x) for x in full.nondegenerate(n)]
        if n:
            for x in full.nondegenerate(n):
                faces[_vertex_label(x)] = [Simplex(_vertex_label(x[:i] + x[i + 1:]), ops.identity(n - 1))
                                           for i in range(n + 1)]
    return GeneratedSimplicialSet(gens, faces, None, f"∂Δ{N}")


# ---------------------------------------------------------------- products

class Product(SimplicialSet):
    def __init__(self, X: SimplicialSet, Y: SimplicialSet):
        self.X, self.Y = X, Y
        self.name = f"{X.name}×{Y.name}"
        bounds = [b for b in (X.degree_bound, Y.degree_bound) if b is not None]
        self.degree_bound = min(bounds) if bounds else None

    @property
    def max_degree(self):
        tops = [getattr(Z, "max_degree", None) for Z in (self.X, self.Y)]
        return None if None in tops else sum(tops)

    def simplices(self, n):
        return list(product(self.X.simplices(n), self.Y.simplices(n)))

    def nondegenerate(self, n):
        cache = self.__dict__.setdefault("_nondeg_cache", {})
        if n not in cache:
            X, Y = self.X, self.Y
            xs = [(x, X.degeneracy_indices(x)) for x in X.simplices(n)]
            ys = [(y, Y.degeneracy_indices(y)) for y in Y.simplices(n)]
            cache[n] = [(x, y) for x, jx in xs for y, jy in ys if not (jx & jy)]
        return cache[n]

    def degree(self, s):
        return self.X.degree(s[0])

    def face(self, i, s):
        return (self.X.face(i, s[0]), self.Y.face(i, s[1]))

    def degeneracy(self, j, s):
        return (self.X.degeneracy(j, s[0]), self.Y.degeneracy(j, s[1]))

    def degeneracy_indices(self, s):
        return self.X.degeneracy_indices(s[0]) & self.Y.degeneracy_indices(s[1])

    def act(self, theta, s):
        return (self.X.act(theta, s[0]), self.Y.act(theta, s[1]))


# ---------------------------------------------------------------- validation

def _sample(X: SimplicialSet, n: int):
    if isinstance(X, GeneratedSimplicialSet):
        return X.nondegenerate(n)
    return X.simplices(n)


def _record(rep, name, n, count, bad):
    if count:
        rep.checks.append(Check(name, n, bad is None, count, bad))


def validate_simplicial_set(X: SimplicialSet, bound: int | None = None) -> VerificationReport:
    """Check the simplicial identities on every simplex through ``bound``.

    Generator-presented sets are checked on their generators, which suffices
    because degenerate simplices obey the identities by construction.
    """
    rep = VerificationReport(f"simplicial set {X.name}")
    if bound is None:
        bound = X.degree_bound if X.degree_bound is not None else getattr(X, "max_degree", 3)
    for n in range(bound + 1):
        try:
            xs = _sample(X, n)
        except TruncationError:
            break
        ff = ds = fd = 0
        bad_ff = bad_ds = bad_fd = None
        for x in xs:
            if X.degree(x) != n:
                rep.checks.append(Check("degree", n, False, 1, {"simplex": x}))
                continue
            try:
                for j in range(n + 1):
                    for i in range(j):
                        if n >= 2:
                            ff += 1
                            if bad_ff is None and X.face(i, X.face(j, x)) != X.face(j - 1, X.face(i, x)):
                                bad_ff = {"simplex": x, "i": i, "j": j}
                for j in range(n + 1):
                    y = X.degeneracy(j, x)
                    for i in range(n + 2):
                        fd += 1
                        lhs = X.face(i, y)
                        if i < j:
                            rhs = X.degeneracy(j - 1, X.face(i, x))
                        elif i in (j, j + 1):
                            rhs = x
                        else:
                            rhs = X.degeneracy(j, X.face(i - 1, x))
                        if bad_fd is None and lhs != rhs:
                            bad_fd = {"simplex": x, "i": i, "j": j}
                    for i in range(j + 1):
                        ds += 1
                        if bad_ds is None and X.degeneracy(i, y) != X.degeneracy(j + 1, X.degeneracy(i, x)):
                            bad_ds = {"simplex": x, "i": i, "j": j}
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                rep.checks.append(Check("faces computable", n, False, 1, {"simplex": x, "error": str(exc)}))
        _record(rep, "∂i∂j = ∂(j-1)∂i", n, ff, bad_ff)
        _record(rep, "∂i sj identities", n, fd, bad_fd)
        _record(rep, "si sj = s(j+1) si", n, ds, bad_ds)
    return rep
