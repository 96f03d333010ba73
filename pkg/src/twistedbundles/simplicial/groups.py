"""Simplicial groups."""
from __future__ import annotations

from itertools import product

from ..chaincore import Check, TruncationError, VerificationReport
from ..groups import FiniteGroup, GroupError
from .sets import SimplicialError, SimplicialSet, validate_simplicial_set


class SimplicialGroup(SimplicialSet):
    trivially_simplicial = False

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def identity(self, n: int):
        raise NotImplementedError

    def level(self, n: int) -> FiniteGroup | None:
        return None

    def prod(self, n, *xs):
        out = self.identity(n)
        for x in xs:
            out = self.mul(out, x)
        return out


class ConstantGroup(SimplicialGroup):
    """A group G viewed as a trivially simplicial group: simplices (n, g)."""

    trivially_simplicial = True
    max_degree = 0

    def __init__(self, G: FiniteGroup, degree_bound: int | None = None):
        self.G = G
        self.name = G.name
        self.degree_bound = degree_bound

    def simplices(self, n):
        return [(n, g) for g in self.G.elements]

    def nondegenerate(self, n):
        return self.simplices(0) if n == 0 else []

    def degree(self, x):
        return x[0]

    def face(self, i, x):
        return (x[0] - 1, x[1])

    def degeneracy(self, j, x):
        return (x[0] + 1, x[1])

    def degeneracy_indices(self, x):
        return frozenset(range(x[0]))

    def act(self, theta, x):
        return (len(theta) - 1, x[1])

    def mul(self, x, y):
        if x[0] != y[0]:
            raise SimplicialError(f"multiplying simplices of degrees {x[0]} and {y[0]}")
        return (x[0], self.G.mul(x[1], y[1]))

    def inv(self, x):
        return (x[0], self.G.inv(x[1]))

    def identity(self, n):
        return (n, self.G.identity)

    def level(self, n):
        return self.G

    def element(self, n, name):
        return (n, self.G.element(name))

    def label(self, x):
        return self.G.names[x[1]]


class PathGroup(SimplicialGroup):
    """K_n = G^(n+1) with faces deleting and degeneracies repeating entries.

    A simplicial group whose structure maps are not identities.
    """

    def __init__(self, G: FiniteGroup, degree_bound: int | None = None):
        self.G = G
        self.name = f"P{G.name}"
        self.degree_bound = degree_bound

    def simplices(self, n):
        return list(product(self.G.elements, repeat=n + 1))

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

    def mul(self, x, y):
        return tuple(self.G.mul(a, b) for a, b in zip(x, y))

    def inv(self, x):
        return tuple(self.G.inv(a) for a in x)

    def identity(self, n):
        return (self.G.identity,) * (n + 1)


class TableGroup(SimplicialGroup):
    """Levels given as finite groups, structure maps as lookup tables.

    ``faces[n][i][x]`` is ∂_i of element x of level n; ``degeneracies[n][j][x]``
    is s_j of element x of level n.  Simplices are (n, x).
    """

    def __init__(self, levels, faces, degeneracies, name="K"):
        self.levels = list(levels)
        self.faces = faces
        self.degeneracies = degeneracies
        self.name = name
        self.degree_bound = len(self.levels) - 1

    def simplices(self, n):
        self.check_degree(n)
        return [(n, x) for x in self.levels[n].elements]

    def degree(self, x):
        return x[0]

    def face(self, i, x):
        n, e = x
        return (n - 1, self.faces[n][i][e])

    def degeneracy(self, j, x):
        n, e = x
        if n + 1 > self.degree_bound:
            raise TruncationError(f"{self.name}: degeneracy out of level {n} exceeds the bound")
        return (n + 1, self.degeneracies[n][j][e])

    def degeneracy_indices(self, x):
        n, e = x
        out = set()
        for j in range(n):
            y = self.face(j, x)
            if self.degeneracies[n - 1][j][y[1]] == e:
                out.add(j)
        return frozenset(out)

    def mul(self, x, y):
        return (x[0], self.levels[x[0]].mul(x[1], y[1]))

    def inv(self, x):
        return (x[0], self.levels[x[0]].inv(x[1]))

    def identity(self, n):
        return (n, self.levels[n].identity)

    def level(self, n):
        return self.levels[n]

    @property
    def trivially_simplicial(self):
        tables_ok = all(lv == self.levels[0] for lv in self.levels)
        ident = all(list(t) == list(self.levels[0].elements)
                    for tabs in list(self.faces.values()) + list(self.degeneracies.values()) for t in tabs)
        return tables_ok and ident

    @classmethod
    def from_json(cls, obj):
        levels = [FiniteGroup.from_json(lv) for lv in obj["levels"]]

        def table(n_src, n_tgt, entries):
            src, tgt = levels[n_src], levels[n_tgt]
            try:
                return [tgt.element(entries[src.names[x]]) for x in src.elements]
            except KeyError as exc:
                raise GroupError(f"structure map table misses element {exc.args[0]!r}") from None

        faces = {n: [table(n, n - 1, t) for t in obj["faces"][str(n)]]
                 for n in range(1, len(levels))}
        degens = {n: [table(n, n + 1, t) for t in obj["degeneracies"][str(n)]]
                  for n in range(len(levels) - 1)}
        return cls(levels, faces, degens, obj.get("name", "K"))


def constant_group_json(G: FiniteGroup):
    return {"kind": "simplicial_group", "trivially_simplicial": True, "group": G.to_json()}


def simplicial_group_from_json(obj, bound=None) -> SimplicialGroup:
    if obj.get("trivially_simplicial") or "table" in obj:
        G = FiniteGroup.from_json(obj.get("group", obj))
        return ConstantGroup(G, bound)
    return TableGroup.from_json(obj)


def validate_simplicial_group(K: SimplicialGroup, bound: int) -> VerificationReport:
    """Simplicial identities plus: structure maps are homomorphisms fixing e."""
    rep = validate_simplicial_set(K, bound)
    for n in range(bound + 1):
        try:
            xs = K.simplices(n)
        except TruncationError:
            break
        count, bad = 0, None
        for x, y in product(xs, repeat=2):
            xy = K.mul(x, y)
            for i in range(n + 1 if n else 0):
                count += 1
                if bad is None and K.face(i, xy) != K.mul(K.face(i, x), K.face(i, y)):
                    bad = {"x": x, "y": y, "face": i}
            if n < bound:
                for j in range(n + 1):
                    count += 1
                    if bad is None and K.degeneracy(j, xy) != K.mul(K.degeneracy(j, x), K.degeneracy(j, y)):
                        bad = {"x": x, "y": y, "degeneracy": j}
        if count:
            rep.checks.append(Check("structure maps are homomorphisms", n, bad is None, count, bad))
        e = K.identity(n)
        ok = all(K.face(i, e) == K.identity(n - 1) for i in range(n + 1)) if n else True
        rep.checks.append(Check("faces preserve e", n, ok, 1))
    return rep
