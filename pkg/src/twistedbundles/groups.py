"""Finite groups given by Cayley tables.

Elements are the integers ``0..n-1``; ``names`` carries display labels.
"""
from __future__ import annotations

from itertools import permutations, product


class GroupError(ValueError):
    pass


class FiniteGroup:
    def __init__(self, table, identity=0, names=None, name="G"):
        n = len(table)
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.identity = identity
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        self.name = name
        self._validate()
        self.inverses = tuple(next(j for j in range(n) if self.table[i][j] == identity) for i in range(n))

    def _validate(self):
        n = len(self.table)
        if n == 0:
            raise GroupError("empty group")
        rng = range(n)
        for row in self.table:
            if len(row) != n or sorted(row) != list(rng):
                raise GroupError("Cayley table rows must be permutations of the elements")
        for j in rng:
            if sorted(self.table[i][j] for i in rng) != list(rng):
                raise GroupError("Cayley table columns must be permutations of the elements")
        e = self.identity
        if any(self.table[e][i] != i or self.table[i][e] != i for i in rng):
            raise GroupError(f"element {e} is not a two-sided identity")
        t = self.table
        for a, b, c in product(rng, repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"associativity fails at ({a},{b},{c})")
        if len(self.names) != n or len(set(self.names)) != n:
            raise GroupError("element names must be distinct, one per element")

    @property
    def order(self):
        return len(self.table)

    @property
    def elements(self):
        return range(len(self.table))

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverses[a]

    def prod(self, *xs):
        out = self.identity
        for x in xs:
            out = self.table[out][x]
        return out

    def conj(self, g, x):
        """g x g^-1"""
        return self.table[self.table[g][x]][self.inverses[g]]

    def element(self, name):
        if isinstance(name, int) and not isinstance(name, bool):
            if 0 <= name < self.order:
                return name
        try:
            return self.names.index(str(name))
        except ValueError:
            raise GroupError(f"{name!r} is not an element of {self.name}") from None

    def is_abelian(self):
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    def generators(self):
        """A small generating set, found greedily."""
        gens, span = [], {self.identity}
        for g in self.elements:
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
        return gens

    def closure(self, gens):
        span = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
        return span

    def to_json(self):
        return {"name": self.name, "elements": list(self.names), "identity": self.names[self.identity],
                "table": [[self.names[x] for x in row] for row in self.table]}

    @classmethod
    def from_json(cls, obj):
        names = [str(x) for x in obj["elements"]]
        idx = {x: i for i, x in enumerate(names)}
        try:
            table = [[idx[str(x)] for x in row] for row in obj["table"]]
            identity = idx[str(obj.get("identity", names[0]))]
        except KeyError as exc:
            raise GroupError(f"unknown element {exc.args[0]!r} in table") from None
        return cls(table, identity, names, obj.get("name", "G"))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table and self.identity == other.identity

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], 0,
                       [str(i) for i in range(n)], f"Z/{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], 0, ["e"], "1")


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of 0..n-1 composed left to right: (a*b)(i) = b(a(i))."""
    perms = sorted(permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(b[a[i]] for i in range(n))] for b in perms] for a in perms]
    names = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(table, idx[tuple(range(n))], names, f"S{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    pairs = [(a, b) for a in g.elements for b in h.elements]
    idx = {p: i for i, p in enumerate(pairs)}
    table = [[idx[g.mul(a, c), h.mul(b, d)] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({g.names[a]},{h.names[b]})" for a, b in pairs]
    return FiniteGroup(table, idx[g.identity, h.identity], names, f"{g.name}x{h.name}")


def conjugacy_class_count(group: FiniteGroup) -> int:
    """Class count by sweeping each element's full conjugate set."""
    seen = set()
    count = 0
    for x in group.elements:
        if x in seen:
            continue
        count += 1
        seen |= {group.conj(g, x) for g in group.elements}
    return count
