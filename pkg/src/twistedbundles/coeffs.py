"""Exact coefficients: Z and Z/m, sparse integer matrices, Smith normal form,
and homology groups of finite chain complexes."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels


class CoefficientError(ValueError):
    pass


class StructureError(ValueError):
    """A structural identity (such as d∘d = 0) fails; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: the integers (``modulus=None``) or Z/m."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise CoefficientError(f"Z/m needs m >= 2, got {self.modulus}")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip().replace(" ", "")
        if t in ("Z", "ZZ", "Integers"):
            return cls()
        for prefix in ("Z/", "ZZ/", "Zmod", "GF"):
            if t.startswith(prefix):
                return cls(int(t[len(prefix):]))
        raise CoefficientError(f"unknown ring {text!r} (use 'Z' or 'Z/m')")

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    @property
    def is_field(self) -> bool:
        return self.modulus is not None and is_prime(self.modulus)

    def reduce(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def inverse(self, x: int) -> int:
        if self.modulus is None:
            if x in (1, -1):
                return x
            raise CoefficientError(f"{x} is not a unit in Z")
        try:
            return pow(x, -1, self.modulus)
        except ValueError:
            raise CoefficientError(f"{x} is not a unit in Z/{self.modulus}") from None

    def to_json(self):
        return {"kind": "Z"} if self.modulus is None else {"kind": "ZmodM", "m": self.modulus}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            return cls.parse(obj)
        if obj.get("kind") in ("Z", "Integers"):
            return cls()
        if obj.get("kind") in ("ZmodM", "ModM"):
            return cls(int(obj["m"]))
        raise CoefficientError(f"bad ring spec {obj!r}")

    def __str__(self):
        return "Z" if self.modulus is None else f"Z/{self.modulus}"


ZZ = Ring()


class SparseMatrix:
    """Exact matrix stored as nonzero triplets."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            if v:
                self.entries[i, j] = v

    @classmethod
    def from_dense(cls, dense, cols=None):
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, r in enumerate(dense) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), 0) + v * w
        return SparseMatrix(self.rows, other.cols, acc)

    def reduced(self, ring):
        return SparseMatrix(self.rows, self.cols, {k: ring.reduce(v) for k, v in self.entries.items()})

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self):
        return not self.entries

    def is_diagonal(self):
        return all(i == j for i, j in self.entries)

    def diagonal(self):
        return [self.entries.get((i, i), 0) for i in range(min(self.rows, self.cols))]

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def determinant(m: SparseMatrix) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_dense()
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def _snf_integers(dense, m, n):
    a = [list(r) for r in dense]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            if rest:
                _, bi, bj = min(rest)
                if bi != t:
                    swap_rows(t, bi)
                else:
                    swap_cols(t, bj)
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, a, V


def _snf_field(dense, m, n, p):
    """Row/column echelon over Z/p, D = diag(1,...,1,0,...)."""
    a = [[x % p for x in r] for r in dense]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    t = 0
    while t < min(m, n):
        found = next(((i, j) for i in range(t, m) for j in range(t, n) if a[i][j]), None)
        if found is None:
            break
        i0, j0 = found
        a[t], a[i0] = a[i0], a[t]
        U[t], U[i0] = U[i0], U[t]
        for r in a:
            r[t], r[j0] = r[j0], r[t]
        for r in V:
            r[t], r[j0] = r[j0], r[t]
        inv = pow(a[t][t], -1, p)
        a[t] = [(x * inv) % p for x in a[t]]
        U[t] = [(x * inv) % p for x in U[t]]
        for i in range(m):
            if i != t and a[i][t]:
                f = a[i][t]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[t])]
                U[i] = [(x - f * y) % p for x, y in zip(U[i], U[t])]
        for j in range(t + 1, n):
            if a[t][j]:
                f = a[t][j]
                for r in a:
                    r[j] = (r[j] - f * r[t]) % p
                for r in V:
                    r[j] = (r[j] - f * r[t]) % p
        t += 1
    return U, a, V


def smith_normal_form(m: SparseMatrix, ring: Ring = ZZ):
    """Return (U, D, V) with U·m·V = D diagonal.

    Over Z the diagonal is a divisibility chain of nonnegative integers and
    U, V are unimodular.  Over a prime field Z/p the same entry point returns
    the echelon diagonalisation, D = diag(1, ..., 1, 0, ...).
    """
    rows, cols = m.shape
    dense = m.to_dense()
    if ring.is_integers:
        U, D, V = _snf_integers(dense, rows, cols)
    elif ring.is_field:
        U, D, V = _snf_field(dense, rows, cols, ring.modulus)
    else:
        raise CoefficientError(f"Smith form over {ring} is not supported; use Z coefficients")
    return SparseMatrix.from_dense(U, rows), SparseMatrix.from_dense(D, cols), SparseMatrix.from_dense(V, cols)


def invariant_factors(m: SparseMatrix) -> list[int]:
    """Nonzero invariant factors of an integer matrix.

    Unit pivots are eliminated sparsely first; only the residual block is
    densified for the Smith kernel.
    """
    rows = {}
    for (i, j), v in m.entries.items():
        rows.setdefault(i, {})[j] = v
    cols = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        pivot = None
        for i, r in rows.items():
            for j, v in r.items():
                if v in (1, -1):
                    if pivot is None or len(cols[j]) < len(cols[pivot[1]]):
                        pivot = (i, j, v)
            if pivot is not None and len(cols[pivot[1]]) == 1:
                break
        if pivot is None:
            break
        pi, pj, pv = pivot
        prow = rows.pop(pi)
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            r = rows[i]
            f = r[pj] * pv  # pv is its own inverse
            for j, w in prow.items():
                nv = r.get(j, 0) - f * w
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                del rows[i]
        del cols[pj]
        units += 1
    live_rows = sorted(rows)
    live_cols = sorted(j for j, s in cols.items() if s)
    if not live_rows or not live_cols:
        return [1] * units
    cidx = {j: k for k, j in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for k, i in enumerate(live_rows):
        for j, v in rows[i].items():
            dense[k][cidx[j]] = v
    return [1] * units + kernels.smith_invariants(dense)


def rank(m: SparseMatrix, ring: Ring = ZZ) -> int:
    if ring.is_integers:
        return len(invariant_factors(m))
    if not ring.is_field:
        raise CoefficientError(f"rank over {ring} is not well defined; use Z coefficients")
    if m.is_zero():
        return 0
    return kernels.rank_mod_p(m.to_dense(), ring.modulus)


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group Z^free_rank + sum Z/t (or a vector space)."""

    free_rank: int
    torsion: tuple = field(default=())
    coefficients: str = "Z"

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion if x != 1)
        if any(x < 2 for x in t):
            raise ValueError(f"torsion coefficients must be >= 2: {t}")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion must form a divisibility chain: {t}")
        object.__setattr__(self, "torsion", t)

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        base = self.coefficients
        parts = []
        if self.free_rank:
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "coefficients": self.coefficients}


def homology(complex, degree: int) -> HomologyGroup:
    """Homology of ``complex`` in ``degree``.

    ``complex`` must provide ``ring``, ``dim(n)``, ``differential_matrix(n)``
    and ``check_square_zero(n)``; the chain complexes of
    :mod:`twistedbundles.chaincore` do.
    """
    ring = complex.ring
    if not (ring.is_integers or ring.is_field):
        raise CoefficientError(f"homology over {ring} needs a field or Z; use Z coefficients")
    complex.check_square_zero(degree)
    complex.check_square_zero(degree + 1)
    d_out = complex.differential_matrix(degree)      # C_n -> C_{n-1}
    d_in = complex.differential_matrix(degree + 1)   # C_{n+1} -> C_n
    n = complex.dim(degree)
    if ring.is_integers:
        r_out = len(invariant_factors(d_out))
        inv = invariant_factors(d_in)
        torsion = tuple(x for x in inv if x > 1)
        return HomologyGroup(n - r_out - len(inv), torsion)
    r_out = rank(d_out, ring)
    r_in = rank(d_in, ring)
    return HomologyGroup(n - r_out - r_in, (), str(ring))


def solve_mod_p(rows, rhs, p):
    """One solution x of rows·x = rhs over Z/p and a nullspace basis, or None."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if m == 0:
        return [0] * n, [[int(i == j) for i in range(n)] for j in range(n)]
    red, piv = kernels.rref_mod_p(aug, p)
    if n in piv:
        return None
    x = [0] * n
    for r, c in enumerate(piv):
        x[c] = red[r][n]
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, c in enumerate(piv):
            v[c] = (-red[r][f]) % p
        basis.append(v)
    return x, basis


def solve_unimodular(matrix, rhs):
    """Unique integer solution of a square system whose matrix is invertible
    over Z; None when the matrix is not unimodular."""
    n = len(matrix)
    M = SparseMatrix.from_dense(matrix, n)
    U, D, V = smith_normal_form(M)
    if any(D.entries.get((i, i), 0) != 1 for i in range(n)):
        return None
    Ub = (U @ SparseMatrix.from_dense([[b] for b in rhs], 1)).to_dense()
    return [row[0] for row in (V @ SparseMatrix.from_dense(Ub, 1)).to_dense()]
