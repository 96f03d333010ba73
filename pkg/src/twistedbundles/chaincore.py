"""Graded modules, graded maps, chain complexes, contractions and the basic
perturbation lemma.

Elements are sparse vectors ``{label: coefficient}``.  Every basis label
belongs to exactly one degree of its module, so a label determines its degree.
A module may be truncated at ``degree_bound``; data that would land above the
bound is never silently dropped.  Maps simply stay undefined on basis
elements whose image is not representable, and applying them there raises
:class:`TruncationError`.

Conventions: a contraction (inject, project, homotopy) = (∇, g, h) from a small
complex M to a big complex N satisfies g∇ = Id, Dh = ∇g - Id and
gh = h∇ = hh = 0, where Dφ = dφ - (-1)^|φ| φd.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .coeffs import Ring, SparseMatrix, StructureError, ZZ


class TruncationError(LookupError):
    """Requested data lies beyond a truncation bound."""


class PerturbationError(RuntimeError):
    pass


# ---------------------------------------------------------------- vectors

def add_into(acc: dict, vec: Mapping, coef: int = 1, ring: Ring = ZZ) -> dict:
    m = ring.modulus
    for k, v in vec.items():
        x = acc.get(k, 0) + coef * v
        if m is not None:
            x %= m
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def clean(vec: Mapping, ring: Ring = ZZ) -> dict:
    m = ring.modulus
    out = {}
    for k, v in vec.items():
        if m is not None:
            v %= m
        if v:
            out[k] = v
    return out


def scale(vec: Mapping, coef: int, ring: Ring = ZZ) -> dict:
    return clean({k: coef * v for k, v in vec.items()}, ring)


# ---------------------------------------------------------------- modules

class GradedModule:
    """Degreewise free module with ordered bases of hashable labels."""

    def __init__(self, ring: Ring, basis: Mapping[int, list], degree_bound: int | None = None):
        self.ring = ring
        self.degree_bound = degree_bound
        self.basis = {}
        self._degree = {}
        self._index = {}
        for n in sorted(basis):
            labels = tuple(basis[n])
            if not labels:
                continue
            if degree_bound is not None and n > degree_bound:
                raise ValueError(f"basis in degree {n} exceeds degree_bound {degree_bound}")
            self.basis[n] = labels
            for i, b in enumerate(labels):
                if b in self._degree:
                    raise ValueError(f"basis label {b!r} occurs twice (degrees {self._degree[b]} and {n})")
                self._degree[b] = n
                self._index[b] = i

    @property
    def module(self):
        return self

    def degree(self, label) -> int:
        try:
            return self._degree[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a basis element") from None

    def __contains__(self, label):
        return label in self._degree

    def index(self, label) -> int:
        return self._index[label]

    def labels(self, n: int) -> tuple:
        if not self.represents(n):
            raise TruncationError(f"degree {n} is beyond the truncation bound {self.degree_bound}")
        return self.basis.get(n, ())

    def dim(self, n: int) -> int:
        return len(self.labels(n))

    def represents(self, n: int) -> bool:
        return self.degree_bound is None or n <= self.degree_bound

    @property
    def degrees(self):
        return sorted(self.basis)

    @property
    def top(self) -> int:
        if self.degree_bound is not None:
            return self.degree_bound
        return max(self.basis, default=0)

    @property
    def bottom(self) -> int:
        return min(self.basis, default=0)

    def all_labels(self):
        for n in self.degrees:
            yield from self.basis[n]

    def __len__(self):
        return len(self._degree)

    def same_basis(self, other) -> bool:
        other = other.module
        return self.basis == other.basis and self.ring == other.ring

    def __repr__(self):
        dims = ", ".join(f"{n}:{len(b)}" for n, b in self.basis.items())
        return f"GradedModule({self.ring}, {{{dims}}}, bound={self.degree_bound})"


def unit_module(ring: Ring) -> GradedModule:
    """The ground ring as a graded module on the single label ``"1"``."""
    return GradedModule(ring, {0: ["1"]})


def _mod(x) -> GradedModule:
    return x.module


class GradedMap:
    """Homogeneous map of degree ``shift`` stored column by column."""

    def __init__(self, source, target, shift: int, columns: Mapping):
        self.source = source
        self.target = target
        self.shift = shift
        self.columns = dict(columns)

    # construction
    @classmethod
    def from_function(cls, source, target, shift: int, fn: Callable, strict: bool = True):
        """Evaluate ``fn(label) -> vector`` on every source basis element.

        Labels where ``fn`` raises :class:`TruncationError`, or whose image
        degree is not representable in the target, are left undefined.
        """
        src, tgt = _mod(source), _mod(target)
        ring = tgt.ring
        cols = {}
        for n in src.degrees:
            if not tgt.represents(n + shift):
                continue
            for b in src.basis[n]:
                try:
                    v = fn(b)
                except TruncationError:
                    continue
                v = clean(v, ring)
                if strict:
                    for y in v:
                        if y not in tgt or tgt.degree(y) != n + shift:
                            raise StructureError(
                                f"image of {b!r} contains {y!r}, not a degree-{n + shift} basis element",
                                witness=(n, b))
                cols[b] = v
        return cls(source, target, shift, cols)

    @classmethod
    def identity(cls, module):
        return cls(module, module, 0, {b: {b: 1} for b in _mod(module).all_labels()})

    @classmethod
    def zero(cls, source, target, shift: int):
        return cls.from_function(source, target, shift, lambda b: {})

    @classmethod
    def from_blocks(cls, source, target, shift: int, blocks: Mapping[int, SparseMatrix]):
        src, tgt = _mod(source), _mod(target)
        cols = {}
        for n, mat in blocks.items():
            rows_l, cols_l = tgt.labels(n + shift), src.labels(n)
            if mat.shape != (len(rows_l), len(cols_l)):
                raise ValueError(f"block in degree {n} has shape {mat.shape}, "
                                 f"expected {(len(rows_l), len(cols_l))}")
            for b in cols_l:
                cols[b] = {}
            for (i, j), v in mat.entries.items():
                cols[cols_l[j]][rows_l[i]] = v
        for b in cols:
            cols[b] = clean(cols[b], tgt.ring)
        return cls(source, target, shift, cols)

    # evaluation
    @property
    def ring(self) -> Ring:
        return _mod(self.target).ring

    def __call__(self, label) -> dict:
        try:
            return self.columns[label]
        except KeyError:
            raise TruncationError(f"map undefined on {label!r} (truncated or not in source)") from None

    def defined_on(self, label) -> bool:
        return label in self.columns

    def apply(self, vec: Mapping) -> dict:
        out = {}
        ring = self.ring
        for b, c in vec.items():
            add_into(out, self(b), c, ring)
        return out

    def defined_degrees(self):
        src = _mod(self.source)
        return [n for n in src.degrees if all(b in self.columns for b in src.basis[n])]

    def block(self, n: int) -> SparseMatrix:
        src, tgt = _mod(self.source), _mod(self.target)
        cols_l = src.labels(n)
        rows_l = tgt.labels(n + self.shift) if tgt.represents(n + self.shift) else None
        if rows_l is None:
            raise TruncationError(f"degree {n + self.shift} not representable in target")
        entries = {}
        for j, b in enumerate(cols_l):
            for y, v in self(b).items():
                entries[tgt.index(y), j] = v
        return SparseMatrix(len(rows_l), len(cols_l), entries)

    # algebra
    def compose(self, other: "GradedMap") -> "GradedMap":
        """self ∘ other"""
        cols = {}
        for b in other.columns:
            try:
                cols[b] = self.apply(other.columns[b])
            except TruncationError:
                continue
        return GradedMap(other.source, self.target, self.shift + other.shift, cols)

    __matmul__ = compose

    def _combine(self, other, c1, c2):
        if self.shift != other.shift:
            raise ValueError(f"cannot add maps of degrees {self.shift} and {other.shift}")
        ring = self.ring
        cols = {}
        for b in self.columns.keys() & other.columns.keys():
            v = add_into({}, self.columns[b], c1, ring)
            cols[b] = add_into(v, other.columns[b], c2, ring)
        return GradedMap(self.source, self.target, self.shift, cols)

    def __add__(self, other):
        return self._combine(other, 1, 1)

    def __sub__(self, other):
        return self._combine(other, 1, -1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c: int) -> "GradedMap":
        ring = self.ring
        return GradedMap(self.source, self.target, self.shift,
                         {b: scale(v, c, ring) for b, v in self.columns.items()})

    def restricted(self, labels) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift,
                         {b: self.columns[b] for b in labels if b in self.columns})

    def is_zero(self) -> bool:
        return not any(self.columns.values())

    def first_difference(self, other: "GradedMap"):
        """First (degree, label, self(label) - other(label)) on the common domain."""
        src = _mod(self.source)
        ring = self.ring
        for n in src.degrees:
            for b in src.basis[n]:
                if b in self.columns and b in other.columns:
                    diff = add_into(dict(self.columns[b]), other.columns[b], -1, ring)
                    if diff:
                        return (n, b, diff)
        return None

    def equals(self, other: "GradedMap") -> bool:
        return self.shift == other.shift and self.columns == other.columns

    def __repr__(self):
        return f"GradedMap(shift={self.shift}, defined on {len(self.columns)} labels)"


# ---------------------------------------------------------------- complexes

class ChainComplex:
    """A graded module with a square-zero differential of degree -1."""

    def __init__(self, module: GradedModule, differential: GradedMap | None = None,
                 filtration: Mapping | Callable | None = None, check: bool = True):
        self.module = module
        if differential is None:
            differential = GradedMap.zero(module, module, -1)
        if differential.shift != -1:
            raise ValueError(f"a differential has degree -1, got {differential.shift}")
        self.differential = GradedMap(self, self, -1, differential.columns)
        if callable(filtration):
            filtration = {b: filtration(b) for b in module.all_labels()}
        self.filtration = dict(filtration) if filtration is not None else None
        if check:
            self.verify()

    @classmethod
    def from_function(cls, module, fn, filtration=None, check=True):
        return cls(module, GradedMap.from_function(module, module, -1, fn), filtration, check)

    # module view
    @property
    def ring(self):
        return self.module.ring

    def dim(self, n):
        return self.module.dim(n)

    def labels(self, n):
        return self.module.labels(n)

    def degree(self, label):
        return self.module.degree(label)

    @property
    def degrees(self):
        return self.module.degrees

    @property
    def top(self):
        return self.module.top

    def d(self, vec: Mapping) -> dict:
        return self.differential.apply(vec)

    def differential_matrix(self, n: int) -> SparseMatrix:
        if not self.module.represents(n):
            raise TruncationError(f"degree {n} is beyond the truncation bound {self.module.degree_bound}")
        if not self.module.represents(n - 1):
            raise TruncationError(f"degree {n - 1} is beyond the truncation bound")
        rows = len(self.module.basis.get(n - 1, ()))
        cols_l = self.module.basis.get(n, ())
        if not cols_l or not rows:
            return SparseMatrix(rows, len(cols_l))
        return self.differential.block(n)

    def check_square_zero(self, n: int):
        """Raise StructureError naming the first basis element x with d(d(x)) != 0."""
        if not self.module.represents(n):
            raise TruncationError(f"degree {n} is beyond the truncation bound {self.module.degree_bound}")
        d = self.differential
        for b in self.module.basis.get(n, ()):
            if not d.defined_on(b):
                raise TruncationError(f"differential undefined on {b!r}")
            dd = d.apply(d(b))
            if dd:
                raise StructureError(f"d∘d != 0 in degree {n} at basis element {b!r}", witness=(n, b, dd))

    def check_filtration(self):
        if self.filtration is None:
            return
        f = self.filtration
        for b, col in self.differential.columns.items():
            for y in col:
                if f[y] > f[b]:
                    raise StructureError(f"differential raises filtration at {b!r} -> {y!r}", witness=(b, y))

    def verify(self):
        for n in self.module.degrees:
            self.check_square_zero(n)
        self.check_filtration()

    def __repr__(self):
        return f"ChainComplex({self.module!r})"


def unit_complex(ring: Ring) -> ChainComplex:
    return ChainComplex(unit_module(ring))


# ---------------------------------------------------------------- tensors

def _tensor_bound(m1: GradedModule, m2: GradedModule, bound):
    caps = []
    if m1.degree_bound is not None:
        caps.append(m1.degree_bound + (m2.bottom if m2.basis else 0))
    if m2.degree_bound is not None:
        caps.append(m2.degree_bound + (m1.bottom if m1.basis else 0))
    if bound is not None:
        caps.append(bound)
    return min(caps) if caps else None


def tensor_module(m1, m2, bound: int | None = None) -> GradedModule:
    """Basis (a, b), ordered by a's position and then b's, truncated where
    either factor stops being complete."""
    m1, m2 = _mod(m1), _mod(m2)
    if m1.ring != m2.ring:
        raise ValueError("tensor factors over different rings")
    cap = _tensor_bound(m1, m2, bound)
    basis = {}
    for p in m1.degrees:
        for q in m2.degrees:
            n = p + q
            if cap is not None and n > cap:
                continue
            basis.setdefault(n, []).extend((a, b) for a in m1.basis[p] for b in m2.basis[q])
    return GradedModule(m1.ring, basis, cap)


def tensor_complex(c1: ChainComplex, c2: ChainComplex, bound: int | None = None,
                   filtration: Callable | None = None) -> ChainComplex:
    """d(a⊗b) = da⊗b + (-1)^|a| a⊗db"""
    mod = tensor_module(c1, c2, bound)
    ring = mod.ring

    def d(label):
        a, b = label
        out = {}
        for x, v in c1.differential(a).items():
            out[(x, b)] = out.get((x, b), 0) + v
        sign = -1 if c1.degree(a) % 2 else 1
        for y, w in c2.differential(b).items():
            out[(a, y)] = out.get((a, y), 0) + sign * w
        return clean(out, ring)

    return ChainComplex.from_function(mod, d, filtration)


def tensor_maps(f: GradedMap, g: GradedMap, source=None, target=None) -> GradedMap:
    """(f⊗g)(a⊗b) = (-1)^(|g||a|) f(a)⊗g(b)"""
    if source is None:
        source = tensor_module(f.source, g.source)
    if target is None:
        target = tensor_module(f.target, g.target)
    fsrc = _mod(f.source)
    ring = _mod(target).ring

    def fn(label):
        a, b = label
        fa, gb = f(a), g(b)
        sign = -1 if (g.shift * fsrc.degree(a)) % 2 else 1
        out = {}
        for x, v in fa.items():
            for y, w in gb.items():
                out[(x, y)] = out.get((x, y), 0) + sign * v * w
        return out

    return GradedMap.from_function(source, target, f.shift + g.shift, fn)


# ---------------------------------------------------------------- Hom differential

def _differential_of(x):
    d = getattr(x, "differential", None)
    if d is None:
        raise ValueError("source and target of the map must be chain complexes")
    return d


def hom_differential(f: GradedMap) -> GradedMap:
    """Dφ = dφ - (-1)^|φ| φd, defined wherever both terms are."""
    ds, dt = _differential_of(f.source), _differential_of(f.target)
    if not (_mod(ds.source).same_basis(f.source) and _mod(dt.source).same_basis(f.target)):
        raise ValueError("shape mismatch between the map and the differentials")
    sign = -1 if f.shift % 2 == 0 else 1   # -(-1)^|f|
    ring = f.ring

    def fn(b):
        out = dt.apply(f(b))
        return add_into(out, f.apply(ds(b)), sign, ring)

    return GradedMap.from_function(f.source, f.target, f.shift - 1, fn)


# ---------------------------------------------------------------- reports

@dataclass
class Check:
    identity: str
    degree: int
    ok: bool
    checked: int = 0
    witness: object = None

    def to_json(self):
        out = {"identity": self.identity, "degree": self.degree, "ok": self.ok, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class VerificationReport:
    subject: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def first_failure(self):
        return next((c for c in self.checks if not c.ok), None)

    def identities(self):
        return sorted({c.identity for c in self.checks})

    def passed(self, identity: str) -> bool:
        return all(c.ok for c in self.checks if c.identity == identity)

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    def lines(self):
        for c in self.checks:
            status = "PASS" if c.ok else "FAIL"
            extra = "" if c.ok else f"  witness={c.witness!r}"
            yield f"{status}  {self.subject}: {c.identity} [degree {c.degree}, {c.checked} checked]{extra}"

    def to_json(self):
        return {"subject": self.subject, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def check_identity(report: VerificationReport, name: str, module, lhs: Callable, rhs: Callable,
                   ring: Ring, degrees=None):
    """Compare lhs(b) and rhs(b) on every basis label, one Check per degree.
    Labels where either side hits a truncation are skipped."""
    module = _mod(module)
    for n in degrees if degrees is not None else module.degrees:
        if n not in module.basis:
            continue
        count, witness = 0, None
        for b in module.basis[n]:
            try:
                left = lhs(b)
                right = rhs(b)
            except TruncationError:
                continue
            count += 1
            diff = add_into(dict(left), right, -1, ring)
            if diff:
                witness = {"basis_element": b, "difference": diff}
                break
        if count:
            report.checks.append(Check(name, n, witness is None, count, witness))


# ---------------------------------------------------------------- contractions

@dataclass
class Contraction:
    small: ChainComplex
    big: ChainComplex
    inject: GradedMap
    project: GradedMap
    homotopy: GradedMap

    def __post_init__(self):
        if (self.inject.shift, self.project.shift, self.homotopy.shift) != (0, 0, 1):
            raise ValueError("contraction maps must have degrees (0, 0, +1)")

    @property
    def ring(self):
        return self.big.ring


def verify_contraction(c: Contraction, filtered: bool = True) -> VerificationReport:
    """Check g∇ = Id, Dh = ∇g - Id, gh = 0, h∇ = 0, hh = 0 and the chain map
    conditions degree by degree."""
    rep = VerificationReport("contraction")
    ring = c.ring
    nab, g, h = c.inject, c.project, c.homotopy
    dM, dN = c.small.differential, c.big.differential
    idv = lambda b: {b: 1}
    zero = lambda b: {}
    check_identity(rep, "g∇ = Id", c.small, lambda b: g.apply(nab(b)), idv, ring)
    check_identity(rep, "d∇ = ∇d", c.small, lambda b: dN.apply(nab(b)), lambda b: nab.apply(dM(b)), ring)
    check_identity(rep, "dg = gd", c.big, lambda b: dM.apply(g(b)), lambda b: g.apply(dN(b)), ring)

    def dh(b):
        return add_into(dN.apply(h(b)), h.apply(dN(b)), 1, ring)

    def nabg_minus_id(b):
        return add_into(nab.apply(g(b)), {b: 1}, -1, ring)

    check_identity(rep, "Dh = ∇g - Id", c.big, dh, nabg_minus_id, ring)
    check_identity(rep, "gh = 0", c.big, lambda b: g.apply(h(b)), zero, ring)
    check_identity(rep, "h∇ = 0", c.small, lambda b: h.apply(nab(b)), zero, ring)
    check_identity(rep, "hh = 0", c.big, lambda b: h.apply(h(b)), zero, ring)
    if filtered and c.small.filtration is not None and c.big.filtration is not None:
        _check_filtered(rep, "∇ filtered", nab, c.small.filtration, c.big.filtration)
        _check_filtered(rep, "g filtered", g, c.big.filtration, c.small.filtration)
        _check_filtered(rep, "h filtered", h, c.big.filtration, c.big.filtration)
    return rep


def _check_filtered(rep, name, f, fsrc, ftgt, strict=False):
    src = _mod(f.source)
    bad = None
    count = 0
    for b, col in f.columns.items():
        count += 1
        for y in col:
            if ftgt[y] > fsrc[b] or (strict and ftgt[y] == fsrc[b]):
                bad = {"basis_element": b, "image_term": y}
                break
        if bad:
            break
    deg = src.degree(bad["basis_element"]) if bad else (src.top if src.basis else 0)
    rep.checks.append(Check(name, deg, bad is None, count, bad))


def normalize_side_conditions(c: Contraction) -> Contraction:
    """Enforce gh = h∇ = hh = 0 keeping ∇ and g.

    With π = Id - ∇g the homotopy πhπ satisfies gh = h∇ = 0, and then
    -h d h also satisfies hh = 0.  A contraction that already satisfies the
    side conditions is returned unchanged.
    """
    rep = verify_contraction(c, filtered=False)
    for ident in ("g∇ = Id", "Dh = ∇g - Id", "d∇ = ∇d", "dg = gd"):
        if not rep.passed(ident):
            fail = next(x for x in rep.failures() if x.identity == ident)
            raise StructureError(f"cannot normalize: {ident} fails in degree {fail.degree}",
                                 witness=fail.witness)
    if rep.ok:
        return c
    ring = c.ring
    nab, g, h, d = c.inject, c.project, c.homotopy, c.big.differential

    def pi(vec):
        return add_into(dict(vec), nab.apply(g.apply(vec)), -1, ring)

    h1 = GradedMap.from_function(c.big, c.big, 1, lambda b: pi(h.apply(pi({b: 1}))))
    h2 = GradedMap.from_function(c.big, c.big, 1, lambda b: scale(h1.apply(d.apply(h1(b))), -1, ring))
    return Contraction(c.small, c.big, nab, g, h2)


@dataclass
class Perturbation:
    base: ChainComplex
    delta: GradedMap

    def __post_init__(self):
        if self.delta.shift != -1:
            raise ValueError("a perturbation has degree -1")
        self.validate()

    def validate(self):
        f = self.base.filtration
        if f is not None:
            for b, col in self.delta.columns.items():
                for y in col:
                    if f[y] >= f[b]:
                        raise StructureError(
                            f"perturbation does not lower filtration at {b!r} -> {y!r}", witness=(b, y))
        total = self.base.differential + self.delta
        ring = self.base.ring
        for b, col in total.columns.items():
            try:
                sq = total.apply(col)
            except TruncationError:
                continue
            if sq:
                raise StructureError(f"(d + δ)² != 0 at {b!r}", witness=(b, clean(sq, ring)))

    @property
    def perturbed_complex(self) -> ChainComplex:
        return ChainComplex(self.base.module, self.base.differential + self.delta,
                            self.base.filtration, check=False)


def _series(start: dict, step: Callable, bound: int, what, ring: Ring) -> dict:
    total = dict(start)
    term = start
    count = 0
    while term:
        count += 1
        if count > bound:
            raise PerturbationError(f"perturbation series for {what!r} did not terminate within "
                                    f"{bound} iterations (does the perturbation lower filtration?)")
        term = step(term)
        add_into(total, term, 1, ring)
    return total


def perturb_contraction(c: Contraction, p: Perturbation, bound: int):
    """Transfer a perturbation ∂ of the big complex along a contraction.

    Returns the contraction (∇_∂, g_∂, h_∂) from (M, d + 𝒟) to (N, d + ∂)
    together with 𝒟, where, evaluating each series per basis element,

        ∇_∂ = Σ (h∂)^n ∇,   g_∂ = g Σ (∂h)^n,   h_∂ = h Σ (∂h)^n,   𝒟 = g ∂ ∇_∂.
    """
    if not p.base.module.same_basis(c.big.module):
        raise ValueError("perturbation is not on the big complex of the contraction")
    if p.delta.is_zero():
        return c, GradedMap.zero(c.small, c.small, -1)
    ring = c.ring
    nab, g, h, delta = c.inject, c.project, c.homotopy, p.delta

    def red(v):
        return clean(v, ring)

    def h_delta(v):
        return red(h.apply(delta.apply(v)))

    def delta_h(v):
        return red(delta.apply(h.apply(v)))

    new_nab_cols = {}
    for b in nab.columns:
        try:
            new_nab_cols[b] = red(_series(nab(b), h_delta, bound, b, ring))
        except TruncationError:
            continue
    acc_cols = {}
    for b in delta.columns:
        try:
            acc_cols[b] = red(_series({b: 1}, delta_h, bound, b, ring))
        except TruncationError:
            continue
    new_g = {}
    new_h = {}
    for b, acc in acc_cols.items():
        try:
            new_g[b] = red(g.apply(acc))
        except TruncationError:
            pass
        try:
            new_h[b] = red(h.apply(acc))
        except TruncationError:
            pass
    big = ChainComplex(c.big.module, c.big.differential + delta, c.big.filtration, check=False)
    small_mod = c.small.module
    dcal_cols = {}
    for b, col in new_nab_cols.items():
        try:
            dcal_cols[b] = red(g.apply(delta.apply(col)))
        except TruncationError:
            continue
    dcal = GradedMap(small_mod, small_mod, -1, dcal_cols)
    small = ChainComplex(small_mod, c.small.differential + dcal, c.small.filtration, check=False)
    out = Contraction(small, big,
                      GradedMap(small, big, 0, new_nab_cols),
                      GradedMap(big, small, 0, new_g),
                      GradedMap(big, big, 1, new_h))
    return out, GradedMap(small, small, -1, dcal_cols)
