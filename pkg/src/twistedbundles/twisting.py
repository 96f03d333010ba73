"""The convolution algebra Hom(C, A), twisting cochains and bundles C ⊗_τ A.

Sign conventions:

* cup      (α∪β)(c)   = Σ (-1)^(|β||c'|) α(c') β(c'')          with Δc = Σ c'⊗c''
* cap      φ∩(c⊗a)    = Σ (-1)^(|φ||c'|) c' ⊗ φ(c'') a
* master   Dτ + τ∪τ = 0
* homotopy τ₂∪h = h∪τ₁ - Dh
* gauge    φ*τ = φ∪τ∪φ⁻¹ - (Dφ)∪φ⁻¹
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .chaincore import (ChainComplex, Check, GradedMap, TruncationError, VerificationReport,
                        add_into, check_identity, clean, hom_differential, scale, tensor_complex,
                        tensor_module)
from .coeffs import CoefficientError, StructureError, solve_mod_p, solve_unimodular


class TwistingError(StructureError):
    pass


class ConvolutionError(ArithmeticError):
    pass


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------- dg (co)algebras

@dataclass
class DgCoalgebra:
    complex: ChainComplex
    diagonal: GradedMap
    counit: GradedMap
    coaugmentation: GradedMap | None = None

    @property
    def ring(self):
        return self.complex.ring

    def degree(self, c):
        return self.complex.degree(c)

    def eps(self, c) -> int:
        return self.counit(c).get("1", 0)

    def eta(self) -> dict:
        if self.coaugmentation is None:
            raise ValueError("coalgebra has no coaugmentation")
        return self.coaugmentation("1")

    def verify(self) -> VerificationReport:
        rep = VerificationReport("dg coalgebra")
        ring = self.ring
        D = self.diagonal
        mod = self.complex.module

        def left(c):  # (Δ⊗Id)Δ
            out = {}
            for (c1, c2), v in D(c).items():
                for (x, y), w in D(c1).items():
                    add_into(out, {(x, y, c2): 1}, v * w, ring)
            return out

        def right(c):  # (Id⊗Δ)Δ
            out = {}
            for (c1, c2), v in D(c).items():
                for (x, y), w in D(c2).items():
                    add_into(out, {(c1, x, y): 1}, v * w, ring)
            return out

        _check(rep, "coassociativity", mod, left, right, ring)
        _check(rep, "(ε⊗Id)Δ = Id", mod,
               lambda c: clean(_sum({c2: v * self.eps(c1)} for (c1, c2), v in D(c).items()), ring),
               lambda c: {c: 1}, ring)
        _check(rep, "(Id⊗ε)Δ = Id", mod,
               lambda c: clean(_sum({c1: v * self.eps(c2)} for (c1, c2), v in D(c).items()), ring),
               lambda c: {c: 1}, ring)
        d = self.complex.differential

        def d_tensor(vec):
            out = {}
            for (c1, c2), v in vec.items():
                for x, w in d(c1).items():
                    add_into(out, {(x, c2): 1}, v * w, ring)
                s = _sign(mod.degree(c1))
                for y, w in d(c2).items():
                    add_into(out, {(c1, y): 1}, s * v * w, ring)
            return out

        _check(rep, "Δd = dΔ", mod, lambda c: D.apply(d(c)), lambda c: d_tensor(D(c)), ring)
        if self.coaugmentation is not None:
            val = sum(v * self.eps(c) for c, v in self.eta().items())
            rep.checks.append(Check("εη = Id", 0, ring.reduce(val - 1) == 0, 1))
        return rep


@dataclass
class DgAlgebra:
    complex: ChainComplex
    multiplication: GradedMap
    unit: GradedMap
    augmentation: GradedMap | None = None

    @property
    def ring(self):
        return self.complex.ring

    def degree(self, a):
        return self.complex.degree(a)

    def one(self) -> dict:
        return self.unit("1")

    def mul(self, u: Mapping, v: Mapping) -> dict:
        ring = self.ring
        out = {}
        mu = self.multiplication
        for a, x in u.items():
            for b, y in v.items():
                add_into(out, mu((a, b)), x * y, ring)
        return out

    def eps(self, a) -> int:
        if self.augmentation is None:
            raise ValueError("algebra has no augmentation")
        return self.augmentation(a).get("1", 0)

    def eps_vec(self, u: Mapping) -> int:
        return self.ring.reduce(sum(v * self.eps(a) for a, v in u.items()))

    def verify(self) -> VerificationReport:
        rep = VerificationReport("dg algebra")
        ring = self.ring
        mod = self.complex.module
        labels = list(mod.all_labels())
        d = self.complex.differential
        count, bad = 0, None
        for a in labels:
            for b in labels:
                for c in labels:
                    try:
                        l = self.mul(self.mul({a: 1}, {b: 1}), {c: 1})
                        r = self.mul({a: 1}, self.mul({b: 1}, {c: 1}))
                    except TruncationError:
                        continue
                    count += 1
                    if clean(l, ring) != clean(r, ring):
                        bad = bad or {"basis_element": (a, b, c)}
        rep.checks.append(Check("associativity", 0, bad is None, count, bad))
        one = self.one()
        _check(rep, "unit law (left)", mod, lambda a: self.mul(one, {a: 1}), lambda a: {a: 1}, ring)
        _check(rep, "unit law (right)", mod, lambda a: self.mul({a: 1}, one), lambda a: {a: 1}, ring)
        count, bad = 0, None
        for a in labels:
            for b in labels:
                try:
                    l = d.apply(self.mul({a: 1}, {b: 1}))
                    r = add_into(self.mul(d(a), {b: 1}), self.mul({a: 1}, d(b)), _sign(mod.degree(a)), ring)
                except TruncationError:
                    continue
                count += 1
                if clean(l, ring) != r:
                    bad = bad or {"basis_element": (a, b)}
        rep.checks.append(Check("Leibniz rule", 0, bad is None, count, bad))
        if self.augmentation is not None:
            rep.checks.append(Check("εη = Id", 0, ring.reduce(self.eps_vec(one) - 1) == 0, 1))
        return rep


def _sum(vectors):
    out = {}
    for v in vectors:
        for k, x in v.items():
            out[k] = out.get(k, 0) + x
    return out


def _check(rep, name, module, lhs, rhs, ring):
    check_identity(rep, name, module, lhs, rhs, ring)


# ---------------------------------------------------------------- convolution algebra

class ConvolutionElement:
    """A homogeneous element of Hom(C, A)."""

    def __init__(self, coalg: DgCoalgebra, alg: DgAlgebra, map: GradedMap):
        if map.source.module is not coalg.complex.module and not map.source.module.same_basis(coalg.complex):
            raise ValueError("map source is not the coalgebra")
        if map.target.module is not alg.complex.module and not map.target.module.same_basis(alg.complex):
            raise ValueError("map target is not the algebra")
        self.coalg = coalg
        self.alg = alg
        self.map = GradedMap(coalg.complex, alg.complex, map.shift, map.columns)

    @classmethod
    def from_function(cls, coalg, alg, shift, fn):
        return cls(coalg, alg, GradedMap.from_function(coalg.complex, alg.complex, shift, fn))

    @classmethod
    def zero(cls, coalg, alg, shift):
        return cls.from_function(coalg, alg, shift, lambda c: {})

    @classmethod
    def unit(cls, coalg, alg):
        """ηε"""
        one = alg.one()
        ring = alg.ring
        return cls.from_function(coalg, alg, 0, lambda c: scale(one, coalg.eps(c), ring))

    @property
    def shift(self):
        return self.map.shift

    @property
    def ring(self):
        return self.alg.ring

    def __call__(self, c) -> dict:
        return self.map(c)

    def apply(self, vec) -> dict:
        return self.map.apply(vec)

    def _same_pair(self, other):
        if other.coalg is not self.coalg or other.alg is not self.alg:
            raise ValueError("convolution elements over different (C, A) pairs")

    def __add__(self, other):
        self._same_pair(other)
        return ConvolutionElement(self.coalg, self.alg, self.map + other.map)

    def __sub__(self, other):
        self._same_pair(other)
        return ConvolutionElement(self.coalg, self.alg, self.map - other.map)

    def __neg__(self):
        return ConvolutionElement(self.coalg, self.alg, -self.map)

    def scaled(self, k):
        return ConvolutionElement(self.coalg, self.alg, self.map.scaled(k))

    def is_zero(self):
        return self.map.is_zero()

    def equals(self, other) -> bool:
        return self.shift == other.shift and self.map.columns == other.map.columns

    def first_difference(self, other):
        return self.map.first_difference(other.map)

    def D(self) -> "ConvolutionElement":
        return ConvolutionElement(self.coalg, self.alg, hom_differential(self.map))

    def cup(self, other) -> "ConvolutionElement":
        return cup(self, other)

    def __repr__(self):
        return f"ConvolutionElement(shift={self.shift}, {len(self.map.columns)} columns)"


def cup(a: ConvolutionElement, b: ConvolutionElement) -> ConvolutionElement:
    """μ(a⊗b)Δ"""
    a._same_pair(b)
    C, A = a.coalg, a.alg
    ring = A.ring
    sb = b.shift

    def fn(c):
        out = {}
        for (c1, c2), v in C.diagonal(c).items():
            x, y = a(c1), b(c2)
            if not x or not y:
                continue
            add_into(out, A.mul(x, y), v * _sign(sb * C.degree(c1)), ring)
        return out

    return ConvolutionElement.from_function(C, A, a.shift + b.shift, fn)


def bundle_module(coalg: DgCoalgebra, alg: DgAlgebra):
    return tensor_module(coalg.complex, alg.complex)


def cap(phi: ConvolutionElement, module=None) -> GradedMap:
    """φ∩ = (C⊗μ)(C⊗φ⊗A)(Δ⊗A) on C⊗A"""
    C, A = phi.coalg, phi.alg
    ring = A.ring
    mod = module if module is not None else bundle_module(C, A)
    s = phi.shift

    def fn(label):
        c, a = label
        out = {}
        for (c1, c2), v in C.diagonal(c).items():
            x = phi(c2)
            if not x:
                continue
            prod = A.mul(x, {a: 1})
            coef = v * _sign(s * C.degree(c1))
            for y, w in prod.items():
                add_into(out, {(c1, y): 1}, coef * w, ring)
        return out

    return GradedMap.from_function(mod, mod, s, fn)


# ---------------------------------------------------------------- twisting cochains

@dataclass
class TwistingCochain:
    element: ConvolutionElement
    augmented: bool
    coaugmented: bool

    @property
    def coalg(self):
        return self.element.coalg

    @property
    def alg(self):
        return self.element.alg

    def __call__(self, c):
        return self.element(c)


@dataclass
class TwistingHomotopy:
    element: ConvolutionElement
    source: TwistingCochain
    target: TwistingCochain
    augmented: bool
    coaugmented: bool

    def __call__(self, c):
        return self.element(c)


def _first_nonzero(elem: ConvolutionElement):
    C = elem.coalg.complex.module
    for n in C.degrees:
        for c in C.basis[n]:
            if elem.map.defined_on(c) and elem(c):
                return n, c, elem(c)
    return None


def master_equation_defect(t: ConvolutionElement) -> ConvolutionElement:
    return t.D() + cup(t, t)


def check_twisting_cochain(t) -> TwistingCochain:
    """Validate Dτ + τ∪τ = 0 and compute the augmented/coaugmented flags."""
    if isinstance(t, TwistingCochain):
        t = t.element
    if t.shift != -1:
        raise TwistingError(f"a twisting cochain has degree -1, got {t.shift}")
    bad = _first_nonzero(master_equation_defect(t))
    if bad is not None:
        n, c, v = bad
        raise TwistingError(f"master equation Dτ + τ∪τ = 0 fails in degree {n} at {c!r}",
                            witness={"degree": n, "basis_element": c, "defect": v})
    A, C = t.alg, t.coalg
    augmented = True
    if A.augmentation is not None:
        augmented = all(A.eps_vec(v) == 0 for v in t.map.columns.values())
    coaugmented = True
    if C.coaugmentation is not None:
        coaugmented = not t.apply(C.eta())
    return TwistingCochain(t, augmented, coaugmented)


def tensor_differential(coalg: DgCoalgebra, alg: DgAlgebra) -> ChainComplex:
    return tensor_complex(coalg.complex, alg.complex)


def twisted_tensor_product(coalg: DgCoalgebra, alg: DgAlgebra, t: TwistingCochain | None) -> ChainComplex:
    """C ⊗_τ A with differential d⊗ + τ∩, filtered by the degree of the C factor."""
    plain = tensor_differential(coalg, alg)
    mod = plain.module
    serre = {lbl: coalg.degree(lbl[0]) for lbl in mod.all_labels()}
    if t is None:
        return ChainComplex(mod, plain.differential, serre)
    elem = t.element if isinstance(t, TwistingCochain) else t
    d = plain.differential + cap(elem, mod)
    try:
        return ChainComplex(mod, d, serre)
    except StructureError as exc:
        raise TwistingError(f"twisted differential is not square zero: {exc}", witness=exc.witness) from None


def extract_twisting_cochain(D, coalg: DgCoalgebra, alg: DgAlgebra) -> TwistingCochain:
    """τ_D = (ε⊗Id)∘D∘(Id⊗η) for a bundle differential D on C⊗A."""
    if isinstance(D, ChainComplex):
        D = D.differential
    ring = alg.ring
    plain = tensor_differential(coalg, alg)
    mod = plain.module
    for n in mod.degrees:
        for b in mod.basis[n]:
            if D.defined_on(b):
                dd = D.apply(D(b))
                if dd:
                    raise TwistingError(f"bundle differential is not square zero at {b!r}", witness=(n, b))
    P = D - plain.differential
    _check_right_linear(P, alg, mod)
    _check_colinear(P, coalg, mod)
    one = alg.one()

    def fn(c):
        vec = {}
        for a, v in one.items():
            add_into(vec, P((c, a)), v, ring)
        out = {}
        for (c1, a1), v in vec.items():
            e = coalg.eps(c1)
            if e:
                add_into(out, {a1: 1}, e * v, ring)
        return out

    tau = ConvolutionElement.from_function(coalg, alg, -1, fn)
    checked = check_twisting_cochain(tau)
    rebuilt = twisted_tensor_product(coalg, alg, checked).differential
    diff = rebuilt.first_difference(D)
    if diff is not None:
        raise TwistingError("perturbation is not of the form τ∩", witness=diff[:2])
    return checked


def _right_act(alg, vec, a2, ring):
    out = {}
    for (c, a), v in vec.items():
        for y, w in alg.mul({a: 1}, {a2: 1}).items():
            add_into(out, {(c, y): 1}, v * w, ring)
    return out


def _check_right_linear(P: GradedMap, alg: DgAlgebra, mod):
    """P(c⊗a·a') = P(c⊗a)·a'"""
    ring = alg.ring
    amod = alg.complex.module
    for lbl in P.columns:
        c, a = lbl
        for a2 in amod.all_labels():
            try:
                left = {}
                for y, w in alg.mul({a: 1}, {a2: 1}).items():
                    add_into(left, P((c, y)), w, ring)
                right = _right_act(alg, P(lbl), a2, ring)
            except TruncationError:
                continue
            if left != right:
                raise TwistingError("bundle differential is not right A-linear", witness=(lbl, a2))


def _check_colinear(P: GradedMap, coalg: DgCoalgebra, mod):
    """(Δ⊗Id)P = (Id⊗P)(Δ⊗Id), with the Koszul sign of P passing C"""
    ring = coalg.ring
    s = P.shift
    for lbl in P.columns:
        c, a = lbl
        try:
            left = {}
            for (c2, a2), v in P(lbl).items():
                for (x, y), w in coalg.diagonal(c2).items():
                    add_into(left, {(x, y, a2): 1}, v * w, ring)
            right = {}
            for (x, y), w in coalg.diagonal(c).items():
                sg = _sign(s * coalg.degree(x))
                for (y2, a2), v in P((y, a)).items():
                    add_into(right, {(x, y2, a2): 1}, sg * v * w, ring)
        except TruncationError:
            continue
        if left != right:
            raise TwistingError("bundle differential is not left C-colinear", witness=lbl)


# ---------------------------------------------------------------- homotopies

def homotopy_defect(h: ConvolutionElement, t1, t2) -> ConvolutionElement:
    """τ₂∪h - h∪τ₁ + Dh (zero iff h is a homotopy τ₁ ≃ τ₂)"""
    e1 = t1.element if isinstance(t1, TwistingCochain) else t1
    e2 = t2.element if isinstance(t2, TwistingCochain) else t2
    return cup(e2, h) - cup(h, e1) + h.D()


def check_homotopy(h, t1: TwistingCochain, t2: TwistingCochain):
    """Validate τ₂∪h = h∪τ₁ - Dh; return the homotopy and its bundle map h∩."""
    if isinstance(h, TwistingHomotopy):
        h = h.element
    if h.shift != 0:
        raise TwistingError(f"a homotopy has degree 0, got {h.shift}")
    bad = _first_nonzero(homotopy_defect(h, t1, t2))
    if bad is not None:
        n, c, v = bad
        raise TwistingError(f"homotopy equation τ₂∪h = h∪τ₁ - Dh fails in degree {n} at {c!r}",
                            witness={"degree": n, "basis_element": c, "defect": v})
    C, A = h.coalg, h.alg
    ring = A.ring
    augmented = True
    if A.augmentation is not None:
        augmented = all(ring.reduce(A.eps_vec(h(c)) - C.eps(c)) == 0 for c in h.map.columns)
    coaugmented = True
    if C.coaugmentation is not None:
        coaugmented = clean(add_into(h.apply(C.eta()), A.one(), -1, ring), ring) == {}
    hom = TwistingHomotopy(h, t1, t2, augmented, coaugmented)
    E1 = twisted_tensor_product(C, A, t1)
    E2 = twisted_tensor_product(C, A, t2)
    hcap = GradedMap(E1, E2, 0, cap(h, E1.module).columns)
    _require_chain_map(hcap, E1, E2, "h∩")
    return hom, hcap


def _require_chain_map(f: GradedMap, src: ChainComplex, tgt: ChainComplex, name: str):
    diff = (tgt.differential @ f).first_difference(f @ src.differential)
    if diff is not None:
        raise TwistingError(f"{name} is not a chain map (degree {diff[0]}, basis element {diff[1]!r})",
                            witness=diff[:2])


def compose_bundle_morphism(chi: GradedMap, h: TwistingHomotopy, phi: GradedMap,
                            tau1: TwistingCochain, tau2: TwistingCochain) -> GradedMap:
    """[χ, h, φ] = (χ⊗Id)∘(h∩)∘(Id⊗φ) : C₁ ⊗_τ₁ A₁ → C₂ ⊗_τ₂ A₂.

    ``h`` lives in Hom(C₁, A₂) and must be a homotopy φτ₁ ≃ τ₂χ.
    """
    C1, A1 = tau1.coalg, tau1.alg
    C2, A2 = tau2.coalg, tau2.alg
    if h.element.coalg is not C1 or h.element.alg is not A2:
        raise TwistingError("homotopy must lie in Hom(C₁, A₂)")
    phi_tau1 = GradedMap(C1.complex, A2.complex, -1, (phi @ tau1.element.map).columns)
    tau2_chi = GradedMap(C1.complex, A2.complex, -1, (tau2.element.map @ chi).columns)
    if h.source.element.first_difference(ConvolutionElement(C1, A2, phi_tau1)) is not None:
        raise TwistingError("homotopy source is not φτ₁")
    if h.target.element.first_difference(ConvolutionElement(C1, A2, tau2_chi)) is not None:
        raise TwistingError("homotopy target is not τ₂χ")
    E1 = twisted_tensor_product(C1, A1, tau1)
    E2 = twisted_tensor_product(C2, A2, tau2)
    ring = A2.ring
    mid = bundle_module(C1, A2)
    hcap = cap(h.element, mid)

    def fn(label):
        c, a = label
        out = {}
        for a2, v in phi(a).items():
            for (c1, a3), w in hcap((c, a2)).items():
                for c2, u in chi(c1).items():
                    add_into(out, {(c2, a3): 1}, v * w * u, ring)
        return out

    F = GradedMap.from_function(E1, E2, 0, fn)
    _require_chain_map(F, E1, E2, "[χ, h, φ]")
    # A₁-linear through φ
    for lbl in F.columns:
        c, a = lbl
        for a1 in A1.complex.module.all_labels():
            try:
                left = {}
                for y, w in A1.mul({a: 1}, {a1: 1}).items():
                    add_into(left, F((c, y)), w, ring)
                right = {}
                for (c2, y), v in F(lbl).items():
                    for z, w in A2.mul({y: 1}, phi(a1)).items():
                        add_into(right, {(c2, z): 1}, v * w, ring)
            except TruncationError:
                continue
            if left != right:
                raise TwistingError("[χ, h, φ] is not A₁-linear through φ", witness=(lbl, a1))
    return F


# ---------------------------------------------------------------- gauge action and inverses

def _is_unit_on_coaugmentation(phi: ConvolutionElement) -> bool:
    C, A = phi.coalg, phi.alg
    if C.coaugmentation is None:
        return False
    return clean(add_into(phi.apply(C.eta()), A.one(), -1, A.ring), A.ring) == {}


def convolution_inverse(phi: ConvolutionElement, bound: int) -> ConvolutionElement:
    """Two-sided inverse of a degree-0 element of Hom(C, A).

    When φη = η and C₀ is spanned by the coaugmentation, the reduced diagonal
    is nilpotent on each element and ηε + Σ (-φ̃)^j (φ̃ = φ - ηε) terminates.
    Otherwise the inverse is solved degree by degree.
    """
    if phi.shift != 0:
        raise ConvolutionError("only degree-0 elements can be inverted")
    C, A = phi.coalg, phi.alg
    unit = ConvolutionElement.unit(C, A)
    cmod = C.complex.module
    if _is_unit_on_coaugmentation(phi) and len(cmod.basis.get(0, ())) == 1:
        neg_red = unit - phi
        inv, term = unit, unit
        for _ in range(bound + 1):
            term = cup(term, neg_red)
            if term.is_zero():
                break
            inv = inv + term
        else:
            raise ConvolutionError(f"geometric series did not terminate within {bound} terms")
    else:
        inv = _solve_inverse(phi)
    for name, prod in (("φ∪φ⁻¹", cup(phi, inv)), ("φ⁻¹∪φ", cup(inv, phi))):
        diff = prod.first_difference(unit)
        if diff is not None:
            raise ConvolutionError(f"{name} != ηε in degree {diff[0]} at {diff[1]!r}")
    return inv


def _left_mult_matrix(A: DgAlgebra, x: Mapping, labels):
    idx = {a: i for i, a in enumerate(labels)}
    n = len(labels)
    M = [[0] * n for _ in range(n)]
    for j, a in enumerate(labels):
        for y, v in A.mul(x, {a: 1}).items():
            M[idx[y]][j] = v
    return M


def _solve_square(ring, M, rhs):
    n = len(M)
    if n == 0:
        return []
    if ring.is_integers:
        return solve_unimodular(M, rhs)
    if ring.is_field:
        p = ring.modulus
        res = solve_mod_p([[x % p for x in r] for r in M], [b % p for b in rhs], p)
        if res is None or res[1]:
            return None
        return res[0]
    raise CoefficientError(f"cannot invert over {ring}; use Z or a prime field")


def _solve_inverse(phi: ConvolutionElement) -> ConvolutionElement:
    """ψ with φ∪ψ = ηε, solved degreewise on the top-degree part of Δc."""
    C, A = phi.coalg, phi.alg
    ring = A.ring
    cmod, amod = C.complex.module, A.complex.module
    psi_cols = {}
    one = A.one()
    for n in cmod.degrees:
        if not amod.represents(n):
            break
        a_labels = amod.basis.get(n, ())
        for c in cmod.basis[n]:
            rhs = scale(one, C.eps(c), ring)
            lead = {}
            ok = True
            for (c1, c2), v in C.diagonal(c).items():
                if C.degree(c2) == n:
                    if c2 != c:
                        ok = False
                        break
                    add_into(lead, phi(c1), v, ring)
                else:
                    add_into(rhs, A.mul(phi(c1), psi_cols[c2]), -v, ring)
            if not ok:
                raise ConvolutionError("diagonal couples distinct top-degree elements; "
                                       "degreewise inversion unsupported here")
            if not a_labels:
                if rhs:
                    raise ConvolutionError(f"no inverse: nonzero degree-{n} obstruction at {c!r}")
                psi_cols[c] = {}
                continue
            M = _left_mult_matrix(A, lead, a_labels)
            vec = [rhs.get(a, 0) for a in a_labels]
            sol = _solve_square(ring, M, vec)
            if sol is None:
                raise ConvolutionError(f"leading degree-0 term is not invertible at {c!r}")
            psi_cols[c] = clean({a: x for a, x in zip(a_labels, sol)}, ring)
    return ConvolutionElement(C, A, GradedMap(C.complex, A.complex, 0, psi_cols))


def gauge_act(phi: ConvolutionElement, t: TwistingCochain, phi_inv: ConvolutionElement | None = None,
              bound: int | None = None) -> TwistingCochain:
    """φ*τ = φ∪τ∪φ⁻¹ - (Dφ)∪φ⁻¹"""
    if phi.shift != 0:
        raise ConvolutionError("gauge elements have degree 0")
    if phi_inv is None:
        bound = bound if bound is not None else phi.coalg.complex.top + 1
        phi_inv = convolution_inverse(phi, bound)
    elem = cup(cup(phi, t.element), phi_inv) - cup(phi.D(), phi_inv)
    return check_twisting_cochain(elem)


def decide_gauge_equivalence(t1: TwistingCochain, t2: TwistingCochain, bound: int,
                             seed: int = 0, attempts: int = 64) -> TwistingHomotopy | None:
    """Search for h with hη = η and τ₂∪h = h∪τ₁ - Dh on C up to degree ``bound``.

    The homotopy equation is affine in h, so this is a linear system over
    the prime field.  ``None`` means no invertible solution exists through
    degree ``bound``; it says nothing about higher degrees.
    """
    C, A = t1.coalg, t1.alg
    ring = A.ring
    if not ring.is_field:
        raise CoefficientError(f"gauge equivalence needs prime-field coefficients, got {ring}")
    if C.coaugmentation is None:
        raise CoefficientError("gauge equivalence search needs a coaugmented coalgebra")
    p = ring.modulus
    base = C.eta()
    if len(base) != 1 or next(iter(base.values())) % p != 1:
        raise CoefficientError("coaugmentation must be a basis element")
    (v0,) = base
    cmod, amod = C.complex.module, A.complex.module
    unknowns = [(c, a) for n in cmod.degrees if n <= bound and amod.represents(n)
                for c in cmod.basis[n] if c != v0 for a in amod.basis.get(n, ())]
    one = A.one()
    eq_labels = [c for n in cmod.degrees if 1 <= n <= bound for c in cmod.basis[n]]

    def element_from(values):
        cols = {}
        for n in cmod.degrees:
            if n > bound or not amod.represents(n):
                break
            for c in cmod.basis[n]:
                cols[c] = dict(one) if c == v0 else {}
        for (c, a), x in zip(unknowns, values):
            if x % p:
                cols[c][a] = x % p
        return ConvolutionElement(C, A, GradedMap(C.complex, A.complex, 0, cols))

    def residual(values):
        defect = homotopy_defect(element_from(values), t1, t2)
        out = []
        for c in eq_labels:
            if not defect.map.defined_on(c):
                continue
            col = defect(c)
            n = C.degree(c) - 1
            out.extend(col.get(a, 0) % p for a in amod.basis.get(n, ()))
        return out

    zero = [0] * len(unknowns)
    r0 = residual(zero)
    cols = []
    for k in range(len(unknowns)):
        e = list(zero)
        e[k] = 1
        rk = residual(e)
        cols.append([(x - y) % p for x, y in zip(rk, r0)])
    rows = [[cols[k][i] for k in range(len(unknowns))] for i in range(len(r0))]
    rhs = [(-x) % p for x in r0]
    if rows and unknowns:
        solved = solve_mod_p(rows, rhs, p)
    elif any(rhs):
        solved = None
    else:
        solved = (zero, [[int(i == j) for i in range(len(unknowns))] for j in range(len(unknowns))])
    if solved is None:
        return None
    x0, null = solved
    rng = random.Random(seed)
    candidates = [x0]
    for _ in range(attempts if null else 0):
        candidates.append([(xi + sum(rng.randrange(p) * v[i] for v in null)) % p
                           for i, xi in enumerate(x0)])
    for values in candidates:
        h = element_from(values)
        try:
            convolution_inverse(h, bound + 1)
        except ConvolutionError:
            continue
        return check_homotopy(h, t1, t2)[0]
    return None
