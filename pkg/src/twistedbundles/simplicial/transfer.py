"""From twisting functions to twisting cochains by perturbing the
Eilenberg-Zilber contraction, and from degree-0 maps θ to homotopies."""
from __future__ import annotations

from dataclasses import dataclass

from ..chaincore import (ChainComplex, Check, Contraction, GradedMap, Perturbation, PerturbationError,
                         VerificationReport, add_into, perturb_contraction, verify_contraction)
from ..coeffs import ZZ, Ring, homology
from ..twisting import (ConvolutionElement, DgAlgebra, DgCoalgebra, TwistingCochain, TwistingError,
                        TwistingHomotopy, cap, check_homotopy, check_twisting_cochain,
                        twisted_tensor_product)
from .bundles import GroupValuedMap, TwistedCartesianProduct, TwistingFunction, theta_act
from .chains import chain_complex, ez_contraction, normalized_chains, normalized_group_algebra
from .sets import Product


@dataclass
class Transfer:
    rho: TwistingFunction
    coalg: DgCoalgebra
    alg: DgAlgebra
    bundle: TwistedCartesianProduct
    base_contraction: Contraction
    contraction: Contraction
    dcal: GradedMap
    tau: TwistingCochain
    bound: int

    def report(self) -> VerificationReport:
        """Perturbed contraction identities, (d + 𝒟)² = 0 and 𝒟 = τ∩."""
        rep = verify_contraction(self.contraction)
        small = self.contraction.small
        ring = small.ring
        count, bad = 0, None
        for b, col in small.differential.columns.items():
            try:
                sq = small.differential.apply(col)
            except LookupError:
                continue
            count += 1
            if sq and bad is None:
                bad = {"basis_element": b, "value": sq}
        rep.checks.append(Check("(d + 𝒟)² = 0", small.top, bad is None, count, bad))
        tcap = cap(self.tau.element, small.module)
        diff = GradedMap(small, small, -1, self.dcal.columns).first_difference(tcap)
        rep.checks.append(Check("𝒟 = τ∩", small.top, diff is None, len(self.dcal.columns),
                                None if diff is None else {"degree": diff[0], "basis_element": diff[1]}))
        return rep

    def twisted_tensor_product(self) -> ChainComplex:
        return twisted_tensor_product(self.coalg, self.alg, self.tau)


def _default_bound(B, bound):
    if bound is not None:
        return bound
    if B.degree_bound is not None:
        return B.degree_bound
    return getattr(B, "max_degree", 3)


def twisting_perturbation(E: TwistedCartesianProduct, big: ChainComplex) -> GradedMap:
    """∂^ρ = d_(B×_ρK) - d_(B×K) on normalized chains: only the last face changes,

    ∂^ρ(b, x) = (-1)^p [(∂_p b, ρ(b)∂_p x) - (∂_p b, ∂_p x)].
    """
    K = E.group
    ring = big.ring

    def fn(s):
        b, x = s
        p = E.base.degree(b)
        if p == 0:
            return {}
        sign = -1 if p % 2 else 1
        out = {}
        twisted = E.face(p, s)
        plain = (E.base.face(p, b), K.face(p, x))
        if twisted == plain:
            return out
        if not E.degeneracy_indices(twisted):
            add_into(out, {twisted: 1}, sign, ring)
        if not E.degeneracy_indices(plain):
            add_into(out, {plain: 1}, -sign, ring)
        return out

    return GradedMap.from_function(big, big, -1, fn)


def transfer(rho: TwistingFunction, ring: Ring = ZZ, bound: int | None = None,
             coalg: DgCoalgebra | None = None, alg: DgAlgebra | None = None) -> Transfer:
    B, K = rho.base, rho.group
    bound = _default_bound(B, bound)
    if coalg is None:
        coalg = normalized_chains(B, ring, bound)
    if alg is None:
        alg = normalized_group_algebra(K, ring, bound)
    E = TwistedCartesianProduct(B, K, rho)
    P = Product(B, K)
    c0 = ez_contraction(B, K, ring, bound, chains_x=coalg.complex, chains_y=alg.complex,
                        product_set=P, serre=True)
    delta = twisting_perturbation(E, c0.big)
    pert = Perturbation(c0.big, delta)
    try:
        c1, dcal = perturb_contraction(c0, pert, bound + 2)
    except PerturbationError as exc:
        raise RuntimeError(f"internal error: Serre filtration failed to bound the series ({exc})") from exc
    e = K.identity(0)

    def tau_fn(c):
        if (c, e) not in dcal.source.module:
            return {}
        out = {}
        for (c1_, a), v in dcal((c, e)).items():
            k = coalg.eps(c1_)
            if k:
                add_into(out, {a: 1}, k * v, ring)
        return out

    taumap = ConvolutionElement.from_function(coalg, alg, -1, tau_fn)
    if dcal.is_zero():
        taumap = ConvolutionElement.zero(coalg, alg, -1)
    tau = check_twisting_cochain(taumap)
    if alg.augmentation is not None and not tau.augmented:
        raise TwistingError("τ^ρ is not augmented")
    return Transfer(rho, coalg, alg, E, c0, c1, dcal, tau, bound)


def tau_from_rho(rho: TwistingFunction, ring: Ring = ZZ, bound: int | None = None,
                 coalg: DgCoalgebra | None = None, alg: DgAlgebra | None = None):
    """τ^ρ = (ε⊗Id)∘𝒟^ρ∘(Id⊗η) and the perturbed contraction
    |RB|⊗_τ|RK| ⇄ |R(B×_ρK)|."""
    t = transfer(rho, ring, bound, coalg, alg)
    return t.tau, t.contraction


@dataclass
class ThetaHomotopy:
    homotopy: TwistingHomotopy
    hcap: GradedMap
    first: Transfer
    second: Transfer
    theta_map: GradedMap
    psi: GradedMap

    def square_report(self) -> VerificationReport:
        """ι₂∘h∩ = Rθ*∘ι₁ and h∩ = g₂∘Rθ*∘ι₁ on the twisted tensor products."""
        rep = VerificationReport("θ-homotopy squares")
        i1, i2 = self.first.contraction.inject, self.second.contraction.inject
        lhs = i2 @ self.hcap
        rhs = self.theta_map @ i1
        diff = lhs.first_difference(rhs)
        rep.checks.append(Check("ι₂∘h∩ = R(θ*)∘ι₁", 0, diff is None, len(lhs.columns),
                                None if diff is None else {"degree": diff[0], "basis_element": diff[1]}))
        diff = self.hcap.first_difference(self.psi)
        rep.checks.append(Check("h∩ = g₂∘R(θ*)∘ι₁", 0, diff is None, len(self.psi.columns),
                                None if diff is None else {"degree": diff[0], "basis_element": diff[1]}))
        return rep


def theta_chain_map(theta: GroupValuedMap, E1: TwistedCartesianProduct, E2: TwistedCartesianProduct,
                    big1: ChainComplex, big2: ChainComplex) -> GradedMap:
    """|R(θ*)|: (b, x) ↦ (b, θ(b)x) on normalized chains."""
    K = E1.group

    def fn(s):
        t = (s[0], K.mul(theta(s[0]), s[1]))
        return {} if E2.degeneracy_indices(t) else {t: 1}

    return GradedMap.from_function(big1, big2, 0, fn)


def theta_to_homotopy(theta: GroupValuedMap, rho1: TwistingFunction, ring: Ring = ZZ,
                      bound: int | None = None, first: Transfer | None = None) -> ThetaHomotopy:
    """h^θ = (ε⊗Id)∘Ψ^θ∘(Id⊗η) with Ψ^θ = g₂∘|R(θ*)|∘ι₁, validated as an
    augmented homotopy τ^ρ₁ ≃ τ^(θ*ρ₁)."""
    B = rho1.base
    bound = _default_bound(B, bound)
    rho2 = theta_act(theta, rho1, bound)
    T1 = first if first is not None else transfer(rho1, ring, bound)
    T2 = transfer(rho2, ring, bound, T1.coalg, T1.alg)
    coalg, alg = T1.coalg, T1.alg
    R = theta_chain_map(theta, T1.bundle, T2.bundle, T1.contraction.big, T2.contraction.big)
    psi = T2.contraction.project @ R @ T1.contraction.inject
    e = rho1.group.identity(0)

    def h_fn(c):
        out = {}
        if (c, e) not in psi.columns:
            return out
        for (c1, a), v in psi((c, e)).items():
            k = coalg.eps(c1)
            if k:
                add_into(out, {a: 1}, k * v, ring)
        return out

    h = ConvolutionElement.from_function(coalg, alg, 0, h_fn)
    hom, hcap = check_homotopy(h, T1.tau, T2.tau)
    if not hom.augmented:
        raise TwistingError("h^θ is not augmented")
    psi_map = GradedMap(hcap.source, hcap.target, 0, psi.columns)
    return ThetaHomotopy(hom, hcap, T1, T2, R, psi_map)


def homology_transfer_report(t: Transfer, degrees) -> VerificationReport:
    """H_n of the twisted tensor product against H_n of the twisted cartesian
    product, the latter built directly from its faces."""
    rep = VerificationReport("homology transfer")
    ttp = t.twisted_tensor_product()
    tcp = chain_complex(t.bundle, t.coalg.ring, t.bound)
    for n in degrees:
        h1, h2 = homology(ttp, n), homology(tcp, n)
        ok = (h1.free_rank, h1.torsion) == (h2.free_rank, h2.torsion)
        rep.checks.append(Check(f"H_{n}: {h1} vs {h2}", n, ok, 1, None if ok else {"ttp": str(h1), "tcp": str(h2)}))
    return rep
