import random

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from twistedbundles.chaincore import GradedMap
from twistedbundles.coeffs import ZZ, CoefficientError, Ring
from twistedbundles.groups import cyclic_group, symmetric_group
from twistedbundles.simplicial import (ConstantGroup, PathGroup, TwistingFunction, check_twisting_function, delta,
                                       minimal_circle, normalized_chains, normalized_group_algebra, transfer)
from twistedbundles.twisting import (ConvolutionElement, ConvolutionError, TwistingError, cap,
                                     check_homotopy, check_twisting_cochain, compose_bundle_morphism,
                                     convolution_inverse, cup, decide_gauge_equivalence,
                                     extract_twisting_cochain, gauge_act, master_equation_defect,
                                     twisted_tensor_product)

C_D2 = normalized_chains(delta(2), bound=2)
A_PZ2 = normalized_group_algebra(PathGroup(cyclic_group(2)), bound=2)
S1 = minimal_circle()
SIGMA = S1.generator("σ")


def random_element(rng, C, A, shift, lo=-2, hi=2):
    amod = A.complex.module
    vals = {}
    for c in C.complex.module.all_labels():
        n = C.degree(c) + shift
        if amod.represents(n):
            vals[c] = {a: rng.randint(lo, hi) for a in amod.basis.get(n, ())}
    return ConvolutionElement.from_function(C, A, shift, lambda c: vals.get(c, {}))


def test_coalgebra_and_algebra_axioms():
    assert C_D2.verify().ok
    assert A_PZ2.verify().ok
    assert normalized_group_algebra(ConstantGroup(symmetric_group(3))).verify().ok
    assert normalized_chains(S1).verify().ok


@seed(31)
@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([-1, 0, 1]), st.sampled_from([-1, 0, 1]), st.sampled_from([-1, 0]))
def test_convolution_algebra_laws(s, i, j, k):
    rng = random.Random(s)
    a, b, c = (random_element(rng, C_D2, A_PZ2, n) for n in (i, j, k))
    unit = ConvolutionElement.unit(C_D2, A_PZ2)
    assert cup(unit, a).equals(a) and cup(a, unit).equals(a)
    lhs, rhs = cup(cup(a, b), c), cup(a, cup(b, c))
    assert lhs.first_difference(rhs) is None
    # D is a derivation: D(a∪b) = Da∪b + (-1)^|a| a∪Db
    d_ab = cup(a, b).D()
    expected = cup(a.D(), b) + cup(a, b.D()).scaled(-1 if i % 2 else 1)
    assert d_ab.first_difference(expected) is None


def circle_tau(G, g, ring=ZZ, bound=3):
    rho = TwistingFunction.from_elements(S1, ConstantGroup(G), {SIGMA: g})
    return transfer(rho, ring, bound)


def test_circle_twisting_cochain_is_one_minus_g():
    T = circle_tau(cyclic_group(2), 1)
    tau = T.tau
    assert tau.augmented and tau.coaugmented
    assert tau(SIGMA) == {(0, 0): 1, (0, 1): -1}


def triangle_transfer():
    # ρ on Δ[2] into Z3 with ρ(02) = ρ(01)ρ(12)
    e01, e02, e12 = delta(2).nondegenerate(1)
    top, = delta(2).nondegenerate(2)
    rho = TwistingFunction.from_elements(delta(2), ConstantGroup(cyclic_group(3)),
                                         {e01: 1, e12: 1, e02: 2, top: 1})
    check_twisting_function(rho, 2)
    return transfer(rho, ZZ, 2)


def test_master_equation_iff_square_zero():
    T = triangle_transfer()
    assert T.report().ok
    D = twisted_tensor_product(T.coalg, T.alg, T.tau)
    assert extract_twisting_cochain(D, T.coalg, T.alg).element.equals(T.tau.element)
    broken = T.tau.element.scaled(2)
    assert not master_equation_defect(broken).is_zero()
    with pytest.raises(TwistingError):
        check_twisting_cochain(broken)
    with pytest.raises(TwistingError):
        twisted_tensor_product(T.coalg, T.alg, broken)


def test_cap_of_unit_is_identity():
    T = circle_tau(cyclic_group(2), 1)
    unit = ConvolutionElement.unit(T.coalg, T.alg)
    E = twisted_tensor_product(T.coalg, T.alg, None)
    m = cap(unit, E.module)
    assert all(m(b) == {b: 1} for b in E.module.all_labels())


def test_convolution_inverse_cases():
    T = circle_tau(cyclic_group(2), 1)
    C, A = T.coalg, T.alg
    unit = ConvolutionElement.unit(C, A)
    assert convolution_inverse(unit, 3).equals(unit)
    # ηε + h̃ with h̃ supported in degree ≥ 1 over the path-group algebra
    U = transfer(TwistingFunction(S1, PathGroup(cyclic_group(2)), {SIGMA: (1,)}), ZZ, 3)
    phi = ConvolutionElement.from_function(
        U.coalg, U.alg, 0, lambda c: U.alg.one() if c != SIGMA else {((0, 1)): 2, ((1, 0)): -1})
    inv = convolution_inverse(phi, 3)
    assert cup(phi, inv).equals(ConvolutionElement.unit(U.coalg, U.alg))
    # degree-0 operator singular over Z
    two = ConvolutionElement.from_function(C, A, 0, lambda c: {(0, 0): 2} if c != SIGMA else {})
    with pytest.raises(ConvolutionError):
        convolution_inverse(two, 3)


def test_gauge_action_preserves_flags():
    T = circle_tau(symmetric_group(3), 1, Ring(5))
    C, A = T.coalg, T.alg
    g = 2
    phi = ConvolutionElement.from_function(C, A, 0, lambda c: {(0, g): 1} if C.degree(c) == 0 else {})
    moved = gauge_act(phi, T.tau)
    assert master_equation_defect(moved.element).is_zero()
    assert moved.augmented == T.tau.augmented
    assert moved.coaugmented == T.tau.coaugmented


def test_decide_gauge_equivalence():
    T = circle_tau(cyclic_group(3), 1, Ring(7), 5)
    h = decide_gauge_equivalence(T.tau, T.tau, 5)
    assert h is not None and h.element.equals(ConvolutionElement.unit(T.coalg, T.alg))
    Z = circle_tau(cyclic_group(3), 1)
    with pytest.raises(CoefficientError):
        decide_gauge_equivalence(Z.tau, Z.tau, 3)


def test_homotopy_check_rejects_non_homotopies():
    T1 = circle_tau(cyclic_group(3), 1)
    T2 = transfer(TwistingFunction.from_elements(S1, ConstantGroup(cyclic_group(3)), {SIGMA: 2}),
                  ZZ, 3, T1.coalg, T1.alg)
    unit = ConvolutionElement.unit(T1.coalg, T1.alg)
    with pytest.raises(TwistingError):
        check_homotopy(unit, T1.tau, T2.tau)


def test_compose_bundle_morphism_identity():
    T = circle_tau(cyclic_group(2), 1)
    C, A = T.coalg, T.alg
    unit = ConvolutionElement.unit(C, A)
    hom, _ = check_homotopy(unit, T.tau, T.tau)
    chi = GradedMap.identity(C.complex)
    phi = GradedMap.identity(A.complex)
    F = compose_bundle_morphism(chi, hom, phi, T.tau, T.tau)
    assert all(F(b) == {b: 1} for b in F.columns)
