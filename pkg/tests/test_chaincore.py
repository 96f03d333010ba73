import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from twistedbundles.chaincore import (ChainComplex, Contraction, GradedMap, GradedModule, Perturbation,
                                      PerturbationError, TruncationError, hom_differential,
                                      normalize_side_conditions, perturb_contraction, tensor_complex,
                                      tensor_maps, verify_contraction)
from twistedbundles.coeffs import ZZ, Ring, StructureError, homology


def simple_complex(basis, d, filtration=None, ring=ZZ, bound=None):
    return ChainComplex.from_function(GradedModule(ring, basis, bound), lambda b: d.get(b, {}), filtration)


def deformation():
    """N = {c} ⊕ (a → b) retracting onto M = {c}, filtered so that a → c lowers filtration."""
    filt_n = {"c": 0, "a": 1, "b": 1}
    N = simple_complex({0: ["c", "b"], 1: ["a"]}, {"a": {"b": 1}}, filt_n)
    M = simple_complex({0: ["c"]}, {}, {"c": 0})
    nab = GradedMap(M, N, 0, {"c": {"c": 1}})
    g = GradedMap(N, M, 0, {"c": {"c": 1}, "b": {}, "a": {}})
    h = GradedMap(N, N, 1, {"c": {}, "b": {"a": -1}, "a": {}})
    return Contraction(M, N, nab, g, h)


def test_duplicate_labels_are_rejected():
    with pytest.raises(ValueError):
        GradedModule(ZZ, {0: ["x"], 1: ["x"]})


def test_truncation_is_loud():
    m = GradedModule(ZZ, {0: ["x"], 1: ["y"]}, degree_bound=1)
    with pytest.raises(TruncationError):
        m.labels(2)
    f = GradedMap(m, m, 0, {"x": {"x": 1}})
    with pytest.raises(TruncationError):
        f("y")


def test_non_square_zero_differential_is_rejected():
    with pytest.raises(StructureError):
        simple_complex({0: ["c"], 1: ["b"], 2: ["a"]}, {"a": {"b": 1}, "b": {"c": 1}})


def test_contraction_identities_and_perturbation():
    c = deformation()
    assert verify_contraction(c).ok
    delta = GradedMap(c.big, c.big, -1, {"a": {"c": 1}, "b": {}, "c": {}})
    p = Perturbation(c.big, delta)
    c2, dcal = perturb_contraction(c, p, 10)
    assert verify_contraction(c2).ok
    assert dcal.is_zero()
    assert [str(homology(c2.big, n)) for n in range(2)] == ["Z", "0"]
    assert [str(homology(c2.small, n)) for n in range(2)] == ["Z", "0"]


def test_perturbation_must_lower_filtration():
    c = deformation()
    bad = GradedMap(c.big, c.big, -1, {"a": {"b": 1}, "b": {}, "c": {}})
    with pytest.raises(StructureError):
        Perturbation(c.big, bad)


def test_unfiltered_series_reports_nontermination():
    # x ↦ y, h(y) = -x: the perturbation y ← x feeds back forever
    N = simple_complex({0: ["y"], 1: ["x"]}, {"x": {"y": 1}})
    M = simple_complex({}, {})
    c = Contraction(M, N, GradedMap(M, N, 0, {}), GradedMap(N, M, 0, {"x": {}, "y": {}}),
                    GradedMap(N, N, 1, {"y": {"x": -1}, "x": {}}))
    assert verify_contraction(c).ok
    delta = GradedMap(N, N, -1, {"x": {"y": 1}, "y": {}})
    with pytest.raises(PerturbationError):
        perturb_contraction(c, Perturbation(N, delta), 20)


def test_normalization_repairs_side_conditions():
    # N: c, and z = dw; h(c) = z breaks h∇ = 0 without touching Dh
    N = simple_complex({0: ["c"], 1: ["z"], 2: ["w"]}, {"w": {"z": 1}})
    M = simple_complex({0: ["c"]}, {})
    nab = GradedMap(M, N, 0, {"c": {"c": 1}})
    g = GradedMap(N, M, 0, {"c": {"c": 1}, "z": {}, "w": {}})
    h = GradedMap(N, N, 1, {"c": {"z": 1}, "z": {"w": -1}, "w": {}})
    c = Contraction(M, N, nab, g, h)
    rep = verify_contraction(c)
    assert not rep.passed("h∇ = 0") and rep.passed("Dh = ∇g - Id")
    assert verify_contraction(normalize_side_conditions(c)).ok


def test_normalization_leaves_good_contraction_alone():
    c = deformation()
    assert normalize_side_conditions(c) is c


@seed(21)
@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_tensor_complex_and_koszul_sign(u, v):
    A = simple_complex({0: ["p", "q"], 1: ["e"]}, {"e": {"p": 1, "q": -1}})
    B = simple_complex({0: ["r"], 1: ["f"]}, {})
    T = tensor_complex(A, B)
    for b in T.module.all_labels():
        assert T.differential.apply(T.differential(b)) == {}
    f = GradedMap(A, A, 0, {lab: {lab: u} for lab in A.module.all_labels()})
    g = GradedMap(B, B, 1, {"r": {"f": v}, "f": {}})
    fg = tensor_maps(f, g)
    # (f⊗g)(e⊗r) = (-1)^(|g||e|) f(e)⊗g(r)
    assert fg(("e", "r")) == ({("e", "f"): -u * v} if u * v else {})
    assert fg(("p", "r")) == ({("p", "f"): u * v} if u * v else {})


def test_hom_differential_of_chain_map_vanishes():
    A = simple_complex({0: ["p", "q"], 1: ["e"]}, {"e": {"p": 1, "q": -1}})
    ident = GradedMap.identity(A)
    ident = GradedMap(A, A, 0, ident.columns)
    assert hom_differential(ident).is_zero()


def test_coefficients_mod_p():
    A = simple_complex({0: ["p"], 1: ["e"]}, {"e": {"p": 2}}, ring=Ring(2))
    assert A.differential("e") == {}
