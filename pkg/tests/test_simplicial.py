from math import comb

import pytest

from twistedbundles.chaincore import TruncationError, verify_contraction
from twistedbundles.coeffs import ZZ, Ring, homology
from twistedbundles.groups import cyclic_group, symmetric_group
from twistedbundles.simplicial import (ConstantGroup, GeneratedSimplicialSet, GroupValuedMap, PathGroup, Product,
                                       SimplicialError, TwistingFunction, TwistingFunctionError, WBar,
                                       boundary_of_simplex, bundle_report, canonical_iso_report,
                                       chain_complex, check_twisting_function, classify_bundles, delta,
                                       ez_contraction, extract_twisting_function, minimal_circle,
                                       shuffle_model, theta_act, theta_report, twisted_cartesian_product,
                                       validate_simplicial_group, validate_simplicial_set, w_constructions)

S1 = minimal_circle()
SIGMA = S1.generator("σ")


def types(C, degrees):
    return [str(homology(C, n)) for n in degrees]


@pytest.mark.parametrize("X", [delta(3), S1, boundary_of_simplex(3), Product(delta(1), delta(1))],
                         ids=["delta3", "circle", "sphere2", "square"])
def test_simplicial_identities(X):
    assert validate_simplicial_set(X, 4).ok


def test_simplex_counts():
    # Δ[2]_n consists of monotone maps [n] → [2]
    assert [len(delta(2).simplices(n)) for n in range(4)] == [comb(n + 3, 2) for n in range(4)]
    assert [len(S1.simplices(n)) for n in range(4)] == [1, 2, 3, 4]


def test_json_roundtrip_of_generated_sets():
    X = boundary_of_simplex(2)
    Y = GeneratedSimplicialSet.from_json(X.to_json())
    assert Y.to_json() == X.to_json()
    bad = X.to_json()
    name = next(iter(bad["faces"]))
    bad["faces"][name][0][1] = "nope"
    with pytest.raises(SimplicialError):
        GeneratedSimplicialSet.from_json(bad)


def test_truncated_sets_refuse_higher_degrees():
    wbar = WBar(ConstantGroup(cyclic_group(2)), 3)
    wbar.simplices(3)
    with pytest.raises(TruncationError):
        wbar.simplices(4)


def test_shuffle_counts_and_signs():
    for p, q in [(1, 1), (2, 1), (2, 2)]:
        model = shuffle_model(p, q)
        assert len(model) == comb(p + q, p)
    assert sorted(s for *_, s in shuffle_model(1, 1)) == [-1, 1]


def test_eilenberg_zilber_contraction():
    c = ez_contraction(delta(1), delta(1), ZZ, 3)
    assert verify_contraction(c).ok
    c = ez_contraction(S1, S1, Ring(2), 3)
    assert verify_contraction(c).ok
    assert types(c.big, range(3)) == types(c.small, range(3))


def test_simplicial_groups():
    for K in (ConstantGroup(symmetric_group(3)), PathGroup(cyclic_group(2))):
        assert validate_simplicial_group(K, 3).ok


def test_invalid_twisting_function_is_rejected():
    # ρ(01)ρ(12) ≠ ρ(02) in Z3
    e01, e02, e12 = delta(2).nondegenerate(1)
    top, = delta(2).nondegenerate(2)
    rho = TwistingFunction.from_elements(delta(2), ConstantGroup(cyclic_group(3)),
                                         {e01: 1, e12: 1, e02: 1, top: 1})
    with pytest.raises(TwistingFunctionError):
        check_twisting_function(rho, 2)


def test_double_cover_of_the_circle():
    G = cyclic_group(2)
    rho = TwistingFunction.from_elements(S1, ConstantGroup(G), {SIGMA: 1})
    E = twisted_cartesian_product(S1, ConstantGroup(G), rho)
    assert bundle_report(E, 3).ok
    assert types(chain_complex(E, ZZ, 3), range(3)) == ["Z", "Z", "0"]
    back = extract_twisting_function(E, S1, ConstantGroup(G), 3)
    assert back.key(3) == rho.key(3)


def test_theta_action_moves_within_a_class():
    G = symmetric_group(3)
    K = ConstantGroup(G)
    rho = TwistingFunction.from_elements(S1, K, {SIGMA: 1})
    theta = GroupValuedMap.constant(S1, K, 3)
    assert theta_report(theta, 3).ok
    moved = theta_act(theta, rho, 3)
    check_twisting_function(moved, 3)
    assert moved.key(1) != rho.key(1)
    orbit_of = {r.key(1): i for i, c in enumerate(classify_bundles(S1, G, 1)) for r in c.orbit}
    assert orbit_of[moved.key(1)] == orbit_of[rho.key(1)]


@pytest.mark.parametrize("G,count", [(cyclic_group(3), 3), (symmetric_group(3), 3), (cyclic_group(4), 4)])
def test_circle_bundles_match_conjugacy_classes(G, count):
    classes = classify_bundles(S1, G, 1)
    assert len(classes) == count
    assert sum(c.orbit_size for c in classes) == G.order


def test_wbar_and_w():
    K = ConstantGroup(cyclic_group(2))
    w, wbar, rho = w_constructions(K, 4)
    assert validate_simplicial_set(wbar, 4).ok and validate_simplicial_set(w, 4).ok
    check_twisting_function(rho, 4)
    tcp = twisted_cartesian_product(wbar, K, rho)
    assert canonical_iso_report(w, tcp, 4).ok
    assert types(chain_complex(w, ZZ, 4), range(4)) == ["Z", "0", "0", "0"]
