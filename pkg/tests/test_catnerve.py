import pytest

from twistedbundles.catnerve import (CategoryError, CoverNerve, FiniteCategory, FunctorToGroup,
                                     barycentric_subdivision, classify_functors, cover_classification,
                                     enumerate_functors, equivalent_systems, face_poset, from_path_nerve,
                                     functor_bundle, functor_from_transitions, gauge_compatibility_report,
                                     nerve, principal_object_report, pullback_category, pullback_comparison,
                                     to_path_nerve, transition_report, transition_system,
                                     universal_twist_report)
from twistedbundles.chaincore import TruncationError
from twistedbundles.coeffs import ZZ, homology
from twistedbundles.groups import cyclic_group, symmetric_group
from twistedbundles.simplicial import (boundary_of_simplex, bundle_report, chain_complex,
                                       validate_simplicial_set)

Z2, Z3, S3 = cyclic_group(2), cyclic_group(3), symmetric_group(3)


def hexagon():
    return FiniteCategory.from_poset(["0", "1", "2", "01", "02", "12"],
                                     [("0", "01"), ("1", "01"), ("0", "02"), ("2", "02"),
                                      ("1", "12"), ("2", "12")], "hexagon")


def types(X, degrees, bound=None):
    C = chain_complex(X, ZZ, bound)
    return [str(homology(C, n)) for n in degrees]


def test_category_axioms_are_checked():
    C = FiniteCategory.from_group(Z3)
    bad = dict(C.composition)
    pair = next(p for p in bad if not any(C.is_identity(m) for m in p))
    bad[pair] = C.identity("*")
    with pytest.raises(CategoryError):
        FiniteCategory(C.objects, C.ends, C.identities, bad)
    with pytest.raises(CategoryError):
        FiniteCategory.from_poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_poset_closure_and_json():
    C = FiniteCategory.from_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert len(C.morphisms) == 6 and C.longest_chain() == 2
    D = FiniteCategory.from_json(C.to_json())
    assert D.to_json() == C.to_json()
    G = FiniteCategory.from_group(S3)
    assert FiniteCategory.from_json(G.to_json()).to_json() == G.to_json()
    assert G.longest_chain() is None


def test_group_nerve():
    N = nerve(FiniteCategory.from_group(Z2), 4)
    assert [len(N.simplices(n)) for n in range(4)] == [1, 2, 4, 8]
    assert validate_simplicial_set(N, 4).ok
    assert types(N, range(4), 4) == ["Z", "Z/2", "0", "Z/2"]
    with pytest.raises(TruncationError):
        N.simplices(5)
    with pytest.raises(TruncationError):
        nerve(FiniteCategory.from_group(Z2))


def test_poset_nerve_is_finite():
    N = nerve(hexagon())
    assert N.max_degree == 1
    assert [len(N.nondegenerate(n)) for n in range(2)] == [6, 6]
    assert types(N, range(3)) == ["Z", "Z", "0"]


@pytest.mark.parametrize("C", [FiniteCategory.from_group(S3), hexagon()], ids=["S3", "hexagon"])
def test_universal_twist_and_path_nerve(C):
    N = nerve(C, 3)
    assert universal_twist_report(N, 3).ok
    assert principal_object_report(C, 3).ok


def test_path_nerve_roundtrip_explicit():
    C = FiniteCategory.from_group(Z3)
    N = nerve(C, 2)
    for s in N.simplices(2):
        y = to_path_nerve(C, (s, "1"))
        assert from_path_nerve(C, y) == (s, "1")


def test_functors_and_bundles():
    C = FiniteCategory.from_group(Z3)
    F = FunctorToGroup(C, Z3, {m: Z3.element(m) for m in C.morphisms})
    _, E = functor_bundle(F, 3)
    assert bundle_report(E, 3).ok
    assert pullback_comparison(F, 3).ok
    P = pullback_category(F)
    # the translation category of Z3 on itself: one morphism between any two objects
    assert len(P.objects) == 3 and len(P.morphisms) == 9
    with pytest.raises(CategoryError):
        FunctorToGroup(C, Z3, {m: 1 for m in C.morphisms})


def test_functor_json_extends_along_generators():
    C = FiniteCategory.from_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    F = FunctorToGroup.from_json(C, S3, {"values": {"{a,b}": "021", "{b,c}": "102"}})
    assert F(("a", "c")) == S3.mul(F(("a", "b")), F(("b", "c")))
    with pytest.raises(CategoryError):
        FunctorToGroup.from_json(C, S3, {"values": {"{a,b}": "021"}})
    with pytest.raises(CategoryError):
        FunctorToGroup.from_json(C, S3, {"values": {"{a,d}": "021"}})


@pytest.mark.parametrize("G,classes", [(Z2, 2), (Z3, 3)])
def test_hexagon_functor_classes(G, classes):
    # a 6-cycle of arrows with no composites: every assignment is a functor
    C = hexagon()
    assert len(enumerate_functors(C, G)) == G.order ** 6
    found = classify_functors(C, G)
    assert len(found) == classes
    assert sum(c.orbit_size for c in found) == G.order ** 6


def test_gauge_compatibility():
    C = hexagon()
    F = FunctorToGroup(C, S3, {m: (k % S3.order) for k, m in enumerate(C.morphisms)
                               if not C.is_identity(m)} | {C.identity(o): S3.identity for o in C.objects})
    phi = {o: k % S3.order for k, o in enumerate(C.objects)}
    assert gauge_compatibility_report(F, phi, 2).ok


def test_face_poset_and_subdivision():
    C, N = barycentric_subdivision(boundary_of_simplex(2))
    assert len(C.objects) == 6
    assert types(N, range(3)) == ["Z", "Z", "0"]
    D = face_poset([["a", "b", "c"]])
    assert len(D.objects) == 7


def test_cover_validation():
    with pytest.raises(CategoryError):
        CoverNerve(["a", "b"], [["a", "b", "c"]])
    cover = CoverNerve(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])
    assert CoverNerve.from_json(cover.to_json()).faces == cover.faces


@pytest.mark.parametrize("G,classes", [(Z2, 2), (Z3, 3)])
def test_cover_dictionary(G, classes):
    cover = CoverNerve(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])
    result = cover_classification(cover, G)
    assert result.report.ok
    assert len(result.classes) == classes


def test_transition_systems():
    cover = CoverNerve(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])
    C = cover.category()
    F = classify_functors(C, Z2)[-1].representative
    system = transition_system(F)
    assert transition_report(C, Z2, system).ok
    assert functor_from_transitions(C, Z2, system).key() == F.key()
    assert equivalent_systems(C, Z2, system, system) is not None
    other = transition_system(classify_functors(C, Z2)[0].representative)
    assert equivalent_systems(C, Z2, system, other) is None
