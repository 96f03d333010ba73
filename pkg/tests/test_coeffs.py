import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from sympy import GF, Matrix
from sympy import ZZ as SZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants
from sympy.polys.matrices import DomainMatrix

from twistedbundles import _kernels_py, kernels
from twistedbundles.coeffs import (ZZ, CoefficientError, Ring, SparseMatrix, determinant, homology,
                                   invariant_factors, rank, smith_normal_form, solve_mod_p,
                                   solve_unimodular)
from twistedbundles.chaincore import ChainComplex, GradedModule

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


def sparse(dense):
    return SparseMatrix.from_dense(dense, len(dense[0]))


@seed(11)
@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_is_a_unimodular_diagonalisation(dense):
    M = sparse(dense)
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert D.is_diagonal()
    diag = [d for d in D.diagonal() if d]
    assert all(d > 0 for d in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1


@seed(12)
@settings(max_examples=80, deadline=None)
@given(matrices)
def test_invariant_factors_match_sympy(dense):
    ours = invariant_factors(sparse(dense))
    theirs = [abs(int(x)) for x in sympy_invariants(Matrix(dense), domain=SZZ) if x != 0]
    assert ours == theirs


@seed(13)
@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_sympy(dense, p):
    # rank over GF(p) from sympy's own field arithmetic
    dm = DomainMatrix.from_Matrix(Matrix(dense)).convert_to(GF(p))
    assert rank(sparse(dense), Ring(p)) == dm.rank()


@seed(14)
@settings(max_examples=60, deadline=None)
@given(matrices)
def test_compiled_and_python_kernels_agree(dense):
    assert kernels.smith_invariants([list(r) for r in dense]) == _kernels_py.smith_invariants(
        [list(r) for r in dense])
    for p in (2, 5, 7):
        assert kernels.rref_mod_p(dense, p) == _kernels_py.rref_mod_p(dense, p)


def test_compiled_kernel_overflow_falls_back():
    big = 2 ** 62
    dense = [[big, 3], [5, big]]
    assert kernels.smith_invariants(dense) == _kernels_py.smith_invariants(dense)
    assert invariant_factors(sparse([[big, 0], [0, big * 3]])) == [big, 3 * big]


def test_ring_parsing_and_errors():
    assert Ring.parse("Z") == ZZ
    assert Ring.parse("Z/7").modulus == 7
    assert Ring.from_json(Ring(5).to_json()) == Ring(5)
    with pytest.raises(CoefficientError):
        Ring.parse("Q")
    with pytest.raises(CoefficientError):
        smith_normal_form(sparse([[2]]), Ring(6))
    with pytest.raises(CoefficientError):
        rank(sparse([[2]]), Ring(4))


def test_field_smith_form_is_echelon():
    U, D, V = smith_normal_form(sparse([[2, 4], [1, 2]]), Ring(5))
    assert D.diagonal() == [1, 0]


def circle_complex(ring=ZZ):
    mod = GradedModule(ring, {0: ["v"], 1: ["e"]})
    return ChainComplex.from_function(mod, lambda b: {})


def projective_plane_complex(ring=ZZ):
    # cellular chains: one cell per degree, d2 = 2
    mod = GradedModule(ring, {0: ["p"], 1: ["a"], 2: ["f"]})
    return ChainComplex.from_function(mod, lambda b: {"a": 2} if b == "f" else {})


def test_homology_of_small_complexes():
    assert str(homology(circle_complex(), 1)) == "Z"
    rp2 = projective_plane_complex()
    assert [str(homology(rp2, n)) for n in range(3)] == ["Z", "Z/2", "0"]
    rp2_mod2 = projective_plane_complex(Ring(2))
    assert [homology(rp2_mod2, n).free_rank for n in range(3)] == [1, 1, 1]


def test_solvers():
    x, null = solve_mod_p([[1, 2], [2, 4]], [3, 6], 7)
    assert (x[0] + 2 * x[1]) % 7 == 3 and len(null) == 1
    assert solve_mod_p([[1, 2], [2, 4]], [3, 5], 7) is None
    assert solve_unimodular([[2, 1], [1, 1]], [3, 2]) == [1, 1]
    assert solve_unimodular([[2, 0], [0, 1]], [2, 1]) is None
