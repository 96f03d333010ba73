"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line; conftest.py
collects them into the pytest terminal summary.  ``python3
tests/test_acceptance.py`` runs only this file.
"""
import random
import sys
import time

import pytest

from twistedbundles.catnerve import (CoverNerve, FiniteCategory, classify_functors,
                                     cover_classification, nerve)
from twistedbundles.coeffs import ZZ, Ring, homology
from twistedbundles.groups import conjugacy_class_count, cyclic_group, symmetric_group
from twistedbundles.simplicial import (ConstantGroup, GroupValuedMap, PathGroup, TwistedCartesianProduct,
                                       TwistingFunction, canonical_iso_report, chain_complex,
                                       classify_bundles, extract_twisting_function,
                                       homology_transfer_report, minimal_circle,
                                       theta_to_homotopy, transfer, w_constructions)
from twistedbundles.twisting import (ConvolutionElement, convolution_inverse, cup,
                                     decide_gauge_equivalence, extract_twisting_cochain, gauge_act,
                                     master_equation_defect, twisted_tensor_product)

Z2, Z3, S3 = cyclic_group(2), cyclic_group(3), symmetric_group(3)
S1 = minimal_circle()
SIGMA = S1.generator("σ")


def report_line(n, ok, detail, elapsed, limit=None):
    status = "PASS" if ok else "FAIL"
    budget = f" (limit {limit:.0f} s)" if limit else ""
    line = f"ACCEPTANCE {n} {status}: {detail} [{elapsed:.2f} s{budget}]"
    print(line)
    return line


def element_of_order(G, k):
    return next(g for g in G.elements if g != G.identity and G.prod(*[g] * k) == G.identity)


def circle_rho(G, g):
    return TwistingFunction.from_elements(S1, ConstantGroup(G), {SIGMA: g})


def wbar_rho(G, bound):
    _, _, rho = w_constructions(ConstantGroup(G, bound), bound)
    return rho


def hexagon_category():
    return FiniteCategory.from_poset(["0", "1", "2", "01", "02", "12"],
                                     [("0", "01"), ("1", "01"), ("0", "02"), ("2", "02"),
                                      ("1", "12"), ("2", "12")], "hexagon")


def three_arcs():
    return CoverNerve(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])


def homology_types(C, degrees):
    return [(h.free_rank, h.torsion) for h in (homology(C, n) for n in degrees)]


def criterion_instances(bound):
    """Twisting functions for criteria 2 and 3."""
    return [("S1/Z2", circle_rho(Z2, 1)),
            ("S1/S3 transposition", circle_rho(S3, element_of_order(S3, 2))),
            ("S1/S3 3-cycle", circle_rho(S3, element_of_order(S3, 3))),
            ("W̄Z2", wbar_rho(Z2, bound))]


# ---------------------------------------------------------------- criteria

def test_criterion_1_perturbation_lemma():
    t0 = time.time()
    parts = []
    ok = True
    for name, rho in [("S1/Z2", circle_rho(Z2, 1)), ("W̄Z2", wbar_rho(Z2, 7))]:
        T = transfer(rho, ZZ, 7 if name == "W̄Z2" else 6)
        rep = T.report()
        # identities must be exercised in every degree ≤ 6 where the product has cells
        cells = [n for n in range(7) if T.contraction.big.module.basis.get(n)]
        covered = {c.degree for c in rep.checks if c.identity == "Dh = ∇g - Id"}
        good = rep.ok and set(cells) <= covered
        ok &= good
        parts.append(f"{name} {'ok' if good else 'failed'} (degrees {min(cells)}..{max(cells)})")
    elapsed = time.time() - t0
    ok &= elapsed < 10
    report_line(1, ok, "perturbed contraction identities, (d + 𝒟)² = 0: " + ", ".join(parts), elapsed, 10)
    assert ok


def test_criterion_2_master_equation():
    t0 = time.time()
    instances = criterion_instances(6)
    ok = len({name for name, _ in instances}) >= 3
    for name, rho in instances:
        T = transfer(rho, ZZ, 6)
        defect = master_equation_defect(T.tau.element)
        ok &= defect.is_zero() and T.coalg.complex.module.top <= 6
    elapsed = time.time() - t0
    ok &= elapsed < 30
    report_line(2, ok, f"Dτ + τ∪τ = 0 exactly for {len(instances)} twisting functions", elapsed, 30)
    assert ok


def test_criterion_3_homology_transfer():
    t0 = time.time()
    ok = True
    parts = []
    for name, rho in criterion_instances(6):
        T = transfer(rho, ZZ, 6)
        rep = homology_transfer_report(T, range(5))
        ok &= rep.ok
        parts.append(f"{name}: " + ", ".join(str(homology(T.twisted_tensor_product(), n)) for n in range(5)))
    report_line(3, ok, "H(C⊗_τ A) = H(B×_ρ K) for n ≤ 4; " + "; ".join(parts), time.time() - t0)
    assert ok


def test_criterion_4_group_homology():
    t0 = time.time()
    expected = {2: [(1, ()), (0, (2,)), (0, ()), (0, (2,)), (0, ())],
                3: [(1, ()), (0, (3,)), (0, ()), (0, (3,)), (0, ())]}
    ok = True
    for n, G in [(2, Z2), (3, Z3)]:
        _, wbar, _ = w_constructions(ConstantGroup(G, 6), 6)
        got = homology_types(chain_complex(wbar, ZZ, 6), range(5))
        ok &= got == expected[n]
    elapsed = time.time() - t0
    ok &= elapsed < 60
    report_line(4, ok, "H(W̄Z2) = Z, Z/2, 0, Z/2, 0 and H(W̄Z3) = Z, Z/3, 0, Z/3, 0", elapsed, 60)
    assert ok


def test_criterion_5_w_contractible():
    t0 = time.time()
    W, _, rho = w_constructions(ConstantGroup(Z2, 6), 6)
    point = [(1, ())] + [(0, ())] * 4
    hw = homology_types(chain_complex(W, ZZ, 6), range(5))
    ttp = transfer(rho, ZZ, 6).twisted_tensor_product()
    ht = homology_types(ttp, range(5))
    ok = hw == point and ht == hw
    report_line(5, ok, "H(WZ2) = H(point) = H(C(W̄Z2) ⊗_τ Z[Z2]) for n ≤ 4", time.time() - t0)
    assert ok


def test_criterion_6_classification_counts():
    t0 = time.time()
    hexagon = hexagon_category()
    hexagon_nerve = nerve(hexagon)
    ok = True
    parts = []
    for G, expected in [(Z2, 2), (Z3, 3), (S3, 3)]:
        oracle = conjugacy_class_count(G)
        circle = len(classify_bundles(S1, G))
        functors = len(classify_functors(hexagon, G))
        bundles_hex = len(classify_bundles(hexagon_nerve, G))
        cover = len(cover_classification(three_arcs(), G).classes)
        good = oracle == expected == circle == functors == bundles_hex == cover
        ok &= good
        parts.append(f"{G.name}: oracle {oracle}, S1 {circle}, hexagon {functors}/{bundles_hex}, cover {cover}")
    elapsed = time.time() - t0
    ok &= elapsed < 60
    report_line(6, ok, "; ".join(parts), elapsed, 60)
    assert ok


def roundtrip_instances():
    return [circle_rho(Z2, 1), circle_rho(Z3, 1), circle_rho(Z3, 2), circle_rho(S3, element_of_order(S3, 2)),
            circle_rho(S3, element_of_order(S3, 3)), wbar_rho(Z2, 4),
            TwistingFunction(S1, PathGroup(Z2), {SIGMA: (1,)})]


def test_criterion_7_roundtrips():
    t0 = time.time()
    cochain_ok, function_ok = 0, 0
    cases = roundtrip_instances()
    for rho in cases:
        bound = 4 if rho.base.degree_bound else 3
        T = transfer(rho, ZZ, bound)
        D = T.twisted_tensor_product()
        back = extract_twisting_cochain(D, T.coalg, T.alg)
        D2 = twisted_tensor_product(T.coalg, T.alg, back)
        if back.element.equals(T.tau.element) and D2.differential.first_difference(D.differential) is None:
            cochain_ok += 1
        E = TwistedCartesianProduct(rho.base, rho.group, rho)
        rho2 = extract_twisting_function(E, rho.base, rho.group, bound)
        E2 = TwistedCartesianProduct(rho.base, rho.group, rho2)
        same_faces = all(E.face(i, s) == E2.face(i, s) for n in range(1, bound + 1)
                         for s in E.simplices(n) for i in range(n + 1))
        if rho2.key(bound) == rho.key(bound) and same_faces:
            function_ok += 1
    for cls in classify_bundles(nerve(hexagon_category()), S3):
        rho = cls.representative
        E = TwistedCartesianProduct(rho.base, rho.group, rho)
        if extract_twisting_function(E, rho.base, rho.group, 2).key(2) == rho.key(2):
            function_ok += 1
    ok = cochain_ok >= 5 and function_ok >= 5 and cochain_ok == len(cases) and function_ok == len(cases) + 3
    report_line(7, ok, f"τ ↔ bundle differential on {cochain_ok} instances, ρ ↔ TCP on {function_ok}",
                time.time() - t0)
    assert ok


def _random_unit(rng, C, A, p, coaugmented):
    while True:
        if coaugmented:
            vals = {n: {a: rng.randrange(p) for a in A.complex.module.basis.get(n, ())}
                    for n in range(1, C.complex.module.top + 1)}

            def fn(c, vals=vals):
                n = C.degree(c)
                return A.one() if n == 0 else dict(vals.get(n, {}))
        else:
            v0 = {a: rng.randrange(p) for a in A.complex.module.basis[0]}

            def fn(c, v0=v0):
                return dict(v0) if C.degree(c) == 0 else {}
        phi = ConvolutionElement.from_function(C, A, 0, fn)
        try:
            convolution_inverse(phi, C.complex.module.top + 1)
        except (ArithmeticError, ValueError):
            continue
        return phi


def test_criterion_8_gauge_coherence():
    t0 = time.time()
    rng = random.Random(20240517)
    F5, F7 = Ring(5), Ring(7)
    action_ok = 0
    pools = [transfer(circle_rho(S3, element_of_order(S3, 2)), F5, 3),
             transfer(circle_rho(S3, element_of_order(S3, 3)), F5, 3),
             transfer(TwistingFunction(S1, PathGroup(Z2), {SIGMA: (1,)}), F5, 3)]
    instances = 24
    for k in range(instances):
        T = pools[k % len(pools)]
        C, A = T.coalg, T.alg
        coaug = k % len(pools) == 2
        phi, psi = _random_unit(rng, C, A, 5, coaug), _random_unit(rng, C, A, 5, coaug)
        unit = ConvolutionElement.unit(C, A)
        lhs = gauge_act(phi, gauge_act(psi, T.tau))
        rhs = gauge_act(cup(phi, psi), T.tau)
        if gauge_act(unit, T.tau).element.equals(T.tau.element) and lhs.element.equals(rhs.element):
            action_ok += 1

    # θ-homotopies for every conjugation of every S1/S3 twisting function
    K = ConstantGroup(S3)
    theta_ok = theta_total = 0
    for x in S3.elements:
        rho = circle_rho(S3, x)
        first = transfer(rho, ZZ, 3)
        for c in S3.elements:
            theta_total += 1
            H = theta_to_homotopy(GroupValuedMap.constant(S1, K, c), rho, ZZ, 3, first=first)
            if H.square_report().ok and H.homotopy.augmented:
                theta_ok += 1

    # decide_gauge_equivalence on constructed equivalent pairs
    decide_ok = decide_total = 0
    T = pools[2]
    for _ in range(6):
        decide_total += 1
        phi = _random_unit(rng, T.coalg, T.alg, 5, True)
        if decide_gauge_equivalence(T.tau, gauge_act(phi, T.tau), 3) is not None:
            decide_ok += 1
    for T in pools[:2]:
        decide_total += 1
        if decide_gauge_equivalence(T.tau, T.tau, 3) is not None:
            decide_ok += 1

    # non-conjugate Z/3 pair over Z/7
    t1 = transfer(circle_rho(Z3, 1), F7, 5)
    t2 = transfer(circle_rho(Z3, 2), F7, 5, t1.coalg, t1.alg)
    inequivalent = decide_gauge_equivalence(t1.tau, t2.tau, 5) is None
    ok = (action_ok == instances >= 20 and theta_ok == theta_total and decide_ok == decide_total
          and inequivalent)
    report_line(8, ok, f"action laws {action_ok}/{instances}, θ-homotopies {theta_ok}/{theta_total}, "
                       f"equivalences found {decide_ok}/{decide_total}, Z/3 pair "
                       f"{'inequivalent through degree 5' if inequivalent else 'equivalent'}",
                time.time() - t0)
    assert ok


def test_criterion_9_canonical_iso():
    t0 = time.time()
    ok = True
    for G in (Z2, Z3):
        K = ConstantGroup(G, 5)
        W, wbar, rho = w_constructions(K, 5)
        rep = canonical_iso_report(W, TwistedCartesianProduct(wbar, K, rho), 5)
        ok &= rep.ok and max(c.degree for c in rep.checks) == 5
    report_line(9, ok, "W̄K ×_ρ K → WK bijective, simplicial, K-equivariant through degree 5 (Z2, Z3)",
                time.time() - t0)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
