"""Smoke test for the clifford_quadric extension module."""

from fractions import Fraction

import clifford_quadric as cq


def main():
    assert cq.alpha(1) == 2
    assert cq.beta(1, 1) == 4
    assert cq.beta(3, Fraction(7, 6)) == 14
    assert cq.beta_relaxed(3, "1/4") == "9/2"

    rep = cq.general_bound(3, "7/6")
    assert rep["theorem"] == "general" and rep["bound"] == 14
    assert cq.unbalanced_bound(1, 0, 2, 2)["bound"] == 3
    assert cq.stratified_bound(3, Fraction(1, 4))["bound"] == 4

    # O(a,b) has (a+1)(b+1) sections when both are effective
    for a in range(4):
        for b in range(4):
            assert cq.line_bundle_cohomology(a, b) == ((a + 1) * (b + 1), 0, 0)
    assert cq.line_bundle_cohomology(-2, 0) == (0, 1, 0)

    ch = cq.ChernCharacter.from_chi(3, (4, 3), 14)
    assert ch.rank == 3 and ch.c1 == (4, 3) and ch.chi() == 14
    assert cq.bn_locus_decision(ch, 15)["decision"] == "Empty"
    assert ch == cq.steiner_character(1, 1, 3, 1, 0)
    assert cq.maximal_structure_check(ch) is not None

    sample = cq.steiner_h0_random(1, 1, 3, 1, 0, seed=42)
    assert sample["h0"] == cq.twisted_steiner_h0_formula(1, 1, 3, 1, 0) == 14

    audit = cq.audit_direct_sum([(1, 1, 3)])
    assert audit["passed"] and audit["cohomology"]["h0"] == 12

    pts = [[1, 0, 0, 1], [0, 1, 1, 0], [1, 1, 1, 2], [1, 2, 1, 3]]
    assert cq.ideal_sheaf_h0(pts, 1, 1) == 0
    assert cq.ideal_sheaf_h0_random(3, 1, 1, seed=7) == 1
    assert cq.audit_ideal_sheaf(pts, 1, 1)["deficiency"] == 4

    witnesses = cq.sharpness_search(1, 3, 3, -5)
    assert witnesses and all(w["report"]["passed"] for w in witnesses)

    sweep = cq.run_sweep("theta")
    assert sweep["passed"] and sweep["failures"] == 0

    for bad in (lambda: cq.beta(3, "1/4"), lambda: cq.run_sweep("nope"), lambda: cq.general_bound(1, "1/x")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
