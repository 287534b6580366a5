"""Acceptance gate: one test per release criterion, each printing a verdict line.

Each criterion is timed against its stated budget and prints

    criterion N (<slug>): PASS (<elapsed>s)

on success; a failed assertion leaves the criterion FAILED in the pytest
report. Run with -v to get the per-criterion pass/fail lines from pytest
itself, or -s to see the printed verdicts inline.
"""

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from strata.appendix import (
    classify_2x2,
    malgrange_pfaffian_residual,
    nonversal_curve,
    rational_c_families,
)
from strata.bundles import closure_leq, elementary_moves, hasse_diagram
from strata.darboux import (
    DEProblem,
    de_closed_form_n2,
    de_oracle_solve,
    de_residual,
    de_solve_jet,
)
from strata.errors import ResonanceError
from strata.families import jordanizability_report
from strata.gauge import (
    build_connection,
    connection_from_de,
    formal_simplify,
    gauge_residual,
    holcon_check,
)
from strata.partitions import (
    SegreSymbol,
    count_double_partitions_sigma,
    count_fold_partitions,
    enumerate_double_partitions,
)
from strata.polynomials import Poly
from strata.series import SeriesMatrix, SeriesRing
from strata.subspaces import Subspace, gap_distance


def X(d, a):
    return Poly.variable(d, a, exact=True)


@contextmanager
def criterion(num, slug, budget_s):
    t0 = time.time()
    yield
    elapsed = time.time() - t0
    print(f"criterion {num} ({slug}): PASS ({elapsed:.2f}s)")
    assert elapsed < budget_s, f"criterion {num} exceeded its {budget_s}s budget: {elapsed:.2f}s"


DOUBLE_COUNTS = [
    1, 3, 6, 14, 27, 58, 111, 223, 424, 817,
    1527, 2870, 5279, 9710, 17622, 31877, 57100, 101887, 180406, 318106,
]


def test_criterion_1_counting():
    with criterion(1, "fold-partition counts", 1.0):
        for n, expected in enumerate(DOUBLE_COUNTS, start=1):
            assert count_fold_partitions(2, n) == expected
            assert count_double_partitions_sigma(n) == expected
        for n in range(1, 13):
            assert len(enumerate_double_partitions(n)) == DOUBLE_COUNTS[n - 1]


def test_criterion_2_hasse_diagram():
    with criterion(2, "weight-4 closure diagram", 1.0):
        h = hasse_diagram(4)
        assert len(h.symbols) == 14
        assert sorted(set(h.dims()), reverse=True) == [16, 15, 14, 13, 12, 11, 10, 9, 8, 7, 1]
        # single eigenvalue [4] arises from [2];[2] by one Type I merge
        one_block = SegreSymbol.from_lists([[4]])
        two_pairs = SegreSymbol.from_lists([[2], [2]])
        assert ("I", one_block) in elementary_moves(two_pairs)
        assert closure_leq(one_block, two_pairs)
        # the most degenerate symbol sits below every other one
        bottom = SegreSymbol.from_lists([[1, 1, 1, 1]])
        for s in h.symbols:
            assert closure_leq(bottom, s)


def test_criterion_3_gap_metric():
    with criterion(3, "gap metric axioms", 10.0):
        rng = np.random.default_rng(20260816)

        def rand_subspace():
            k = rng.integers(0, 6)
            if k == 0:
                return Subspace.zero(5)
            m = rng.standard_normal((5, k)) + 1j * rng.standard_normal((5, k))
            return Subspace.from_spanning(m)

        pairs = [(rand_subspace(), rand_subspace()) for _ in range(200)]
        third = rand_subspace()
        for a, b in pairs:
            dab = gap_distance(a, b)
            assert abs(dab - gap_distance(b, a)) <= 1e-10
            assert -1e-10 <= dab <= 1.0 + 1e-10
            assert gap_distance(a, a) <= 1e-10
            assert dab <= gap_distance(a, third) + gap_distance(third, b) + 1e-10
            if dab < 1.0 - 1e-10:
                assert a.dim == b.dim
        e1 = Subspace.from_spanning(np.array([[1.0], [0.0]]))
        e2 = Subspace.from_spanning(np.array([[0.0], [1.0]]))
        diag = Subspace.from_spanning(np.array([[1.0], [1.0]]))
        assert gap_distance(e1, e1) <= 1e-12
        assert abs(gap_distance(e1, e2) - 1.0) <= 1e-12
        assert abs(gap_distance(e1, diag) - 1 / math.sqrt(2)) <= 1e-12


def test_criterion_4_jordanizability(
    family_upper_3x3, family_block_swap_4x4, family_planar_3x3, family_single_bundle
):
    with criterion(4, "Jordanizability probes", 5.0):
        rep = jordanizability_report(family_upper_3x3, [0])
        assert not rep.verdict and rep.cond1 and all(rep.cond2) and not rep.cond3
        rep = jordanizability_report(family_block_swap_4x4, [0])
        assert not rep.verdict and not rep.cond1
        rep = jordanizability_report(family_planar_3x3, [0, 0])
        assert not rep.verdict and not all(rep.cond2)
        rep = jordanizability_report(family_planar_3x3, [0, 1])
        assert not rep.verdict and all(rep.cond2) and not rep.cond3
        # generic points
        assert jordanizability_report(family_upper_3x3, [Fraction(1, 2)]).verdict
        assert jordanizability_report(family_block_swap_4x4, [Fraction(1, 4)]).verdict
        assert jordanizability_report(family_planar_3x3, [1, 1]).verdict
        # single-bundle family is Jordanizable everywhere
        for x0 in ([0], [1], [-2]):
            assert jordanizability_report(family_single_bundle, x0).verdict


def _rand_rational_de(rng):
    def rq(lo=-3, hi=3, den=5):
        return Fraction(rng.randint(lo, hi), rng.randint(1, den))

    def rpoly(d):
        p = Poly.constant(d, rq(), exact=True)
        for a in range(d):
            p = p + Poly.variable(d, a, exact=True) * Poly.constant(d, rq(), exact=True)
        if rng.random() < 0.6:
            a, b = rng.randrange(d), rng.randrange(d)
            p = (
                p
                + Poly.variable(d, a, exact=True)
                * Poly.variable(d, b, exact=True)
                * Poly.constant(d, rq(), exact=True)
            )
        return p

    def rF0(n):
        return [[0 if i == j else rq() for j in range(n)] for i in range(n)]

    def regular_instance():
        while True:
            n = rng.choice([2, 3])
            d = rng.choice([1, 2, 3])
            f = [rpoly(d) for _ in range(n)]
            x0 = [rq() for _ in range(d)]
            b = [rq(den=4) for _ in range(n)]
            try:
                p = DEProblem(d, n, x0, f, b)
            except Exception:
                continue
            if p.coalescent:
                continue
            return p, rF0(n)

    def coalescent_instance():
        while True:
            b = [rq(den=4) for _ in range(3)]
            k01 = b[1] - b[0] - 1
            k10 = b[0] - b[1] - 1
            if k01 == 0 or k10 == 0:
                continue
            db = b[1] - b[0]
            if db.denominator == 1 and db != 0:
                continue
            F0 = rF0(3)
            F0[0][1] = F0[0][2] * F0[2][1] / k01
            F0[1][0] = F0[1][2] * F0[2][0] / k10
            p = DEProblem(3, 3, ["0", "0", "1"], [X(3, 0), X(3, 1), X(3, 2)], b)
            return p, F0

    return regular_instance, coalescent_instance


def test_criterion_5_darboux_uniqueness():
    with criterion(5, "flat-jet solver vs oracle", 30.0):
        rng = random.Random(20260816)
        regular_instance, coalescent_instance = _rand_rational_de(rng)
        checked = 0
        for trial in range(24):
            p, F0 = coalescent_instance() if trial % 4 == 3 else regular_instance()
            K = rng.choice([2, 3, 4])
            jet, feasible, rep = de_solve_jet(p, F0, K)
            assert feasible and rep.exact_zero
            # independent residual through degree K-1 vanishes exactly
            assert de_residual(p, jet, K - 1).exact_zero
            oracle = de_oracle_solve(p, F0, K)
            for k in range(p.n):
                for h in range(p.n):
                    cs, co = jet.F.entry(k, h).coeffs, oracle.F.entry(k, h).coeffs
                    for e in set(cs) | set(co):
                        assert cs.get(e, 0) == co.get(e, 0)
            checked += 1
        assert checked >= 20
        # n=2 closed form to K = 6, exact
        p2 = DEProblem(2, 2, ["0", "1"], [X(2, 0), X(2, 1)], ["0", "1/2"])
        F0 = [[0, Fraction(3, 2)], [Fraction(-2, 7), 0]]
        jet, feasible, rep = de_solve_jet(p2, F0, 6)
        assert feasible and rep.exact_zero
        closed = de_closed_form_n2(p2, F0, 6)
        for k in range(2):
            for h in range(2):
                cs, co = jet.F.entry(k, h).coeffs, closed.F.entry(k, h).coeffs
                for e in set(cs) | set(co):
                    if sum(e) <= 6:
                        assert cs.get(e, 0) == co.get(e, 0)


def _offdiag_equals(F1, L):
    n = F1.shape[0]
    return all(
        (F1.entry(i, j) - L.entry(i, j)).is_zero()
        for i in range(n)
        for j in range(n)
        if i != j
    )


def _coalescent_connection(K=6):
    p = DEProblem(
        3, 3, ["0", "0", "1"], [X(3, 0), X(3, 1), X(3, 2)], ["0", "1/3", "3/4"]
    )
    k01 = Fraction(1, 3) - 1
    k10 = Fraction(-1, 3) - 1
    F0 = [
        [0, Fraction(1, 4) / k01, 1],
        [Fraction(1, 3) * Fraction(1, 2) / k10, 0, Fraction(1, 3)],
        [Fraction(1, 2), Fraction(1, 4), 0],
    ]
    jet, feasible, _ = de_solve_jet(p, F0, K)
    assert feasible
    return connection_from_de(p, jet)


def test_criterion_6_formal_simplification():
    with criterion(6, "formal gauge ladder", 30.0):
        # rational non-integrable instances: the z-part of the residual
        # vanishes at every determined order and the first correction is L
        ring = SeriesRing(2, 6, ["0", "1"], exact=True)
        delta = ring.matrix([
            [ring.var(0), ring.zero()],
            [ring.zero(), ring.var(1)],
        ])
        for L_entries in (
            [[0, 1], [1, 0]],
            [[0, Fraction(2, 3)], [Fraction(-1, 5), 0]],
        ):
            L = ring.matrix([
                [ring.const(L_entries[i][j]) for j in range(2)] for i in range(2)
            ])
            conn = build_connection(delta, ["0", "1/2"], L)
            gs = formal_simplify(conn, 6, mode="regular")
            for i in range(2):
                for j in range(2):
                    if i != j:
                        assert (gs.F[0].entry(i, j) - L.entry(i, j)).is_zero()
            dz_det, _ = gauge_residual(conn, gs).determined()
            assert all(M.is_zero() for M in dz_det.values())
        # integrable frame from a flat jet: full residual vanishes, K = 6
        p = DEProblem(2, 2, ["0", "1"], [X(2, 0), X(2, 1)], ["0", "1/2"])
        jet, feasible, _ = de_solve_jet(p, [[0, Fraction(3, 2)], [Fraction(-2, 7), 0]], 6)
        assert feasible
        conn = connection_from_de(p, jet)
        gs = formal_simplify(conn, 5, mode="regular")
        assert _offdiag_equals(gs.F[0], conn.L)
        assert gauge_residual(conn, gs).is_zero_determined()
        # coalescent center: jets stay finite and the full residual vanishes
        conn8 = _coalescent_connection()
        assert conn8.pnr_violations == []
        gs8 = formal_simplify(conn8, 4, mode="coalescent")
        assert all(math.isfinite(M.max_abs()) for M in gs8.F)
        assert _offdiag_equals(gs8.F[0], conn8.L)
        assert gauge_residual(conn8, gs8).is_zero_determined()
        # integer eigenvalue-gap injected at a coalescent pair is refused
        ring0 = SeriesRing(2, 4, ["0", "0"], exact=True)
        resonant = build_connection(
            ring0.matrix([
                [ring0.var(0), ring0.zero()],
                [ring0.zero(), ring0.var(1)],
            ]),
            ["0", "1"],
            ring0.zero_matrix(2),
        )
        with pytest.raises(ResonanceError):
            formal_simplify(resonant, 2, mode="coalescent")


def test_criterion_7_holcon_estimate():
    with criterion(7, "coalescence ratio estimate", 10.0):
        conn8 = _coalescent_connection()
        rep = holcon_check(conn8, (0, 1), lambda t: (t, -t, 1.0))
        assert rep.bounded
        # the last four dyadic ratio magnitudes agree within 10 percent
        mags = [abs(v) for v in rep.ratios[-4:]]
        assert max(mags) > 0
        assert (max(mags) - min(mags)) / max(mags) < 0.10
        # constant-L frame diverges along the same kind of path
        ring = SeriesRing(2, 2, ["0", "0"], exact=True)
        delta = ring.matrix([
            [ring.var(0), ring.zero()],
            [ring.zero(), ring.var(1)],
        ])
        L = ring.matrix([[ring.zero(), ring.one()], [ring.one(), ring.zero()]])
        conn = build_connection(delta, ["0", "0"], L)
        rep = holcon_check(conn, (0, 1), lambda t: (t / 2, -t / 2))
        assert not rep.bounded


def test_criterion_8_appendix_models():
    with criterion(8, "rank-2 model verifiers", 5.0):
        # exponential curve and monomial families solve the pf system
        assert nonversal_curve(1, 1, 1, 2).ok
        assert nonversal_curve(2 - 1j, 0.5, 1j, -0.75 + 0.25j).ok
        for p, q in ((1, 2), (-2, 1), (2, 1), (1, 3), (-3, 5)):
            for fam in rational_c_families(p, q):
                assert fam.solves
                assert all(r == 0 for r in fam.residuals)
        # three normal-form shapes and one violating input
        x = X(2, 0)
        y = X(2, 1)
        zero = Poly(2, None, True)
        res = classify_2x2(x, zero, (-x - x) * (-x - x) * Fraction(5, 3), -x)
        assert res.kind == "I" and res.kappa == Fraction(5, 3)
        assert classify_2x2(x + y, zero, zero, x + y).kind == "II"
        assert classify_2x2(x + y, x, zero, x + y).kind == "III"
        bad = classify_2x2(x, y, x * x, -x)
        assert bad.kind == "not-integrable" and not bad.integrable
        # bracket residual: zero for a commuting jet, nonzero otherwise
        ring = SeriesRing(1, 4, ["0"], exact=True)
        t, z = ring.var(0), ring.zero()
        commuting = ring.matrix([[t, z], [z, t.scale(3)]])
        assert malgrange_pfaffian_residual(
            [[1, 0], [0, 2]], [[5, 0], [0, 7]], commuting
        ).is_zero()
        noncommuting = ring.matrix([[z, t], [z, z]])
        rep = malgrange_pfaffian_residual([[1, 0], [0, 2]], [[0, 0], [0, 0]], noncommuting)
        assert not rep.is_zero() and rep.max_abs() > 0
