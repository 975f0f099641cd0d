"""Acceptance suite: one test per criterion, one printed line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math
import random
import sys
import time
from fractions import Fraction

import numpy as np

import dynalg as d
from dynalg.fixtures import (
    FOUR_POINT_OVERLAP,
    FOUR_POINT_SPLIT_A,
    FOUR_POINT_SPLIT_B,
    THREE_POINT_DISJOINT,
    TWO_POINT_CONSTANT,
    TWO_POINT_MIXED,
)

from oracles import (
    brute_force_partition,
    make_rng,
    random_dyadic_poly,
    random_element,
    random_system,
    scrambled_pair,
)


def _report(number: int, label: str, ok: bool, elapsed: float, limit: float | None):
    status = "PASS" if ok else "FAIL"
    budget = f" [{elapsed:.2f}s/{limit:.0f}s]" if limit else f" [{elapsed:.2f}s]"
    print(f"[{status}] criterion {number:2d}: {label}{budget}", file=sys.stderr)
    assert ok, f"criterion {number} failed: {label}"
    if limit is not None:
        assert elapsed < limit, f"criterion {number} exceeded {limit}s ({elapsed:.2f}s)"


def _run(number, label, limit, body):
    started = time.perf_counter()
    try:
        ok = body()
    except AssertionError:
        _report(number, label, False, time.perf_counter() - started, limit)
        raise
    _report(number, label, bool(ok), time.perf_counter() - started, limit)


# ---- 1 ---------------------------------------------------------------------


def test_criterion_01_two_point_example_suite():
    def body():
        piecewise = d.decide_piecewise(TWO_POINT_MIXED, TWO_POINT_CONSTANT)
        partition = d.decide_partition(TWO_POINT_MIXED, TWO_POINT_CONSTANT)
        conj_off = d.decide_conjugate(TWO_POINT_MIXED, TWO_POINT_CONSTANT)
        conj_on = d.decide_conjugate(TWO_POINT_MIXED, TWO_POINT_CONSTANT, allow_recolor=True)
        return (
            piecewise is not None
            and partition is None
            and conj_off is None
            and conj_on is None
        )

    _run(1, "two-point pair: piecewise yes, partition no, conjugate no", 1.0, body)


# ---- 2 ---------------------------------------------------------------------


def test_criterion_02_signature_separation():
    def body():
        s_mixed = d.local_signature(TWO_POINT_MIXED, 0)
        s_const = d.local_signature(TWO_POINT_CONSTANT, 0)
        return (
            s_mixed == (1, 1, 1, 1)
            and s_const == (2, 2)
            and not d.signatures_equivalent(s_mixed, s_const)
        )

    _run(2, "local signatures {1,1,1,1} vs {2,2} separate the two-point pair", 1.0, body)


# ---- 3 ---------------------------------------------------------------------


def test_criterion_03_overlap_suite():
    def body():
        disjoint, witness = d.ranges_pairwise_disjoint(FOUR_POINT_OVERLAP)
        if disjoint or witness != (0, 1, 1):
            return False
        ok_restriction, _ = d.ranges_pairwise_disjoint(THREE_POINT_DISJOINT)
        if not ok_restriction:
            return False
        overlap_decision = d.decide_tensor_vs_semicrossed(FOUR_POINT_OVERLAP)
        disjoint_decision = d.decide_tensor_vs_semicrossed(THREE_POINT_DISJOINT)
        return (
            not overlap_decision.isomorphic
            and overlap_decision.overlap[0] == 1
            and disjoint_decision.isomorphic
        )

    _run(3, "four-point overlap at point 1; three-point restriction disjoint", 1.0, body)


# ---- 4 ---------------------------------------------------------------------


def test_criterion_04_isomorphism_round_trip():
    def body():
        witness = d.decide_partition(FOUR_POINT_SPLIT_A, FOUR_POINT_SPLIT_B)
        if witness is None:
            return False
        forward, reverse = d.partition_isomorphism(
            FOUR_POINT_SPLIT_A, FOUR_POINT_SPLIT_B, witness
        )
        for i in range(2):
            s = d.SemicrossedElement.generator(FOUR_POINT_SPLIT_A, i)
            t = d.SemicrossedElement.generator(FOUR_POINT_SPLIT_B, i)
            if d.apply_hom(reverse, d.apply_hom(forward, s)) != s:
                return False
            if d.apply_hom(forward, d.apply_hom(reverse, t)) != t:
                return False
        rng = make_rng(404)
        for _ in range(100):
            a = random_element(rng, FOUR_POINT_SPLIT_A, 3)
            if d.apply_hom(reverse, d.apply_hom(forward, a)) != a:
                return False
            b = random_element(rng, FOUR_POINT_SPLIT_B, 3)
            if d.apply_hom(forward, d.apply_hom(reverse, b)) != b:
                return False
        return True

    _run(4, "isomorphism pair round-trips 100 random elements exactly", 5.0, body)


# ---- 5 ---------------------------------------------------------------------


def _criterion5_pairs():
    rng = make_rng(505)
    for trial in range(500):
        size = rng.randint(1, 4)
        if trial % 3 == 0:
            yield scrambled_pair(rng, size, 2, constant_recolor=(trial % 6 == 0))
        else:
            yield random_system(rng, size, 2), random_system(rng, size, 2)


def test_criterion_05_oracle_equivalence():
    def body():
        for a, b in _criterion5_pairs():
            expected = brute_force_partition(a, b)
            got = d.decide_partition(a, b)
            if expected is None:
                if got is not None:
                    return False
            else:
                if got is None or (got.gamma, got.alpha) != expected:
                    return False
        return True

    _run(5, "partition decider agrees with full enumeration on 500 pairs", None, body)


# ---- 6 ---------------------------------------------------------------------


def _criterion6_pairs():
    rng = make_rng(606)
    for trial in range(500):
        size, arity = rng.randint(1, 5), rng.randint(1, 3)
        if trial % 2 == 0:
            yield scrambled_pair(rng, size, arity, constant_recolor=(trial % 4 == 0))
        else:
            yield random_system(rng, size, arity), random_system(rng, size, arity)


def test_criterion_06_implication_chain():
    def body():
        partitions = conjugacies = 0
        for a, b in _criterion6_pairs():
            conj = d.decide_conjugate(a, b)
            part = d.decide_partition(a, b)
            piece = d.decide_piecewise(a, b)
            if conj is not None and part is None:
                return False
            if part is not None and piece is None:
                return False
            partitions += part is not None
            conjugacies += conj is not None
        return partitions > 50 and conjugacies > 10  # chain must be exercised

    _run(6, "conjugate => partition => piecewise on 500 random pairs", None, body)


# ---- 7 ---------------------------------------------------------------------


def test_criterion_07_single_class_partition_implies_conjugacy():
    def body():
        rng = make_rng(707)
        tested = 0
        trials = 0
        while tested < 500 and trials < 20000:
            trials += 1
            a, b = scrambled_pair(rng, rng.randint(2, 5), 2)
            if len(d.equivalence_classes(a)) != 1:
                continue
            tested += 1
            if d.decide_partition(a, b) is None:
                continue
            if d.decide_conjugate(a, b, allow_recolor=True) is None:
                return False
        return tested == 500

    _run(7, "single-class partition matches imply recoloured conjugacy", None, body)


# ---- 8 ---------------------------------------------------------------------


def test_criterion_08_fourier_cesaro_calculus():
    def body():
        rng = make_rng(808)
        zs = [
            d.qc(Fraction(3, 5), Fraction(4, 5)),
            d.qc(Fraction(-5, 13), Fraction(12, 13)),
        ]
        for _ in range(25):
            a = random_element(rng, TWO_POINT_MIXED, 5, terms=6)
            total = d.SemicrossedElement.zero(TWO_POINT_MIXED)
            for k in range(a.degree + 1):
                total = total + d.fourier_component(a, k)
            if total != a:
                return False
            for k in range(a.degree + 1):
                if d.fourier_component(d.gauge(a, zs), k) != d.gauge(
                    d.fourier_component(a, k), zs
                ):
                    return False
            deg = a.degree
            if deg == 0:
                continue
            max_sq = max(
                v.abs_sq() for coeff in a.terms.values() for v in coeff.values
            )
            for k in range(1, 101):
                deviation = a - d.cesaro_mean(a, k)
                bound_sq = Fraction(deg, k) ** 2 * max_sq
                for coeff in deviation.terms.values():
                    for v in coeff.values:
                        if v.abs_sq() > bound_sq:
                            return False
        return True

    _run(8, "degree components reassemble, commute with gauge, Cesaro bound", None, body)


# ---- 9 ---------------------------------------------------------------------


def test_criterion_09_abelianization_separates_characters():
    def body():
        rng = make_rng(909)
        signature = (2, 3)

        def random_point():
            blocks = tuple(
                tuple(d.sample_ball_points(rng, n, 1, 0.7)[0]) for n in signature
            )
            return d.PolyballPoint(blocks)

        for trial in range(200):
            if trial % 2 == 0:
                u = random_dyadic_poly(rng, signature, max_degree=1, terms=2)
                v = random_dyadic_poly(rng, signature, max_degree=1, terms=2)
                w = random_dyadic_poly(rng, signature, max_degree=2, terms=2)
                p = (u * v - v * u) * w
            else:
                p = random_dyadic_poly(rng, signature)
            vanishes = d.abelianize(p) == {}
            max_value = max(
                abs(d.eval_character(p, random_point())) for _ in range(200)
            )
            if vanishes and max_value >= 1e-10:
                return False
            if not vanishes and max_value < 1e-10:
                return False
        return True

    _run(9, "abelianization vanishes iff all 200 point evaluations vanish", None, body)


# ---- 10 --------------------------------------------------------------------


def test_criterion_10_mobius_u1n_identities():
    def body():
        rng = make_rng(1010)
        for n in (1, 2, 3):
            a = np.array(d.sample_ball_points(rng, n, 1, 0.8)[0])
            m = d.BallMobius.involution(a)
            if np.linalg.norm(mdot(m, np.zeros(n)) - a) > 1e-12:
                return False
            if np.linalg.norm(mdot(m, a)) > 1e-12:
                return False
            for p in d.sample_ball_points(rng, n, 100, 0.99):
                lam = np.array(p)
                if np.linalg.norm(mdot(m, mdot(m, lam)) - lam) > 1e-12:
                    return False
            x = d.mobius_to_u1n(m)
            j = -np.eye(n + 1, dtype=complex)
            j[0, 0] = 1
            if np.linalg.norm(x.matrix.conj().T @ j @ x.matrix - j) > 1e-12:
                return False
            if abs(abs(x.x0) ** 2 - np.linalg.norm(x.eta2) ** 2 - 1) > 1e-12:
                return False
            count = 0
            for p in d.sample_ball_points(rng, n, 1000 if n == 2 else 100, 0.999):
                lam = np.array(p)
                image = d.frac_linear(x, lam)
                if np.linalg.norm(image) >= 1.0:
                    return False
                count += 1
            for p in d.sample_ball_points(rng, n, 100, 0.95):
                lam = np.array(p)
                if np.linalg.norm(d.frac_linear(x, lam) - mdot(m, lam)) > 1e-10:
                    return False
        return True

    def mdot(m, lam):
        return d.mobius_apply(m, lam)

    _run(10, "ball involution, U(1,n) identities, ball preservation", None, body)


# ---- 11 --------------------------------------------------------------------


def test_criterion_11_lift_certified():
    def body():
        rng = make_rng(1111)
        for n in (1, 2, 3):
            a = np.array(d.sample_ball_points(rng, n, 1, 0.5)[0])
            x = d.mobius_to_u1n(d.BallMobius.involution(a))
            samples = d.sample_ball_points(rng, n, 50, 0.9)
            report = d.lift_dual_check(x, 25, samples)
            if report.certified_tail > 1e-6:
                return False
            if report.deviation > report.certified_tail + 1e-10:
                return False
        return True

    _run(11, "series lift matches its boundary map within the certified tail", 10.0, body)


# ---- 12 --------------------------------------------------------------------


def test_criterion_12_fock_relations():
    def body():
        loop = d.EdgeColoredGraph(vertices=(0,), edges=((0, 0, 0),), colours=1)
        mixed_graph = d.colored_graph(d.full_subsystem(TWO_POINT_MIXED))
        for graph in (loop, mixed_graph):
            family = d.build_truncated_fock(graph, 3)
            report = d.check_ck_relations(family)
            if not (
                report.initial_projections_ok
                and report.orthogonality_ok
                and report.monochrome_cuntz_ok
                and report.defect_structure_ok
            ):
                return False
            for defect in report.defects:
                if len(defect.vacuum_positions) != 1:
                    return False
        return True

    _run(12, "path-space relations exact; defects are vacuum plus off-colour", 1.0, body)


# ---- 13 --------------------------------------------------------------------


def test_criterion_13_row_norm_obstruction():
    def body():
        decision = d.decide_tensor_vs_semicrossed(FOUR_POINT_OVERLAP)
        rep = decision.obstruction
        mats = [rep.generator_image(k) for k in range(2)]
        if abs(d.row_norm(mats) - math.sqrt(2)) > 1e-12:
            return False
        return all(np.linalg.norm(m, 2) <= 1.0 + 1e-12 for m in mats)

    _run(13, "overlap representation: row norm sqrt(2), each generator a contraction", 1.0, body)


# ---- 14 --------------------------------------------------------------------


def test_criterion_14_signature_necessity():
    def body():
        checked = 0
        witness = d.decide_partition(FOUR_POINT_SPLIT_A, FOUR_POINT_SPLIT_B)
        pairs = [(FOUR_POINT_SPLIT_A, FOUR_POINT_SPLIT_B, witness)]
        for a, b in _criterion5_pairs():
            pairs.append((a, b, d.decide_partition(a, b)))
        for a, b in _criterion6_pairs():
            pairs.append((a, b, d.decide_partition(a, b)))
        for a, b, w in pairs:
            if w is None:
                continue
            checked += 1
            for x in range(a.size):
                if not d.signatures_equivalent(
                    d.local_signature(a, x), d.local_signature(b, w.gamma[x])
                ):
                    return False
        return checked > 50

    _run(14, "every found witness matches local signatures pointwise", None, body)
