import math
import random

import numpy as np
import pytest

from dynalg.dynsys import EdgeColoredGraph, FiniteSystem, colored_graph, full_subsystem, restrict
from dynalg.fixtures import (
    FOUR_POINT_OVERLAP,
    THREE_POINT_DISJOINT,
    TWO_POINT_CONSTANT,
    TWO_POINT_MIXED,
)
from dynalg.reps import (
    InvalidSlotError,
    build_colour_rep,
    build_truncated_fock,
    check_ck_relations,
    compress_block,
    decide_tensor_vs_semicrossed,
    nest_rep_exists,
    rep_apply,
    row_norm,
)
from dynalg.scalars import qc
from dynalg.semicrossed import FunctionCoeff, SemicrossedElement, pullback, sc_multiply

from oracles import random_element, random_system

LOOP_GRAPH = EdgeColoredGraph(vertices=(0,), edges=((0, 0, 0),), colours=1)


# ---- first-row representations -------------------------------------------------


def test_build_colour_rep_examples():
    rep = build_colour_rep(TWO_POINT_CONSTANT, 0, [(0, 0), (1, 0)])
    assert np.array_equal(rep.generator_image(0).real, [[0, 1, 1], [0, 0, 0], [0, 0, 0]])
    assert not rep.generator_image(1).any()

    rep2 = build_colour_rep(FOUR_POINT_OVERLAP, 1, [(0, 0), (0, 1)])
    assert np.array_equal(rep2.generator_image(0).real[0], [0, 1, 0])
    assert np.array_equal(rep2.generator_image(1).real[0], [0, 0, 1])

    empty = build_colour_rep(TWO_POINT_MIXED, 1, [])
    assert empty.dim == 1
    f = FunctionCoeff((qc(3), qc(7)))
    assert np.array_equal(empty.function_image(f), [[7.0]])


def test_build_colour_rep_rejects_bad_slots():
    with pytest.raises(InvalidSlotError):
        build_colour_rep(FOUR_POINT_OVERLAP, 2, [(1, 1)])  # map 1 sends 1 to 3
    with pytest.raises(InvalidSlotError):
        build_colour_rep(TWO_POINT_CONSTANT, 0, [(0, 0), (1, 0)], require_distinct_colours=True)
    # distinct colours accepted
    rep = build_colour_rep(FOUR_POINT_OVERLAP, 1, [(0, 0), (0, 1)], require_distinct_colours=True)
    assert rep.m == 2


def test_rep_apply_function_and_products():
    rep = build_colour_rep(FOUR_POINT_OVERLAP, 1, [(0, 0), (0, 1)])
    sys = FOUR_POINT_OVERLAP
    f = FunctionCoeff((qc(2), qc(3), qc(5), qc(7)))
    diag = rep_apply(rep, SemicrossedElement.from_function(sys, f))
    assert np.array_equal(diag, np.diag([3.0, 2.0, 2.0]))

    # s_{c1} chi_{x1} has a single 1 in the first row
    single = sc_multiply(
        SemicrossedElement.generator(sys, 0),
        SemicrossedElement.from_function(sys, FunctionCoeff.indicator(4, {0})),
    )
    mat = rep_apply(rep, single)
    assert np.count_nonzero(mat) == 1 and mat[0, 1] == 1.0

    with pytest.raises(ValueError):
        rep_apply(rep, SemicrossedElement.unit(TWO_POINT_MIXED))


def test_rep_apply_covariance_random_functions():
    rep = build_colour_rep(FOUR_POINT_OVERLAP, 1, [(0, 0), (0, 1)])
    sys = FOUR_POINT_OVERLAP
    rng = random.Random(41)
    for _ in range(100):
        values = tuple(qc(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(4))
        f = FunctionCoeff(values)
        for i in range(2):
            s = SemicrossedElement.generator(sys, i)
            lhs = rep_apply(rep, sc_multiply(SemicrossedElement.from_function(sys, f), s))
            rhs = rep_apply(
                rep,
                sc_multiply(s, SemicrossedElement.from_function(sys, pullback(f, (i,), sys))),
            )
            assert np.array_equal(lhs, rhs)


def test_first_row_pattern_is_an_algebra():
    rng = random.Random(43)
    for _ in range(50):
        dim = rng.randint(1, 5)

        def pattern():
            m = np.zeros((dim, dim), dtype=complex)
            for k in range(dim):
                m[k, k] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                m[0, k] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            return m

        prod = pattern() @ pattern()
        off = prod.copy()
        off[0, :] = 0
        np.fill_diagonal(off, 0)
        assert not off.any()


def test_nest_rep_images_stay_in_pattern():
    rng = random.Random(44)
    for _ in range(30):
        sys = random_system(rng, rng.randint(2, 4), rng.randint(1, 3))
        base = rng.randrange(sys.size)
        slots = []
        for p in range(sys.size):
            for c in range(sys.arity):
                if sys.tables[c][p] == base:
                    slots.append((p, c))
        if not slots:
            continue
        rep = build_colour_rep(sys, base, slots)
        el = random_element(rng, sys, 3)
        mat = rep_apply(rep, el)
        off = mat.copy()
        off[0, :] = 0
        np.fill_diagonal(off, 0)
        assert np.max(np.abs(off)) == 0.0


def test_distinct_colour_images_are_contractions():
    rng = random.Random(45)
    for _ in range(40):
        sys = random_system(rng, rng.randint(2, 4), rng.randint(1, 3))
        base = rng.randrange(sys.size)
        preimages = [p for p in range(sys.size) for _ in range(1)]
        assignment = nest_rep_exists(sys, base, preimages)
        if assignment is None:
            continue
        rep = build_colour_rep(
            sys, base, list(zip(preimages, assignment)), require_distinct_colours=True
        )
        for k in range(sys.arity):
            norm = np.linalg.norm(rep.generator_image(k), 2)
            assert norm in (0.0, 1.0)


def test_nest_rep_exists_examples():
    assert nest_rep_exists(FOUR_POINT_OVERLAP, 1, [0, 0]) == (0, 1)
    assert nest_rep_exists(FOUR_POINT_OVERLAP, 2, [1, 1]) is None
    assert nest_rep_exists(FOUR_POINT_OVERLAP, 1, []) == ()


def test_row_norm_examples():
    iso = np.eye(3, dtype=complex)
    assert abs(row_norm([iso]) - 1.0) < 1e-15
    rep = build_colour_rep(FOUR_POINT_OVERLAP, 1, [(0, 0), (0, 1)])
    mats = [rep.generator_image(k) for k in range(2)]
    assert abs(row_norm(mats) - math.sqrt(2)) < 1e-12
    assert row_norm([np.zeros((2, 2))] * 3) == 0.0
    with pytest.raises(ValueError):
        row_norm([np.zeros((2, 2)), np.zeros((3, 3))])
    with pytest.raises(ValueError):
        row_norm([])


def test_row_norm_two_routes():
    rng = random.Random(46)
    for _ in range(40):
        rows = rng.randint(1, 4)
        shapes = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        mats = [
            np.array(
                [
                    [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(cols)]
                    for _ in range(rows)
                ]
            )
            for cols in shapes
        ]
        direct = row_norm(mats)
        gram = sum(m @ m.conj().T for m in mats)
        independent = math.sqrt(max(np.linalg.eigvalsh(gram).max(), 0.0))
        assert abs(direct - independent) < 1e-10


def test_shared_base_point_forces_row_norm_obstruction():
    rng = random.Random(48)
    for _ in range(40):
        sys = random_system(rng, rng.randint(2, 5), rng.randint(2, 3))
        disjoint, witness = __import__("dynalg").ranges_pairwise_disjoint(sys)
        if disjoint:
            continue
        i, j, z = witness
        x1 = min(x for x in range(sys.size) if sys.tables[i][x] == z)
        x2 = min(x for x in range(sys.size) if sys.tables[j][x] == z)
        rep = build_colour_rep(sys, z, [(x1, i), (x2, j)])
        mats = [rep.generator_image(k) for k in range(sys.arity)]
        assert row_norm(mats) >= math.sqrt(2) - 1e-12
        for m in mats:
            assert np.linalg.norm(m, 2) <= 1.0 + 1e-12


def test_decide_tensor_vs_semicrossed():
    overlap = decide_tensor_vs_semicrossed(FOUR_POINT_OVERLAP)
    assert not overlap.isomorphic
    assert overlap.overlap == (1, (0, 0), (0, 1))
    mats = [overlap.obstruction.generator_image(k) for k in range(2)]
    assert abs(row_norm(mats) - math.sqrt(2)) < 1e-12

    disjoint = decide_tensor_vs_semicrossed(THREE_POINT_DISJOINT)
    assert disjoint.isomorphic
    bumps = disjoint.bump_functions
    for i, bump in enumerate(bumps):
        image = {THREE_POINT_DISJOINT.tables[i][x] for x in range(3)}
        assert all(bump.values[y] == qc(1) for y in image)
    assert all((bumps[0] * bumps[1]).values[x] == qc(0) for x in range(3))

    single = decide_tensor_vs_semicrossed(FiniteSystem(size=3, tables=((1, 2, 0),)))
    assert single.isomorphic


# ---- truncated path-space families ----------------------------------------------


def test_build_truncated_fock_counts():
    fam = build_truncated_fock(LOOP_GRAPH, 3)
    assert fam.dim == 4  # vacuum, e, ee, eee
    mixed = build_truncated_fock(colored_graph(full_subsystem(TWO_POINT_MIXED)), 2)
    assert mixed.dim == 2 + 4 + 8
    empty = build_truncated_fock(
        EdgeColoredGraph(vertices=(0, 1), edges=(), colours=1), 2
    )
    assert empty.dim == 2
    report = check_ck_relations(empty)
    assert report.passed_exact_relations and report.defect_structure_ok
    with pytest.raises(ValueError):
        build_truncated_fock(LOOP_GRAPH, 0)


def test_loop_family_shift_structure():
    fam = build_truncated_fock(LOOP_GRAPH, 3)
    s = fam.edge_operator((0, 0, 0))
    # nilpotent shift: vacuum -> e -> ee -> eee -> 0
    assert np.array_equal(s @ s @ s @ s, np.zeros((4, 4), dtype=np.int64))
    assert np.count_nonzero(s) == 3
    report = check_ck_relations(fam)
    assert report.initial_projections_ok and report.orthogonality_ok
    assert report.monochrome_cuntz_ok and report.defect_structure_ok
    (defect,) = report.defects
    assert defect.vacuum_positions and not defect.off_colour_positions


def test_two_point_mixed_family_relations():
    fam = build_truncated_fock(colored_graph(full_subsystem(TWO_POINT_MIXED)), 2)
    report = check_ck_relations(fam)
    assert report.initial_projections_ok
    assert report.orthogonality_ok
    assert report.monochrome_cuntz_ok
    assert report.defect_structure_ok
    # colour defects at depth 2 hold the vacuum and the off-colour length-2 tails
    for defect in report.defects:
        assert len(defect.vacuum_positions) == 1
        assert defect.off_colour_positions


def test_fock_relations_on_random_graphs():
    rng = random.Random(49)
    for _ in range(20):
        sys = random_system(rng, rng.randint(1, 3), rng.randint(1, 2))
        subset = rng.sample(range(sys.size), rng.randint(1, sys.size))
        graph = colored_graph(restrict(sys, subset))
        fam = build_truncated_fock(graph, rng.randint(1, 3))
        report = check_ck_relations(fam)
        assert report.passed_exact_relations
        assert report.defect_structure_ok


def test_projections_resolve_identity():
    fam = build_truncated_fock(colored_graph(full_subsystem(TWO_POINT_CONSTANT)), 2)
    total = sum(fam.vertex_projection(v) for v in fam.graph.vertices)
    assert np.array_equal(total, np.eye(fam.dim, dtype=np.int64))


def test_compress_block():
    fam = build_truncated_fock(LOOP_GRAPH, 3)
    p = fam.vertex_projection(0)
    block = compress_block(fam, p, 0, 0)
    assert np.array_equal(block, np.eye(4, dtype=np.int64))

    mixed = build_truncated_fock(colored_graph(full_subsystem(TWO_POINT_MIXED)), 2)
    edge = (0, 1, 1)
    s = mixed.edge_operator(edge)
    assert compress_block(mixed, s, 0, 1).any()
    # a diagonal matrix has no cross block
    assert not compress_block(mixed, mixed.vertex_projection(0), 0, 1).any()
    with pytest.raises(ValueError):
        compress_block(mixed, s, 0, 7)
