import itertools

import pytest

from quandlekit.coloring import (
    Colouring,
    brute_force_count,
    count_colourings,
    enumerate_colourings,
    verify_colouring,
)
from quandlekit.diagrams import Diagram, Vertex, parse_diagram
from quandlekit.fixtures import axet_z2_s3, diagram, system
from quandlekit.invariants import group_hom_count, wirtinger_presentation
from quandlekit.moves import MoveSpec, apply_move, random_diagram
from quandlekit.systems import associated_quandle, axet_to_system, g_family_system
from quandlekit.tables import generated_subalgebra, symmetric_group, trivial_quandle

T3R3 = system("t3r3z2")
ASSOC, _ = associated_quandle(T3R3)


def pair(x, g):
    return ASSOC.pair_index(x, g)


def test_unknot_any_single_colour_is_proper():
    d = diagram("unknot")
    for p in range(6):
        assert verify_colouring(d, T3R3, Colouring((p,))).valid


def test_theta_g_element_constraint():
    d = diagram("theta")
    e, g = 0, 1
    proper = Colouring((pair(0, e), pair(0, e), pair(0, e)))
    assert verify_colouring(d, T3R3, proper).valid
    proper2 = Colouring((pair(0, e), pair(0, g), pair(0, g)))
    assert verify_colouring(d, T3R3, proper2).valid
    improper = Colouring((pair(0, e), pair(0, g), pair(0, e)))
    report = verify_colouring(d, T3R3, improper)
    assert not report.valid
    assert "vertex-g" in report.axioms_violated()


def test_vertex_x_mismatch_is_reported():
    d = diagram("theta")
    report = verify_colouring(d, T3R3, Colouring((pair(0, 0), pair(1, 0), pair(0, 0))))
    assert "vertex-x" in report.axioms_violated()


def test_reversed_vertex_arc_with_inverted_element_is_proper():
    # same theta with one arc formally reversed: colours transported by rho
    d = diagram("theta")
    rev = apply_move(d, MoveSpec("reverse_arc", 1)).diagram
    base = Colouring((pair(0, 0), pair(0, 1), pair(0, 1)))
    assert verify_colouring(d, T3R3, base).valid
    transported = Colouring((pair(0, 0), pair(0, T3R3.rho_at(0, 1)), pair(0, 1)))
    assert verify_colouring(rev, T3R3, transported).valid


def test_count_unknot():
    assert count_colourings(diagram("unknot"), T3R3) == 6


def test_count_trefoil_by_dihedral():
    d = diagram("trefoil")
    r3 = system("r3")
    assert count_colourings(d, r3) == 9
    assert brute_force_count(d, r3) == 9


def test_count_theta():
    d = diagram("theta")
    assert count_colourings(d, T3R3) == 12
    assert brute_force_count(d, T3R3) == 12


def test_headline_distinction():
    mwuf, mwf = diagram("mwuf"), diagram("mwf")
    assert count_colourings(mwuf, T3R3, "generating") == 18
    assert count_colourings(mwf, T3R3, "generating") == 0
    assert count_colourings(mwuf, T3R3, "all") == 72
    assert count_colourings(mwf, T3R3, "all") == 54
    # independent oracle for the smaller diagram
    assert brute_force_count(mwuf, T3R3, "generating") == 18
    assert brute_force_count(mwuf, T3R3, "all") == 72


def test_enumerate_unknot():
    cols = enumerate_colourings(diagram("unknot"), T3R3, 3)
    assert len(cols) == 3
    assert len({c.assignment for c in cols}) == 3


def test_enumerate_trefoil_capped():
    cols = enumerate_colourings(diagram("trefoil"), system("r3"), 100)
    assert len(cols) == 9
    for c in cols:
        assert verify_colouring(diagram("trefoil"), system("r3"), c).valid


def test_enumerate_mwf_none_generate():
    d = diagram("mwf")
    cols = enumerate_colourings(d, T3R3, 10)
    assert len(cols) == 10
    for c in cols:
        closure = generated_subalgebra(ASSOC.table, set(c.assignment))
        assert len(closure) < 6


def test_backtracking_matches_brute_force_on_small_diagrams():
    found = 0
    seed = 0
    while found < 25:
        d = random_diagram(f"small-{seed}", 2, 2)
        seed += 1
        if d.arc_count > 5:
            continue
        found += 1
        assert count_colourings(d, T3R3) == brute_force_count(d, T3R3)


def test_partitioned_count_is_independent_of_partitioning():
    d = diagram("mwuf")
    base = count_colourings(d, T3R3)
    for jobs in (2, 3, 5):
        assert count_colourings(d, T3R3, jobs=jobs) == base


def test_single_arc_reversal_preserves_counts():
    for name in ("theta", "mwuf"):
        d = diagram(name)
        base = count_colourings(d, T3R3)
        for a in range(d.arc_count):
            try:
                moved = apply_move(d, MoveSpec("reverse_arc", a))
            except Exception:
                continue
            assert count_colourings(moved.diagram, T3R3) == base


def test_vertex_rotation_leaves_verdict_unchanged():
    import random

    rng = random.Random(5)
    systems = [T3R3, axet_to_system(axet_z2_s3())[0]]
    d = diagram("theta")
    for sys_ in systems:
        assoc, _ = associated_quandle(sys_)
        for _ in range(60):
            colours = tuple(rng.randrange(assoc.table.size) for _ in range(3))
            verdicts = []
            for k in range(3):
                ends = d.vertices[0].ends
                rotated = Diagram(
                    d.arc_count,
                    d.crossings,
                    (Vertex(ends[k:] + ends[:k]), d.vertices[1]),
                )
                verdicts.append(verify_colouring(rotated, sys_, Colouring(colours)).valid)
            assert len(set(verdicts)) == 1


def test_counts_match_group_hom_counts_for_point_families():
    s3 = symmetric_group(3)
    point = g_family_system(tuple(trivial_quandle(1) for _ in range(6)), s3)
    for name in ("trefoil", "hopf", "unknot"):
        d = diagram(name)
        pres = wirtinger_presentation(d)
        assert count_colourings(d, point) == group_hom_count(pres, s3)


def test_missing_gamma_for_high_valence():
    d = parse_diagram(
        "arcs 4\n"
        "vertex ends=0:in,1:in,2:in,3:out\n"
        "vertex ends=3:in,0:out,1:out,2:out\n"
    )
    with pytest.raises(ValueError):
        count_colourings(d, T3R3)


def test_valence_four_counts_with_folded_gamma():
    from quandlekit.systems import gamma_from_oplus

    d = parse_diagram(
        "arcs 4\n"
        "vertex ends=0:in,1:in,2:in,3:out\n"
        "vertex ends=3:in,0:out,1:out,2:out\n"
    )
    data, report = gamma_from_oplus(T3R3, 3)
    assert report.valid
    count = count_colourings(d, data)
    assert count == brute_force_count(d, data)
    assert count > 0
