import itertools

import pytest

from arborlim.quiver_core import (
    MINUS,
    PLUS,
    Graph,
    Labeling,
    Orientation,
    adequate_labelings,
    all_labelings,
    associated_quiver,
    brute_force_adequate,
    fibration_requirements,
    has_cofibrant_constants,
    is_acyclic,
    is_strict,
    negative_filling,
    required_fibration_arrows,
    simplify,
    strict_acyclic_simple_labelings,
    subdivision,
)

EDGE = Graph.build(["v", "w"], [("e", ("v", "w"))])
LOOP = Graph.build(["v"], [("e", ("v", "v"))])
THETA = Graph.build(["v", "w"], [(f"e{i}", ("v", "w")) for i in range(3)])
PATH3 = Graph.build(["a", "b", "c"], [("e0", ("a", "b")), ("e1", ("b", "c"))])
EDGE_PLUS_LOOP = Graph.build(["v", "w"], [("e", ("v", "w")), ("l", ("v", "v"))])


def test_associated_quiver_single_edge_is_cospan():
    q = associated_quiver(EDGE)
    assert set(q.vertices) == {"v", "w", "e"}
    assert {(s, t) for _, s, t in q.arrows} == {("v", "e"), ("w", "e")}


def test_associated_quiver_loop_gives_parallel_pair():
    q = associated_quiver(LOOP)
    assert [(s, t) for _, s, t in q.arrows] == [("v", "e"), ("v", "e")]


def test_associated_quiver_theta():
    q = associated_quiver(THETA)
    assert len(q.arrows) == 6
    assert q.is_diameter_one()
    assert q.parallel_arrow_ids() == set()


def test_simplify_simple_quiver_fixed():
    q = associated_quiver(EDGE)
    assert simplify(q) == q


def test_simplify_loop_leaves_isolated_vertex():
    q = simplify(associated_quiver(LOOP))
    assert q.vertices == ("v",) and q.arrows == ()


def test_simplify_edge_plus_loop_keeps_cospan():
    q = simplify(associated_quiver(EDGE_PLUS_LOOP))
    assert set(q.vertices) == {"v", "w", "e"}
    assert {(s, t) for _, s, t in q.arrows} == {("v", "e"), ("w", "e")}


def test_simplify_idempotent_and_matches_graph_simplification():
    for g in (EDGE, LOOP, THETA, PATH3, EDGE_PLUS_LOOP):
        q = associated_quiver(g)
        assert simplify(simplify(q)) == simplify(q)
        assert simplify(q) == associated_quiver(g.simplify())


def test_all_negative_labeling_acyclic_with_cofibrant_constants():
    for g in (EDGE, LOOP, THETA, PATH3, EDGE_PLUS_LOOP):
        q = associated_quiver(g)
        lab = Labeling.build({a: MINUS for a, _, _ in q.arrows})
        assert is_acyclic(q, lab)
        assert has_cofibrant_constants(q, lab)


def test_cospan_acyclicity():
    q = associated_quiver(EDGE)
    for signs in itertools.product((PLUS, MINUS), repeat=2):
        lab = Labeling.build(dict(zip([a for a, _, _ in q.arrows], signs)))
        assert is_acyclic(q, lab)  # underlying graph is a tree


def test_theta_mixed_labeling_cyclic():
    q = associated_quiver(THETA)
    signs = {"e0:0": PLUS, "e0:1": MINUS, "e1:0": MINUS, "e1:1": PLUS}
    signs.update({"e2:0": MINUS, "e2:1": MINUS})
    assert not is_acyclic(q, Labeling.build(signs))


def test_strict_labelings_cospan():
    q = associated_quiver(EDGE)
    labs = strict_acyclic_simple_labelings(q)
    assert len(labs) == 2
    assert {frozenset(lab.positives()) for lab in labs} == {
        frozenset({"e:0"}),
        frozenset({"e:1"}),
    }


def test_strict_labelings_isolated_vertex():
    q = associated_quiver(Graph.build(["v"], []))
    labs = strict_acyclic_simple_labelings(q)
    assert labs == {Labeling.build({})}


def test_strict_labelings_path3_collapse():
    q = associated_quiver(PATH3)
    labs = strict_acyclic_simple_labelings(q)
    assert len(labs) == 4
    brute = {
        lab
        for lab in all_labelings(q, simple=True)
        if is_strict(q, lab) and is_acyclic(simplify(q), lab)
    }
    assert labs == brute


def test_cofibrant_constants_direct_counts():
    q = associated_quiver(EDGE)
    both_plus = Labeling.build({"e:0": PLUS, "e:1": PLUS})
    assert not has_cofibrant_constants(q, both_plus)
    for lab in strict_acyclic_simple_labelings(q):
        assert has_cofibrant_constants(q, negative_filling(q, lab))


def test_negative_filling():
    q = associated_quiver(EDGE_PLUS_LOOP)
    lab = Labeling.build({"e:0": PLUS, "e:1": MINUS})
    filled = negative_filling(q, lab).as_dict()
    assert filled == {"e:0": PLUS, "e:1": MINUS, "l:0": MINUS, "l:1": MINUS}
    simple = associated_quiver(EDGE)
    lab2 = Labeling.build({"e:0": PLUS, "e:1": MINUS})
    assert negative_filling(simple, lab2) == lab2


def test_adequate_cospan_and_loop():
    assert len(adequate_labelings(associated_quiver(EDGE))) == 2
    loop_adequate = adequate_labelings(associated_quiver(LOOP))
    assert loop_adequate == {Labeling.build({"e:0": MINUS, "e:1": MINUS})}


@pytest.mark.parametrize("g", [EDGE, LOOP, THETA, PATH3, EDGE_PLUS_LOOP])
def test_adequate_matches_brute_force(g):
    q = associated_quiver(g)
    assert adequate_labelings(q) == brute_force_adequate(q)


def test_monotone_required_fibrations():
    q = associated_quiver(PATH3)
    labs = [negative_filling(q, lab) for lab in strict_acyclic_simple_labelings(q)]
    neg = Labeling.build({a: MINUS for a, _, _ in q.arrows})
    for lab in labs:
        assert neg.leq(lab)
        req_small = required_fibration_arrows(q, lab)
        req_big = required_fibration_arrows(q, neg)
        for v in req_small:
            assert req_small[v] <= req_big[v]


def test_fibration_requirements_single_edge():
    req = fibration_requirements(EDGE, Orientation.build({"e": ("v", "w")}))
    assert req == {"v": set(), "w": {"e:1"}}


def test_fibration_requirements_loop():
    req = fibration_requirements(LOOP, Orientation.build({}))
    assert req == {"v": {"e:0", "e:1"}}


def test_fibration_requirements_isolated():
    req = fibration_requirements(Graph.build(["v"], []), Orientation.build({}))
    assert req == {"v": set()}


def test_fibration_requirements_rejects_cycle():
    tri = Graph.build(
        ["a", "b", "c"],
        [("x", ("a", "b")), ("y", ("b", "c")), ("z", ("c", "a"))],
    )
    cyc = Orientation.build({"x": ("a", "b"), "y": ("b", "c"), "z": ("c", "a")})
    with pytest.raises(ValueError):
        fibration_requirements(tri, cyc)


def test_subdivision_shapes():
    arrow = associated_quiver(EDGE)
    sub = subdivision(arrow)
    # each of the two arrows of the cospan becomes its own cospan
    assert len(sub.arrows) == 4
    assert len(sub.vertices) == 5
    loopq = associated_quiver(LOOP)
    sub2 = subdivision(loopq)
    assert len(sub2.vertices) == 4  # v, e, and the two middle vertices
    assert {(s, t) for _, s, t in sub2.arrows} == {
        ("v", "e:0"),
        ("e", "e:0"),
        ("v", "e:1"),
        ("e", "e:1"),
    }
