import numpy as np
import pytest

from arborlim import chain_algebra as ca
from arborlim.chain_algebra import ArrowObject, Complex, GradedMap, compose
from arborlim.diagram import ARROW, BASE, PATH, ZERO, Functor, GraphicDiagram, NodeDesc
from arborlim.holim import (
    INDETERMINATE,
    NO,
    YES,
    HolimMorphism,
    HolimObject,
    are_homotopic,
    edge_images,
    holim_compose,
    holim_differential,
    holim_identity,
    holim_is_closed,
    holim_is_zero,
    holim_scale,
    holim_sub,
    is_equivalence,
    objects_equivalent,
    reflect_minus,
    reflect_minus_on_morphism,
    reflect_plus,
    reflect_plus_on_morphism,
    span_compose,
    span_differential,
    span_identity,
    span_is_closed,
    SpanMorphism,
    SpanObject,
    validate_object,
)
from arborlim.quiver_core import Graph
from arborlim.randomgen import (
    random_closed_map,
    random_complex,
    random_graded_map,
    random_graphic_diagram,
    random_holim_morphism,
    random_holim_object,
    random_homotopy_equivalence,
    rng_from_seed,
)


def one_edge_diagram(p=2, left=Functor.of("rho1"), right=Functor.of("rho2")):
    g = Graph.build(["u", "w"], [("e", ("u", "w"))])
    return GraphicDiagram(
        g, {"e": 0}, {"u": NodeDesc(ARROW), "w": NodeDesc(ARROW)},
        {"e": (left, right)}, p,
    )


def test_holim_laws_random_shapes():
    rng = rng_from_seed(100)
    checked = 0
    for p in (2, 3):
        for _ in range(12):
            d = random_graphic_diagram(rng, p, max_edges=4)
            objs = [random_holim_object(rng, d, max_dim=1) for _ in range(4)]
            for m in objs:
                validate_object(d, m, require_equivalences=False)
            k1, k2, k3 = (int(rng.integers(0, 2)) for _ in range(3))
            mu = random_holim_morphism(rng, objs[0], objs[1], k1)
            nu = random_holim_morphism(rng, objs[1], objs[2], k2)
            rho = random_holim_morphism(rng, objs[2], objs[3], k3)
            # d^2 = 0
            assert holim_is_zero(holim_differential(holim_differential(mu)))
            # unit laws
            ident = holim_identity(objs[0])
            assert holim_is_zero(holim_sub(holim_compose(mu, ident), mu))
            ident1 = holim_identity(objs[1])
            assert holim_is_zero(holim_sub(holim_compose(ident1, mu), mu))
            # associativity
            lhs = holim_compose(rho, holim_compose(nu, mu))
            rhs = holim_compose(holim_compose(rho, nu), mu)
            assert holim_is_zero(holim_sub(lhs, rhs))
            # Leibniz
            sign = -1 if nu.degree % 2 else 1
            lhs2 = holim_differential(holim_compose(nu, mu))
            rhs2 = holim_compose(holim_differential(nu), mu)
            rhs2 = holim_sub(rhs2, holim_compose(nu, holim_differential(mu)) if sign < 0 else holim_scale(holim_compose(nu, holim_differential(mu)), -1))
            assert holim_is_zero(holim_sub(lhs2, rhs2))
            checked += 1
    assert checked == 24


def _pair_object(d, a1, a2, m_e):
    return HolimObject(d, {"u": a1, "w": a2}, {"e": m_e})


def test_one_edge_differential_measures_square():
    # on a one-edge shape with chain-map components and zero edge part,
    # d(mu)_e is the failure of the square to commute
    rng = rng_from_seed(101)
    d = one_edge_diagram()
    m = random_holim_object(rng, d)
    n = random_holim_object(rng, d)
    f1 = random_closed_map(rng, m.vertex_objects["u"].x1, n.vertex_objects["u"].x1, 0)
    h_u = GradedMap.zero(m.vertex_objects["u"].x1, n.vertex_objects["u"].x2, -1)
    f2 = random_closed_map(rng, m.vertex_objects["u"].x2, n.vertex_objects["u"].x2, 0)
    from arborlim.chain_algebra import ArrowMorphism

    mu_u = ArrowMorphism(m.vertex_objects["u"], n.vertex_objects["u"], f1, h_u, f2)
    g1 = random_closed_map(rng, m.vertex_objects["w"].x1, n.vertex_objects["w"].x1, 0)
    h_w = GradedMap.zero(m.vertex_objects["w"].x1, n.vertex_objects["w"].x2, -1)
    g2 = random_closed_map(rng, m.vertex_objects["w"].x2, n.vertex_objects["w"].x2, 0)
    mu_w = ArrowMorphism(m.vertex_objects["w"], n.vertex_objects["w"], g1, h_w, g2)
    zero_e = GradedMap.zero(edge_images(m, "e")[0], edge_images(n, "e")[1], -1)
    mu = HolimMorphism(m, n, 0, {"u": mu_u, "w": mu_w}, {"e": zero_e})
    dmu = holim_differential(mu)
    want = compose(n.edge_maps["e"], f1).sub(compose(g2, m.edge_maps["e"]))
    assert dmu.edge_maps["e"].equal(want)


def test_homotopy_lemma_and_witness():
    rng = rng_from_seed(102)
    d = one_edge_diagram()
    for _ in range(5):
        m = random_holim_object(rng, d)
        n = random_holim_object(rng, d)
        mu = random_holim_morphism(rng, m, n, 0)
        dmu = holim_differential(mu)
        # mu ~ mu, and anything is homotopic to itself plus a boundary
        closed = holim_sub(dmu, dmu)
        zero = holim_sub(dmu, dmu)
        ok, xi = are_homotopic(dmu, zero, want_witness=True)
        assert ok and xi is not None
        check = holim_differential(xi)
        assert holim_is_zero(holim_sub(check, dmu))


def test_identity_is_equivalence_and_zero_is_not():
    rng = rng_from_seed(103)
    d = one_edge_diagram()
    # a genuinely valid object: u = (X -> X) identity arrow, w likewise
    x = random_complex(rng, 2, 2)
    a = ArrowObject.build(GradedMap.identity(x))
    m = _pair_object(d, a, a, GradedMap.identity(x))
    assert validate_object(d, m)
    ident = holim_identity(m)
    assert is_equivalence(ident)
    if x.cohomology_dims() != (0, 0):
        from arborlim.holim import holim_zero_mor

        zero = holim_zero_mor(m, m, 0)
        assert not is_equivalence(zero)


def test_equivalence_needs_edge_compatibility():
    # componentwise equivalences that break the edge square must fail
    p = 2
    d = one_edge_diagram(p, Functor.of("rho1"), Functor.of("rho1"))
    x = Complex.zero_diff(1, 1, p)  # H = (1,1)
    a = ArrowObject.build(GradedMap.zero(x, x))
    # edge compares the x1 components; take m_e = id
    m = _pair_object(d, a, a, GradedMap.identity(x))
    assert validate_object(d, m)
    mu_u = ca.ArrowMorphism.identity(a)
    # vertex map at w: minus identity is still an equivalence; over F_2 it is
    # the identity, so build the failing case over F_3 instead
    d3 = one_edge_diagram(3, Functor.of("rho1"), Functor.of("rho1"))
    x3 = Complex.zero_diff(1, 1, 3)
    a3 = ArrowObject.build(GradedMap.zero(x3, x3))
    m3 = _pair_object(d3, a3, a3, GradedMap.identity(x3))
    mu_u3 = ca.ArrowMorphism.identity(a3)
    twist = ca.ArrowMorphism(
        a3, a3, GradedMap.identity(a3.x1).scale(2), GradedMap.zero(a3.x1, a3.x2, -1),
        GradedMap.identity(a3.x2),
    )
    mu = HolimMorphism(
        m3, m3, 0, {"u": mu_u3, "w": twist},
        {"e": GradedMap.zero(x3, x3, -1)},
    )
    # the square id = 2*id fails up to homotopy, so no closed completion of
    # these components exists: the failure n_e mu^{e1} - mu^{e2} m_e is not
    # exact, every choice of mu_e leaves the morphism non-closed
    square = compose(m3.edge_maps["e"], mu_u3.f1).sub(compose(twist.f1, m3.edge_maps["e"]))
    assert not ca.is_exact(square)
    assert not holim_is_closed(mu)
    assert not is_equivalence(mu)


def test_objects_equivalent_reflexive_and_gauge():
    rng = rng_from_seed(104)
    d = one_edge_diagram()
    x = Complex.zero_diff(1, 1, 2)
    a = ArrowObject.build(GradedMap.zero(x, x))
    m = _pair_object(d, a, a, GradedMap.identity(x))
    assert validate_object(d, m)
    assert objects_equivalent(m, m) == YES
    # gauge: conjugate the edge map by an autoequivalence of the w vertex
    g = random_homotopy_equivalence(rng, x, x)
    n = _pair_object(d, a, a, compose(g, GradedMap.identity(x)))
    assert validate_object(d, n)
    assert objects_equivalent(m, n) == YES


def test_objects_equivalent_distinguishes_dims():
    d = one_edge_diagram()
    x = Complex.zero_diff(1, 1, 2)
    y = Complex.zero_diff(1, 0, 2)
    a = ArrowObject.build(GradedMap.zero(x, x))
    b = ArrowObject.build(GradedMap.zero(y, y))
    m = _pair_object(d, a, a, GradedMap.identity(x))
    n = _pair_object(
        d, b, b, GradedMap.identity(y)
    )
    assert objects_equivalent(m, n) == NO


def test_objects_equivalent_sees_edge_class():
    # same vertex data, inequivalent edge maps (over F_3: id vs 2*id differ
    # because every vertex gauge acts by the same scalar on both sides)
    d3 = one_edge_diagram(3, Functor.of("rho1"), Functor.of("rho1"))
    x3 = Complex.zero_diff(1, 0, 3)
    a3 = ArrowObject.build(GradedMap.zero(x3, x3))
    m = _pair_object(d3, a3, a3, GradedMap.identity(x3))
    n = _pair_object(d3, a3, a3, GradedMap.identity(x3).scale(2))
    assert validate_object(d3, m) and validate_object(d3, n)
    # gauge (g1, g2) at each vertex must satisfy g2 * 0 = 0 * g1: free;
    # edge sees only the rho1 parts, so classes id and 2*id are related by
    # choosing g1 = 2 at one vertex: equivalent
    assert objects_equivalent(m, n) == YES
    # but with both legs from the same vertex the scalar cancels: use a loop
    g = Graph.build(["u"], [("e", ("u", "u"))])
    dloop = GraphicDiagram(
        g, {"e": 0}, {"u": NodeDesc(ARROW)},
        {"e": (Functor.of("rho1"), Functor.of("rho1"))}, 3,
    )
    ml = HolimObject(dloop, {"u": a3}, {"e": GradedMap.identity(x3)})
    nl = HolimObject(dloop, {"u": a3}, {"e": GradedMap.identity(x3).scale(2)})
    assert objects_equivalent(ml, nl) == NO


def test_objects_equivalent_witness_is_equivalence():
    rng = rng_from_seed(105)
    d = one_edge_diagram()
    x = Complex.build([[0, 1], [0, 0]], [[0, 0], [0, 0]], 2)
    a = ArrowObject.build(GradedMap.identity(x))
    m = _pair_object(d, a, a, GradedMap.identity(x))
    g = random_homotopy_equivalence(rng, x, x)
    n = _pair_object(d, a, a, g)
    verdict, mu = objects_equivalent(m, n, want_witness=True)
    assert verdict == YES
    assert is_equivalence(mu)


# ---------------------------------------------------------------------------
# spans and reflections


def random_out_span(rng, p, max_dim=1):
    mid = random_complex(rng, p, max_dim)
    left = random_complex(rng, p, max_dim)
    right = random_complex(rng, p, max_dim)
    return SpanObject(
        "out", left, mid, right,
        random_closed_map(rng, mid, left, 0), random_closed_map(rng, mid, right, 0),
    )


def test_span_laws():
    rng = rng_from_seed(106)
    for p in (2, 3):
        for _ in range(10):
            spans = [random_out_span(rng, p) for _ in range(3)]

            def rand_mor(a, b, k):
                return SpanMorphism(
                    a, b,
                    random_graded_map(rng, a.left, b.left, k),
                    random_graded_map(rng, a.mid, b.left, k - 1),
                    random_graded_map(rng, a.mid, b.mid, k),
                    random_graded_map(rng, a.mid, b.right, k - 1),
                    random_graded_map(rng, a.right, b.right, k),
                )

            mu = rand_mor(spans[0], spans[1], int(rng.integers(0, 2)))
            nu = rand_mor(spans[1], spans[2], int(rng.integers(0, 2)))
            dd = span_differential(span_differential(mu))
            assert all(f.is_zero() for f in (dd.fl, dd.hl, dd.f1, dd.hr, dd.fr))
            sign = -1 if nu.degree % 2 else 1
            lhs = span_differential(span_compose(nu, mu))
            rhs1 = span_compose(span_differential(nu), mu)
            rhs2 = span_compose(nu, span_differential(mu))
            for f, g, h in (
                (lhs.fl, rhs1.fl, rhs2.fl), (lhs.hl, rhs1.hl, rhs2.hl),
                (lhs.f1, rhs1.f1, rhs2.f1), (lhs.hr, rhs1.hr, rhs2.hr),
                (lhs.fr, rhs1.fr, rhs2.fr),
            ):
                assert f.sub(g.add(h.scale(sign))).is_zero()


def test_reflection_functors_preserve_closedness():
    rng = rng_from_seed(107)
    for _ in range(10):
        v = random_out_span(rng, 2)
        w = reflect_plus(v)
        assert span_is_closed(span_identity(w))
        back = reflect_minus(w)
        assert back.kind == "out"
        ident = span_identity(v)
        img = reflect_plus_on_morphism(ident)
        assert span_is_closed(img)


def all_small_complexes(p, max_dim):
    from itertools import product

    out = []
    for n0 in range(max_dim + 1):
        for n1 in range(max_dim + 1):
            from arborlim import _modp as lin

            for d0 in lin.all_matrices(n1, n0, p):
                for d1 in lin.all_matrices(n0, n1, p):
                    if ((d1 @ d0) % p).any() or ((d0 @ d1) % p).any():
                        continue
                    out.append(Complex((n0, n1), (np.array(d0), np.array(d1)), p))
    return out


def test_reflection_round_trip_small():
    # F-F+ ~ id on a small sample of out-spans (the exhaustive sweep is in
    # the acceptance suite)
    rng = rng_from_seed(108)
    from arborlim.holim import span_objects_equivalent

    done = 0
    while done < 8:
        v = random_out_span(rng, 2, max_dim=1)
        w = reflect_plus(v)
        back = reflect_minus(w)
        assert span_objects_equivalent(v, back) == YES
        done += 1
