"""Elementary diagram rewrites with explicit object transports.

Each rewrite replaces a graphic diagram by a quasi-equivalent one and carries
holim objects across via the explicit comparison maps of the rotation and
reflection constructions.  Move verification composes these steps and then
checks syntactically that the composite lands on the diagram the
combinatorial move predicts.

Transported edge data: when a leg of vertex v changes so that the new image
I_new is only homotopy equivalent to the old image I_old, the step supplies a
comparison gamma: I_new -> I_old and the edge map is pre- or post-composed
(with a homotopy inverse on the head side).  When images agree on the nose
the map is simply rebuilt on the new instances.  Every transported object is
asserted valid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _modp as lin
from . import chain_algebra as ca
from .chain_algebra import (
    ArrowObject,
    Complex,
    GradedMap,
    compose,
    homotopy_inverse,
    is_closed,
)
from .diagram import ARROW, BASE, ZERO, Functor, GraphicDiagram, NodeDesc
from .holim import HolimObject, validate_object
from .quiver_core import Graph


def leg_parts(f: Functor) -> tuple[str, int]:
    """Split a leg into (base generator, net shift mod 2)."""
    gens = f.simplified().gens
    shift = 0
    base = "id"
    for g in gens:
        if g[0] == "shift":
            shift += g[1]
        elif base == "id":
            base = g[0]
        else:
            raise ValueError(f"leg {gens} has more than one non-shift generator")
    return base, shift % 2


def make_leg(base: str, shift: int) -> Functor:
    shift %= 2
    if base == "id":
        return Functor.of(("shift", shift)) if shift else Functor.of("id")
    if shift:
        return Functor.of((base,), ("shift", shift))
    return Functor.of((base,))


def retarget(f: GradedMap, src: Complex | None = None, tgt: Complex | None = None) -> GradedMap:
    src = src if src is not None else f.src
    tgt = tgt if tgt is not None else f.tgt
    if src.dims != f.src.dims or tgt.dims != f.tgt.dims:
        raise ValueError("retarget dims mismatch")
    return GradedMap(src, tgt, f.degree, f.mats)


def _apply_comparison(d2, probe, old_d, m, e, slot, gamma_or_none):
    """New edge map at a rewritten leg; gamma: I_new-content -> I_old."""
    at_tail = old_d.tails[e] == slot
    new_img = d2.edge_image(probe, e, slot)
    old_map = m.edge_maps[e]
    if gamma_or_none is None:
        if at_tail:
            return retarget(old_map, new_img, old_map.tgt)
        return retarget(old_map, old_map.src, new_img)
    old_img = old_d.edge_image(m, e, slot)
    gamma = retarget(gamma_or_none, new_img, old_img)
    if at_tail:
        return compose(old_map, gamma)
    return compose(homotopy_inverse(gamma), old_map)


# ---------------------------------------------------------------------------
# rotation at a trivalent arrow vertex


_ROT_FWD = {"rho1": ("cone", 1), "rho2": ("rho1", 0), "cone": ("rho2", 0)}
_ROT_BWD = {"cone": ("rho1", 1), "rho1": ("rho2", 0), "rho2": ("cone", 0)}


def rewrite_rotate(d: GraphicDiagram, v: str, inverse: bool = False) -> GraphicDiagram:
    """Rotation Lemma rewrite: (rho1, rho2, C) legs become (C[-1], rho1, rho2)."""
    table = _ROT_BWD if inverse else _ROT_FWD
    if d.nodes[v].kind != ARROW:
        raise ValueError(f"rotation needs an arrow node at {v}")
    arrows = dict(d.arrows)
    for e, slot in d.edges_at(v):
        base, s = leg_parts(d.arrows[e][slot])
        nb, ds = table[base]
        legs = list(arrows[e])
        legs[slot] = make_leg(nb, s + ds)
        arrows[e] = tuple(legs)
    return GraphicDiagram(d.shape, dict(d.tails), dict(d.nodes), arrows, d.p)


def transport_rotate(d: GraphicDiagram, v: str, m: HolimObject, inverse: bool = False):
    d2 = rewrite_rotate(d, v, inverse)
    old_obj = m.vertex_objects[v]
    new_obj = ca.rotation_tprime(old_obj) if inverse else ca.rotation_t(old_obj)
    vobjs = dict(m.vertex_objects)
    vobjs[v] = new_obj
    if inverse:
        moved = "rho2"  # becomes the cone leg; comparison C(T'(a)) ~ X2
        theta, _ = ca.cone_tprime_comparison(old_obj)
    else:
        moved = "rho1"  # becomes the cone leg; comparison C(T(a)) ~ X1[1]
        theta, _ = ca.cone_t_comparison(old_obj)
    emaps = dict(m.edge_maps)
    probe = HolimObject(d2, vobjs, {})
    for e, slot in d.edges_at(v):
        base, s = leg_parts(d.arrows[e][slot])
        if base == moved:
            # forward: gamma = theta[s-1]: C(T a)[s-1] -> X1[s];
            # inverse: gamma = theta[s]:   C(T' a)[s]  -> X2[s]
            gamma = ca.shift_map(theta, s if inverse else s + 1)
        else:
            gamma = None
        emaps[e] = _apply_comparison(d2, probe, d, m, e, slot, gamma)
    m2 = HolimObject(d2, vobjs, emaps)
    assert validate_object(d2, m2)
    return d2, m2


# ---------------------------------------------------------------------------
# vertex shift (Shift Lemma)


def rewrite_shift_vertex(d: GraphicDiagram, v: str, n: int) -> GraphicDiagram:
    arrows = dict(d.arrows)
    for e, slot in d.edges_at(v):
        base, s = leg_parts(d.arrows[e][slot])
        legs = list(arrows[e])
        legs[slot] = make_leg(base, s + n)
        arrows[e] = tuple(legs)
    return GraphicDiagram(d.shape, dict(d.tails), dict(d.nodes), arrows, d.p)


def transport_shift_vertex(d: GraphicDiagram, v: str, n: int, m: HolimObject):
    d2 = rewrite_shift_vertex(d, v, n)
    vobjs = dict(m.vertex_objects)
    if n % 2:
        obj = m.vertex_objects[v]
        kind = d.nodes[v].kind
        if kind == ARROW:
            vobjs[v] = ca.arrow_shift(obj, 1)
        elif kind == BASE:
            vobjs[v] = ca.shift(obj, 1)
        else:
            raise ValueError("shift transport needs an arrow or base node")
    emaps = dict(m.edge_maps)
    probe = HolimObject(d2, vobjs, {})
    for e, slot in d.edges_at(v):
        emaps[e] = _apply_comparison(d2, probe, d, m, e, slot, None)
    m2 = HolimObject(d2, vobjs, emaps)
    assert validate_object(d2, m2)
    return d2, m2


# ---------------------------------------------------------------------------
# boundary collapse and expansion


def _zero_side(d, v, e):
    a, b = d.shape.endpoints(e)
    other = b if a == v else a
    if d.nodes[other].kind != ZERO:
        raise ValueError(f"edge {e} does not end at a zero node")
    return other, (0 if a == v else 1)


def rewrite_collapse_boundary(d: GraphicDiagram, v: str, cancelled: str) -> GraphicDiagram:
    """Collapse an arrow vertex whose leg on `cancelled` dies against a zero node.

    The vertex becomes a base node; the surviving legs become shifts per the
    three cases of the univalent-trimming move (the rho2 case bumps the cone
    leg's shift by one).
    """
    zero_vertex, slot_v = _zero_side(d, v, cancelled)
    base0, _ = leg_parts(d.arrows[cancelled][slot_v])
    vertices = [w for w in d.shape.vertices if w != zero_vertex]
    edges = [(e, ab) for e, ab in d.shape.edges if e != cancelled]
    nodes = {w: d.nodes[w] for w in vertices}
    nodes[v] = NodeDesc(BASE)
    arrows = {e: d.arrows[e] for e, _ in edges}
    tails = {e: d.tails[e] for e, _ in edges}
    for e, slot in d.edges_at(v):
        if e == cancelled:
            continue
        base, s = leg_parts(d.arrows[e][slot])
        bump = 1 if (base0 == "rho2" and base == "cone") else 0
        legs = list(arrows[e])
        legs[slot] = make_leg("id", s + bump)
        arrows[e] = tuple(legs)
    return GraphicDiagram(Graph.build(vertices, edges), tails, nodes, arrows, d.p)


def transport_collapse_boundary(d: GraphicDiagram, v: str, cancelled: str, m: HolimObject):
    d2 = rewrite_collapse_boundary(d, v, cancelled)
    zero_vertex, slot_v = _zero_side(d, v, cancelled)
    base0, _ = leg_parts(d.arrows[cancelled][slot_v])
    obj = m.vertex_objects[v]
    if base0 == "cone":
        if not ca.is_homotopy_equivalence(obj.x):
            raise ValueError("cone collapse needs an acyclic cone (x an equivalence)")
        new_obj = obj.x1
        comparisons = {"rho1": lambda s: None, "rho2": lambda s: ca.shift_map(obj.x, s)}
    elif base0 == "rho1":
        cin = ca.cone_in(obj)
        if not ca.is_homotopy_equivalence(cin):
            raise ValueError("rho1 collapse needs an acyclic source")
        new_obj = obj.x2
        comparisons = {"rho2": lambda s: None, "cone": lambda s: ca.shift_map(cin, s)}
    else:
        cout = ca.cone_out(obj)
        if not ca.is_homotopy_equivalence(cout):
            raise ValueError("rho2 collapse needs an acyclic target")
        inv = homotopy_inverse(cout)  # X1[1] -> C(x)
        new_obj = obj.x1
        comparisons = {"rho1": lambda s: None, "cone": lambda s: ca.shift_map(inv, s)}
    vobjs = {w: o for w, o in m.vertex_objects.items() if w != zero_vertex}
    vobjs[v] = new_obj
    emaps = {e: f for e, f in m.edge_maps.items() if e != cancelled}
    probe = HolimObject(d2, vobjs, {})
    for e, slot in d.edges_at(v):
        if e == cancelled:
            continue
        base, s = leg_parts(d.arrows[e][slot])
        emaps[e] = _apply_comparison(d2, probe, d, m, e, slot, comparisons[base](s))
    m2 = HolimObject(d2, vobjs, emaps)
    assert validate_object(d2, m2)
    return d2, m2


def rewrite_expand_boundary(
    d: GraphicDiagram, v: str, variant: str, leg_assignment: dict,
    new_edge: str, new_vertex: str, cone_shift: int = 0,
) -> GraphicDiagram:
    """Inverse of the collapse: a base vertex grows back into an arrow vertex.

    leg_assignment maps each incident edge id to its new base generator; the
    variant names the generator placed on the new cancelled edge.
    """
    if d.nodes[v].kind != BASE:
        raise ValueError("expansion starts from a base node")
    vertices = list(d.shape.vertices) + [new_vertex]
    edges = list(d.shape.edges) + [(new_edge, (v, new_vertex))]
    nodes = dict(d.nodes)
    nodes[v] = NodeDesc(ARROW)
    nodes[new_vertex] = NodeDesc(ZERO)
    arrows = dict(d.arrows)
    tails = dict(d.tails)
    for e, slot in d.edges_at(v):
        base, s = leg_parts(d.arrows[e][slot])
        if base != "id":
            raise ValueError("expansion needs plain shift legs")
        nb = leg_assignment[e]
        bump = -1 if (variant == "rho2" and nb == "cone") else 0
        legs = list(arrows[e])
        legs[slot] = make_leg(nb, s + bump)
        arrows[e] = tuple(legs)
    arrows[new_edge] = (make_leg(variant, cone_shift), Functor.of("initial"))
    tails[new_edge] = 0
    return GraphicDiagram(Graph.build(vertices, edges), tails, nodes, arrows, d.p)


def transport_expand_boundary(
    d: GraphicDiagram, v: str, variant: str, leg_assignment: dict,
    new_edge: str, new_vertex: str, m: HolimObject, cone_shift: int = 0,
):
    d2 = rewrite_expand_boundary(d, v, variant, leg_assignment, new_edge, new_vertex, cone_shift)
    z = m.vertex_objects[v]
    if variant == "cone":
        new_obj = ArrowObject.build(GradedMap.identity(z))
    elif variant == "rho1":
        new_obj = ArrowObject.build(GradedMap.zero(Complex.zero(d.p), z))
    else:
        new_obj = ArrowObject.build(GradedMap.zero(z, Complex.zero(d.p)))
    vobjs = dict(m.vertex_objects)
    vobjs[v] = new_obj
    vobjs[new_vertex] = Complex.zero(d.p)
    emaps = dict(m.edge_maps)
    probe = HolimObject(d2, vobjs, {})
    for e, slot in d.edges_at(v):
        # all three variants give images equal to the old shifted Z on the nose
        emaps[e] = _apply_comparison(d2, probe, d, m, e, slot, None)
    cone_img = d2.edge_image(probe, new_edge, 0)
    emaps[new_edge] = GradedMap.zero(cone_img, Complex.zero(d.p))
    m2 = HolimObject(d2, vobjs, emaps)
    assert validate_object(d2, m2)
    return d2, m2


# ---------------------------------------------------------------------------
# the reflection step (generalized transposition of adjacent joints)


def _shared_config(d, e):
    (vt, st), (vh, sh) = d.oriented_ends(e)
    bt, s_t = leg_parts(d.arrows[e][st])
    bh, s_h = leg_parts(d.arrows[e][sh])
    if s_t or s_h:
        raise ValueError("reflection needs unshifted shared legs (shift first)")
    if bt == bh == "rho2":
        return "in", vt, vh, st, sh
    if bt == bh == "rho1":
        return "out", vt, vh, st, sh
    raise ValueError("shared edge is not in a reflection configuration")


def _vertex_legs(d, v, shared):
    cone_edge = None
    outer_edge = None
    for e, slot in d.edges_at(v):
        if e == shared:
            continue
        base, _ = leg_parts(d.arrows[e][slot])
        if base == "cone":
            if cone_edge is not None:
                raise ValueError(f"vertex {v} has two cone legs")
            cone_edge = (e, slot)
        else:
            if outer_edge is not None:
                raise ValueError(f"vertex {v} has two outer legs")
            outer_edge = (e, slot)
    if cone_edge is None or outer_edge is None:
        raise ValueError(f"vertex {v} is not in a reflection configuration")
    return cone_edge, outer_edge


def rewrite_reflect(d: GraphicDiagram, shared: str) -> GraphicDiagram:
    """Swap the two joints across the shared edge (in-config <-> out-config)."""
    config, vt, vh, st, sh = _shared_config(d, shared)
    cone_t, outer_t = _vertex_legs(d, vt, shared)
    cone_h, outer_h = _vertex_legs(d, vh, shared)
    new_rho = "rho1" if config == "in" else "rho2"
    old_rho = "rho2" if config == "in" else "rho1"
    edges = []
    for e, ab in d.shape.edges:
        if e == cone_t[0]:
            a, b = ab
            ab = tuple(vh if x == vt else x for x in (a, b))
        elif e == cone_h[0]:
            a, b = ab
            ab = tuple(vt if x == vh else x for x in (a, b))
        edges.append((e, ab))
    arrows = dict(d.arrows)
    tails = dict(d.tails)
    legs = list(arrows[shared])
    legs[st] = make_leg(new_rho, 0)
    legs[sh] = make_leg(new_rho, 0)
    arrows[shared] = tuple(legs)
    for e, slot in (outer_t, outer_h):
        base, s = leg_parts(d.arrows[e][slot])
        if base not in ("rho1", "rho2"):
            raise ValueError("outer legs must be projections")
        ls = list(arrows[e])
        ls[slot] = make_leg("rho2" if base == "rho1" else "rho1", s)
        arrows[e] = tuple(ls)
    return GraphicDiagram(Graph.build(list(d.shape.vertices), edges), tails,
                          dict(d.nodes), arrows, d.p)


def _reflection_theta(new_arrow: ArrowObject, span_parts, side: str, config: str, p: int):
    """Comparison cone(new structure map) -> C(other original leg).

    For the in->out step (F-), cone(pr_L) ~ C(r) via
    (abar, bbar, c, w) |-> (bbar, c - l w); for out->in (F+), cone(iota_L) ~
    C(r) via (abar, xi, a, b) |-> (xi, b).  `side` chooses l or r naming.
    """
    left, mid, right, l_map, r_map = span_parts
    k = ca.cone(new_arrow)
    if config == "out":  # built from an in-span: K = (L+R)[1] (+) M (+) X
        keep, kmap = (right, r_map) if side == "left" else (left, l_map)
        drop_map = l_map if side == "left" else r_map
        target = ca.cone(ArrowObject(keep, mid, kmap))
        mats = []
        for i in (0, 1):
            j = (i + 1) % 2
            lL, lR = left.dims[j], right.dims[j]
            lM = mid.dims[i]
            own = new_arrow.x2.dims[i]
            mrow = lin.zeros(target.dims[i], k.dims[i])
            # K_i = L_{i+1} (+) R_{i+1} (+) M_i (+) X_i with X = W_L or W_R
            off_keep = lL if side == "left" else 0
            mrow[: keep.dims[j], off_keep : off_keep + keep.dims[j]] = lin.eye(keep.dims[j])
            mrow[keep.dims[j] :, lL + lR : lL + lR + lM] = lin.eye(lM)
            mrow[keep.dims[j] :, lL + lR + lM :] = (-drop_map.mats[i]) % p
            mats.append(mrow)
        theta = GradedMap(k, target, 0, tuple(mats))
    else:  # built from an out-span: K = X[1] (+) M[1] (+) L (+) R
        keep = right if side == "left" else left
        kmap = r_map if side == "left" else l_map
        target = ca.cone(ArrowObject(mid, keep, kmap))
        mats = []
        for i in (0, 1):
            j = (i + 1) % 2
            own = new_arrow.x1.dims[j]
            lM = mid.dims[j]
            lL, lR = left.dims[i], right.dims[i]
            mrow = lin.zeros(target.dims[i], k.dims[i])
            mrow[: lM, own : own + lM] = lin.eye(lM)
            off_keep = own + lM + (lL if side == "left" else 0)
            mrow[lM :, off_keep : off_keep + keep.dims[i]] = lin.eye(keep.dims[i])
            mats.append(mrow)
        theta = GradedMap(k, target, 0, tuple(mats))
    assert is_closed(theta) and ca.is_homotopy_equivalence(theta)
    return theta


def transport_reflect(d: GraphicDiagram, shared: str, m: HolimObject):
    d2 = rewrite_reflect(d, shared)
    config, vt, vh, st, sh = _shared_config(d, shared)
    cone_t, outer_t = _vertex_legs(d, vt, shared)
    cone_h, outer_h = _vertex_legs(d, vh, shared)
    mu, mw = m.vertex_objects[vt], m.vertex_objects[vh]
    m_e = m.edge_maps[shared]
    p = d.p
    if config == "in":
        # W_L = X1(u), W1 = X2(u), W_R = X1(w); r transports x_w through m_e
        w_l, w1, w_r = mu.x1, mu.x2, mw.x1
        ell = mu.x
        r = compose(homotopy_inverse(m_e), mw.x)
        glued_src, _, _, pr_l, pr_r = ca.dsum(w_l, w_r)
        glued = ArrowObject(glued_src, w1, compose(ell, pr_l).add(compose(r, pr_r)))
        tp = ca.rotation_tprime(glued)
        c0 = tp.x1
        new_t = ArrowObject(c0, w_l, compose(pr_l, tp.x))
        new_h = ArrowObject(c0, w_r, compose(pr_r, tp.x))
        span_parts = (w_l, w1, w_r, ell, r)
        # the old cone at the head (over x_w) lands at the tail position
        theta_t = _reflection_theta(new_t, span_parts, "left", "out", p)
        conj = ca.cone_map(
            ca.ArrowMorphism(
                ArrowObject(w_r, mw.x2, mw.x), ArrowObject(w_r, w1, r),
                GradedMap.identity(w_r), GradedMap.zero(w_r, w1, -1),
                homotopy_inverse(m_e),
            )
        )
        gamma_t = compose(homotopy_inverse(conj), theta_t)  # cone(pr_L) -> C(x_w)
        theta_h = _reflection_theta(new_h, span_parts, "right", "out", p)
        gamma_h = theta_h  # cone(pr_R) -> C(l) = C(x_u) on the nose
    else:
        # V1 = X1(u), V_L = X2(u), V_R = X2(w); r = x_w o m_e
        v1, v_l, v_r = mu.x1, mu.x2, mw.x2
        ell = mu.x
        r = compose(mw.x, m_e)
        glued_tgt, inc_l, inc_r, _, _ = ca.dsum(v_l, v_r)
        glued = ArrowObject(v1, glued_tgt, compose(inc_l, ell).add(compose(inc_r, r)))
        cin = ca.cone_in(glued)
        cp = ca.cone(glued)
        new_t = ArrowObject(v_l, cp, compose(cin, inc_l))
        new_h = ArrowObject(v_r, cp, compose(cin, inc_r))
        span_parts = (v_l, v1, v_r, ell, r)
        theta_t = _reflection_theta(new_t, span_parts, "left", "in", p)
        conj = ca.cone_map(
            ca.ArrowMorphism(
                ArrowObject(v1, v_r, r), ArrowObject(mw.x1, mw.x2, mw.x),
                m_e, GradedMap.zero(v1, mw.x2, -1), GradedMap.identity(mw.x2),
            )
        )
        gamma_t = compose(conj, theta_t)  # cone(iota_L) -> C(x_w)
        theta_h = _reflection_theta(new_h, span_parts, "right", "in", p)
        gamma_h = theta_h
    vobjs = dict(m.vertex_objects)
    vobjs[vt] = new_t
    vobjs[vh] = new_h
    emaps = dict(m.edge_maps)
    probe = HolimObject(d2, vobjs, {})
    # shared edge: both new legs see c0/cp on the nose
    img = d2.edge_image(probe, shared, st)
    emaps[shared] = GradedMap.identity(img)
    # outer legs keep their images on the nose
    for e, slot in (outer_t, outer_h):
        emaps[e] = _apply_comparison(d2, probe, d, m, e, slot, None)
    # cone edges swapped vertices; compose with the comparisons
    for (e, slot), gamma in ((cone_h[0], cone_h[1]), gamma_t), ((cone_t[0], cone_t[1]), gamma_h):
        _, s = leg_parts(d.arrows[e][slot])
        emaps[e] = _apply_comparison(d2, probe, d, m, e, slot, ca.shift_map(gamma, s))
    m2 = HolimObject(d2, vobjs, emaps)
    assert validate_object(d2, m2)
    return d2, m2


# ---------------------------------------------------------------------------
# full handle cancellation


def rewrite_cancel(d: GraphicDiagram, u: str, w: str, spliced_edge: str) -> GraphicDiagram:
    """Remove the cancelling vertex u (with its bone and the 1-bone to w) and w."""
    u_edges = d.edges_at(u)
    y_edge = None
    for e, slot in u_edges:
        base, _ = leg_parts(d.arrows[e][slot])
        if base == "cone":
            y_edge = e
    if y_edge is None:
        raise ValueError("no cone leg at the cancelling vertex")
    drop_vertices = {u, w}
    drop_edges = {y_edge}
    for e, slot in u_edges:
        if e == y_edge:
            continue
        a, b = d.shape.endpoints(e)
        other = b if a == u else a
        if d.nodes[other].kind != ZERO:
            raise ValueError("cancelling vertex bone must end at zero nodes")
        drop_vertices.add(other)
        drop_edges.add(e)
    far = []
    for e, slot in d.edges_at(w):
        if e == y_edge:
            continue
        a, b = d.shape.endpoints(e)
        far.append((e, slot, b if a == w else a))
        drop_edges.add(e)
    if len(far) != 2:
        raise ValueError("spliced vertex must have exactly two bone legs")
    (e_l, slot_l, far_l), (e_r, slot_r, far_r) = far
    vertices = [x for x in d.shape.vertices if x not in drop_vertices]
    edges = [(e, ab) for e, ab in d.shape.edges if e not in drop_edges]
    edges.append((spliced_edge, (far_l, far_r)))
    nodes = {x: d.nodes[x] for x in vertices}
    arrows = {e: d.arrows[e] for e, _ in edges if e != spliced_edge}
    tails = {e: d.tails[e] for e, _ in edges if e != spliced_edge}
    f_l = d.arrows[e_l][1 - slot_l]
    f_r = d.arrows[e_r][1 - slot_r]
    arrows[spliced_edge] = (f_l, f_r)
    tails[spliced_edge] = 0
    return GraphicDiagram(Graph.build(vertices, edges), tails, nodes, arrows, d.p)


def transport_cancel(d: GraphicDiagram, u: str, w: str, spliced_edge: str, m: HolimObject):
    d2 = rewrite_cancel(d, u, w, spliced_edge)
    y_edge = next(
        e for e, slot in d.edges_at(u) if leg_parts(d.arrows[e][slot])[0] == "cone"
    )
    far = []
    for e, slot in d.edges_at(w):
        if e != y_edge:
            far.append((e, slot))
    (e_l, slot_l), (e_r, slot_r) = far
    mw = m.vertex_objects[w]
    if not ca.is_homotopy_equivalence(mw.x):
        raise ValueError("cancellation needs the surviving structure map to be invertible")
    base_l, s_l = leg_parts(d.arrows[e_l][slot_l])
    base_r, s_r = leg_parts(d.arrows[e_r][slot_r])
    if s_l or s_r:
        raise ValueError("cancellation with shifted bone legs is not supported")
    # bridge: image of e_l's w-leg -> image of e_r's w-leg
    if base_l == "rho1" and base_r == "rho2":
        bridge = mw.x
    elif base_l == "rho2" and base_r == "rho1":
        bridge = homotopy_inverse(mw.x)
    else:
        raise ValueError("spliced vertex must expose rho1 and rho2 bone legs")
    # old data: m_l on e_l between far_l and w, m_r on e_r between w and far_r
    m_l = m.edge_maps[e_l]
    if d.tails[e_l] != 1 - slot_l:  # ensure direction far_l -> w
        m_l = homotopy_inverse(m_l)
    m_r = m.edge_maps[e_r]
    if d.tails[e_r] != slot_r:  # ensure direction w -> far_r
        m_r = homotopy_inverse(m_r)
    new_map = compose(m_r, compose(bridge, m_l))
    drop_vertices = {u, w}
    for e, slot in d.edges_at(u):
        if e != y_edge:
            a, b = d.shape.endpoints(e)
            drop_vertices.add(b if a == u else a)
    vobjs = {x: o for x, o in m.vertex_objects.items() if x not in drop_vertices}
    emaps = {e: f for e, f in m.edge_maps.items() if e in {ed for ed, _ in d2.shape.edges}}
    probe = HolimObject(d2, vobjs, {})
    src = d2.edge_image(probe, spliced_edge, 0)
    tgt = d2.edge_image(probe, spliced_edge, 1)
    emaps[spliced_edge] = retarget(new_map, src, tgt)
    m2 = HolimObject(d2, vobjs, emaps)
    assert validate_object(d2, m2)
    return d2, m2


# ---------------------------------------------------------------------------
# pad contraction (inverse subdivision at an identity base node)


def rewrite_contract_pad(d: GraphicDiagram, mid: str, new_edge: str) -> GraphicDiagram:
    incident = d.edges_at(mid)
    if d.nodes[mid].kind != BASE or len(incident) != 2:
        raise ValueError("pad contraction needs a bivalent base node")
    (e_a, slot_a), (e_b, slot_b) = incident
    base_a, s_a = leg_parts(d.arrows[e_a][slot_a])
    base_b, s_b = leg_parts(d.arrows[e_b][slot_b])
    if base_a != "id" or base_b != "id":
        raise ValueError("pad contraction needs identity legs at the middle node")
    va = d.shape.endpoints(e_a)[1 - slot_a]
    vb = d.shape.endpoints(e_b)[1 - slot_b]
    f_a = d.arrows[e_a][1 - slot_a]
    f_b = d.arrows[e_b][1 - slot_b]
    # fold the middle shifts into the a-side leg: images F_a[s_b - s_a] vs F_b
    ba, sa2 = leg_parts(f_a)
    f_a2 = make_leg(ba, sa2 + s_b - s_a)
    vertices = [x for x in d.shape.vertices if x != mid]
    edges = [(e, ab) for e, ab in d.shape.edges if e not in (e_a, e_b)]
    edges.append((new_edge, (va, vb)))
    nodes = {x: d.nodes[x] for x in vertices}
    arrows = {e: d.arrows[e] for e, _ in edges if e != new_edge}
    tails = {e: d.tails[e] for e, _ in edges if e != new_edge}
    arrows[new_edge] = (f_a2, f_b)
    tails[new_edge] = 0
    return GraphicDiagram(Graph.build(vertices, edges), tails, nodes, arrows, d.p)


def transport_contract_pad(d: GraphicDiagram, mid: str, new_edge: str, m: HolimObject):
    d2 = rewrite_contract_pad(d, mid, new_edge)
    (e_a, slot_a), (e_b, slot_b) = d.edges_at(mid)
    _, s_a = leg_parts(d.arrows[e_a][slot_a])
    _, s_b = leg_parts(d.arrows[e_b][slot_b])
    m_a = m.edge_maps[e_a]
    if d.tails[e_a] != 1 - slot_a:  # direction v_a -> mid
        m_a = homotopy_inverse(m_a)
    m_b = m.edge_maps[e_b]
    if d.tails[e_b] != slot_b:  # direction mid -> v_b
        m_b = homotopy_inverse(m_b)
    # m_a: F_a(M_a) -> Z[s_a]; shift by (s_b - s_a): -> Z[s_b]; then m_b
    shifted = ca.shift_map(m_a, (s_b - s_a) % 2)
    vobjs = {x: o for x, o in m.vertex_objects.items() if x != mid}
    emaps = {e: f for e, f in m.edge_maps.items() if e not in (e_a, e_b)}
    probe = HolimObject(d2, vobjs, {})
    src = d2.edge_image(probe, new_edge, 0)
    tgt = d2.edge_image(probe, new_edge, 1)
    new_map = compose(m_b, retarget(shifted, src, shifted.tgt))
    emaps[new_edge] = retarget(new_map, src, tgt)
    m2 = HolimObject(d2, vobjs, emaps)
    assert validate_object(d2, m2)
    return d2, m2
