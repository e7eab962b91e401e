"""The explicit homotopy-limit dg-category of a graphic diagram.

Objects assign an object of the node category to each graph vertex and a
degree-0 closed homotopy equivalence between the images of the two endpoint
objects to each edge.  A degree-k morphism assigns a degree-k node morphism
to each vertex and a degree-(k-1) map between images to each edge, with

    d(mu) = ( d(mu_v) ,  d(mu_e) + (-1)^k (n_e mu^{e1} - mu^{e2} m_e) )
    nu mu = ( nu_v mu_v ,  nu^{e2} mu_e + (-1)^{deg mu} nu_e mu^{e1} )

where mu^{ei} is the image of the endpoint component under the edge functor.

Homotopy and equivalence questions reduce to finite linear algebra over F_p:
a closed map's homotopy class is its pair of induced cohomology matrices, and
object equivalence is a finite search over cohomology-level isomorphism data
with the off-diagonal freedom of arrow nodes handled by one linear solve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _modp as lin
from . import chain_algebra as ca
from .chain_algebra import (
    ArrowMorphism,
    ArrowObject,
    Complex,
    GradedMap,
    compose,
    hom_differential,
    induced_map,
    is_closed,
    is_exact,
    lift_cohomology_map,
)
from .diagram import (
    ARROW,
    BASE,
    COLLAPSED,
    PATH,
    ZERO,
    CollapsedMorphism,
    CollapsedObject,
    GraphicDiagram,
    evaluate,
)

YES, NO, INDETERMINATE = "yes", "no", "indeterminate"


# ---------------------------------------------------------------------------
# node-category dispatch


def node_validate(desc, obj, p: int) -> bool:
    if desc.kind == ZERO:
        return isinstance(obj, Complex) and obj.is_zero()
    if desc.kind == BASE:
        return isinstance(obj, Complex)
    if desc.kind == ARROW:
        return isinstance(obj, ArrowObject)
    if desc.kind == PATH:
        return isinstance(obj, ArrowObject) and ca.path_object_membership(obj)
    if desc.kind == COLLAPSED:
        return isinstance(obj, CollapsedObject)
    raise ValueError(desc.kind)


def node_identity(desc, obj):
    if desc.kind in (ZERO, BASE):
        return GradedMap.identity(obj)
    if desc.kind in (ARROW, PATH):
        return ArrowMorphism.identity(obj)
    if desc.kind == COLLAPSED:
        return CollapsedMorphism(
            obj.sub, obj, obj, 0,
            {v: node_identity(obj.sub.nodes[v], o) for v, o in obj.parts.items()},
        )
    raise ValueError(desc.kind)


def node_zero_mor(desc, src, tgt, degree):
    if desc.kind in (ZERO, BASE):
        return GradedMap.zero(src, tgt, degree)
    if desc.kind in (ARROW, PATH):
        return ArrowMorphism.zero(src, tgt, degree)
    if desc.kind == COLLAPSED:
        return CollapsedMorphism(
            src.sub, src, tgt, degree,
            {v: node_zero_mor(src.sub.nodes[v], src.parts[v], tgt.parts[v], degree)
             for v in src.parts},
        )
    raise ValueError(desc.kind)


def node_compose(desc, nu, mu):
    if desc.kind in (ZERO, BASE):
        return compose(nu, mu)
    if desc.kind in (ARROW, PATH):
        return ca.arrow_compose(nu, mu)
    if desc.kind == COLLAPSED:
        return CollapsedMorphism(
            mu.sub, mu.src, nu.tgt, mu.degree + nu.degree,
            {v: node_compose(mu.sub.nodes[v], nu.parts[v], mu.parts[v]) for v in mu.parts},
        )
    raise ValueError(desc.kind)


def node_differential(desc, mu):
    if desc.kind in (ZERO, BASE):
        return hom_differential(mu)
    if desc.kind in (ARROW, PATH):
        return ca.arrow_differential(mu)
    if desc.kind == COLLAPSED:
        return CollapsedMorphism(
            mu.sub, mu.src, mu.tgt, mu.degree + 1,
            {v: node_differential(mu.sub.nodes[v], mu.parts[v]) for v in mu.parts},
        )
    raise ValueError(desc.kind)


def node_add(desc, a, b):
    if desc.kind in (ZERO, BASE, ARROW, PATH):
        return a.add(b)
    return CollapsedMorphism(
        a.sub, a.src, a.tgt, a.degree,
        {v: node_add(a.sub.nodes[v], a.parts[v], b.parts[v]) for v in a.parts},
    )


def node_scale(desc, a, c):
    if desc.kind in (ZERO, BASE, ARROW, PATH):
        return a.scale(c)
    return CollapsedMorphism(
        a.sub, a.src, a.tgt, a.degree,
        {v: node_scale(a.sub.nodes[v], a.parts[v], c) for v in a.parts},
    )


def node_is_zero(desc, a) -> bool:
    if desc.kind in (ZERO, BASE, ARROW, PATH):
        return a.is_zero()
    return all(node_is_zero(a.sub.nodes[v], a.parts[v]) for v in a.parts)


def node_hom_basis(desc, src, tgt, degree):
    """Basis of the degree piece of the node hom complex, as morphisms."""
    if desc.kind == ZERO:
        return []
    if desc.kind == BASE:
        basis, _, _ = ca.hom_space_basis(src, tgt, degree)
        return basis
    if desc.kind in (ARROW, PATH):
        out = []
        for f1 in ca.hom_space_basis(src.x1, tgt.x1, degree)[0]:
            out.append(ArrowMorphism(src, tgt, f1, GradedMap.zero(src.x1, tgt.x2, degree - 1),
                                     GradedMap.zero(src.x2, tgt.x2, degree)))
        for h in ca.hom_space_basis(src.x1, tgt.x2, degree - 1)[0]:
            out.append(ArrowMorphism(src, tgt, GradedMap.zero(src.x1, tgt.x1, degree), h,
                                     GradedMap.zero(src.x2, tgt.x2, degree)))
        for f2 in ca.hom_space_basis(src.x2, tgt.x2, degree)[0]:
            out.append(ArrowMorphism(src, tgt, GradedMap.zero(src.x1, tgt.x1, degree),
                                     GradedMap.zero(src.x1, tgt.x2, degree - 1), f2))
        return out
    if desc.kind == COLLAPSED:
        out = []
        verts = sorted(src.parts)
        for v in verts:
            for b in node_hom_basis(src.sub.nodes[v], src.parts[v], tgt.parts[v], degree):
                parts = {w: node_zero_mor(src.sub.nodes[w], src.parts[w], tgt.parts[w], degree)
                         for w in verts}
                parts[v] = b
                out.append(CollapsedMorphism(src.sub, src, tgt, degree, parts))
        # strict-limit homs: components must agree on the nose along sub-edges;
        # restrict the free basis to the joint kernel of the differences
        return _strict_filter_basis(src.sub, src, tgt, degree, out)
    raise ValueError(desc.kind)


def _strict_filter_basis(sub, src, tgt, degree, free_basis):
    if not free_basis:
        return []
    rows = []
    for mor in free_basis:
        comp = []
        for e, _ in sub.shape.edges:
            left = evaluate(sub.arrows[e][0], mor.parts[sub.endpoint(e, 0)], sub.p)
            right = evaluate(sub.arrows[e][1], mor.parts[sub.endpoint(e, 1)], sub.p)
            diff = left.sub(right)
            comp.append(np.concatenate([diff.mats[0].reshape(-1), diff.mats[1].reshape(-1)]))
        rows.append(np.concatenate(comp) if comp else np.zeros(0, dtype=np.int64))
    a = np.stack(rows, axis=1) % sub.p
    null = lin.nullspace(a, sub.p)
    out = []
    for j in range(null.shape[1]):
        mor = None
        for c, b in zip(null[:, j], free_basis):
            if c:
                scaled = _mor_scale_generic(b, int(c))
                mor = scaled if mor is None else _mor_add_generic(mor, scaled)
        if mor is not None:
            out.append(mor)
    return out


def _mor_scale_generic(m, c):
    if isinstance(m, CollapsedMorphism):
        return CollapsedMorphism(m.sub, m.src, m.tgt, m.degree,
                                 {v: _mor_scale_generic(p, c) for v, p in m.parts.items()})
    return m.scale(c)


def _mor_add_generic(a, b):
    if isinstance(a, CollapsedMorphism):
        return CollapsedMorphism(a.sub, a.src, a.tgt, a.degree,
                                 {v: _mor_add_generic(a.parts[v], b.parts[v]) for v in a.parts})
    return a.add(b)


# ---------------------------------------------------------------------------
# objects and morphisms of the limit category


@dataclass(frozen=True, eq=False)
class HolimObject:
    diagram: GraphicDiagram
    vertex_objects: dict
    edge_maps: dict  # edge id -> GradedMap from tail image to head image

    @property
    def p(self) -> int:
        return self.diagram.p


@dataclass(frozen=True, eq=False)
class HolimMorphism:
    src: HolimObject
    tgt: HolimObject
    degree: int
    vertex_maps: dict
    edge_maps: dict  # edge id -> degree-(k-1) map, tail image of src -> head image of tgt


def edge_images(m: HolimObject, e: str) -> tuple[Complex, Complex]:
    d = m.diagram
    (v1, s1), (v2, s2) = d.oriented_ends(e)
    return d.edge_image(m, e, s1), d.edge_image(m, e, s2)


def validate_object(d: GraphicDiagram, m: HolimObject, require_equivalences=True) -> bool:
    if m.diagram is not d:
        raise ValueError("object belongs to a different diagram")
    for v in d.shape.vertices:
        if not node_validate(d.nodes[v], m.vertex_objects[v], d.p):
            raise ValueError(f"invalid node object at {v}")
    for e, _ in d.shape.edges:
        src, tgt = edge_images(m, e)
        me = m.edge_maps[e]
        if me.src.dims != src.dims or me.tgt.dims != tgt.dims or me.degree % 2 != 0:
            raise ValueError(f"edge map shape mismatch on {e}")
        if not is_closed(me):
            return False
        if require_equivalences and not ca.is_homotopy_equivalence(me):
            return False
    return True


def _edge_component_images(mu: HolimMorphism, e: str):
    """(mu^{e1} between src/tgt tail images, mu^{e2} between head images)."""
    d = mu.src.diagram
    (v1, s1), (v2, s2) = d.oriented_ends(e)
    f1 = evaluate(d.arrows[e][s1], mu.vertex_maps[v1], d.p)
    f2 = evaluate(d.arrows[e][s2], mu.vertex_maps[v2], d.p)
    return f1, f2


def holim_differential(mu: HolimMorphism) -> HolimMorphism:
    d = mu.src.diagram
    k = mu.degree % 2
    sign = -1 if k else 1
    vmaps = {v: node_differential(d.nodes[v], mu.vertex_maps[v]) for v in d.shape.vertices}
    emaps = {}
    for e, _ in d.shape.edges:
        mu1, mu2 = _edge_component_images(mu, e)
        n_e = mu.tgt.edge_maps[e]
        m_e = mu.src.edge_maps[e]
        corr = compose(n_e, mu1).sub(compose(mu2, m_e)).scale(sign)
        emaps[e] = hom_differential(mu.edge_maps[e]).add(corr)
    return HolimMorphism(mu.src, mu.tgt, mu.degree + 1, vmaps, emaps)


def holim_compose(nu: HolimMorphism, mu: HolimMorphism) -> HolimMorphism:
    d = mu.src.diagram
    k = mu.degree % 2
    sign = -1 if k else 1
    vmaps = {
        v: node_compose(d.nodes[v], nu.vertex_maps[v], mu.vertex_maps[v])
        for v in d.shape.vertices
    }
    emaps = {}
    for e, _ in d.shape.edges:
        mu1, _ = _edge_component_images(mu, e)
        _, nu2 = _edge_component_images(nu, e)
        emaps[e] = compose(nu2, mu.edge_maps[e]).add(compose(nu.edge_maps[e], mu1).scale(sign))
    return HolimMorphism(mu.src, nu.tgt, mu.degree + nu.degree, vmaps, emaps)


def holim_identity(m: HolimObject) -> HolimMorphism:
    d = m.diagram
    vmaps = {v: node_identity(d.nodes[v], m.vertex_objects[v]) for v in d.shape.vertices}
    emaps = {}
    for e, _ in d.shape.edges:
        src, tgt = edge_images(m, e)
        emaps[e] = GradedMap.zero(src, tgt, -1)
    return HolimMorphism(m, m, 0, vmaps, emaps)


def holim_zero_mor(m: HolimObject, n: HolimObject, degree: int) -> HolimMorphism:
    d = m.diagram
    vmaps = {
        v: node_zero_mor(d.nodes[v], m.vertex_objects[v], n.vertex_objects[v], degree)
        for v in d.shape.vertices
    }
    emaps = {}
    for e, _ in d.shape.edges:
        src = edge_images(m, e)[0]
        tgt = edge_images(n, e)[1]
        emaps[e] = GradedMap.zero(src, tgt, degree - 1)
    return HolimMorphism(m, n, degree, vmaps, emaps)


def holim_add(a: HolimMorphism, b: HolimMorphism) -> HolimMorphism:
    d = a.src.diagram
    return HolimMorphism(
        a.src, a.tgt, a.degree,
        {v: node_add(d.nodes[v], a.vertex_maps[v], b.vertex_maps[v]) for v in a.vertex_maps},
        {e: a.edge_maps[e].add(b.edge_maps[e]) for e in a.edge_maps},
    )


def holim_scale(a: HolimMorphism, c: int) -> HolimMorphism:
    d = a.src.diagram
    return HolimMorphism(
        a.src, a.tgt, a.degree,
        {v: node_scale(d.nodes[v], a.vertex_maps[v], c) for v in a.vertex_maps},
        {e: a.edge_maps[e].scale(c) for e in a.edge_maps},
    )


def holim_sub(a: HolimMorphism, b: HolimMorphism) -> HolimMorphism:
    return holim_add(a, holim_scale(b, -1))


def holim_is_zero(a: HolimMorphism) -> bool:
    d = a.src.diagram
    return all(
        node_is_zero(d.nodes[v], a.vertex_maps[v]) for v in a.vertex_maps
    ) and all(a.edge_maps[e].is_zero() for e in a.edge_maps)


def holim_is_closed(a: HolimMorphism) -> bool:
    return holim_is_zero(holim_differential(a))


def holim_hom_basis(m: HolimObject, n: HolimObject, degree: int) -> list[HolimMorphism]:
    d = m.diagram
    out = []
    zero = holim_zero_mor(m, n, degree)
    for v in sorted(d.shape.vertices):
        for b in node_hom_basis(d.nodes[v], m.vertex_objects[v], n.vertex_objects[v], degree):
            vmaps = dict(zero.vertex_maps)
            vmaps[v] = b
            out.append(HolimMorphism(m, n, degree, vmaps, dict(zero.edge_maps)))
    for e, _ in d.shape.edges:
        src = edge_images(m, e)[0]
        tgt = edge_images(n, e)[1]
        basis, _, _ = ca.hom_space_basis(src, tgt, degree - 1)
        for b in basis:
            emaps = dict(zero.edge_maps)
            emaps[e] = b
            out.append(HolimMorphism(m, n, degree, dict(zero.vertex_maps), emaps))
    return out


def _mor_to_vec(a: HolimMorphism) -> np.ndarray:
    d = a.src.diagram
    chunks = []
    for v in sorted(d.shape.vertices):
        chunks.append(_node_mor_vec(d.nodes[v], a.vertex_maps[v]))
    for e, _ in d.shape.edges:
        f = a.edge_maps[e]
        chunks.append(np.concatenate([f.mats[0].reshape(-1), f.mats[1].reshape(-1)]))
    return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)


def _node_mor_vec(desc, m) -> np.ndarray:
    if desc.kind in (ZERO, BASE):
        return np.concatenate([m.mats[0].reshape(-1), m.mats[1].reshape(-1)])
    if desc.kind in (ARROW, PATH):
        return np.concatenate(
            [x.reshape(-1) for f in (m.f1, m.h, m.f2) for x in f.mats]
        )
    if desc.kind == COLLAPSED:
        return np.concatenate(
            [_node_mor_vec(m.sub.nodes[v], m.parts[v]) for v in sorted(m.parts)]
            or [np.zeros(0, dtype=np.int64)]
        )
    raise ValueError(desc.kind)


def are_homotopic(mu: HolimMorphism, nu: HolimMorphism, want_witness=False):
    """Decide mu ~ nu by solving d(xi) = mu - nu over F_p; optionally a witness."""
    diff = holim_sub(mu, nu)
    if not holim_is_closed(diff):
        raise ValueError("homotopy is only defined between closed morphisms")
    basis = holim_hom_basis(mu.src, mu.tgt, mu.degree - 1)
    p = mu.src.p
    if not basis:
        ok = holim_is_zero(diff)
        return (ok, None) if want_witness else ok
    cols = [_mor_to_vec(holim_differential(b)) for b in basis]
    a = np.stack(cols, axis=1) % p
    sol = lin.solve(a, _mor_to_vec(diff), p)
    if sol is None:
        return (False, None) if want_witness else False
    if not want_witness:
        return True
    xi = None
    for c, b in zip(sol, basis):
        if c:
            term = holim_scale(b, int(c))
            xi = term if xi is None else holim_add(xi, term)
    if xi is None:
        xi = holim_zero_mor(mu.src, mu.tgt, mu.degree - 1)
    return True, xi


def node_is_equivalence(desc, mor) -> bool:
    if desc.kind == ZERO:
        return True
    if desc.kind == BASE:
        return ca.is_homotopy_equivalence(mor)
    if desc.kind in (ARROW, PATH):
        return ca.arrow_is_equivalence(mor)
    if desc.kind == COLLAPSED:
        return all(node_is_equivalence(mor.sub.nodes[v], mor.parts[v]) for v in mor.parts)
    raise ValueError(desc.kind)


def is_equivalence(mu: HolimMorphism) -> bool:
    """Equivalence Lemma: closed, vertexwise equivalences, compatible edges."""
    if mu.degree % 2 != 0:
        return False
    if not holim_is_closed(mu):
        return False
    d = mu.src.diagram
    for v in d.shape.vertices:
        if not node_is_equivalence(d.nodes[v], mu.vertex_maps[v]):
            return False
    for e, _ in d.shape.edges:
        mu1, mu2 = _edge_component_images(mu, e)
        lhs = compose(mu.tgt.edge_maps[e], mu1)
        rhs = compose(mu2, mu.src.edge_maps[e])
        if not is_exact(lhs.sub(rhs)):
            return False
    return True


# ---------------------------------------------------------------------------
# object equivalence: finite search over cohomology-level isomorphism data


def _iso_pairs(x: Complex, y: Complex):
    """All cohomology-level iso pairs H(x) -> H(y), or [] if dims differ."""
    hx, hy = x.cohomology_dims(), y.cohomology_dims()
    if hx != hy:
        return []
    return [
        (a, b)
        for a in lin.general_linear(hx[0], x.p)
        for b in lin.general_linear(hx[1], x.p)
    ]


def _closed_h_basis(src: ArrowObject, tgt: ArrowObject):
    """Basis of closed degree -1 maps src.x1 -> tgt.x2 (the h freedom)."""
    basis, to_vec, from_vec = ca.hom_space_basis(src.x1, tgt.x2, -1)
    if not basis:
        return []
    cols = [to_vec(hom_differential(b)) for b in basis]
    null = lin.nullspace(np.stack(cols, axis=1) % src.p, src.p)
    out = []
    for j in range(null.shape[1]):
        out.append(from_vec(null[:, j]))
    return out


def _node_candidates(desc, src, tgt, p):
    """(base candidates, freedom morphisms) for equivalences src -> tgt."""
    if desc.kind == ZERO:
        return [GradedMap.zero(src, tgt, 0)], []
    if desc.kind == BASE:
        return [lift_cohomology_map(src, tgt, 0, pair) for pair in _iso_pairs(src, tgt)], []
    if desc.kind in (ARROW, PATH):
        xs = induced_map(src.x)
        ys = induced_map(tgt.x)
        cands = []
        for phi in _iso_pairs(src.x1, tgt.x1):
            for psi in _iso_pairs(src.x2, tgt.x2):
                ok = all(
                    np.array_equal((ys[i] @ phi[i]) % p, (psi[i] @ xs[i]) % p)
                    for i in (0, 1)
                )
                if not ok:
                    continue
                f1 = lift_cohomology_map(src.x1, tgt.x1, 0, phi)
                f2 = lift_cohomology_map(src.x2, tgt.x2, 0, psi)
                need = compose(f2, src.x).sub(compose(tgt.x, f1))
                h = ca.exactness_witness(need)
                if h is None:
                    continue
                cands.append(ArrowMorphism(src, tgt, f1, h, f2))
        freedom = [
            ArrowMorphism(src, tgt, GradedMap.zero(src.x1, tgt.x1, 0), eta,
                          GradedMap.zero(src.x2, tgt.x2, 0))
            for eta in _closed_h_basis(src, tgt)
        ]
        return cands, freedom
    if desc.kind == COLLAPSED:
        verts = sorted(src.parts)
        per = []
        for v in verts:
            c, fr = _node_candidates(desc.sub.nodes[v], src.parts[v], tgt.parts[v], p)
            per.append((v, c, fr))
        cands = []
        for combo in itertools.product(*[c for _, c, _ in per]):
            parts = {v: m for (v, _, _), m in zip(per, combo)}
            mor = CollapsedMorphism(desc.sub, src, tgt, 0, parts)
            if _collapsed_strict(desc.sub, mor):
                cands.append(mor)
        freedom = []
        for v, _, fr in per:
            for eta in fr:
                parts = {
                    w: node_zero_mor(desc.sub.nodes[w], src.parts[w], tgt.parts[w], 0)
                    for w in verts
                }
                parts[v] = eta
                mor = CollapsedMorphism(desc.sub, src, tgt, 0, parts)
                if _collapsed_strict(desc.sub, mor):
                    freedom.append(mor)
        return cands, freedom
    raise ValueError(desc.kind)


def _collapsed_strict(sub, mor) -> bool:
    for e, _ in sub.shape.edges:
        left = evaluate(sub.arrows[e][0], mor.parts[sub.endpoint(e, 0)], sub.p)
        right = evaluate(sub.arrows[e][1], mor.parts[sub.endpoint(e, 1)], sub.p)
        if not left.sub(right).is_zero():
            return False
    return True


def _stack_induced(maps):
    """Given a list of (A0, A1) pairs, stack for vectorised composition."""
    return (
        np.stack([m[0] for m in maps], axis=0),
        np.stack([m[1] for m in maps], axis=0),
    )


def objects_equivalent(m: HolimObject, n: HolimObject, cand_bound: int = 300_000,
                       want_witness: bool = False):
    """Search for an equivalence m -> n; returns YES/NO/INDETERMINATE.

    Sound always; complete whenever the candidate space fits under the bound
    (then NO is a proof).  With want_witness, returns (verdict, morphism).
    """
    d = m.diagram
    if n.diagram is not d and n.diagram.describe() != d.describe():
        raise ValueError("objects live over different diagrams")
    p = d.p
    verts = sorted(d.shape.vertices)
    per_vertex = []
    total = 1
    for v in verts:
        cands, freedom = _node_candidates(
            d.nodes[v], m.vertex_objects[v], n.vertex_objects[v], p
        )
        if not cands:
            return (NO, None) if want_witness else NO
        per_vertex.append((v, cands, freedom))
        total *= len(cands)
        if total > cand_bound:
            return (INDETERMINATE, None) if want_witness else INDETERMINATE

    edges = [e for e, _ in d.shape.edges]
    # per-edge data: fixed residual pieces and the linear span of h corrections
    edge_ctx = []
    for e in edges:
        (v1, s1), (v2, s2) = d.oriented_ends(e)
        n_e = induced_map(n.edge_maps[e])
        m_e = induced_map(m.edge_maps[e])
        cols = []
        for v, _, freedom in per_vertex:
            for idx, eta in enumerate(freedom):
                col = [lin.zeros(n_e[i].shape[0], m_e[i].shape[1]) for i in (0, 1)]
                if v == v1:
                    img = induced_map(evaluate(d.arrows[e][s1], eta, p))
                    col = [(col[i] + n_e[i] @ img[i]) % p for i in (0, 1)]
                if v == v2:
                    img = induced_map(evaluate(d.arrows[e][s2], eta, p))
                    col = [(col[i] - img[i] @ m_e[i]) % p for i in (0, 1)]
                cols.append(((v, idx), np.concatenate([c.reshape(-1) for c in col])))
        edge_ctx.append((e, v1, s1, v2, s2, n_e, m_e, cols))

    freedom_index = []
    for v, _, freedom in per_vertex:
        freedom_index.extend((v, idx) for idx in range(len(freedom)))

    for combo in itertools.product(*[c for _, c, _ in per_vertex]):
        vmaps = {v: mor for (v, _, _), mor in zip(per_vertex, combo)}
        rows = []
        residuals = []
        for e, v1, s1, v2, s2, n_e, m_e, cols in edge_ctx:
            a1 = induced_map(evaluate(d.arrows[e][s1], vmaps[v1], p))
            a2 = induced_map(evaluate(d.arrows[e][s2], vmaps[v2], p))
            res = [((n_e[i] @ a1[i]) - (a2[i] @ m_e[i])) % p for i in (0, 1)]
            residuals.append(np.concatenate([r.reshape(-1) for r in res]))
            colmap = dict(cols)
            rows.append(
                np.stack(
                    [colmap.get(key, np.zeros(residuals[-1].shape[0], dtype=np.int64))
                     for key in freedom_index],
                    axis=1,
                )
                if freedom_index
                else np.zeros((residuals[-1].shape[0], 0), dtype=np.int64)
            )
        rhs = np.concatenate(residuals) if residuals else np.zeros(0, dtype=np.int64)
        a = np.concatenate(rows, axis=0) if rows else np.zeros((0, len(freedom_index)), dtype=np.int64)
        if freedom_index:
            sol = lin.solve(a, (-rhs) % p, p)
            if sol is None:
                continue
        else:
            if rhs.any():
                continue
            sol = np.zeros(0, dtype=np.int64)
        if not want_witness:
            return YES
        # assemble the witness: corrected vertex maps, then solve edge maps
        vfinal = dict(vmaps)
        off = 0
        for v, _, freedom in per_vertex:
            mor = vfinal[v]
            for idx, eta in enumerate(freedom):
                c = int(sol[off + idx])
                if c:
                    mor = _mor_add_generic(mor, _mor_scale_generic(eta, c))
            off += len(freedom)
            vfinal[v] = mor
        emaps = {}
        probe = HolimMorphism(m, n, 0, vfinal, holim_zero_mor(m, n, 0).edge_maps)
        for e in edges:
            mu1, mu2 = _edge_component_images(probe, e)
            need = compose(mu2, m.edge_maps[e]).sub(compose(n.edge_maps[e], mu1))
            w = ca.exactness_witness(need)
            assert w is not None
            emaps[e] = w
        mu = HolimMorphism(m, n, 0, vfinal, emaps)
        assert holim_is_closed(mu)
        return YES, mu
    return (NO, None) if want_witness else NO


# ---------------------------------------------------------------------------
# spans and the reflection functors


@dataclass(frozen=True, eq=False)
class SpanObject:
    """Fun(* <- * -> *) for kind 'out', Fun(* -> * <- *) for kind 'in'."""

    kind: str
    left: Complex
    mid: Complex
    right: Complex
    l: GradedMap
    r: GradedMap

    def __post_init__(self):
        if self.kind not in ("out", "in"):
            raise ValueError(self.kind)
        want = (
            ((self.mid, self.left), (self.mid, self.right))
            if self.kind == "out"
            else ((self.left, self.mid), (self.right, self.mid))
        )
        for f, (s, t) in ((self.l, want[0]), (self.r, want[1])):
            if f.src.dims != s.dims or f.tgt.dims != t.dims:
                raise ValueError("span leg shape mismatch")
            if f.degree % 2 != 0 or not is_closed(f):
                raise ValueError("span legs must be closed of degree 0")

    @property
    def p(self):
        return self.mid.p


@dataclass(frozen=True, eq=False)
class SpanMorphism:
    src: SpanObject
    tgt: SpanObject
    fl: GradedMap
    hl: GradedMap
    f1: GradedMap
    hr: GradedMap
    fr: GradedMap

    @property
    def degree(self):
        return self.f1.degree


def span_differential(mu: SpanMorphism) -> SpanMorphism:
    k = mu.degree % 2
    sign = -1 if k else 1
    a, b = mu.src, mu.tgt
    if a.kind == "out":
        sq_l = compose(b.l, mu.f1).sub(compose(mu.fl, a.l))
        sq_r = compose(b.r, mu.f1).sub(compose(mu.fr, a.r))
    else:
        sq_l = compose(b.l, mu.fl).sub(compose(mu.f1, a.l))
        sq_r = compose(b.r, mu.fr).sub(compose(mu.f1, a.r))
    return SpanMorphism(
        a, b,
        hom_differential(mu.fl), hom_differential(mu.hl).add(sq_l.scale(sign)),
        hom_differential(mu.f1),
        hom_differential(mu.hr).add(sq_r.scale(sign)), hom_differential(mu.fr),
    )


def span_compose(nu: SpanMorphism, mu: SpanMorphism) -> SpanMorphism:
    k = mu.degree % 2
    sign = -1 if k else 1
    if mu.src.kind == "out":
        hl = compose(nu.fl, mu.hl).add(compose(nu.hl, mu.f1).scale(sign))
        hr = compose(nu.fr, mu.hr).add(compose(nu.hr, mu.f1).scale(sign))
    else:
        hl = compose(nu.f1, mu.hl).add(compose(nu.hl, mu.fl).scale(sign))
        hr = compose(nu.f1, mu.hr).add(compose(nu.hr, mu.fr).scale(sign))
    return SpanMorphism(
        mu.src, nu.tgt,
        compose(nu.fl, mu.fl), hl, compose(nu.f1, mu.f1), hr, compose(nu.fr, mu.fr),
    )


def span_identity(v: SpanObject) -> SpanMorphism:
    zl = GradedMap.zero(v.mid if v.kind == "out" else v.left,
                        v.left if v.kind == "out" else v.mid, -1)
    zr = GradedMap.zero(v.mid if v.kind == "out" else v.right,
                        v.right if v.kind == "out" else v.mid, -1)
    return SpanMorphism(v, v, GradedMap.identity(v.left), zl, GradedMap.identity(v.mid),
                        zr, GradedMap.identity(v.right))


def span_is_closed(mu: SpanMorphism) -> bool:
    d = span_differential(mu)
    return all(f.is_zero() for f in (d.fl, d.hl, d.f1, d.hr, d.fr))


def glue_functor(v: SpanObject) -> ArrowObject:
    """phi^out: (L <- M -> R) |-> (M -> L (+) R); phi^in dually."""
    s, inc_l, inc_r, pr_l, pr_r = ca.dsum(v.left, v.right)
    if v.kind == "out":
        x = compose(inc_l, v.l).add(compose(inc_r, v.r))
        return ArrowObject(v.mid, s, x)
    x = compose(v.l, pr_l).add(compose(v.r, pr_r))
    return ArrowObject(s, v.mid, x)


def glue_functor_on_morphism(mu: SpanMorphism) -> ArrowMorphism:
    a, b = glue_functor(mu.src), glue_functor(mu.tgt)
    _, inc_l, inc_r, pr_l, pr_r = ca.dsum(mu.tgt.left, mu.tgt.right)
    _, _, _, spr_l, spr_r = ca.dsum(mu.src.left, mu.src.right)
    diag = compose(inc_l, compose(mu.fl, spr_l)).add(compose(inc_r, compose(mu.fr, spr_r)))
    if mu.src.kind == "out":
        h = compose(inc_l, mu.hl).add(compose(inc_r, mu.hr))
        return ArrowMorphism(a, b, mu.f1, h, diag)
    h = compose(mu.hl, spr_l).add(compose(mu.hr, spr_r))
    return ArrowMorphism(a, b, diag, h, mu.f1)


def reflect_plus(v: SpanObject) -> SpanObject:
    """F+: out-spans to in-spans via the cone of the glued map."""
    if v.kind != "out":
        raise ValueError("reflect_plus expects an out-span")
    glued = glue_functor(v)
    c = ca.cone(glued)
    cin = ca.cone_in(glued)
    _, inc_l, inc_r, _, _ = ca.dsum(v.left, v.right)
    return SpanObject("in", v.left, c, v.right, compose(cin, inc_l), compose(cin, inc_r))


def reflect_plus_on_morphism(mu: SpanMorphism) -> SpanMorphism:
    a, b = reflect_plus(mu.src), reflect_plus(mu.tgt)
    mid = ca.cone_map(glue_functor_on_morphism(mu))
    k = mu.degree
    return SpanMorphism(
        a, b, mu.fl, GradedMap.zero(a.left, b.mid, k - 1), mid,
        GradedMap.zero(a.right, b.mid, k - 1), mu.fr,
    )


def reflect_minus(w: SpanObject) -> SpanObject:
    """F-: in-spans to out-spans via the shifted cone of the glued map."""
    if w.kind != "in":
        raise ValueError("reflect_minus expects an in-span")
    glued = glue_functor(w)
    tp = ca.rotation_tprime(glued)  # (C[-1] -> L (+) R)
    _, _, _, pr_l, pr_r = ca.dsum(w.left, w.right)
    return SpanObject("out", w.left, tp.x1, w.right, compose(pr_l, tp.x), compose(pr_r, tp.x))


def reflect_minus_on_morphism(mu: SpanMorphism) -> SpanMorphism:
    a, b = reflect_minus(mu.src), reflect_minus(mu.tgt)
    mid = ca.shift_map(ca.cone_map(glue_functor_on_morphism(mu)), 1)
    k = mu.degree
    return SpanMorphism(
        a, b, mu.fl, GradedMap.zero(a.mid, b.left, k - 1), mid,
        GradedMap.zero(a.mid, b.right, k - 1), mu.fr,
    )


def span_objects_equivalent(v: SpanObject, w: SpanObject, cand_bound=300_000) -> str:
    """YES/NO/INDETERMINATE for spans, by the same cohomology-level search."""
    if v.kind != w.kind:
        return NO
    p = v.p
    pls = _iso_pairs(v.left, w.left)
    pms = _iso_pairs(v.mid, w.mid)
    prs = _iso_pairs(v.right, w.right)
    if not (pls and pms and prs):
        return NO
    if len(pls) * len(pms) * len(prs) > cand_bound:
        return INDETERMINATE
    il_v, ir_v = induced_map(v.l), induced_map(v.r)
    il_w, ir_w = induced_map(w.l), induced_map(w.r)
    for pl in pls:
        for pm in pms:
            for pr in prs:
                if v.kind == "out":
                    ok = all(
                        np.array_equal((il_w[i] @ pm[i]) % p, (pl[i] @ il_v[i]) % p)
                        and np.array_equal((ir_w[i] @ pm[i]) % p, (pr[i] @ ir_v[i]) % p)
                        for i in (0, 1)
                    )
                else:
                    ok = all(
                        np.array_equal((il_w[i] @ pl[i]) % p, (pm[i] @ il_v[i]) % p)
                        and np.array_equal((ir_w[i] @ pr[i]) % p, (pm[i] @ ir_v[i]) % p)
                        for i in (0, 1)
                    )
                if ok:
                    return YES
    return NO
