"""Exhaustive enumeration of holim object classes at a dimension cap.

Strategy.  Over a field every object is equivalent to one whose vertex data
uses zero-differential complexes; two such presentation states are equivalent
exactly when a tuple of invertible cohomology matrices (the *gauge*) carries
one to the other, acting on the arrow-vertex structure maps by conjugation
and on the edge homotopy classes through the edge functors.  Classes are
therefore gauge orbits, computed in two stages: orbits on structure-map data
under the slot gauge, then orbits on edge-class data under the stabilizer
(augmented by the off-diagonal unipotent gauge of arrow vertices, which acts
only through cone functors).

Strictified presentations share slots between vertices, which both shrinks
the data and implements the quasi-equivalent strict-limit subcategory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _modp as lin
from . import chain_algebra as ca
from .chain_algebra import ArrowMorphism, ArrowObject, Complex, GradedMap, induced_map
from .diagram import ARROW, BASE, COLLAPSED, PATH, ZERO, GraphicDiagram, evaluate
from .holim import HolimObject

ZERO_SLOT = "__zero__"


class EnumerationTooLarge(Exception):
    def __init__(self, what, estimate):
        super().__init__(f"enumeration refused: {what} would need about {estimate} states")
        self.estimate = estimate


@dataclass
class Presentation:
    diagram: GraphicDiagram
    strict_edges: tuple
    slots: list  # slot ids, ZERO_SLOT excluded
    slot_of: dict  # (vertex, position) -> slot id or ZERO_SLOT
    map_keys: list  # (vertex, src slot, tgt slot) per arrow vertex
    free_edges: list


def _resolve_leg(d: GraphicDiagram, e: str, slot: int):
    """Position (or zero marker) a strict-edge leg projects to."""
    v = d.endpoint(e, slot)
    kind = d.nodes[v].kind
    gens = d.arrows[e][slot].simplified().gens
    if len(gens) != 1:
        raise ValueError(f"cannot strictify edge {e}: leg {gens} is not a plain projection")
    (name, *args) = gens[0]
    if name == "id" and kind == BASE:
        return (v, "o")
    if name in ("pi1", "pi2") and kind == PATH:
        return (v, "o")
    if name == "rho1" and kind == ARROW:
        return (v, "1")
    if name == "rho2" and kind == ARROW:
        return (v, "2")
    if name in ("initial", "final"):
        return ZERO_SLOT
    raise ValueError(f"cannot strictify edge {e}: leg {gens} on a {kind} node")


def presentify(d: GraphicDiagram, strict_edges=()) -> Presentation:
    strict_edges = tuple(sorted(set(strict_edges)))
    positions = []
    for v in sorted(d.shape.vertices):
        kind = d.nodes[v].kind
        if kind == ZERO:
            continue
        if kind in (BASE, PATH):
            positions.append((v, "o"))
        elif kind == ARROW:
            positions.extend([(v, "1"), (v, "2")])
        else:
            raise ValueError(f"enumeration does not handle node kind {kind}")
    parent = {pos: pos for pos in positions}
    parent[ZERO_SLOT] = ZERO_SLOT

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb == ZERO_SLOT:
                ra, rb = rb, ra
            parent[rb] = ra

    for e in strict_edges:
        union(_resolve_leg(d, e, 0), _resolve_leg(d, e, 1))
    slot_of = {pos: find(pos) for pos in positions}
    slots = sorted({s for s in slot_of.values() if s != ZERO_SLOT},
                   key=lambda s: str(s))
    map_keys = []
    for v in sorted(d.shape.vertices):
        if d.nodes[v].kind == ARROW:
            map_keys.append((v, slot_of[(v, "1")], slot_of[(v, "2")]))
    free = [e for e, _ in d.shape.edges if e not in strict_edges]
    return Presentation(d, strict_edges, slots, slot_of, map_keys, free)


# ---------------------------------------------------------------------------
# per-dimension machinery


def _slot_dims_choices(pres: Presentation, cap: int):
    names = pres.slots
    for combo in itertools.product(
        *[[(a, b) for a in range(cap + 1) for b in range(cap + 1)] for _ in names]
    ):
        dims = dict(zip(names, combo))
        if _dims_feasible(pres, dims):
            yield dims


def _leg_image_dims(pres, dims, e, slot):
    """Possible cohomology dims of one leg's image, over all structure maps."""
    d = pres.diagram
    v = d.endpoint(e, slot)
    kind = d.nodes[v].kind
    gens = d.arrows[e][slot].simplified().gens
    shift = sum(g[1] for g in gens if g[0] == "shift") % 2
    bases = [g[0] for g in gens if g[0] != "shift"]
    base = bases[0] if bases else "id"
    if base in ("initial", "final") or kind == ZERO:
        opts = {(0, 0)}
    elif base in ("id", "pi1", "pi2"):
        opts = {dims[pres.slot_of[(v, "o")]]}
    elif base == "rho1":
        opts = {_dims_at(dims, pres.slot_of[(v, "1")])}
    elif base == "rho2":
        opts = {_dims_at(dims, pres.slot_of[(v, "2")])}
    elif base == "cone":
        a = _dims_at(dims, pres.slot_of[(v, "1")])
        b = _dims_at(dims, pres.slot_of[(v, "2")])
        opts = set()
        for r0 in range(min(a[0], b[0]) + 1):
            for r1 in range(min(a[1], b[1]) + 1):
                opts.add((a[1] - r1 + b[0] - r0, a[0] - r0 + b[1] - r1))
    else:
        return None  # unknown: no pruning
    if shift:
        opts = {(h1, h0) for h0, h1 in opts}
    return opts


def _dims_feasible(pres, dims) -> bool:
    for e in pres.free_edges:
        left = _leg_image_dims(pres, dims, e, 0)
        right = _leg_image_dims(pres, dims, e, 1)
        if left is None or right is None:
            continue
        if not (left & right):
            return False
    return True


def _dims_at(dims, slot):
    return (0, 0) if slot == ZERO_SLOT else dims[slot]


def _build_slot_complexes(pres, dims, p):
    cx = {ZERO_SLOT: Complex.zero(p)}
    for s in pres.slots:
        cx[s] = Complex.zero_diff(dims[s][0], dims[s][1], p)
    return cx


def _map_space(pres, dims, p, map_bound):
    spaces = {}
    total = 1
    for v, s1, s2 in pres.map_keys:
        a, b = _dims_at(dims, s1), _dims_at(dims, s2)
        n = p ** (a[0] * b[0] + a[1] * b[1])
        total *= n
        if total > map_bound:
            raise EnumerationTooLarge("structure-map space", total)
        mats0 = lin.all_matrices(b[0], a[0], p)
        mats1 = lin.all_matrices(b[1], a[1], p)
        spaces[v] = [(np.asarray(m0), np.asarray(m1)) for m0 in mats0 for m1 in mats1]
    return spaces


def _vertex_objects(pres, cx, map_state):
    d = pres.diagram
    out = {}
    for v in sorted(d.shape.vertices):
        kind = d.nodes[v].kind
        if kind == ZERO:
            out[v] = Complex.zero(d.p)
        elif kind == BASE:
            out[v] = cx[pres.slot_of[(v, "o")]]
        elif kind == PATH:
            s = cx[pres.slot_of[(v, "o")]]
            out[v] = ArrowObject.build(GradedMap.identity(s))
        elif kind == ARROW:
            s1 = cx[pres.slot_of[(v, "1")]]
            s2 = cx[pres.slot_of[(v, "2")]]
            x0, x1 = map_state[v]
            out[v] = ArrowObject(s1, s2, GradedMap(s1, s2, 0, (x0.copy(), x1.copy())))
    return out


def _map_orbit_reps(pres, dims, p, spaces):
    """Orbit representatives of the slot gauge acting on structure maps."""
    order = [v for v, _, _ in pres.map_keys]
    if not order:
        return [dict()]
    slot_pair = {v: (s1, s2) for v, s1, s2 in pres.map_keys}
    lookup = {
        v: {(m0.tobytes(), m1.tobytes()): i for i, (m0, m1) in enumerate(spaces[v])}
        for v in order
    }
    perms = []
    for s in pres.slots:
        for parity in (0, 1):
            for g in lin.gl_generators(dims[s][parity], p):
                ginv = lin.inv(g, p)
                perm = []
                touches = False
                for v in order:
                    s1, s2 = slot_pair[v]
                    if s not in (s1, s2):
                        perm.append(None)
                        continue
                    touches = True
                    table = []
                    for m0, m1 in spaces[v]:
                        x = [m0, m1]
                        if s == s2:
                            x[parity] = (g @ x[parity]) % p
                        if s == s1:
                            x[parity] = (x[parity] @ ginv) % p
                        table.append(lookup[v][(x[0].tobytes(), x[1].tobytes())])
                    perm.append(table)
                if touches:
                    perms.append(perm)
    sizes = [len(spaces[v]) for v in order]
    states = list(itertools.product(*[range(n) for n in sizes]))
    pos = {st: i for i, st in enumerate(states)}
    seen = bytearray(len(states))
    reps = []
    for i, st in enumerate(states):
        if seen[i]:
            continue
        reps.append({v: spaces[v][st[k]] for k, v in enumerate(order)})
        seen[i] = 1
        stack = [st]
        while stack:
            cur = stack.pop()
            for perm in perms:
                nxt = tuple(
                    cur[k] if perm[k] is None else perm[k][cur[k]]
                    for k in range(len(order))
                )
                j = pos[nxt]
                if not seen[j]:
                    seen[j] = 1
                    stack.append(nxt)
    return reps


def _components(pres):
    """Slots grouped by the structure maps that couple them."""
    parent = {s: s for s in pres.slots}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, s1, s2 in pres.map_keys:
        if s1 != ZERO_SLOT and s2 != ZERO_SLOT:
            parent[find(s1)] = find(s2)
    comps = {}
    for s in pres.slots:
        comps.setdefault(find(s), []).append(s)
    return [sorted(c) for c in comps.values()]


def _visible_slots(pres):
    """Slots whose gauge can act on some free-edge class, plus cone vertices."""
    d = pres.diagram
    visible = set()
    cone_vertices = set()
    for e in pres.free_edges:
        for slot in (0, 1):
            v = d.endpoint(e, slot)
            kind = d.nodes[v].kind
            gens = {g[0] for g in d.arrows[e][slot].gens}
            if kind == BASE:
                visible.add(pres.slot_of[(v, "o")])
            elif kind == PATH:
                visible.add(pres.slot_of[(v, "o")])
            elif kind == ARROW:
                if "cone" in gens:
                    visible.add(pres.slot_of[(v, "1")])
                    visible.add(pres.slot_of[(v, "2")])
                    cone_vertices.add(v)
                elif "rho1" in gens:
                    visible.add(pres.slot_of[(v, "1")])
                elif "rho2" in gens:
                    visible.add(pres.slot_of[(v, "2")])
    return visible, cone_vertices


def _stabilizer_signatures(pres, dims, p, map_state, comp, visible, group_bound):
    """Distinct visible-slot restrictions of the component's stabilizer.

    The stabilizer itself is {g : g_tgt x = x g_src for every key}; only its
    action on visible slots can move edge classes, so we batch-filter the
    whole component group with numpy and keep one element per restriction.
    """
    size = 1
    for s in comp:
        size *= lin.gl_order(dims[s][0], p) * lin.gl_order(dims[s][1], p)
    if size > group_bound:
        raise EnumerationTooLarge("gauge component", size)
    pools = []
    pool_index = {}
    for s in comp:
        for parity in (0, 1):
            pool_index[(s, parity)] = len(pools)
            pools.append(np.stack(lin.general_linear(dims[s][parity], p)))
    counts = [pool.shape[0] for pool in pools]
    total = int(np.prod(counts)) if counts else 1
    idx = np.arange(total)
    digits = []
    for c in reversed(counts):
        digits.append(idx % c)
        idx //= c
    digits = digits[::-1]
    arrays = {key: pools[k][digits[k]] for key, k in
              ((key, pool_index[key]) for key in pool_index)}
    mask = np.ones(total, dtype=bool)
    keys = [k for k in pres.map_keys if k[1] in comp or k[2] in comp]
    for v, s1, s2 in keys:
        x0, x1 = map_state[v]
        for parity, x in ((0, x0), (1, x1)):
            left = (
                np.einsum("nij,jk->nik", arrays[(s2, parity)], x) % p
                if (s2, parity) in arrays
                else np.broadcast_to(x, (total,) + x.shape)
            )
            right = (
                np.einsum("ij,njk->nik", x, arrays[(s1, parity)]) % p
                if (s1, parity) in arrays
                else np.broadcast_to(x, (total,) + x.shape)
            )
            if left.size:
                mask &= (left == right).reshape(total, -1).all(axis=1)
    surviving = np.nonzero(mask)[0]
    vis = [s for s in comp if s in visible]
    sigs = {}
    for i in surviving:
        sig = tuple(
            (arrays[(s, 0)][i].tobytes(), arrays[(s, 1)][i].tobytes()) for s in vis
        )
        if sig not in sigs:
            sigs[sig] = {
                s: (arrays[(s, 0)][i], arrays[(s, 1)][i]) for s in vis
            }
    return list(sigs.values())


def _gauge_vertex_morphism(pres, g_by_slot, vobjs, v):
    """Node endomorphism induced by a slot-gauge element at vertex v."""
    d = pres.diagram
    kind = d.nodes[v].kind
    obj = vobjs[v]
    if kind == BASE:
        g = g_by_slot[pres.slot_of[(v, "o")]]
        return GradedMap(obj, obj, 0, (g[0].copy(), g[1].copy()))
    if kind == PATH:
        g = g_by_slot[pres.slot_of[(v, "o")]]
        base = GradedMap(obj.x1, obj.x1, 0, (g[0].copy(), g[1].copy()))
        return ArrowMorphism(obj, obj, base, GradedMap.zero(obj.x1, obj.x2, -1), base)
    if kind == ARROW:
        s1, s2 = pres.slot_of[(v, "1")], pres.slot_of[(v, "2")]
        g1, g2 = g_by_slot.get(s1), g_by_slot.get(s2)
        f1 = GradedMap.identity(obj.x1) if g1 is None else GradedMap(
            obj.x1, obj.x1, 0, (g1[0].copy(), g1[1].copy()))
        f2 = GradedMap.identity(obj.x2) if g2 is None else GradedMap(
            obj.x2, obj.x2, 0, (g2[0].copy(), g2[1].copy()))
        return ArrowMorphism(obj, obj, f1, GradedMap.zero(obj.x1, obj.x2, -1), f2)
    raise ValueError(kind)


def _unipotent_gens(pres, vobjs, cone_vertices):
    out = []
    for v in sorted(cone_vertices):
        obj = vobjs[v]
        for eta in ca.hom_space_basis(obj.x1, obj.x2, -1)[0]:
            out.append(
                (v, ArrowMorphism(obj, obj, GradedMap.identity(obj.x1), eta,
                                  GradedMap.identity(obj.x2)))
            )
    return out


def _edge_images(pres, vobjs):
    d = pres.diagram
    holder = HolimObject(d, vobjs, {})
    images = {}
    for e, _ in d.shape.edges:
        (v1, s1), (v2, s2) = d.oriented_ends(e)
        images[e] = (d.edge_image(holder, e, s1), d.edge_image(holder, e, s2))
    return images


def _edge_class_sets(pres, images, p, edge_bound):
    sets = {}
    total = 1
    for e in pres.free_edges:
        src, tgt = images[e]
        hs, ht = src.cohomology_dims(), tgt.cohomology_dims()
        if hs != ht:
            return None
        pairs = [
            (a, b)
            for a in lin.general_linear(hs[0], p)
            for b in lin.general_linear(hs[1], p)
        ]
        total *= len(pairs)
        if total > edge_bound:
            raise EnumerationTooLarge("edge-class space", total)
        sets[e] = pairs
    return sets


def _edge_perm(pres, images, sets, e, mors, p):
    """Permutation of S_e induced by the vertex endomorphisms in mors."""
    d = pres.diagram
    (v1, s1), (v2, s2) = d.oriented_ends(e)
    if v1 not in mors and v2 not in mors:
        return None
    it = induced_map(evaluate(d.arrows[e][s1], mors[v1], p)) if v1 in mors else None
    ih = induced_map(evaluate(d.arrows[e][s2], mors[v2], p)) if v2 in mors else None
    it_inv = (lin.inv(it[0], p), lin.inv(it[1], p)) if it is not None else None
    index = {
        (c0.tobytes(), c1.tobytes()): i for i, (c0, c1) in enumerate(sets[e])
    }
    table = []
    for c0, c1 in sets[e]:
        if it_inv is not None:
            c0, c1 = (c0 @ it_inv[0]) % p, (c1 @ it_inv[1]) % p
        if ih is not None:
            c0, c1 = (ih[0] @ c0) % p, (ih[1] @ c1) % p
        table.append(index[(c0.tobytes(), c1.tobytes())])
    return table


def _edge_orbit_reps(pres, images, sets, gen_mors, p):
    edges = pres.free_edges
    if not edges:
        return [dict()]
    perms = []
    seen_sig = set()
    for mors in gen_mors:
        perm = [_edge_perm(pres, images, sets, e, mors, p) for e in edges]
        if all(t is None or t == list(range(len(t))) for t in perm):
            continue
        sig = tuple(tuple(t) if t is not None else None for t in perm)
        if sig in seen_sig:
            continue
        seen_sig.add(sig)
        perms.append(perm)
    states = list(itertools.product(*[range(len(sets[e])) for e in edges]))
    pos = {st: i for i, st in enumerate(states)}
    seen = bytearray(len(states))
    reps = []
    for i, st in enumerate(states):
        if seen[i]:
            continue
        reps.append(dict(zip(edges, st)))
        seen[i] = 1
        stack = [st]
        while stack:
            cur = stack.pop()
            for perm in perms:
                nxt = tuple(
                    cur[k] if perm[k] is None else perm[k][cur[k]]
                    for k in range(len(edges))
                )
                j = pos[nxt]
                if not seen[j]:
                    seen[j] = 1
                    stack.append(nxt)
    return reps


def enumerate_objects(
    d: GraphicDiagram,
    cap: int,
    strict_edges=(),
    *,
    map_bound: int = 400_000,
    group_bound: int = 200_000,
    edge_bound: int = 300_000,
) -> list[HolimObject]:
    """Class representatives of the holim category, exhaustive up to the cap.

    With strict_edges (a forest with fibration legs) the enumeration runs in
    the quasi-equivalent strictified subcategory, which is usually far
    smaller.  Raises EnumerationTooLarge rather than guessing.
    """
    pres = presentify(d, strict_edges)
    p = d.p
    out = []
    for dims in _slot_dims_choices(pres, cap):
        spaces = _map_space(pres, dims, p, map_bound)
        cx = _build_slot_complexes(pres, dims, p)
        comps = _components(pres)
        visible, cone_vertices = _visible_slots(pres)
        for map_state in _map_orbit_reps(pres, dims, p, spaces):
            vobjs = _vertex_objects(pres, cx, map_state)
            images = _edge_images(pres, vobjs)
            if pres.free_edges:
                sets = _edge_class_sets(pres, images, p, edge_bound)
                if sets is None:
                    continue
                gen_mors = []
                for comp in comps:
                    if not any(s in visible for s in comp):
                        continue
                    for g in _stabilizer_signatures(
                        pres, dims, p, map_state, comp, visible, group_bound
                    ):
                        mors = {}
                        for v in sorted(d.shape.vertices):
                            kind = d.nodes[v].kind
                            if kind in (BASE, PATH):
                                touched = pres.slot_of.get((v, "o")) in g
                            elif kind == ARROW:
                                touched = (
                                    pres.slot_of[(v, "1")] in g
                                    or pres.slot_of[(v, "2")] in g
                                )
                            else:
                                touched = False
                            if touched:
                                mors[v] = _gauge_vertex_morphism(pres, g, vobjs, v)
                        if mors:
                            gen_mors.append(mors)
                for v, mor in _unipotent_gens(pres, vobjs, cone_vertices):
                    gen_mors.append({v: mor})
                edge_states = _edge_orbit_reps(pres, images, sets, gen_mors, p)
            else:
                sets = {}
                edge_states = [dict()]
            for edge_state in edge_states:
                emaps = {}
                for e in pres.free_edges:
                    src, tgt = images[e]
                    pair = sets[e][edge_state[e]]
                    emaps[e] = ca.lift_cohomology_map(src, tgt, 0, pair)
                for e in pres.strict_edges:
                    emaps[e] = GradedMap.identity(images[e][0])
                out.append(HolimObject(d, vobjs, emaps))
    return out


def class_signature(m: HolimObject) -> dict:
    """Reportable invariants of a class representative."""
    d = m.diagram
    vert = {}
    for v in sorted(d.shape.vertices):
        obj = m.vertex_objects[v]
        kind = d.nodes[v].kind
        if kind in (ZERO, BASE):
            vert[v] = {"h": list(obj.cohomology_dims())}
        elif kind in (ARROW, PATH):
            ranks = [int(lin.rank(im, m.p)) for im in induced_map(obj.x)]
            vert[v] = {
                "h1": list(obj.x1.cohomology_dims()),
                "h2": list(obj.x2.cohomology_dims()),
                "rank": ranks,
            }
        else:
            vert[v] = {"kind": kind}
    return {"vertices": vert}
