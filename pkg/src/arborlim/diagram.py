"""Graph-shaped diagrams of dg-categories with formal functor edges.

A GraphicDiagram lives over a finite graph: each graph vertex carries a node
category (zero, base A, arrow A^->, path P(A), or a collapsed strict limit)
and each graph edge carries two formal functor composites, one per endpoint,
both landing in the base category at the edge node of the associated quiver.
Functors are kept formal so that fibration detection and the rotation
rewrites stay syntactic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import chain_algebra as ca
from .chain_algebra import ArrowMorphism, ArrowObject, Complex, GradedMap
from .quiver_core import Graph

ZERO, BASE, ARROW, PATH, COLLAPSED = "zero", "base", "arrow", "path", "collapsed"

# generators that are Tabuada fibrations; Cone and Initial are deliberately out
FIBRATION_GENS = {"id", "rho1", "rho2", "pi1", "pi2", "shift", "final"}

_GEN_DOMAIN = {
    "id": None,  # any
    "rho1": ARROW,
    "rho2": ARROW,
    "cone": ARROW,
    "shift": BASE,
    "pi1": PATH,
    "pi2": PATH,
    "initial": ZERO,
    "final": None,  # any
    "proj": COLLAPSED,
}


@dataclass(frozen=True)
class NodeDesc:
    kind: str
    sub: "GraphicDiagram | None" = None  # collapsed nodes carry their sub-diagram

    def __post_init__(self):
        if self.kind not in (ZERO, BASE, ARROW, PATH, COLLAPSED):
            raise ValueError(f"unknown node kind {self.kind}")
        if (self.kind == COLLAPSED) != (self.sub is not None):
            raise ValueError("collapsed nodes (exactly) must carry a sub-diagram")


@dataclass(frozen=True)
class Functor:
    """Formal composite of generators, applied left to right."""

    gens: tuple[tuple, ...]

    @staticmethod
    def of(*gens) -> "Functor":
        out = []
        for g in gens:
            if isinstance(g, str):
                g = (g,)
            name = g[0]
            if name not in _GEN_DOMAIN:
                raise ValueError(f"unknown generator {name}")
            if name == "shift" and (len(g) != 2 or not isinstance(g[1], int)):
                raise ValueError("shift takes one integer argument")
            out.append(tuple(g))
        return Functor(tuple(out))

    def then(self, *gens) -> "Functor":
        return Functor.of(*(self.gens + Functor.of(*gens).gens))

    @property
    def known_fibration(self) -> bool:
        return all(g[0] in FIBRATION_GENS for g in self.gens)

    def domain_kind(self) -> str | None:
        for g in self.gens:
            d = _GEN_DOMAIN[g[0]]
            if g[0] == "id":
                continue
            return d
        return None

    def simplified(self) -> "Functor":
        """Drop identities and fold consecutive shifts mod 2."""
        out: list[tuple] = []
        for g in self.gens:
            if g[0] == "id":
                continue
            if g[0] == "shift":
                n = g[1] % 2
                if out and out[-1][0] == "shift":
                    n = (out.pop()[1] + n) % 2
                if n:
                    out.append(("shift", n))
                continue
            out.append(g)
        return Functor(tuple(out)) if out else Functor((("id",),))

    def describe(self) -> list:
        return [list(g) for g in self.gens]


ID = Functor.of("id")


@dataclass(frozen=True, eq=False)
class CollapsedObject:
    """Object of a strict limit: per-vertex objects with literally equal images."""

    sub: "GraphicDiagram"
    parts: dict

    def __post_init__(self):
        for e, _ in self.sub.shape.edges:
            left = self.sub.edge_image(self, e, 0, collapsed=True)
            right = self.sub.edge_image(self, e, 1, collapsed=True)
            if not left.equal(right):
                raise ValueError(f"strict-limit images differ on edge {e}")

    @property
    def p(self) -> int:
        return next(iter(self.parts.values())).p


@dataclass(frozen=True, eq=False)
class CollapsedMorphism:
    sub: "GraphicDiagram"
    src: CollapsedObject
    tgt: CollapsedObject
    degree: int
    parts: dict


@dataclass(frozen=True, eq=False)
class GraphicDiagram:
    shape: Graph
    tails: dict  # edge id -> endpoint slot (0/1) acting as e_1
    nodes: dict  # vertex id -> NodeDesc
    arrows: dict  # edge id -> (Functor at slot 0, Functor at slot 1)
    p: int

    def __post_init__(self):
        for v in self.shape.vertices:
            if v not in self.nodes:
                raise ValueError(f"vertex {v} has no node descriptor")
        for e, (a, b) in self.shape.edges:
            if e not in self.arrows or e not in self.tails:
                raise ValueError(f"edge {e} lacks arrow or orientation data")
            for slot, v in ((0, a), (1, b)):
                dom = self.arrows[e][slot].domain_kind()
                if dom is not None and dom != self.nodes[v].kind:
                    raise ValueError(
                        f"edge {e} slot {slot}: functor wants {dom}, node is {self.nodes[v].kind}"
                    )

    def endpoint(self, e: str, slot: int) -> str:
        return self.shape.endpoints(e)[slot]

    def tail_slot(self, e: str) -> int:
        return self.tails[e]

    def oriented_ends(self, e: str) -> tuple[tuple[str, int], tuple[str, int]]:
        """((e1 vertex, slot), (e2 vertex, slot))."""
        t = self.tails[e]
        return (self.endpoint(e, t), t), (self.endpoint(e, 1 - t), 1 - t)

    def edges_at(self, v: str) -> list[tuple[str, int]]:
        out = []
        for e, (a, b) in self.shape.edges:
            if a == v:
                out.append((e, 0))
            if b == v:
                out.append((e, 1))
        return out

    def edge_image(self, holder, e: str, slot: int, collapsed=False):
        """Value of the slot functor on the vertex object stored in holder.parts."""
        parts = holder.parts if collapsed else holder.vertex_objects
        v = self.endpoint(e, slot)
        return evaluate(self.arrows[e][slot], parts[v], self.p)

    def describe(self) -> dict:
        return {
            "vertices": {
                v: self.nodes[v].kind for v in self.shape.vertices
            },
            "edges": {
                e: {
                    "endpoints": list(self.shape.endpoints(e)),
                    "tail_slot": self.tails[e],
                    "functors": [self.arrows[e][0].describe(), self.arrows[e][1].describe()],
                }
                for e, _ in self.shape.edges
            },
            "prime": self.p,
        }


def evaluate(f: Functor, x, p: int):
    """Apply a formal composite to an object or morphism of its domain category."""
    for g in f.gens:
        x = _apply_gen(g, x, p)
    return x


def _is_morphism(x) -> bool:
    return isinstance(x, (GradedMap, ArrowMorphism, CollapsedMorphism))


def _apply_gen(g: tuple, x, p: int):
    name = g[0]
    if name == "id":
        return x
    if name in ("rho1", "pi1"):
        if _is_morphism(x):
            return x.f1
        _expect(x, ArrowObject, name)
        return x.x1
    if name in ("rho2", "pi2"):
        if _is_morphism(x):
            return x.f2
        _expect(x, ArrowObject, name)
        return x.x2
    if name == "cone":
        if _is_morphism(x):
            return ca.cone_map(x)
        _expect(x, ArrowObject, name)
        return ca.cone(x)
    if name == "shift":
        if _is_morphism(x):
            return ca.shift_map(x, g[1])
        _expect(x, Complex, name)
        return ca.shift(x, g[1])
    if name == "initial":
        # the zero category's object is represented by the zero complex
        if _is_morphism(x):
            return x
        _expect(x, Complex, name)
        if not x.is_zero():
            raise ValueError("initial functor applied to a nonzero object")
        return x
    if name == "final":
        z = Complex.zero(p)
        if _is_morphism(x):
            return GradedMap.zero(z, z, x.degree)
        return z
    if name == "proj":
        v = g[1]
        if isinstance(x, CollapsedMorphism):
            return x.parts[v]
        _expect(x, CollapsedObject, name)
        return x.parts[v]
    raise ValueError(f"unknown generator {name}")


def _expect(x, cls, name):
    if not isinstance(x, cls):
        raise ValueError(f"generator {name} cannot act on {type(x).__name__}")


# ---------------------------------------------------------------------------
# padding, path extension, tree collapse


def _rooted_fibration_check(d: GraphicDiagram, edges: set[str], need_fibrations=True) -> dict:
    """Check the edge set is a forest admitting roots with fibration child legs.

    Returns {vertex: parent edge} for non-roots (the chosen rooted structure).
    """
    adj: dict[str, list[tuple[str, str]]] = {}
    for e in edges:
        a, b = d.shape.endpoints(e)
        if a == b:
            raise ValueError(f"edge {e} is a self-loop; not a forest")
        adj.setdefault(a, []).append((e, b))
        adj.setdefault(b, []).append((e, a))
    seen: set[str] = set()
    parents: dict[str, str] = {}
    for start in sorted(adj):
        if start in seen:
            continue
        component = _component(adj, start)
        if sum(1 for e in edges if d.shape.endpoints(e)[0] in component) != len(component) - 1:
            raise ValueError("skipped edges contain a cycle")
        choice = None
        for root in sorted(component):
            ok, par = _try_root(d, adj, root, component, need_fibrations)
            if ok:
                choice = par
                break
        if choice is None:
            raise ValueError("no root makes every child leg a known fibration")
        parents.update(choice)
        seen |= component
    return parents


def _component(adj, start):
    out = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for _, w in adj.get(v, []):
            if w not in out:
                out.add(w)
                stack.append(w)
    return out


def _try_root(d, adj, root, component, need_fibrations):
    parents = {}
    stack = [root]
    visited = {root}
    while stack:
        v = stack.pop()
        for e, w in adj.get(v, []):
            if w in visited:
                continue
            visited.add(w)
            parents[w] = e
            slot = 0 if d.shape.endpoints(e)[0] == w else 1
            if need_fibrations and not d.arrows[e][slot].known_fibration:
                return False, {}
            stack.append(w)
    return True, parents


def _split_edge(d, e, middle_kind, mid_functors, new_vertices, new_edges, new_nodes,
                new_arrows, new_tails):
    """Replace edge e by v - m_e - w with the given middle node and functors."""
    a, b = d.shape.endpoints(e)
    mid = f"{e}~mid"
    new_vertices.append(mid)
    new_nodes[mid] = middle_kind
    for side, (v, f_v, f_m) in enumerate(
        ((a, d.arrows[e][0], mid_functors[0]), (b, d.arrows[e][1], mid_functors[1]))
    ):
        ne = f"{e}~{side}"
        new_edges.append((ne, (v, mid)))
        new_arrows[ne] = (f_v, f_m)
        new_tails[ne] = 0  # original vertex side is the tail


def pad(d: GraphicDiagram, edges) -> GraphicDiagram:
    """Insert identity cospans over the doubled subdivision of chosen edges."""
    edges = set(edges)
    unknown = edges - {e for e, _ in d.shape.edges}
    if unknown:
        raise ValueError(f"unknown edges {sorted(unknown)}")
    return _extend(d, pad_edges=edges, path_edges=set())


def path_extend(d: GraphicDiagram, skip=()) -> GraphicDiagram:
    """Insert path objects on every edge outside the (forest) skip set.

    Each skipped edge keeps its strict cospan; the skip set must form a forest
    whose cospans can be rooted with known-fibration child legs.
    """
    skip = set(skip)
    unknown = skip - {e for e, _ in d.shape.edges}
    if unknown:
        raise ValueError(f"unknown edges {sorted(unknown)}")
    _rooted_fibration_check(d, skip)
    path_edges = {e for e, _ in d.shape.edges} - skip
    return _extend(d, pad_edges=set(), path_edges=path_edges)


def _extend(d: GraphicDiagram, pad_edges: set, path_edges: set) -> GraphicDiagram:
    new_vertices = list(d.shape.vertices)
    new_edges, new_arrows, new_tails = [], {}, {}
    new_nodes = dict(d.nodes)
    for e, ab in d.shape.edges:
        if e in pad_edges:
            _split_edge(d, e, NodeDesc(BASE), (ID, ID), new_vertices, new_edges,
                        new_nodes, new_arrows, new_tails)
        elif e in path_edges:
            t = d.tails[e]
            pis = (Functor.of("pi1"), Functor.of("pi2")) if t == 0 else (
                Functor.of("pi2"), Functor.of("pi1"))
            _split_edge(d, e, NodeDesc(PATH), pis, new_vertices, new_edges,
                        new_nodes, new_arrows, new_tails)
        else:
            new_edges.append((e, ab))
            new_arrows[e] = d.arrows[e]
            new_tails[e] = d.tails[e]
    return GraphicDiagram(
        Graph.build(new_vertices, new_edges), new_tails, new_nodes, new_arrows, d.p
    )


def collapse_tree(d: GraphicDiagram, tree_edges) -> GraphicDiagram:
    """Contract an acyclic subgraph to one node carrying its strict limit."""
    tree_edges = set(tree_edges)
    _rooted_fibration_check(d, tree_edges)
    tree_vertices = set()
    for e in tree_edges:
        tree_vertices.update(d.shape.endpoints(e))
    sub_edges = [(e, d.shape.endpoints(e)) for e in sorted(tree_edges)]
    sub = GraphicDiagram(
        Graph.build(sorted(tree_vertices), sub_edges),
        {e: d.tails[e] for e in tree_edges},
        {v: d.nodes[v] for v in tree_vertices},
        {e: d.arrows[e] for e in tree_edges},
        d.p,
    )
    cname = "+".join(sorted(tree_vertices))
    new_vertices = [v for v in d.shape.vertices if v not in tree_vertices] + [cname]
    new_edges, new_arrows, new_tails = [], {}, {}
    for e, (a, b) in d.shape.edges:
        if e in tree_edges:
            continue
        fa, fb = d.arrows[e]
        if a in tree_vertices and b in tree_vertices:
            raise ValueError(f"edge {e} joins two tree vertices but is not in the tree")
        if a in tree_vertices:
            fa = Functor.of(("proj", a)).then(*fa.gens)
            a = cname
        if b in tree_vertices:
            fb = Functor.of(("proj", b)).then(*fb.gens)
            b = cname
        new_edges.append((e, (a, b)))
        new_arrows[e] = (fa, fb)
        new_tails[e] = d.tails[e]
    nodes = {v: d.nodes[v] for v in d.shape.vertices if v not in tree_vertices}
    nodes[cname] = NodeDesc(COLLAPSED, sub)
    return GraphicDiagram(Graph.build(new_vertices, new_edges), new_tails, nodes, new_arrows, d.p)
