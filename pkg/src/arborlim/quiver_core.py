"""Finite graphs, quivers, labelings, and the fibrancy-recognition combinatorics.

A graph here allows loops and multi-edges.  Its associated quiver has vertex
set V + E and one arrow v -> e per incidence (a loop contributes two parallel
arrows).  Labelings assign signs to arrows; acyclic ones correspond to Reedy
structures on the free category, and the adequate ones (negative fillings of
strict acyclic simple labelings) give the weakest useful fibrancy conditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

PLUS = 1
MINUS = -1


@dataclass(frozen=True)
class Graph:
    """Finite undirected graph; loops and parallel edges allowed."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, tuple[str, str]], ...]

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        ids = [e for e, _ in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge ids")
        for e, (a, b) in self.edges:
            if a not in vset or b not in vset:
                raise ValueError(f"edge {e} has unknown endpoint")

    @staticmethod
    def build(vertices, edges) -> "Graph":
        return Graph(tuple(vertices), tuple((e, (a, b)) for e, (a, b) in edges))

    def endpoints(self, edge_id: str) -> tuple[str, str]:
        for e, ab in self.edges:
            if e == edge_id:
                return ab
        raise KeyError(edge_id)

    def is_loop(self, edge_id: str) -> bool:
        a, b = self.endpoints(edge_id)
        return a == b

    def loops_at(self, v: str) -> list[str]:
        return [e for e, (a, b) in self.edges if a == b == v]

    def simplify(self) -> "Graph":
        """Remove all loops (multi-edges stay)."""
        return Graph(self.vertices, tuple((e, ab) for e, ab in self.edges if ab[0] != ab[1]))


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (id, source, target)

    def __post_init__(self):
        vset = set(self.vertices)
        ids = [a for a, _, _ in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate arrow ids")
        for a, s, t in self.arrows:
            if s not in vset or t not in vset:
                raise ValueError(f"arrow {a} has unknown endpoint")

    def arrow(self, arrow_id: str) -> tuple[str, str]:
        for a, s, t in self.arrows:
            if a == arrow_id:
                return s, t
        raise KeyError(arrow_id)

    def sources(self) -> list[str]:
        """Vertices with no incoming arrow; isolated vertices count as sources."""
        targets = {t for _, _, t in self.arrows}
        return [v for v in self.vertices if v not in targets]

    def sinks(self) -> list[str]:
        """Vertices with an incoming arrow and no outgoing one."""
        targets = {t for _, _, t in self.arrows}
        heads = {s for _, s, _ in self.arrows}
        return [v for v in self.vertices if v in targets and v not in heads]

    def is_diameter_one(self) -> bool:
        """Every arrow runs source-set -> sink-set; no composable pair."""
        srcs, snks = set(self.sources()), set(self.sinks())
        return all(s in srcs and t in snks for _, s, t in self.arrows)

    def arrows_into(self, v: str) -> list[str]:
        return [a for a, _, t in self.arrows if t == v]

    def parallel_arrow_ids(self) -> set[str]:
        count: dict[tuple[str, str], int] = {}
        for _, s, t in self.arrows:
            count[(s, t)] = count.get((s, t), 0) + 1
        return {a for a, s, t in self.arrows if count[(s, t)] > 1}


def associated_quiver(g: Graph) -> Quiver:
    """Q(G): vertex set V + E, one arrow v -> e per incidence of v in e."""
    vertices = tuple(g.vertices) + tuple(e for e, _ in g.edges)
    if len(set(vertices)) != len(vertices):
        raise ValueError("vertex and edge ids must not collide")
    arrows = []
    for e, (a, b) in g.edges:
        arrows.append((f"{e}:0", a, e))
        arrows.append((f"{e}:1", b, e))
    return Quiver(vertices, tuple(arrows))


def simplify(q: Quiver) -> Quiver:
    """Q^s: drop all parallel arrows and all non-isolating sinks."""
    parallel = q.parallel_arrow_ids()
    isolating = {t for a, s, t in q.arrows if a not in parallel}
    bad_sinks = {t for t in q.sinks() if t not in isolating}
    arrows = tuple(
        (a, s, t) for a, s, t in q.arrows if a not in parallel and t not in bad_sinks
    )
    vertices = tuple(v for v in q.vertices if v not in bad_sinks)
    return Quiver(vertices, arrows)


@dataclass(frozen=True)
class Labeling:
    """Sign assignment on arrow ids; domain is whatever key set it was built on."""

    signs: tuple[tuple[str, int], ...]

    @staticmethod
    def build(mapping) -> "Labeling":
        items = tuple(sorted(mapping.items()))
        if any(s not in (PLUS, MINUS) for _, s in items):
            raise ValueError("signs must be +1 or -1")
        return Labeling(items)

    def as_dict(self) -> dict[str, int]:
        return dict(self.signs)

    def __getitem__(self, arrow_id: str) -> int:
        return dict(self.signs)[arrow_id]

    def positives(self) -> set[str]:
        return {a for a, s in self.signs if s == PLUS}

    def leq(self, other: "Labeling") -> bool:
        """Pointwise order: sigma1 <= sigma2 iff sigma1's positives are contained."""
        return self.positives() <= other.positives()


@dataclass(frozen=True)
class Orientation:
    """Ordered endpoint pair per edge id."""

    dirs: tuple[tuple[str, tuple[str, str]], ...]

    @staticmethod
    def build(mapping) -> "Orientation":
        return Orientation(tuple(sorted((e, (a, b)) for e, (a, b) in mapping.items())))

    def as_dict(self) -> dict[str, tuple[str, str]]:
        return dict(self.dirs)


def all_labelings(q: Quiver, simple: bool = False) -> list[Labeling]:
    """Every sign assignment on Q_1 (or on the arrows of Q^s)."""
    arrow_ids = [a for a, _, _ in (simplify(q) if simple else q).arrows]
    out = []
    for signs in itertools.product((PLUS, MINUS), repeat=len(arrow_ids)):
        out.append(Labeling.build(dict(zip(arrow_ids, signs))))
    return out


def orientation_of_labeling(q: Quiver, lab: Labeling) -> list[tuple[str, str, str]]:
    """O(sigma): the directed multigraph on Q_0 reversing exactly the negative arrows."""
    signs = lab.as_dict()
    out = []
    for a, s, t in q.arrows:
        if a not in signs:
            raise ValueError(f"labeling not total: missing {a}")
        out.append((a, s, t) if signs[a] == PLUS else ((a, t, s)))
    return out


def _digraph_acyclic(vertices, darrows) -> bool:
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    indeg = {v: 0 for v in vertices}
    for _, s, t in darrows:
        adj[s].append(t)
        indeg[t] += 1
    queue = [v for v in vertices if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(list(vertices))


def is_acyclic(q: Quiver, lab: Labeling) -> bool:
    return _digraph_acyclic(q.vertices, orientation_of_labeling(q, lab))


def is_strict(q: Quiver, lab: Labeling) -> bool:
    """Exactly one positive arrow incident to each sink of Q^s."""
    qs = simplify(q)
    signs = lab.as_dict()
    return all(
        sum(1 for a in qs.arrows_into(t) if signs[a] == PLUS) == 1 for t in qs.sinks()
    )


def strict_acyclic_simple_labelings(q: Quiver) -> set[Labeling]:
    """All sigma_<= over linear orderings of the sources, deduplicated by value.

    For an arrow x of Q^s into the sink t, sigma_<=(x) = + exactly when the
    source of x is <=-minimal among the sources of arrows of Q^s into t.
    """
    if not q.is_diameter_one():
        raise ValueError("strict labelings are defined for diameter-1 quivers")
    qs = simplify(q)
    srcs = qs.sources()
    out: set[Labeling] = set()
    for order in itertools.permutations(srcs):
        pos = {v: i for i, v in enumerate(order)}
        signs = {}
        for a, s, t in qs.arrows:
            feet = [qs.arrow(b)[0] for b in qs.arrows_into(t)]
            signs[a] = PLUS if pos[s] == min(pos[f] for f in feet) else MINUS
        out.add(Labeling.build(signs))
    return out


def has_cofibrant_constants(q: Quiver, lab: Labeling) -> bool:
    """At most one positive arrow with each target (latching-category test)."""
    signs = lab.as_dict()
    for v in q.vertices:
        if sum(1 for a in q.arrows_into(v) if signs[a] == PLUS) > 1:
            return False
    return True


def negative_filling(q: Quiver, simple_lab: Labeling) -> Labeling:
    """Extend a labeling on Q^s to all of Q_1 by negative signs."""
    signs = simple_lab.as_dict()
    simple_ids = {a for a, _, _ in simplify(q).arrows}
    if set(signs) != simple_ids:
        raise ValueError("labeling is not defined exactly on the arrows of Q^s")
    total = dict(signs)
    for a, _, _ in q.arrows:
        if a not in total:
            total[a] = MINUS
    return Labeling.build(total)


def adequate_labelings(q: Quiver) -> set[Labeling]:
    """max(L^c): negative fillings of the strict acyclic simple labelings."""
    out = set()
    for lab in strict_acyclic_simple_labelings(q):
        filled = negative_filling(q, lab)
        assert is_acyclic(q, filled) and has_cofibrant_constants(q, filled)
        out.add(filled)
    return out


def in_labeling_poset_l(q: Quiver, lab: Labeling) -> bool:
    """Membership in L(Q): negative on parallels, <=1 positive into each sink."""
    signs = lab.as_dict()
    if any(signs[a] == PLUS for a in q.parallel_arrow_ids()):
        return False
    return has_cofibrant_constants(q, lab)


def brute_force_adequate(q: Quiver) -> set[Labeling]:
    """max(L^c) straight from the definition; exponential, test oracle only."""
    lc = [lab for lab in all_labelings(q) if in_labeling_poset_l(q, lab) and is_acyclic(q, lab)]
    return {
        lab
        for lab in lc
        if not any(lab is not other and lab.leq(other) for other in lc)
    }


def required_fibration_arrows(q: Quiver, lab: Labeling) -> dict[str, set[str]]:
    """Per source s, the arrow set Q(s) n filled(sigma)^{-1}(-) of the matching map."""
    filled = lab.as_dict()
    out: dict[str, set[str]] = {}
    for v in q.sources():
        out[v] = {a for a, s, _ in q.arrows if s == v and filled[a] == MINUS}
    return out


def fibration_requirements(g: Graph, orient: Orientation) -> dict[str, set[str]]:
    """A_o(v) per vertex: arrows that the product fibrancy map must cover.

    The orientation must be an acyclic orientation of the loop-free part G^s;
    loops at v always contribute both of their arrows.
    """
    gs = g.simplify()
    dirs = orient.as_dict()
    gs_ids = {e for e, _ in gs.edges}
    if set(dirs) != gs_ids:
        raise ValueError("orientation must cover exactly the non-loop edges")
    for e, (a, b) in dirs.items():
        if set((a, b)) != set(g.endpoints(e)):
            raise ValueError(f"orientation of {e} does not permute its endpoints")
    darrows = [(e, a, b) for e, (a, b) in dirs.items()]
    if not _digraph_acyclic(g.vertices, darrows):
        raise ValueError("orientation has a directed cycle")
    out: dict[str, set[str]] = {v: set() for v in g.vertices}
    for e, (a, b) in dirs.items():
        tail, _ = g.endpoints(e)
        # arrow ids in Q(G) follow the endpoint order of the edge record
        out[b].add(f"{e}:0" if tail == b else f"{e}:1")
    for e, (a, b) in g.edges:
        if a == b:
            out[a].update({f"{e}:0", f"{e}:1"})
    return out


def underlying_graph(q: Quiver) -> Graph:
    """U(Q): forget arrow directions; arrows become edges named by their ids."""
    return Graph(tuple(q.vertices), tuple((a, (s, t)) for a, s, t in q.arrows))


def subdivision(q: Quiver) -> Quiver:
    """Q(U(Q)): each arrow s -> t becomes s -> a <- t with middle vertex a."""
    return associated_quiver(underlying_graph(q))
