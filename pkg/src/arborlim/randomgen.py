"""Seeded random complexes, maps, and arrow objects for verification runs."""

from __future__ import annotations

import numpy as np

from . import _modp as lin
from .chain_algebra import (
    ArrowMorphism,
    ArrowObject,
    Complex,
    GradedMap,
    hom_differential,
    hom_space_basis,
    lift_cohomology_map,
)


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_matrix(rng, rows: int, cols: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(rows, cols), dtype=np.int64)


def random_invertible(rng, n: int, p: int) -> np.ndarray:
    if n == 0:
        return lin.zeros(0, 0)
    while True:
        m = random_matrix(rng, n, n, p)
        if lin.is_invertible(m, p):
            return m


def random_complex(rng, p: int, max_dim: int = 2) -> Complex:
    """Random complex with per-parity dimensions <= max_dim."""
    n0 = int(rng.integers(0, max_dim + 1))
    n1 = int(rng.integers(0, max_dim + 1))
    d0 = random_matrix(rng, n1, n0, p)
    # d1 ranges over the solution space of d1 d0 = 0 = d0 d1
    rows = []
    cells = [(a, b) for a in range(n0) for b in range(n1)]
    for a, b in cells:
        e = lin.zeros(n0, n1)
        e[a, b] = 1
        rows.append(np.concatenate([(e @ d0).reshape(-1), (d0 @ e).reshape(-1)]))
    if cells:
        a_mat = np.stack(rows, axis=1) % p
        null = lin.nullspace(a_mat, p)
        coeff = random_matrix(rng, null.shape[1], 1, p) if null.shape[1] else lin.zeros(0, 1)
        d1 = ((null @ coeff).reshape(n0, n1)) % p if null.shape[1] else lin.zeros(n0, n1)
    else:
        d1 = lin.zeros(n0, n1)
    return Complex((n0, n1), (d0 % p, d1), p)


def random_graded_map(rng, src: Complex, tgt: Complex, degree: int) -> GradedMap:
    k = degree % 2
    return GradedMap(
        src,
        tgt,
        degree,
        (
            random_matrix(rng, tgt.dims[k], src.dims[0], src.p),
            random_matrix(rng, tgt.dims[(1 + k) % 2], src.dims[1], src.p),
        ),
    )


def random_closed_map(rng, src: Complex, tgt: Complex, degree: int) -> GradedMap:
    basis, to_vec, from_vec = hom_space_basis(src, tgt, degree)
    if not basis:
        return GradedMap.zero(src, tgt, degree)
    cols = [to_vec(hom_differential(b)) for b in basis]
    null = lin.nullspace(np.stack(cols, axis=1) % src.p, src.p)
    coeff = random_matrix(rng, null.shape[1], 1, src.p) if null.shape[1] else lin.zeros(0, 1)
    vec = (null @ coeff).reshape(-1) % src.p if null.shape[1] else np.zeros(len(basis), dtype=np.int64)
    return from_vec(vec)


def random_exact_map(rng, src: Complex, tgt: Complex, degree: int) -> GradedMap:
    return hom_differential(random_graded_map(rng, src, tgt, degree - 1))


def random_homotopy_equivalence(rng, src: Complex, tgt: Complex) -> GradedMap | None:
    """A random h.e. src -> tgt, or None if the cohomologies do not match."""
    hs, ht = src.cohomology_dims(), tgt.cohomology_dims()
    if hs != ht:
        return None
    phi = tuple(random_invertible(rng, hs[i], src.p) for i in (0, 1))
    f = lift_cohomology_map(src, tgt, 0, phi)
    return f.add(random_exact_map(rng, src, tgt, 0))


def random_arrow_object(rng, p: int, max_dim: int = 2) -> ArrowObject:
    x1 = random_complex(rng, p, max_dim)
    x2 = random_complex(rng, p, max_dim)
    return ArrowObject(x1, x2, random_closed_map(rng, x1, x2, 0))


def random_arrow_morphism(rng, src: ArrowObject, tgt: ArrowObject, degree: int) -> ArrowMorphism:
    return ArrowMorphism(
        src,
        tgt,
        random_graded_map(rng, src.x1, tgt.x1, degree),
        random_graded_map(rng, src.x1, tgt.x2, degree - 1),
        random_graded_map(rng, src.x2, tgt.x2, degree),
    )


def random_node_object(rng, desc, p: int, max_dim: int = 2):
    from .diagram import ARROW, BASE, PATH, ZERO

    if desc.kind == ZERO:
        return Complex.zero(p)
    if desc.kind == BASE:
        return random_complex(rng, p, max_dim)
    if desc.kind == ARROW:
        return random_arrow_object(rng, p, max_dim)
    if desc.kind == PATH:
        while True:
            x = random_complex(rng, p, max_dim)
            f = random_homotopy_equivalence(rng, x, x)
            if f is not None:
                return ArrowObject.build(f)
    raise ValueError(f"no random generator for node kind {desc.kind}")


def random_holim_object(rng, d, max_dim: int = 2):
    """Random object with closed (not necessarily invertible) edge maps.

    Suitable for exercising the dg-category laws, which only use closedness
    of the edge data.
    """
    from .holim import HolimObject, edge_images

    vobjs = {v: random_node_object(rng, d.nodes[v], d.p, max_dim) for v in d.shape.vertices}
    m = HolimObject(d, vobjs, {})
    emaps = {}
    for e, _ in d.shape.edges:
        src, tgt = edge_images(m, e)
        emaps[e] = random_closed_map(rng, src, tgt, 0)
    return HolimObject(d, vobjs, emaps)


def random_node_morphism(rng, desc, src, tgt, degree: int):
    from .diagram import ARROW, BASE, PATH, ZERO

    if desc.kind == ZERO:
        return GradedMap.zero(src, tgt, degree)
    if desc.kind == BASE:
        return random_graded_map(rng, src, tgt, degree)
    if desc.kind in (ARROW, PATH):
        return random_arrow_morphism(rng, src, tgt, degree)
    raise ValueError(f"no random generator for node kind {desc.kind}")


def random_holim_morphism(rng, m, n, degree: int):
    from .holim import HolimMorphism, edge_images

    d = m.diagram
    vmaps = {
        v: random_node_morphism(rng, d.nodes[v], m.vertex_objects[v], n.vertex_objects[v], degree)
        for v in d.shape.vertices
    }
    emaps = {}
    for e, _ in d.shape.edges:
        src = edge_images(m, e)[0]
        tgt = edge_images(n, e)[1]
        emaps[e] = random_graded_map(rng, src, tgt, degree - 1)
    return HolimMorphism(m, n, degree, vmaps, emaps)


def random_graph_shape(rng, max_edges: int = 6):
    """Random small graph (loops and multi-edges allowed) with node kinds."""
    from .quiver_core import Graph

    n_vert = int(rng.integers(1, 5))
    vertices = [f"v{i}" for i in range(n_vert)]
    n_edges = int(rng.integers(1, max_edges + 1))
    edges = []
    for i in range(n_edges):
        a = vertices[int(rng.integers(0, n_vert))]
        b = vertices[int(rng.integers(0, n_vert))]
        edges.append((f"e{i}", (a, b)))
    return Graph.build(vertices, edges)


def random_graphic_diagram(rng, p: int, max_edges: int = 6):
    """Random diagram: arrow/base/path nodes, rho/cone/shift/id functor legs."""
    from .diagram import ARROW, BASE, PATH, Functor, GraphicDiagram, NodeDesc

    g = random_graph_shape(rng, max_edges)
    kinds = {}
    for v in g.vertices:
        kinds[v] = [BASE, ARROW, PATH][int(rng.integers(0, 3))]
    nodes = {v: NodeDesc(k) for v, k in kinds.items()}
    arrows = {}
    tails = {}
    for e, (a, b) in g.edges:
        legs = []
        for v in (a, b):
            if kinds[v] == BASE:
                opts = [Functor.of("id"), Functor.of(("shift", 1))]
            elif kinds[v] == ARROW:
                opts = [
                    Functor.of("rho1"),
                    Functor.of("rho2"),
                    Functor.of("cone"),
                    Functor.of("cone", ("shift", 1)),
                ]
            else:
                opts = [Functor.of("pi1"), Functor.of("pi2")]
            legs.append(opts[int(rng.integers(0, len(opts)))])
        arrows[e] = (legs[0], legs[1])
        tails[e] = int(rng.integers(0, 2))
    return GraphicDiagram(g, tails, nodes, arrows, p)
