"""Z/2-graded chain complexes over F_p and the arrow dg-category.

Sign conventions, fixed once for the whole package:

* hom differential      df = d.f - (-1)^{|f|} f.d
* shift                 X[1] swaps parities and negates the differential;
                        on maps f[1] = (-1)^{|f|} f; [1] is a strict
                        involution, so [n] = [-n] = [n mod 2]
* cone of x: X -> Y     C(x) = X[1] (+) Y with d(xi, eta) = (-d xi, x xi + d eta);
                        on a morphism (f1, h, f2) of degree k it acts by the
                        block matrix [[(-1)^k f1, 0], [h, f2]]
* arrow category        hom^k(X, Y) = hom(X1,Y1)^k (+) hom(X1,Y2)^{k-1} (+) hom(X2,Y2)^k
                        with d(f1,h,f2) = (df1, dh + (-1)^k (y f1 - f2 x), df2)
                        and (g1,j,g2)(f1,h,f2) = (g1 f1, g2 h + (-1)^k j f1, g2 f2),
                        the sign taken from the degree k of the right factor.

Homotopy-theoretic decisions use that the coefficients form a field: a closed
degree-0 map is a homotopy equivalence iff it is a quasi-isomorphism, and the
homotopy class of a closed map is exactly its pair of induced maps on
cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _modp as lin


@dataclass(frozen=True, eq=False)
class Complex:
    """A Z/2-graded complex: parity-i component of dimension dims[i]."""

    dims: tuple[int, int]
    d: tuple[np.ndarray, np.ndarray]  # d[i]: parity i -> parity i+1
    p: int

    def __post_init__(self):
        if not lin.is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        n0, n1 = self.dims
        if self.d[0].shape != (n1, n0) or self.d[1].shape != (n0, n1):
            raise ValueError("differential shapes do not match dims")
        for i in (0, 1):
            comp = lin.matmul(self.d[(i + 1) % 2], self.d[i], self.p)
            if comp.size and comp.any():
                raise ValueError("d^2 != 0")

    @staticmethod
    def build(d0, d1, p: int) -> "Complex":
        d0m, d1m = lin.modmat(d0, p), lin.modmat(d1, p)
        return Complex((d0m.shape[1], d0m.shape[0]), (d0m, d1m), p)

    @staticmethod
    def zero_diff(n0: int, n1: int, p: int) -> "Complex":
        return Complex((n0, n1), (lin.zeros(n1, n0), lin.zeros(n0, n1)), p)

    @staticmethod
    def zero(p: int) -> "Complex":
        return Complex.zero_diff(0, 0, p)

    def is_zero(self) -> bool:
        return self.dims == (0, 0)

    def equal(self, other: "Complex") -> bool:
        return (
            self.p == other.p
            and self.dims == other.dims
            and np.array_equal(self.d[0], other.d[0])
            and np.array_equal(self.d[1], other.d[1])
        )

    @cached_property
    def cohomology(self) -> "Cohomology":
        # content-addressed: cones and shifts are rebuilt constantly during
        # enumeration, so equal complexes must share the computation
        key = (self.p, self.dims, self.d[0].tobytes(), self.d[1].tobytes())
        hit = _COHOMOLOGY_CACHE.get(key)
        if hit is None:
            hit = Cohomology(self)
            _COHOMOLOGY_CACHE[key] = hit
        return hit

    def cohomology_dims(self) -> tuple[int, int]:
        return self.cohomology.dims

    def __repr__(self):
        return f"Complex(dims={self.dims}, p={self.p})"


_COHOMOLOGY_CACHE: dict = {}


@dataclass(frozen=True, eq=False)
class GradedMap:
    """Degree-k map of complexes; mats[i]: parity i of src -> parity i+k of tgt."""

    src: Complex
    tgt: Complex
    degree: int
    mats: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        if self.src.p != self.tgt.p:
            raise ValueError("mixed primes")
        k = self.degree % 2
        for i in (0, 1):
            want = (self.tgt.dims[(i + k) % 2], self.src.dims[i])
            if self.mats[i].shape != want:
                raise ValueError(f"component {i} has shape {self.mats[i].shape}, want {want}")

    @property
    def p(self) -> int:
        return self.src.p

    @staticmethod
    def build(src: Complex, tgt: Complex, degree: int, m0, m1) -> "GradedMap":
        return GradedMap(src, tgt, degree, (lin.modmat(m0, src.p), lin.modmat(m1, src.p)))

    @staticmethod
    def zero(src: Complex, tgt: Complex, degree: int = 0) -> "GradedMap":
        k = degree % 2
        return GradedMap(
            src,
            tgt,
            degree,
            (
                lin.zeros(tgt.dims[k % 2], src.dims[0]),
                lin.zeros(tgt.dims[(1 + k) % 2], src.dims[1]),
            ),
        )

    @staticmethod
    def identity(x: Complex) -> "GradedMap":
        return GradedMap(x, x, 0, (lin.eye(x.dims[0]), lin.eye(x.dims[1])))

    def add(self, other: "GradedMap") -> "GradedMap":
        self._same_shape(other)
        return GradedMap(
            self.src,
            self.tgt,
            self.degree,
            ((self.mats[0] + other.mats[0]) % self.p, (self.mats[1] + other.mats[1]) % self.p),
        )

    def sub(self, other: "GradedMap") -> "GradedMap":
        return self.add(other.scale(-1))

    def scale(self, c: int) -> "GradedMap":
        return GradedMap(
            self.src, self.tgt, self.degree, ((c * self.mats[0]) % self.p, (c * self.mats[1]) % self.p)
        )

    def _same_shape(self, other: "GradedMap"):
        if (
            self.src.dims != other.src.dims
            or self.tgt.dims != other.tgt.dims
            or self.degree % 2 != other.degree % 2
        ):
            raise ValueError("graded maps are not comparable")

    def is_zero(self) -> bool:
        return not (self.mats[0].any() or self.mats[1].any())

    def equal(self, other: "GradedMap") -> bool:
        self._same_shape(other)
        return np.array_equal(self.mats[0], other.mats[0]) and np.array_equal(
            self.mats[1], other.mats[1]
        )

    def __repr__(self):
        return f"GradedMap(deg={self.degree % 2}, {self.src.dims}->{self.tgt.dims})"


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f."""
    if f.tgt.dims != g.src.dims or f.p != g.p:
        raise ValueError("composition shape mismatch")
    kf = f.degree % 2
    mats = tuple(
        lin.matmul(g.mats[(i + kf) % 2], f.mats[i], f.p) for i in (0, 1)
    )
    return GradedMap(f.src, g.tgt, f.degree + g.degree, mats)


def hom_differential(f: GradedMap) -> GradedMap:
    """df = d.f - (-1)^{|f|} f.d."""
    k = f.degree % 2
    sign = -1 if k else 1
    mats = []
    for i in (0, 1):
        a = lin.matmul(f.tgt.d[(i + k) % 2], f.mats[i], f.p)
        b = lin.matmul(f.mats[(i + 1) % 2], f.src.d[i], f.p)
        mats.append((a - sign * b) % f.p)
    return GradedMap(f.src, f.tgt, f.degree + 1, tuple(mats))


def is_closed(f: GradedMap) -> bool:
    return hom_differential(f).is_zero()


class Cohomology:
    """Cycle/boundary bookkeeping for one complex.

    Per parity i this stores representative cycles ``reps[i]`` (columns in the
    ambient component) and extractor rows ``coords[i]`` with
    coords @ reps = id and coords vanishing on boundaries, so the induced map
    of a closed f on cohomology is coords_tgt @ f @ reps_src.
    """

    def __init__(self, x: Complex):
        self.complex = x
        p = x.p
        reps, coords, dims = [], [], []
        for i in (0, 1):
            n = x.dims[i]
            cycles = lin.nullspace(x.d[i], p) if n else lin.zeros(0, 0)
            bnd = x.d[(i + 1) % 2]
            bbasis, _ = lin.column_space_projector(bnd, p)
            if n == 0:
                reps.append(lin.zeros(0, 0))
                coords.append(lin.zeros(0, 0))
                dims.append(0)
                continue
            stacked = np.concatenate([bbasis, cycles], axis=1) if bbasis.size or cycles.size else lin.zeros(n, 0)
            _, pivots = lin.rref(stacked, p)
            nb = bbasis.shape[1]
            rep_cols = [j - nb for j in pivots if j >= nb]
            rep = cycles[:, rep_cols] if rep_cols else lin.zeros(n, 0)
            # complete [boundaries | reps] to a basis of the whole component
            full = np.concatenate([bbasis, rep, lin.eye(n)], axis=1)
            _, piv2 = lin.rref(full, p)
            chosen = full[:, piv2]
            inv = lin.inv(chosen, p)
            h = rep.shape[1]
            coords.append(inv[nb : nb + h, :])
            reps.append(rep)
            dims.append(h)
        self.reps = tuple(reps)
        self.coords = tuple(coords)
        self.dims = (dims[0], dims[1])


def induced_map(f: GradedMap) -> tuple[np.ndarray, np.ndarray]:
    """Cohomology components of a closed map: parity i of src -> parity i+k of tgt."""
    if not is_closed(f):
        raise ValueError("induced map needs a closed morphism")
    k = f.degree % 2
    hs, ht = f.src.cohomology, f.tgt.cohomology
    out = []
    for i in (0, 1):
        m = lin.matmul(
            ht.coords[(i + k) % 2], lin.matmul(f.mats[i], hs.reps[i], f.p), f.p
        )
        out.append(m)
    return tuple(out)


def lift_cohomology_map(
    src: Complex, tgt: Complex, degree: int, phis: tuple[np.ndarray, np.ndarray]
) -> GradedMap:
    """A closed map inducing the given cohomology components."""
    k = degree % 2
    hs, ht = src.cohomology, tgt.cohomology
    mats = []
    for i in (0, 1):
        phi = lin.modmat(phis[i], src.p)
        if phi.shape != (ht.dims[(i + k) % 2], hs.dims[i]):
            raise ValueError("cohomology component has wrong shape")
        mats.append(lin.matmul(ht.reps[(i + k) % 2], lin.matmul(phi, hs.coords[i], src.p), src.p))
    return GradedMap(src, tgt, degree, tuple(mats))


def is_exact(f: GradedMap) -> bool:
    """Over a field a closed map is exact iff it induces zero on cohomology."""
    return all(not m.any() for m in induced_map(f))


def homotopic(f: GradedMap, g: GradedMap) -> bool:
    return is_exact(f.sub(g))


def exactness_witness(f: GradedMap) -> GradedMap | None:
    """Some h with dh = f, or None; assembled by brute basis enumeration."""
    basis, to_vec, from_vec = hom_space_basis(f.src, f.tgt, f.degree - 1)
    cols = [to_vec(hom_differential(b)) for b in basis]
    if not cols:
        return GradedMap.zero(f.src, f.tgt, f.degree - 1) if f.is_zero() else None
    a = np.stack(cols, axis=1)
    target_basis, target_to_vec, _ = hom_space_basis(f.src, f.tgt, f.degree)
    sol = lin.solve(a, target_to_vec(f), f.p)
    if sol is None:
        return None
    h = GradedMap.zero(f.src, f.tgt, f.degree - 1)
    for c, b in zip(sol, basis):
        if c:
            h = h.add(b.scale(int(c)))
    return h


def hom_space_basis(src: Complex, tgt: Complex, degree: int):
    """Elementary-matrix basis of hom^degree(src, tgt) plus vec/unvec helpers."""
    k = degree % 2
    shapes = [(tgt.dims[(i + k) % 2], src.dims[i]) for i in (0, 1)]
    sizes = [r * c for r, c in shapes]
    basis = []
    for i in (0, 1):
        r, c = shapes[i]
        for a in range(r):
            for b in range(c):
                mats = [lin.zeros(*shapes[0]), lin.zeros(*shapes[1])]
                mats[i][a, b] = 1
                basis.append(GradedMap(src, tgt, degree, (mats[0], mats[1])))

    def to_vec(f: GradedMap) -> np.ndarray:
        return np.concatenate([f.mats[0].reshape(-1), f.mats[1].reshape(-1)])

    def from_vec(v: np.ndarray) -> GradedMap:
        m0 = v[: sizes[0]].reshape(shapes[0]) % src.p
        m1 = v[sizes[0] :].reshape(shapes[1]) % src.p
        return GradedMap(src, tgt, degree, (m0, m1))

    return basis, to_vec, from_vec


def is_quasi_iso(f: GradedMap) -> bool:
    phi = induced_map(f)
    return all(lin.is_invertible(m, f.p) for m in phi)


def is_homotopy_equivalence(f: GradedMap) -> bool:
    """Closed degree-0 map inducing isomorphisms on both cohomologies."""
    if f.degree % 2 != 0:
        return False
    if not is_closed(f):
        raise ValueError("homotopy-equivalence test needs a closed map")
    return is_quasi_iso(f)


def homotopy_inverse(f: GradedMap) -> GradedMap:
    """A closed g with g f ~ id and f g ~ id (field coefficients)."""
    if not is_homotopy_equivalence(f):
        raise ValueError("map is not a homotopy equivalence")
    phi = induced_map(f)
    inv = (lin.inv(phi[0], f.p), lin.inv(phi[1], f.p))
    return lift_cohomology_map(f.tgt, f.src, 0, inv)


def cohomology_dims(x: Complex) -> tuple[int, int]:
    return x.cohomology_dims()


# ---------------------------------------------------------------------------
# shifts and direct sums


def shift(x: Complex, n: int) -> Complex:
    if n % 2 == 0:
        return x
    return Complex(
        (x.dims[1], x.dims[0]), ((-x.d[1]) % x.p, (-x.d[0]) % x.p), x.p
    )


def shift_map(f: GradedMap, n: int) -> GradedMap:
    """[n] on morphisms: for odd n, swap components and scale by (-1)^{|f|}."""
    if n % 2 == 0:
        return f
    sign = -1 if f.degree % 2 else 1
    return GradedMap(
        shift(f.src, 1),
        shift(f.tgt, 1),
        f.degree,
        ((sign * f.mats[1]) % f.p, (sign * f.mats[0]) % f.p),
    )


def dsum(x: Complex, y: Complex):
    """Direct sum with the four canonical maps: (s, inc_x, inc_y, pr_x, pr_y)."""
    if x.p != y.p:
        raise ValueError("mixed primes")
    p = x.p
    d = []
    for i in (0, 1):
        top = np.concatenate([x.d[i], lin.zeros(x.dims[(i + 1) % 2], y.dims[i])], axis=1)
        bot = np.concatenate([lin.zeros(y.dims[(i + 1) % 2], x.dims[i]), y.d[i]], axis=1)
        d.append(np.concatenate([top, bot], axis=0) % p)
    s = Complex((x.dims[0] + y.dims[0], x.dims[1] + y.dims[1]), (d[0], d[1]), p)

    def block(rows_from, total, offset):
        m = lin.zeros(total, rows_from)
        m[offset : offset + rows_from] = lin.eye(rows_from)
        return m

    inc_x = GradedMap(
        x, s, 0, tuple(block(x.dims[i], s.dims[i], 0) for i in (0, 1))
    )
    inc_y = GradedMap(
        y, s, 0, tuple(block(y.dims[i], s.dims[i], x.dims[i]) for i in (0, 1))
    )
    pr_x = GradedMap(s, x, 0, tuple(inc_x.mats[i].T.copy() for i in (0, 1)))
    pr_y = GradedMap(s, y, 0, tuple(inc_y.mats[i].T.copy() for i in (0, 1)))
    return s, inc_x, inc_y, pr_x, pr_y


# ---------------------------------------------------------------------------
# the arrow category A^{->}


@dataclass(frozen=True, eq=False)
class ArrowObject:
    """An object X1 -> X2 of the arrow category; the map is closed of degree 0."""

    x1: Complex
    x2: Complex
    x: GradedMap

    def __post_init__(self):
        if self.x.src is not self.x1 and self.x.src.dims != self.x1.dims:
            raise ValueError("arrow source mismatch")
        if self.x.tgt is not self.x2 and self.x.tgt.dims != self.x2.dims:
            raise ValueError("arrow target mismatch")
        if self.x.degree % 2 != 0 or not is_closed(self.x):
            raise ValueError("structure map must be closed of degree 0")

    @property
    def p(self) -> int:
        return self.x1.p

    @staticmethod
    def build(x: GradedMap) -> "ArrowObject":
        return ArrowObject(x.src, x.tgt, x)

    def __repr__(self):
        return f"ArrowObject({self.x1.dims}->{self.x2.dims}, p={self.p})"


@dataclass(frozen=True, eq=False)
class ArrowMorphism:
    """(f1, h, f2): f1, f2 of degree k, h of degree k-1."""

    src: ArrowObject
    tgt: ArrowObject
    f1: GradedMap
    h: GradedMap
    f2: GradedMap

    def __post_init__(self):
        k = self.f1.degree % 2
        if self.f2.degree % 2 != k or self.h.degree % 2 != (k - 1) % 2:
            raise ValueError("degree mismatch in arrow morphism")

    @property
    def degree(self) -> int:
        return self.f1.degree

    @property
    def p(self) -> int:
        return self.src.p

    @staticmethod
    def zero(src: ArrowObject, tgt: ArrowObject, degree: int = 0) -> "ArrowMorphism":
        return ArrowMorphism(
            src,
            tgt,
            GradedMap.zero(src.x1, tgt.x1, degree),
            GradedMap.zero(src.x1, tgt.x2, degree - 1),
            GradedMap.zero(src.x2, tgt.x2, degree),
        )

    @staticmethod
    def identity(a: ArrowObject) -> "ArrowMorphism":
        return ArrowMorphism(
            a, a, GradedMap.identity(a.x1), GradedMap.zero(a.x1, a.x2, -1), GradedMap.identity(a.x2)
        )

    def add(self, other: "ArrowMorphism") -> "ArrowMorphism":
        return ArrowMorphism(
            self.src, self.tgt, self.f1.add(other.f1), self.h.add(other.h), self.f2.add(other.f2)
        )

    def sub(self, other: "ArrowMorphism") -> "ArrowMorphism":
        return ArrowMorphism(
            self.src, self.tgt, self.f1.sub(other.f1), self.h.sub(other.h), self.f2.sub(other.f2)
        )

    def scale(self, c: int) -> "ArrowMorphism":
        return ArrowMorphism(self.src, self.tgt, self.f1.scale(c), self.h.scale(c), self.f2.scale(c))

    def is_zero(self) -> bool:
        return self.f1.is_zero() and self.h.is_zero() and self.f2.is_zero()


def arrow_compose(nu: ArrowMorphism, mu: ArrowMorphism) -> ArrowMorphism:
    """nu after mu; the sign is (-1)^{deg mu}."""
    k = mu.degree % 2
    sign = -1 if k else 1
    mid = compose(nu.f2, mu.h).add(compose(nu.h, mu.f1).scale(sign))
    return ArrowMorphism(mu.src, nu.tgt, compose(nu.f1, mu.f1), mid, compose(nu.f2, mu.f2))


def arrow_differential(mu: ArrowMorphism) -> ArrowMorphism:
    k = mu.degree % 2
    sign = -1 if k else 1
    x, y = mu.src, mu.tgt
    square = compose(y.x, mu.f1).sub(compose(mu.f2, x.x))
    return ArrowMorphism(
        x,
        y,
        hom_differential(mu.f1),
        hom_differential(mu.h).add(square.scale(sign)),
        hom_differential(mu.f2),
    )


def arrow_is_closed(mu: ArrowMorphism) -> bool:
    return arrow_differential(mu).is_zero()


def arrow_is_equivalence(mu: ArrowMorphism) -> bool:
    """Closed degree-0 triple with both components homotopy equivalences."""
    if mu.degree % 2 != 0 or not arrow_is_closed(mu):
        raise ValueError("equivalence test needs a closed degree-0 morphism")
    return is_homotopy_equivalence(mu.f1) and is_homotopy_equivalence(mu.f2)


def arrow_shift(a: ArrowObject, n: int) -> ArrowObject:
    if n % 2 == 0:
        return a
    return ArrowObject(shift(a.x1, 1), shift(a.x2, 1), shift_map(a.x, 1))


def arrow_morphism_shift(mu: ArrowMorphism, n: int) -> ArrowMorphism:
    if n % 2 == 0:
        return mu
    return ArrowMorphism(
        arrow_shift(mu.src, 1),
        arrow_shift(mu.tgt, 1),
        shift_map(mu.f1, 1),
        shift_map(mu.h, 1),
        shift_map(mu.f2, 1),
    )


# ---------------------------------------------------------------------------
# cones


def cone(a: ArrowObject) -> Complex:
    """C(x) = X1[1] (+) X2."""
    x1, x2, x = a.x1, a.x2, a.x
    p = a.p
    dims = (x1.dims[1] + x2.dims[0], x1.dims[0] + x2.dims[1])
    d = []
    for i in (0, 1):
        j = (i + 1) % 2
        top = np.concatenate(
            [(-x1.d[j]) % p, lin.zeros(x1.dims[i], x2.dims[i])], axis=1
        )
        bot = np.concatenate([x.mats[j], x2.d[i]], axis=1)
        d.append(np.concatenate([top, bot], axis=0) % p)
    return Complex(dims, (d[0], d[1]), p)


def cone_in(a: ArrowObject) -> GradedMap:
    """The canonical X2 -> C(x)."""
    c = cone(a)
    mats = []
    for i in (0, 1):
        m = lin.zeros(c.dims[i], a.x2.dims[i])
        m[a.x1.dims[(i + 1) % 2] :, :] = lin.eye(a.x2.dims[i])
        mats.append(m)
    return GradedMap(a.x2, c, 0, tuple(mats))


def cone_out(a: ArrowObject) -> GradedMap:
    """The canonical C(x) -> X1[1]."""
    c = cone(a)
    s1 = shift(a.x1, 1)
    mats = []
    for i in (0, 1):
        m = lin.zeros(s1.dims[i], c.dims[i])
        m[:, : a.x1.dims[(i + 1) % 2]] = lin.eye(a.x1.dims[(i + 1) % 2])
        mats.append(m)
    return GradedMap(c, s1, 0, tuple(mats))


def cone_map(mu: ArrowMorphism) -> GradedMap:
    """Functorial action of the cone on a morphism of any degree."""
    k = mu.degree % 2
    sign = -1 if k else 1
    csrc, ctgt = cone(mu.src), cone(mu.tgt)
    mats = []
    for i in (0, 1):
        j = (i + 1) % 2
        jj = (i + k + 1) % 2
        top = np.concatenate(
            [(sign * mu.f1.mats[j]) % mu.p, lin.zeros(mu.tgt.x1.dims[jj], mu.src.x2.dims[i])],
            axis=1,
        )
        bot = np.concatenate([mu.h.mats[j], mu.f2.mats[i]], axis=1)
        mats.append(np.concatenate([top, bot], axis=0) % mu.p)
    return GradedMap(csrc, ctgt, mu.degree, tuple(mats))


# ---------------------------------------------------------------------------
# the rotations T and T' and their cone comparisons


def rotation_t(a: ArrowObject) -> ArrowObject:
    """T(X1 -> X2) = (X2 -> C(x))."""
    return ArrowObject.build(cone_in(a))


def rotation_t_on_morphism(mu: ArrowMorphism) -> ArrowMorphism:
    ts, tt = rotation_t(mu.src), rotation_t(mu.tgt)
    return ArrowMorphism(
        ts, tt, mu.f2, GradedMap.zero(mu.src.x2, tt.x2, mu.degree - 1), cone_map(mu)
    )


def rotation_tprime(a: ArrowObject) -> ArrowObject:
    """T'(X1 -> X2) = (C(x)[-1] -> X1)."""
    c1 = shift(cone(a), 1)
    mats = []
    for i in (0, 1):
        m = lin.zeros(a.x1.dims[i], c1.dims[i])
        m[:, : a.x1.dims[i]] = lin.eye(a.x1.dims[i])
        mats.append(m)
    pr = GradedMap(c1, a.x1, 0, tuple(mats))
    return ArrowObject.build(pr)


def rotation_tprime_on_morphism(mu: ArrowMorphism) -> ArrowMorphism:
    ts, tt = rotation_tprime(mu.src), rotation_tprime(mu.tgt)
    return ArrowMorphism(
        ts, tt, shift_map(cone_map(mu), 1), GradedMap.zero(ts.x1, tt.x2, mu.degree - 1), mu.f1
    )


def cone_t_comparison(a: ArrowObject) -> tuple[GradedMap, GradedMap]:
    """Natural homotopy equivalence C(T(a)) ~ X1[1]: returns (phi, psi).

    phi projects C(T(a)) = X2[1] (+) X1[1] (+) X2 to the middle block and
    psi(xi) = (-x xi, xi, 0) is its section; phi psi = id.
    """
    ta = rotation_t(a)
    c = cone(ta)
    s1 = shift(a.x1, 1)
    phi_mats, psi_mats = [], []
    n2 = a.x2.dims
    n1 = a.x1.dims
    for i in (0, 1):
        j = (i + 1) % 2
        m = lin.zeros(s1.dims[i], c.dims[i])
        m[:, n2[j] : n2[j] + n1[j]] = lin.eye(n1[j])
        phi_mats.append(m)
        w = lin.zeros(c.dims[i], s1.dims[i])
        w[: n2[j], :] = (-a.x.mats[j]) % a.p
        w[n2[j] : n2[j] + n1[j], :] = lin.eye(n1[j])
        psi_mats.append(w)
    phi = GradedMap(c, s1, 0, tuple(phi_mats))
    psi = GradedMap(s1, c, 0, tuple(psi_mats))
    return phi, psi


def cone_tprime_comparison(a: ArrowObject) -> tuple[GradedMap, GradedMap]:
    """Natural homotopy equivalence C(T'(a)) ~ X2: returns (tau, sigma).

    In block coordinates C(T'(a)) = X1[1] (+) X2 (+) X1 the projection is
    tau(xi, eta, w) = eta - x w, with section sigma(eta) = (0, eta, 0).
    """
    ta = rotation_tprime(a)
    c = cone(ta)
    n1, n2 = a.x1.dims, a.x2.dims
    tau_mats, sig_mats = [], []
    for i in (0, 1):
        j = (i + 1) % 2
        m = lin.zeros(n2[i], c.dims[i])
        m[:, n1[j] : n1[j] + n2[i]] = lin.eye(n2[i])
        m[:, n1[j] + n2[i] :] = (-a.x.mats[i]) % a.p
        tau_mats.append(m)
        w = lin.zeros(c.dims[i], n2[i])
        w[n1[j] : n1[j] + n2[i], :] = lin.eye(n2[i])
        sig_mats.append(w)
    tau = GradedMap(c, a.x2, 0, tuple(tau_mats))
    sigma = GradedMap(a.x2, c, 0, tuple(sig_mats))
    return tau, sigma


# ---------------------------------------------------------------------------
# path objects


def path_object_membership(a: ArrowObject) -> bool:
    """Membership in P(A): the structure map is a homotopy equivalence."""
    return is_homotopy_equivalence(a.x)


def path_inclusion(x: Complex) -> ArrowObject:
    """The canonical X -> P(A) on objects: X |-> id_X."""
    return ArrowObject.build(GradedMap.identity(x))
