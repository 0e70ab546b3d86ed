"""Box posets ``prod [0, r_i]`` and functors from them into finitely presented modules."""

from __future__ import annotations

import itertools
from dataclasses import InitVar, dataclass, field
from functools import cached_property
from typing import Dict, Tuple

from .errors import InvalidDiagram
from .ring import BaseRing, FpModule, G0Class, ModuleMap, g0_class

Point = Tuple[int, ...]


def unit(n: int, i: int, c: int = 1) -> Point:
    return tuple(c if j == i else 0 for j in range(n))


def shift(u: Point, i: int, c: int = 1) -> Point:
    return u[:i] + (u[i] + c,) + u[i + 1:]


@dataclass(frozen=True)
class BoxPoset:
    """Integer points of ``prod [0, r_i]`` enumerated lexicographically."""

    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(v) for v in self.r))
        if any(v < 0 for v in self.r):
            raise ValueError(f"bad box shape {self.r}")

    @property
    def n(self) -> int:
        return len(self.r)

    def points(self):
        return list(self._points)

    @cached_property
    def _points(self):
        return tuple(itertools.product(*(range(v + 1) for v in self.r)))

    def __contains__(self, u) -> bool:
        return len(u) == self.n and all(0 <= a <= b for a, b in zip(u, self.r))

    def edges(self):
        """All ``(u, i)`` with ``u + e_i`` still in the box."""
        return list(self._edges)

    @cached_property
    def _edges(self):
        return tuple((u, i) for u in self._points for i in range(self.n) if u[i] < self.r[i])

    def squares(self):
        return [(u, i, j) for u in self.points()
                for i in range(self.n) for j in range(i + 1, self.n)
                if u[i] < self.r[i] and u[j] < self.r[j]]

    def truncated(self) -> "BoxPoset":
        return BoxPoset(self.r[:-1])


@dataclass(frozen=True)
class DiagramReport:
    ok: bool
    ill_formed_edges: tuple = ()
    failing_squares: tuple = ()

    def as_dict(self):
        return {
            "ok": self.ok,
            "ill_formed_edges": [{"point": list(u), "direction": i + 1}
                                 for u, i in self.ill_formed_edges],
            "failing_squares": [{"point": list(u), "directions": [i + 1, j + 1]}
                                for u, i, j in self.failing_squares],
        }


@dataclass(frozen=True, eq=False)
class BoxDiagram:
    """A functor from a box poset to ``FpModule``.

    ``objects[u]`` is the module at ``u`` and ``edges[(u, i)]`` the map
    ``F_u -> F_{u+e_i}``.  Construction validates functoriality unless
    ``check=False`` is passed by a caller that already guarantees it.
    """

    box: BoxPoset
    objects: Dict[Point, FpModule]
    edges: Dict[Tuple[Point, int], ModuleMap] = field(default_factory=dict)
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if len(self.objects) != len(self.box._points) or not all(
                u in self.objects for u in self.box._points):
            raise InvalidDiagram("objects do not cover the box")
        if len(self.edges) != len(self.box._edges) or not all(
                e in self.edges for e in self.box._edges):
            raise InvalidDiagram("edges do not match the box")
        for (u, i), f in self.edges.items():
            if f.source != self.objects[u] or f.target != self.objects[shift(u, i)]:
                raise InvalidDiagram(f"edge {u}->{i + 1} has wrong endpoints", (u, i))
        if check:
            report = validate(self)
            if not report.ok:
                raise InvalidDiagram(f"diagram not functorial: {report.as_dict()}", report)
        object.__setattr__(self, "_paths", {})

    @property
    def ring(self) -> BaseRing:
        return self.objects[self.box.points()[0]].ring

    @property
    def n(self) -> int:
        return self.box.n

    def edge(self, u: Point, i: int) -> ModuleMap:
        return self.edges[(u, i)]

    def path(self, a: Point, b: Point) -> ModuleMap:
        """Structure map ``F_a -> F_b`` for ``a <= b`` (coordinate order)."""
        a, b = tuple(a), tuple(b)
        cached = self._paths.get((a, b))
        if cached is not None:
            return cached
        if a == b:
            f = ModuleMap.identity(self.objects[a])
        else:
            i = max(j for j in range(self.n) if b[j] > a[j])
            prev = shift(b, i, -1)
            f = self.edges[(prev, i)] @ self.path(a, prev)
        self._paths[(a, b)] = f
        return f

    def __eq__(self, other):
        return (isinstance(other, BoxDiagram) and self.box == other.box
                and self.objects == other.objects and self.edges == other.edges)

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.objects.values())


def validate(D: BoxDiagram) -> DiagramReport:
    """Check that every edge is well defined and every elementary square commutes."""
    bad_edges = tuple((u, i) for (u, i), f in sorted(D.edges.items())
                      if not f.is_well_defined())
    bad_squares = []
    for u, i, j in D.box.squares():
        if (u, i) in bad_edges or (u, j) in bad_edges:
            continue
        a = D.edges[(shift(u, i), j)] @ D.edges[(u, i)]
        b = D.edges[(shift(u, j), i)] @ D.edges[(u, j)]
        if a != b:
            bad_squares.append((u, i, j))
    return DiagramReport(not bad_edges and not bad_squares, bad_edges, tuple(bad_squares))


def constant(box: BoxPoset, M: FpModule) -> BoxDiagram:
    """Constant diagram with identity edges."""
    idm = ModuleMap.identity(M)
    return BoxDiagram(box, {u: M for u in box.points()},
                      {e: idm for e in box.edges()}, False)


def zero(box: BoxPoset, ring: BaseRing) -> BoxDiagram:
    return constant(box, FpModule.zero(ring))


def restrict_bottom(D: BoxDiagram) -> BoxDiagram:
    """Restriction along ``(u_1..u_{n-1}) -> (u_1..u_{n-1}, 0)``."""
    if D.n < 2:
        raise ValueError("restrict_bottom needs n >= 2")
    box = D.box.truncated()
    objects = {u: D.objects[u + (0,)] for u in box.points()}
    edges = {(u, i): D.edges[(u + (0,), i)] for u, i in box.edges()}
    return BoxDiagram(box, objects, edges, False)


def extend_bottom(E: BoxDiagram, r_last: int) -> BoxDiagram:
    """Left adjoint of :func:`restrict_bottom`: constant in the new last direction."""
    box = BoxPoset(E.box.r + (r_last,))
    n = box.n
    objects = {u: E.objects[u[:-1]] for u in box.points()}
    edges = {}
    for u, i in box.edges():
        if i == n - 1:
            edges[(u, i)] = ModuleMap.identity(objects[u])
        else:
            edges[(u, i)] = E.edges[(u[:-1], i)]
    return BoxDiagram(box, objects, edges, False)


def extend_bottom_map(E: BoxDiagram, D: BoxDiagram, components: dict) -> dict:
    """Transpose of a morphism ``E -> restrict_bottom(D)`` to ``extend_bottom(E) -> D``.

    The component at ``u`` is ``phi_{u'} `` followed by the structure map of
    ``D`` from ``(u', 0)`` up to ``u``.
    """
    out = {}
    for u in D.box.points():
        base = u[:-1] + (0,)
        out[u] = D.path(base, u) @ components[u[:-1]]
    return out


def is_natural(source: BoxDiagram, target: BoxDiagram, components: dict) -> bool:
    """Whether ``components`` is a natural transformation ``source -> target``."""
    for u, i in source.box.edges():
        v = shift(u, i)
        if target.edges[(u, i)] @ components[u] != components[v] @ source.edges[(u, i)]:
            return False
    return True


def bottom_kernel_reindex(D: BoxDiagram) -> BoxDiagram:
    """A diagram vanishing on the bottom row, re-read over ``(r_1..r_{n-1}, r_n - 1)``."""
    if any(not D.objects[u].is_zero() for u in D.box.points() if u[-1] == 0):
        raise InvalidDiagram("diagram does not vanish on the bottom row")
    r = D.box.r
    if r[-1] < 1:
        raise ValueError("needs r_n >= 1")
    box = BoxPoset(r[:-1] + (r[-1] - 1,))
    up = lambda u: u[:-1] + (u[-1] + 1,)  # noqa: E731
    objects = {u: D.objects[up(u)] for u in box.points()}
    edges = {(u, i): D.edges[(up(u), i)] for u, i in box.edges()}
    return BoxDiagram(box, objects, edges, False)


def bottom_kernel_embed(E: BoxDiagram) -> BoxDiagram:
    """Inverse of :func:`bottom_kernel_reindex`: prepend a zero bottom row."""
    ring = E.ring
    r = E.box.r
    box = BoxPoset(r[:-1] + (r[-1] + 1,))
    zero_m = FpModule.zero(ring)
    down = lambda u: u[:-1] + (u[-1] - 1,)  # noqa: E731
    objects = {u: (zero_m if u[-1] == 0 else E.objects[down(u)]) for u in box.points()}
    edges = {}
    for u, i in box.edges():
        v = shift(u, i)
        if u[-1] == 0:
            edges[(u, i)] = ModuleMap.zero(objects[u], objects[v])
        else:
            edges[(u, i)] = E.edges[(down(u), i)]
    return BoxDiagram(box, objects, edges, False)


def drop_trivial_axis(D: BoxDiagram) -> BoxDiagram:
    """For ``r_n == 0`` the box is ``tr_{n-1}(r) x {0}``; forget the last coordinate."""
    if D.box.r[-1] != 0:
        raise ValueError("last box side is not zero")
    return restrict_bottom(D)


def class_vector(D: BoxDiagram) -> list:
    """Pointwise ``G_0`` classes, in lexicographic point order."""
    return [g0_class(D.objects[u]) for u in D.box.points()]


def peel_rank(r) -> int:
    """Rank of ``K_0`` of box diagrams obtained by repeatedly splitting off the
    bottom-row restriction and re-indexing its kernel."""
    r = tuple(r)
    if not r:
        return 1
    if r[-1] == 0:
        return peel_rank(r[:-1])
    return peel_rank(r[:-1]) + peel_rank(r[:-1] + (r[-1] - 1,))


def direct_sum_vectors(a: list, b: list) -> list:
    return [x + y for x, y in zip(a, b)]


def sum_classes(classes) -> G0Class:
    classes = list(classes)
    total = classes[0]
    for c in classes[1:]:
        total = total + c
    return total
