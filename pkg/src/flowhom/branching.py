"""Branching and merging spaces of a loopless flow.

Three independent routes to the same space live here:

* :func:`germ_space` computes the universal quotient identifying a path
  with its extensions directly, by union-find over path classes;
* :func:`branch_diagram` plus :func:`diagram_colimit` computes it as the
  colimit of a diagram of path-set products indexed by the order complex
  of the states strictly above (below) the base state;
* :func:`branch_space_homology` computes the homotopy-invariant version:
  the homology of the nerve of the Grothendieck construction of the same
  diagram, which realizes its homotopy colimit.

The first two must agree exactly (this library's central cross-check); the
third feeds the graded homology tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownSimplex, UnknownState
from .flows import Flow, Word
from .homology import (
    HomologyGroup,
    LoopFreeCategory,
    ZERO_GROUP,
    homology,
    nerve,
)
from .poset import OrderComplex, Simplex
from .unionfind import SetColimit, UnionFind

MINUS = "minus"  # germs of paths beginning the same way (branching)
PLUS = "plus"  # germs of paths ending the same way (merging)


def _check_sign(sign: str) -> str:
    if sign not in (MINUS, PLUS):
        raise ValueError(f"sign must be {MINUS!r} or {PLUS!r}")
    return sign


# -- germ quotient ---------------------------------------------------------


@dataclass(frozen=True)
class GermSpace:
    """The branching (minus) or merging (plus) space of a flow.

    ``classes`` partitions all path classes into germs; ``anchor`` sends
    each germ to the state where its paths begin (minus) or end (plus).
    The space decomposes as the disjoint union of the anchor fibers.
    """

    sign: str
    classes: tuple[tuple[Word, ...], ...]
    anchor: dict[tuple[Word, ...], str]

    def fiber(self, state: str) -> tuple[tuple[Word, ...], ...]:
        return tuple(c for c in self.classes if self.anchor[c] == state)

    def germ_of(self, path: Word) -> tuple[Word, ...]:
        for c in self.classes:
            if path in c:
                return c
        raise KeyError(path)

    def __len__(self) -> int:
        return len(self.classes)


def germ_space(flow: Flow, sign: str) -> GermSpace:
    """Finest partition identifying x with x*y (minus) or y with x*y (plus).

    Computed by union-find over all path classes: each composable pair
    contributes one identification.  Anchors are well defined because the
    identifications never move the relevant endpoint.
    """
    _check_sign(sign)
    uf = UnionFind()
    for x in flow.all_classes():
        uf.add(x)
    by_source: dict[str, list[tuple[str, str]]] = {}
    for a, b in flow.nonempty_pairs():
        by_source.setdefault(a, []).append((a, b))
    for a, b in flow.nonempty_pairs():
        for x in flow.path_set(a, b):
            for _, c in by_source.get(b, ()):
                for y in flow.path_set(b, c):
                    xy = flow.compose(x, y)
                    uf.union(x if sign == MINUS else y, xy)
    groups = uf.classes()
    classes = tuple(sorted(groups.values()))
    anchor = {
        c: (flow.source(c[0]) if sign == MINUS else flow.target(c[0])) for c in classes
    }
    return GermSpace(sign, classes, anchor)


# -- the set-valued diagram over the order complex --------------------------


class BranchDiagram:
    """Path-set products indexed by the order complex at a base state.

    For the minus sign at state a, a simplex (a0, ..., ap) of the complex
    of states strictly above a carries the product
    P(a, a0) x P(a0, a1) x ... x P(a(p-1), ap).  Faces either compose two
    adjacent factors (any face but the last) or drop the final factor (the
    last face).  The plus diagram is the minus diagram of the opposite
    flow, so its index is the order complex of the states strictly below.
    """

    def __init__(self, flow: Flow, state: str, sign: str):
        _check_sign(sign)
        if state not in set(flow.states):
            raise UnknownState(repr(state))
        self.flow = flow
        self.state = state
        self.sign = sign
        self.working_flow = flow if sign == MINUS else flow.opposite()
        self.index: OrderComplex = (
            self.working_flow.state_order.strict_upper_set(state).order_complex()
        )

    @property
    def is_empty(self) -> bool:
        return len(self.index) == 0

    @property
    def simplices(self) -> tuple[Simplex, ...]:
        return self.index.simplices

    def segments(self, simplex: Simplex) -> list[tuple[str, str]]:
        chain = (self.state, *simplex)
        return list(zip(chain, chain[1:]))

    def vertex_set(self, simplex: Simplex) -> tuple[tuple[Word, ...], ...]:
        """All tuples (g0, ..., gp) with gi a path class along segment i."""
        if simplex not in self.index:
            raise UnknownSimplex(repr(simplex))
        out: list[tuple[Word, ...]] = [()]
        for a, b in self.segments(simplex):
            out = [t + (g,) for t in out for g in self.working_flow.path_set(a, b)]
        return tuple(out)

    def face(
        self, src: Simplex, dst: Simplex, element: tuple[Word, ...]
    ) -> tuple[Word, ...]:
        """Transport an element along the arrow src -> dst (dst a subchain
        of src).

        Entries past the last vertex of dst are dropped; each remaining gap
        is closed by composing the classes it spans.
        """
        positions = {v: i for i, v in enumerate(src)}
        if any(v not in positions for v in dst):
            raise UnknownSimplex(f"{dst!r} is not a face of {src!r}")
        out: list[Word] = []
        prev = -1
        for v in dst:
            cur = positions[v]
            piece = element[prev + 1]
            for k in range(prev + 2, cur + 1):
                piece = self.working_flow.compose(piece, element[k])
            out.append(piece)
            prev = cur
        return tuple(out)

    def compose_all(self, element: tuple[Word, ...]) -> Word:
        total = element[0]
        for piece in element[1:]:
            total = self.working_flow.compose(total, piece)
        return total

    def single_faces(self, simplex: Simplex) -> list[Simplex]:
        """Codimension-one faces (present whenever the simplex has dim > 0)."""
        if len(simplex) == 1:
            return []
        return OrderComplex.faces(simplex)


def branch_diagram(flow: Flow, state: str, sign: str) -> BranchDiagram:
    return BranchDiagram(flow, state, sign)


def diagram_colimit(diagram: BranchDiagram) -> SetColimit:
    """Colimit of the set diagram: disjoint union of the vertex sets modulo
    every face identification."""
    vertex_sets = {s: diagram.vertex_set(s) for s in diagram.simplices}
    edges = []
    for s in diagram.simplices:
        for f in diagram.single_faces(s):
            edges.append((s, f, lambda e, s=s, f=f: diagram.face(s, f, e)))
    return SetColimit(vertex_sets, edges)


def colimit_matches_germ_fiber(diagram: BranchDiagram) -> bool:
    """The central oracle: the diagram colimit must be in natural bijection
    with the germ-space fiber at the base state.

    The natural map sends a colimit class of (g0, ..., gp) to the germ of
    g0 * g1 * ... * gp; we check it is well defined, injective and
    surjective.
    """
    colim = diagram_colimit(diagram)
    germs = germ_space(diagram.working_flow, MINUS)
    fiber = germs.fiber(diagram.state)
    germ_class: dict[Word, tuple[Word, ...]] = {}
    for c in fiber:
        for path in c:
            germ_class[path] = c
    image: dict = {}
    for s in diagram.simplices:
        for element in diagram.vertex_set(s):
            target = germ_class.get(diagram.compose_all(element))
            if target is None:
                return False
            key = colim.class_of(s, element)
            if image.setdefault(key, target) != target:
                return False  # not well defined on colimit classes
    values = list(image.values())
    injective = len(set(values)) == len(values)
    surjective = set(values) == set(fiber)
    return injective and surjective


# -- the final subcategory on 0- and 1-simplices ----------------------------


def restricted_subcategory(diagram: BranchDiagram) -> LoopFreeCategory:
    """The subcategory on 0- and 1-simplices, with the two faces of each
    1-simplex (compose-into-base and drop-last) as the only arrows."""
    objects = [s for s in diagram.simplices if len(s) <= 2]
    arrows = {}
    for s in objects:
        if len(s) == 2:
            arrows[("d0", s)] = (s, s[1:])
            arrows[("d1", s)] = (s, s[:1])
    return LoopFreeCategory(objects, arrows, {})


def final_subdiagram_check(diagram: BranchDiagram) -> bool:
    """Check the final-functor criterion for the 0/1-simplex subcategory and
    that restricting the diagram to it leaves the colimit unchanged.

    Finality: for every simplex k of the full index, the comma category of
    arrows from k into the subcategory is non-empty and connected.
    """
    sub_objects = [s for s in diagram.simplices if len(s) <= 2]
    for k in diagram.simplices:
        under = [s for s in sub_objects if set(s) <= set(k)]
        if not under:
            return False
        neighbours: dict[Simplex, set[Simplex]] = {s: set() for s in under}
        for s in under:
            if len(s) == 2:
                for f in (s[1:], s[:1]):
                    neighbours[s].add(f)
                    neighbours[f].add(s)
        seen = {under[0]}
        stack = [under[0]]
        while stack:
            for nxt in neighbours[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != len(under):
            return False
    full = diagram_colimit(diagram)
    vertex_sets = {s: diagram.vertex_set(s) for s in sub_objects}
    edges = []
    for s in sub_objects:
        for f in diagram.single_faces(s):
            edges.append((s, f, lambda e, s=s, f=f: diagram.face(s, f, e)))
    sub = SetColimit(vertex_sets, edges)
    mapping: dict = {}
    for s in sub_objects:
        for element in vertex_sets[s]:
            key = sub.class_of(s, element)
            target = full.class_of(s, element)
            if mapping.setdefault(key, target) != target:
                return False
    return len(mapping) == len(full) == len(sub) and (
        len(set(mapping.values())) == len(mapping)
    )


# -- homotopy branching space via the Grothendieck construction -------------


def grothendieck_category(diagram: BranchDiagram) -> LoopFreeCategory:
    """Objects are pairs (simplex, element); one arrow per face transport.

    Simplex size strictly drops along arrows, so the category is loop-free,
    and single-face arrows compose into the unique subchain transports.
    """
    objects = []
    for s in diagram.simplices:
        for element in diagram.vertex_set(s):
            objects.append((s, element))
    arrows = {}
    by_source: dict = {}
    for s, element in objects:
        src = (s, element)
        for t in _proper_subchains(s):
            dst = (t, diagram.face(s, t, element))
            arrows[(src, dst)] = (src, dst)
            by_source.setdefault(src, []).append((src, dst))
    compose = {}
    for f, (fs, ft) in arrows.items():
        for g in by_source.get(ft, ()):
            compose[(f, g)] = (fs, arrows[g][1])
    return LoopFreeCategory(objects, arrows, compose)


def _proper_subchains(simplex: Simplex) -> list[Simplex]:
    out = []
    n = len(simplex)
    for mask in range(1, (1 << n) - 1):
        sub = tuple(simplex[i] for i in range(n) if mask >> i & 1)
        out.append(sub)
    return sorted(out, key=lambda s: (len(s), s))


@dataclass(frozen=True)
class SpaceHomology:
    """Homology of one branching/merging space, or the empty-space marker.

    Emptiness is meaningful (it is what the degree-0 table counts), so it is
    carried explicitly rather than encoded as vanishing groups.
    """

    empty: bool
    groups: tuple[HomologyGroup, ...] = ()
    reduced: tuple[HomologyGroup, ...] = ()

    def group(self, n: int) -> HomologyGroup:
        if self.empty:
            raise ValueError("empty space has no homology groups")
        return self.groups[n] if n < len(self.groups) else ZERO_GROUP

    def reduced_group(self, n: int) -> HomologyGroup:
        if self.empty:
            raise ValueError("empty space has no homology groups")
        return self.reduced[n] if n < len(self.reduced) else ZERO_GROUP

    @property
    def max_degree(self) -> int:
        return len(self.groups) - 1

    def is_contractible_like(self) -> bool:
        """Nonempty with vanishing reduced homology in all degrees."""
        return not self.empty and all(g.is_zero for g in self.reduced)

    def same_as(self, other: "SpaceHomology") -> bool:
        if self.empty or other.empty:
            return self.empty == other.empty
        top = max(len(self.groups), len(other.groups))
        return all(self.group(n) == other.group(n) for n in range(top))


EMPTY_SPACE = SpaceHomology(empty=True)


def branch_space_homology(flow: Flow, state: str, sign: str) -> SpaceHomology:
    """Homology of the homotopy branching (merging) space at a state.

    Built as the nerve of the Grothendieck construction of the branch
    diagram; for set-valued diagrams this nerve realizes the homotopy
    colimit up to weak equivalence, so its homology is the invariant one.
    """
    diagram = branch_diagram(flow, state, sign)
    if diagram.is_empty:
        return EMPTY_SPACE
    complex_ = nerve(grothendieck_category(diagram))
    groups = tuple(homology(complex_, n) for n in range(len(complex_.dims)))
    reduced = (homology(complex_, 0, reduced=True),) + groups[1:]
    return SpaceHomology(empty=False, groups=groups, reduced=reduced)


# -- graded homology tables --------------------------------------------------


class HomologyTable:
    """The graded branching (minus) or merging (plus) homology of a flow.

    Degree 0 is free on the states whose space is empty (final states for
    minus, initial for plus); degree 1 collects the reduced degree-0 groups
    of the per-state spaces; degree n + 1 collects their degree-n groups.
    """

    def __init__(self, flow: Flow, sign: str):
        _check_sign(sign)
        self.flow = flow
        self.sign = sign
        self.per_state: dict[str, SpaceHomology] = {
            state: branch_space_homology(flow, state, sign) for state in flow.states
        }
        empty_rank = sum(1 for h in self.per_state.values() if h.empty)
        self._groups: dict[int, HomologyGroup] = {0: HomologyGroup(empty_rank)}
        top = 0
        for h in self.per_state.values():
            if not h.empty:
                top = max(top, h.max_degree + 1)
        for n in range(1, top + 1):
            parts = [
                h.reduced_group(0) if n == 1 else h.group(n - 1)
                for h in self.per_state.values()
                if not h.empty
            ]
            self._groups[n] = ZERO_GROUP.direct_sum(*parts)

    @property
    def max_degree(self) -> int:
        return max(self._groups)

    def group(self, n: int) -> HomologyGroup:
        if n < 0:
            raise ValueError("negative degree")
        return self._groups.get(n, ZERO_GROUP)

    def groups(self) -> list[HomologyGroup]:
        return [self.group(n) for n in range(self.max_degree + 1)]

    def same_groups(self, other: "HomologyTable") -> bool:
        top = max(self.max_degree, other.max_degree)
        return all(self.group(n) == other.group(n) for n in range(top + 1))

    def __repr__(self) -> str:
        parts = ", ".join(f"H{n}={self.group(n)}" for n in range(self.max_degree + 1))
        return f"HomologyTable({self.sign}: {parts})"


def homology_table(flow: Flow, sign: str) -> HomologyTable:
    return HomologyTable(flow, sign)
