"""Labeled Lagrangian projection of a special grid-number-one front.

For k = 1 the projection to the sphere is a descending spiral that makes
``n = h + v`` horizontal turns, crossed by a single ascending arc.  The arc
meets the spiral at crossings ``1..n-1`` (top down) and the complement
consists of ``n + 1`` regions, indexed here by *level*:

* level 0 is the cap around the north pole, cornered only at N of crossing 1;
* level ``i`` (``1 <= i <= n-1``) is the strip between turns ``i`` and
  ``i+1``, cornered at S of ``i-1``, E and W of ``i``, N of ``i+1``;
* level ``n`` is the cap around the south pole, cornered only at S of ``n-1``.

Only the strip at level ``h`` has positive area (``1/p``); every other region
has zero area in the centered-basepoint limit.  N and S quadrants are
positive for the a-type generator (and negative for the b-type), E and W the
reverse.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Any, Literal

from .exceptions import ScopeError
from .lens_arith import (
    GridOneSpec,
    Kind,
    box_label,
    chord_length,
    crossing_count,
    is_primitive,
)

Quadrant = Literal["N", "E", "S", "W"]
Side = Literal["north", "south"]

#: sign of the a-type generator at each quadrant
A_SIGN: dict[str, int] = {"N": 1, "S": 1, "E": -1, "W": -1}


@dataclass(frozen=True)
class Generator:
    crossing: int
    kind: Kind
    length: Fraction
    grading: Fraction | None = None

    @property
    def symbol(self) -> str:
        return f"{self.kind.lower()}{self.crossing}"

    @property
    def preferred(self) -> bool:
        return self.kind == "A"


@dataclass(frozen=True)
class Crossing:
    index: int
    box: int
    a_gen: Generator
    b_gen: Generator


@dataclass(frozen=True)
class Corner:
    crossing: int
    quadrant: Quadrant

    @property
    def sign(self) -> int:
        """+1 where the a-type generator is positive, -1 where it is negative."""
        return A_SIGN[self.quadrant]

    def generator(self, positive: bool) -> str:
        """Symbol of the generator occupying this quadrant with the given sign."""
        a_here = (self.sign > 0) == positive
        return f"{'a' if a_here else 'b'}{self.crossing}"


@dataclass(frozen=True)
class Region:
    id: int
    corners: tuple[Corner, ...]
    area: Fraction
    defect: Fraction
    pole: Side | None = None


@dataclass(frozen=True)
class CappingPath:
    generator: int
    side: Side
    rotation: Fraction
    winding: int
    defect: Fraction
    multiplicities: tuple[int, ...] = field(repr=False)

    def admissible(self, p: int) -> bool:
        return self.winding % p == 0

    def bounds_constant(self, p: int) -> bool:
        """True when the capped disc is a rigid one-cornered disc."""
        return self.winding == p and self.defect == 0


@dataclass(frozen=True)
class DiscTerm:
    """A single-region disc read as a term of the differential."""

    region: int
    positive: str
    word: tuple[str, ...]
    x_defect: Fraction


@dataclass(frozen=True)
class LabeledDiagram:
    spec: GridOneSpec
    crossings: tuple[Crossing, ...]
    regions: tuple[Region, ...] | None
    grading_modulus: int | None
    capping: tuple[CappingPath, ...] = ()

    @property
    def labeled(self) -> bool:
        return self.regions is not None

    @property
    def region_count(self) -> int:
        if self.regions is not None:
            return len(self.regions)
        # unlabeled diagrams: count from the crossing set
        return len(self.crossings) + 2

    def generators(self) -> list[Generator]:
        return [g for c in self.crossings for g in (c.a_gen, c.b_gen)]

    def generator(self, symbol: str) -> Generator:
        for g in self.generators():
            if g.symbol == symbol:
                return g
        raise KeyError(symbol)

    def a_length(self, j: int) -> Fraction:
        """l(a_j), with l(a_0) = l(a_n) = 0 for the boundary turns."""
        if 1 <= j <= len(self.crossings):
            return self.crossings[j - 1].a_gen.length
        return Fraction(0)

    def region(self, rid: int) -> Region:
        if self.regions is None:
            raise ScopeError("regions are only labeled for k=1")
        return self.regions[rid]


def crossing_set(spec: GridOneSpec) -> list[int]:
    """Boxes B(1), ..., B(s) of the crossings, top-down."""
    s = crossing_count(spec)
    return [box_label(spec, j, s) for j in range(1, s + 1)]


def _region_layout(n: int) -> list[tuple[tuple[Corner, ...], Side | None]]:
    layout: list[tuple[tuple[Corner, ...], Side | None]] = [((Corner(1, "N"),), "north")]
    for i in range(1, n):
        corners: list[Corner] = []
        if i >= 2:
            corners.append(Corner(i - 1, "S"))
        corners.append(Corner(i, "E"))
        if i <= n - 2:
            corners.append(Corner(i + 1, "N"))
        corners.append(Corner(i, "W"))
        layout.append((tuple(corners), None))
    layout.append(((Corner(n - 1, "S"),), "south"))
    return layout


def _defect(area: Fraction, corners: Sequence[Corner], a_len: Mapping[int, Fraction]) -> Fraction:
    return -area + sum((c.sign * a_len[c.crossing] for c in corners), Fraction(0))


def build_diagram(spec: GridOneSpec, full: bool = True) -> LabeledDiagram:
    """Construct the labeled diagram.

    With ``full=False`` only crossings and generator lengths are produced;
    this is the only mode available when k > 1.
    """
    if not is_primitive(spec):
        raise ScopeError(f"{spec.label()} is not primitive")
    if spec.k != 1 and full:
        raise ScopeError(f"full labeling unsupported for k={spec.k}")
    boxes = crossing_set(spec)
    a_len = {j: chord_length(spec, j, "A") for j in range(1, len(boxes) + 1)}
    if not full:
        crossings = tuple(
            Crossing(j, b, Generator(j, "A", a_len[j]), Generator(j, "B", 1 - a_len[j]))
            for j, b in enumerate(boxes, start=1)
        )
        return LabeledDiagram(spec, crossings, None, None)

    n = spec.segments
    regions = []
    for level, (corners, pole) in enumerate(_region_layout(n)):
        area = Fraction(1, spec.p) if level == spec.h else Fraction(0)
        regions.append(Region(level, corners, area, _defect(area, corners, a_len), pole))
    modulus = abs(2 * n - 4 * spec.v)
    capping = tuple(
        path
        for j in range(1, n)
        for path in (_capping_path(spec, regions, j, "north"), _capping_path(spec, regions, j, "south"))
    )

    crossings = []
    for j, b in enumerate(boxes, start=1):
        north = capping[2 * (j - 1)]
        a_grade = _grading_from_path(spec.p, north)
        b_grade = 3 - a_grade
        if modulus:
            a_grade %= modulus
            b_grade %= modulus
        crossings.append(
            Crossing(
                j,
                b,
                Generator(j, "A", a_len[j], a_grade),
                Generator(j, "B", 1 - a_len[j], b_grade),
            )
        )
    return LabeledDiagram(spec, tuple(crossings), tuple(regions), modulus, capping)


def region_defect(diagram: LabeledDiagram, region: Region) -> Fraction:
    """-area plus the signed lengths of the a-type generators at its corners."""
    a_len = {c.crossing: diagram.a_length(c.crossing) for c in region.corners}
    return _defect(region.area, region.corners, a_len)


def x_defect(
    diagram: LabeledDiagram,
    regions: Mapping[int, int],
    positive: str,
    negatives: Sequence[str],
) -> Fraction:
    """Defect of a disc covering ``regions`` (id -> multiplicity), adjusted
    by its corner labels (generator symbols such as ``"a2"``, ``"b3"``)."""
    total = sum((m * region_defect(diagram, diagram.region(r)) for r, m in regions.items()), Fraction(0))
    total -= sum(1 for y in negatives if y.startswith("b"))
    if positive.startswith("b"):
        total += 1
    return total


def _path_multiplicities(n: int, j: int, m: int, side: Side) -> tuple[int, ...]:
    if side == "north":
        # turns 1, 2, ..., n, 1, 2, ... (m of them) ending on turn j
        full, rest = divmod(m, n)
        assert rest == j % n
        return tuple(full * (n - level) + max(0, j - level) for level in range(n + 1))
    # turns j+1, ..., n, 1, ..., n (m of them) ending on turn n
    full = (m - (n - j)) // n
    return tuple(full * level + max(0, level - j) for level in range(n + 1))


def _capping_path(spec: GridOneSpec, regions: Sequence[Region], j: int, side: Side) -> CappingPath:
    """The admissible capping path of a_j with the fewest turns on one side."""
    n, p = spec.segments, spec.p
    target = j if side == "north" else n - j
    t = next(t for t in range(1, n + 1) if (p * t - target) % n == 0)
    m = p * t
    mult = _path_multiplicities(n, j, m, side)
    defect = sum((w * r.defect for w, r in zip(mult, regions)), Fraction(0))
    return CappingPath(j, side, Fraction(4 * m - 1, 4), m, defect, mult)


def capping_paths(diagram: LabeledDiagram) -> list[CappingPath]:
    if not diagram.labeled:
        raise ScopeError("capping paths need k=1")
    return list(diagram.capping)


def _grading_from_path(p: int, path: CappingPath) -> Fraction:
    return 2 * ceil(path.rotation) - 2 * Fraction(p - 1, p) * path.winding - 1 + 4 * path.defect


def path_grading(diagram: LabeledDiagram, path: CappingPath) -> Fraction:
    """Unreduced grading of a_j computed from a given capping path."""
    if not path.admissible(diagram.spec.p):
        raise ValueError("capping path is not admissible")
    return _grading_from_path(diagram.spec.p, path)


def grading(diagram: LabeledDiagram, generator: Generator) -> Fraction:
    """Grading of a generator, reduced by the grading modulus when nonzero."""
    if not diagram.labeled:
        raise ScopeError("gradings need k=1")
    g = diagram.crossings[generator.crossing - 1]
    return (g.a_gen if generator.kind == "A" else g.b_gen).grading  # type: ignore[return-value]


@dataclass(frozen=True)
class KnotDisc:
    rotation: int
    area: Fraction
    defect: Fraction


def knot_disc(diagram: LabeledDiagram) -> KnotDisc:
    """Disc bounded by the whole projection, covering level ``i`` n - i times."""
    if diagram.regions is None:
        raise ScopeError("knot disc needs k=1")
    n = diagram.spec.segments
    area = sum(((n - r.id) * r.area for r in diagram.regions), Fraction(0))
    defect = sum(((n - r.id) * r.defect for r in diagram.regions), Fraction(0))
    return KnotDisc(n, area, defect)


def region_disc_terms(diagram: LabeledDiagram, rigid_only: bool = True) -> list[DiscTerm]:
    """Differential terms from discs that cover one pole-free region once.

    Each corner in turn is taken as the positive corner; the word lists the
    remaining corners counterclockwise from it.
    """
    if diagram.regions is None:
        raise ScopeError("regions need k=1")
    terms = []
    for r in diagram.regions:
        if r.pole is not None:
            continue
        cs = r.corners
        for i, c in enumerate(cs):
            pos = c.generator(positive=True)
            word = tuple(d.generator(positive=False) for d in cs[i + 1 :] + cs[:i])
            xd = x_defect(diagram, {r.id: 1}, pos, word)
            if xd == 0 or not rigid_only:
                terms.append(DiscTerm(r.id, pos, word, xd))
    return terms


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


def diagram_to_dict(diagram: LabeledDiagram) -> dict[str, Any]:
    spec = diagram.spec
    out: dict[str, Any] = {
        "knot": {"p": spec.p, "q": spec.q, "h": spec.h, "v": spec.v, "k": spec.k},
        "labeled": diagram.labeled,
        "grading_modulus": diagram.grading_modulus,
        "crossings": [
            {
                "index": c.index,
                "box": c.box,
                "generators": [
                    {"symbol": g.symbol, "kind": g.kind, "length": str(g.length), "grading": _frac(g.grading)}
                    for g in (c.a_gen, c.b_gen)
                ],
            }
            for c in diagram.crossings
        ],
        "regions": None,
        "capping_paths": [],
    }
    if diagram.regions is not None:
        out["regions"] = [
            {
                "id": r.id,
                "pole": r.pole,
                "corners": [[c.crossing, c.quadrant, c.sign] for c in r.corners],
                "area": str(r.area),
                "defect": str(r.defect),
            }
            for r in diagram.regions
        ]
        out["capping_paths"] = [
            {
                "generator": f"a{cp.generator}",
                "side": cp.side,
                "rotation": str(cp.rotation),
                "winding": cp.winding,
                "defect": str(cp.defect),
                "constant_term": cp.bounds_constant(spec.p),
            }
            for cp in diagram.capping
        ]
    return out
