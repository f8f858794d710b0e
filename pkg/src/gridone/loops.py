"""Lifted fronts in the 3-sphere and the loops that index b-only words.

The preimage of K(p, q, h) in S^3 is a front on a p x p torus.  Walking it
from the box-0 basepoint at (0, 0), each of the p periods takes ``h`` unit
steps right and then ``v`` unit steps down, so point ``n`` sits at

    X = m h + min(i, h),  Y = -(m v + max(0, i - h)),  n = m (h + v) + i,

in universal-cover coordinates, reduced mod p on the torus.  Point type
``i = 0`` is a box-0 basepoint; ``1 <= i < h + v`` are the crossing points.

A chord of b_j leaves a box-0 point and climbs ``p/k - x_j`` diagonal steps
to a crossing-j point.  An N-loop runs the knot forward (right/down) and
jumps down-left along b chords, with net displacement (0, -p); an S-loop
runs the knot backward (left/up) with net displacement (-p, 0).  Loops are
anchored at a fixed lift of one chord, the one whose lower end is point 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Literal

from .exceptions import ScopeError
from .lens_arith import GridOneSpec, chord_steps, is_primitive

LoopKind = Literal["N", "S"]

#: brute-force oracle budget, 2k + 1 letters
BRUTE_MAX_K = 15


@dataclass(frozen=True)
class StrandPoint:
    index: int
    column: int
    row: int
    crossing: int | None  # 0 for a box-0 basepoint, None for a non-crossing box (k > 1)
    offset: int  # position within its period


@dataclass(frozen=True)
class Chord:
    crossing: int
    upper: int  # crossing point index
    lower: int  # box-0 point index
    steps: int


@dataclass(frozen=True)
class LiftedDiagram:
    spec: GridOneSpec
    points: tuple[StrandPoint, ...]
    chords: tuple[Chord, ...]
    _by_upper: dict[int, Chord] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_upper", {c.upper: c for c in self.chords})

    @property
    def size(self) -> int:
        return len(self.points)

    def chord_at(self, upper: int) -> Chord | None:
        return self._by_upper.get(upper)

    def base_chord(self, crossing: int) -> Chord:
        """The lift of b_crossing whose lower end is point 0 (row 0)."""
        for c in self.chords:
            if c.crossing == crossing and c.lower == 0:
                return c
        raise ValueError(f"no chord b{crossing}")

    def step(self, index: int, direction: int) -> tuple[int, int]:
        """Displacement of one knot step from ``index`` (forward +1, backward -1)."""
        h = self.spec.h
        if direction == 1:
            return (1, 0) if self.points[index].offset < h else (0, -1)
        prev = self.points[(index - 1) % self.size]
        return (-1, 0) if prev.offset < h else (0, 1)

    def torus_points(self) -> set[tuple[int, int, int | None]]:
        return {(pt.column, pt.row, pt.crossing) for pt in self.points}


def _walk_components(spec: GridOneSpec) -> int:
    """Number of components of the lifted knot, by walking periods."""
    p, h, v = spec.p, spec.h, spec.v
    m, x, y = 0, 0, 0
    while True:
        m += 1
        x, y = (x + h) % p, (y - v) % p
        if (x, y) == (0, 0):
            return p // m


def lift_diagram(spec: GridOneSpec) -> LiftedDiagram:
    if not is_primitive(spec) or _walk_components(spec) != 1:
        raise ScopeError(f"{spec.label()} is not primitive; its lift has several components")
    p, h, v, k = spec.p, spec.h, spec.v, spec.k
    n = h + v

    # crossing labels by position in a period: boxes divisible by k, in walk order
    labels: list[int | None] = [0]
    j = 0
    for i in range(1, n):
        box = i if i <= h else h + spec.q * (i - h)
        if box % k == 0:
            j += 1
            labels.append(j)
        else:
            labels.append(None)

    points = []
    zero_at: dict[tuple[int, int], int] = {}
    for idx in range(p * n):
        m, i = divmod(idx, n)
        col = (m * h + min(i, h)) % p
        row = -(m * v + max(0, i - h)) % p
        points.append(StrandPoint(idx, col, row, labels[i], i))
        if i == 0:
            zero_at[(col, row)] = idx

    steps = {c: p // k - chord_steps(spec, c) for c in range(1, j + 1)}
    chords = []
    for pt in points:
        if not pt.crossing:
            continue
        t = steps[pt.crossing]
        lower = zero_at.get(((pt.column - t) % p, (pt.row - t) % p))
        if lower is None:
            raise AssertionError(f"chord b{pt.crossing} from point {pt.index} misses the knot")
        chords.append(Chord(pt.crossing, pt.index, lower, t))
    return LiftedDiagram(spec, tuple(points), tuple(chords))


@dataclass(frozen=True)
class LoopPath:
    kind: LoopKind
    fixed: int
    chords: tuple[Chord, ...]  # traversal order, fixed chord last
    horizontal: int
    vertical: int
    strands: tuple[str, ...]

    @property
    def word(self) -> tuple[str, ...]:
        """Boundary word of the a_fixed summand: the other chords, in order."""
        return tuple(f"b{c.crossing}" for c in self.chords[:-1])

    @property
    def generator(self) -> str:
        return f"a{self.fixed}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "fixed": self.fixed,
            "word": list(self.word),
            "chords": [[c.crossing, c.upper, c.lower] for c in self.chords],
            "horizontal": self.horizontal,
            "vertical": self.vertical,
            "strands": list(self.strands),
        }


def _require_k1(lifted: LiftedDiagram) -> None:
    if lifted.spec.k != 1:
        raise ScopeError("loop search needs k=1")


def _target(kind: LoopKind, p: int) -> tuple[int, int]:
    return (0, -p) if kind == "N" else (-p, 0)


def _pruned(kind: LoopKind, dx: int, dy: int, p: int) -> bool:
    # the monotone coordinate has overshot its net displacement
    return dy < -p if kind == "N" else dx < -p


class _PathCounter:
    """Memoized number of ways to close a loop from a walk state.

    A state ``(i, x, y)`` means the walk has just reached point ``i`` with
    displacement (x, y) and is about to take the next knot step.  Vertex
    simplicity is not imposed; the monotone displacement bound alone keeps
    the search finite.
    """

    def __init__(self, lifted: LiftedDiagram, kind: LoopKind, base_crossing: int, allowed: frozenset[int] | None = None):
        _require_k1(lifted)
        self.lifted = lifted
        self.kind = kind
        self.start = lifted.base_chord(base_crossing).upper
        self.direction = 1 if kind == "N" else -1
        self.target = _target(kind, lifted.spec.p)
        self.allowed = allowed
        self.memo: dict[tuple[int, int, int], int] = {}

    def _expand(self, state: tuple[int, int, int]) -> tuple[int, list[tuple[int, int, int]]]:
        lifted = self.lifted
        i, x, y = state
        dx, dy = lifted.step(i, self.direction)
        x, y, i = x + dx, y + dy, (i + self.direction) % lifted.size
        if i == self.start:
            t = lifted.chord_at(i).steps  # type: ignore[union-attr]
            return (1 if (x - t, y - t) == self.target else 0), []
        if i == 0 or _pruned(self.kind, x, y, lifted.spec.p):
            return 0, []
        succ = [(i, x, y)]
        chord = lifted.chord_at(i)
        if chord is not None and chord.lower != 0 and (self.allowed is None or chord.crossing in self.allowed):
            succ.append((chord.lower, x - chord.steps, y - chord.steps))
        return 0, succ

    def __call__(self, state: tuple[int, int, int]) -> int:
        memo = self.memo
        stack = [state]
        while stack:
            top = stack[-1]
            if top in memo:
                stack.pop()
                continue
            base, succ = self._expand(top)
            missing = [s for s in succ if s not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[top] = base + sum(memo[s] for s in succ)
            stack.pop()
        return memo[state]


def enumerate_loops(lifted: LiftedDiagram, kind: LoopKind, base_crossing: int) -> list[LoopPath]:
    """All simple loops of the given kind through the fixed lift of b_base.

    Loops are built explicitly with a visited set; branches with no
    completion at all (by the path counter) are skipped.
    """
    _require_k1(lifted)
    p, h, size = lifted.spec.p, lifted.spec.h, lifted.size
    points = lifted.points
    start = lifted.base_chord(base_crossing).upper
    direction = 1 if kind == "N" else -1
    target = _target(kind, p)
    viable = _PathCounter(lifted, kind, base_crossing)
    found: list[LoopPath] = []

    def strand(x: int, pt: StrandPoint) -> str:
        return "A" if (x - min(pt.offset, h)) % 2 == 0 else "B"

    def walk(cur: int, x: int, y: int, visited: set[int], taken: list[Chord], labels: list[str], hor: int, ver: int) -> None:
        i = cur
        visited = set(visited)
        while True:
            dx, dy = lifted.step(i, direction)
            x, y, hor, ver = x + dx, y + dy, hor + abs(dx), ver + abs(dy)
            i = (i + direction) % size
            if i == start:
                chord = lifted.chord_at(i)
                assert chord is not None
                if (x - chord.steps, y - chord.steps) == target:
                    found.append(
                        LoopPath(kind, base_crossing, tuple(taken) + (chord,), hor, ver, tuple(labels) + (strand(x, points[i]),))
                    )
                return
            if i in visited or _pruned(kind, x, y, p):
                return
            visited.add(i)
            chord = lifted.chord_at(i)
            if chord is not None and chord.lower not in visited:
                jump = (chord.lower, x - chord.steps, y - chord.steps)
                if viable(jump):
                    walk(*jump, visited | {chord.lower}, taken + [chord], labels + [strand(x, points[i])], hor, ver)
            if not viable((i, x, y)):
                return

    if viable((0, 0, 0)):
        walk(0, 0, 0, {0}, [], [], 0, 0)
    return found


def loops_for_generator(lifted: LiftedDiagram, i: int) -> list[LoopPath]:
    """N- and S-loops through the fixed b_i; each is one summand of the differential of a_i."""
    return enumerate_loops(lifted, "N", i) + enumerate_loops(lifted, "S", i)


def count_loops(
    lifted: LiftedDiagram,
    kind: LoopKind,
    base_crossing: int,
    allowed: frozenset[int] | None = None,
) -> int:
    """Number of loops through the fixed b_base, by memoized path counting.

    Only chords whose crossing lies in ``allowed`` may be taken (all when
    None).
    """
    return _PathCounter(lifted, kind, base_crossing, allowed)((0, 0, 0))


def reflect_word(word: tuple[str, ...], spec: GridOneSpec) -> tuple[str, ...]:
    """Mirror a word across the fixed Reeb orbit: crossing j <-> n - j."""
    n = spec.segments
    return tuple(f"b{n - int(s[1:])}" for s in word)


# --- switching-chord counts for the K(p, p-1, 2) family ---------------------


@dataclass(frozen=True)
class SwitchBound:
    chords: int
    k: int


def max_switch_chords(p: int, kind: LoopKind) -> SwitchBound:
    """Most b_2 chords a loop through b_N can use: 2k+1 (S) or 2k (N)."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be odd and at least 3, got {p}")
    half = (p - 1) // 2
    if kind == "S":
        chords = half if half % 2 else half - 1
        return SwitchBound(chords, (chords - 1) // 2)
    chords = half if half % 2 == 0 else half - 1
    return SwitchBound(chords, chords // 2)


def family_chords(spec: GridOneSpec) -> tuple[int, int]:
    """(N, S) crossing indices for K(p, p-1, 2): the pair sharing a box."""
    if spec.q != spec.p - 1 or spec.h != 2:
        raise ScopeError("defined only for K(p, p-1, 2)")
    north = spec.p % 4
    return north, 4 - north


@dataclass(frozen=True)
class LoopCount:
    k: int
    count: int

    @property
    def parity(self) -> int:
        return self.count % 2


@lru_cache(maxsize=None)
def _s(k: int) -> int:
    return k + 1 + sum(i * _s(k - i) for i in range(1, k + 1))


@lru_cache(maxsize=None)
def _n(k: int) -> int:
    return 1 + sum(i * _n(k - i) for i in range(1, k + 1))


def count_S(k: int) -> LoopCount:
    if k < 0:
        raise ValueError("k must be nonnegative")
    for i in range(k):  # fill the cache bottom-up to keep recursion shallow
        _s(i)
    return LoopCount(k, _s(k))


def count_N(k: int) -> LoopCount:
    if k < 0:
        raise ValueError("k must be nonnegative")
    for i in range(k):
        _n(i)
    return LoopCount(k, _n(k))


def alternating_subsequences(k: int):
    """Yield every alternating subsequence of ABAB...A (2k+1 letters) that
    starts with A, as a tuple of positions; the empty one comes first."""
    length = 2 * k + 1
    yield ()
    stack: list[tuple[int, ...]] = [(i,) for i in range(length - 1, -1, -2)]  # A positions
    while stack:
        seq = stack.pop()
        yield seq
        last = seq[-1]
        # next letter must differ: positions of opposite parity after ``last``
        stack.extend(seq + (i,) for i in range(last + 1, length, 2))


def count_subseq_bruteforce(k: int, parity: Literal["odd", "even"]) -> int:
    if not 0 <= k <= BRUTE_MAX_K:
        raise ValueError(f"k={k} beyond the enumeration budget (0..{BRUTE_MAX_K})")
    want = 1 if parity == "odd" else 0
    return sum(1 for s in alternating_subsequences(k) if len(s) % 2 == want)


def loop_counts_report(lifted: LiftedDiagram) -> list[dict[str, Any]]:
    """N and S loop counts through each fixed chord, via both routes."""
    rows = []
    for c in sorted({ch.crossing for ch in lifted.chords}):
        rows.append(
            {
                "crossing": c,
                "N": count_loops(lifted, "N", c),
                "S": count_loops(lifted, "S", c),
            }
        )
    return rows

