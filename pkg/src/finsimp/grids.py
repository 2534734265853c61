"""Rectangular grids of finite sets with injective rows and surjective columns.

Cell ``(i, j)`` sits in column ``i`` (0..r, left to right) and row ``j``
(0..s, bottom to top).  Horizontal arrows ``(i+1,j) -> (i,j)`` are
injective, vertical arrows ``(i,j) -> (i,j-1)`` are surjective, and every
square commutes.  A grid is determined up to unique levelwise bijection by
its corner data (top row plus left column), and restricting along monotone
paths turns grids into strings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DualConstructionError, InputError, StaircaseDefectError
from .finmap import FinMap, MapClass, classify, compose, identity
from .finmap import from_json as finmap_from_json
from .strings import (
    MapString,
    StringComplex,
    canonicalize,
    core,
    defect,
    enumerate_nondegenerate,
    extension_maps,
    saturate,
    serialize,
)


@dataclass(frozen=True)
class GridDiagram:
    r: int
    s: int
    cards: tuple[tuple[int, ...], ...]   # cards[i][j]
    horiz: tuple[tuple[FinMap, ...], ...]  # horiz[i][j]: (i+1,j) -> (i,j)
    vert: tuple[tuple[FinMap, ...], ...]   # vert[i][j]: (i,j+1) -> (i,j)

    def card(self, i: int, j: int) -> int:
        return self.cards[i][j]

    def horiz_map(self, i: int, j: int) -> FinMap:
        """The map ``(i+1,j) -> (i,j)``."""
        return self.horiz[i][j]

    def vert_map(self, i: int, j: int) -> FinMap:
        """The map ``(i,j+1) -> (i,j)``."""
        return self.vert[i][j]

    def validate(self) -> None:
        if self.r < 0 or self.s < 0:
            raise InputError("negative grid size")
        if len(self.cards) != self.r + 1 or any(len(col) != self.s + 1 for col in self.cards):
            raise InputError("cards must be an (r+1) x (s+1) array")
        if len(self.horiz) != self.r or any(len(col) != self.s + 1 for col in self.horiz):
            raise InputError("horiz must be an r x (s+1) array")
        if len(self.vert) != self.r + 1 or any(len(col) != self.s for col in self.vert):
            raise InputError("vert must be an (r+1) x s array")
        for i in range(self.r):
            for j in range(self.s + 1):
                f = self.horiz_map(i, j)
                if (f.src, f.dst) != (self.card(i + 1, j), self.card(i, j)):
                    raise InputError(f"horiz[{i}][{j}] has wrong endpoints")
                if not f.is_injective:
                    raise InputError(f"horiz[{i}][{j}] is not injective")
        for i in range(self.r + 1):
            for j in range(self.s):
                f = self.vert_map(i, j)
                if (f.src, f.dst) != (self.card(i, j + 1), self.card(i, j)):
                    raise InputError(f"vert[{i}][{j}] has wrong endpoints")
                if not f.is_surjective:
                    raise InputError(f"vert[{i}][{j}] is not surjective")
        for i in range(self.r):
            for j in range(self.s):
                left_then_down = compose(self.vert_map(i, j), self.horiz_map(i, j + 1))
                down_then_left = compose(self.horiz_map(i, j), self.vert_map(i + 1, j))
                if left_then_down != down_then_left:
                    raise InputError(f"square at ({i},{j}) does not commute")

    def arrow(self, src: tuple[int, int], dst: tuple[int, int]) -> FinMap:
        """Composite map from cell ``src`` down-left to cell ``dst``."""
        (i2, j2), (i1, j1) = src, dst
        if not (i1 <= i2 and j1 <= j2):
            raise InputError(f"no arrow from {src} to {dst}")
        f = identity(self.card(i2, j2))
        for i in range(i2 - 1, i1 - 1, -1):
            f = compose(self.horiz_map(i, j2), f)
        for j in range(j2 - 1, j1 - 1, -1):
            f = compose(self.vert_map(i1, j), f)
        return f

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "cards": [list(col) for col in self.cards],
            "horiz": [[f.to_json() for f in col] for col in self.horiz],
            "vert": [[f.to_json() for f in col] for col in self.vert],
        }


@dataclass(frozen=True)
class CornerData:
    """Top row and left column of a grid, sharing the corner set ``(0, s)``.

    ``top[k]`` is the injection ``(k+1, s) -> (k, s)``; ``left[k]`` is the
    surjection ``(0, s-k) -> (0, s-k-1)``, listed from the corner down.
    """

    corner_card: int
    top: tuple[FinMap, ...] = ()
    left: tuple[FinMap, ...] = ()

    @property
    def r(self) -> int:
        return len(self.top)

    @property
    def s(self) -> int:
        return len(self.left)

    def validate(self) -> None:
        prev = self.corner_card
        for k, f in enumerate(self.top):
            if f.dst != prev:
                raise InputError(f"top[{k}]: dst={f.dst}, expected {prev}")
            if not f.is_injective:
                raise InputError(f"top[{k}] is not injective")
            prev = f.src
        prev = self.corner_card
        for k, f in enumerate(self.left):
            if f.src != prev:
                raise InputError(f"left[{k}]: src={f.src}, expected {prev}")
            if not f.is_surjective:
                raise InputError(f"left[{k}] is not surjective")
            prev = f.dst

    def is_nondegenerate(self) -> bool:
        return all(not f.is_bijective for f in self.top + self.left)

    def to_string(self) -> MapString:
        """Read the corner as a single string, column first then row."""
        maps = tuple(reversed(self.left)) + self.top
        card0 = self.left[-1].dst if self.left else self.corner_card
        return MapString(card0, maps)


def corner_from_string(z: MapString, s: int, r: int) -> CornerData:
    """Inverse of :meth:`CornerData.to_string` for an explicit (s, r) split."""
    if z.degree != r + s:
        raise InputError(f"degree {z.degree} does not match r+s={r + s}")
    left = tuple(reversed(z.maps[:s]))
    top = z.maps[s:]
    corner_card = z.cards()[s]
    c = CornerData(corner_card, top, left)
    c.validate()
    return c


def corner_of(grid: GridDiagram) -> CornerData:
    top = tuple(grid.horiz_map(i, grid.s) for i in range(grid.r))
    left = tuple(grid.vert_map(0, j) for j in range(grid.s - 1, -1, -1))
    return CornerData(grid.card(0, grid.s), top, left)


def complete_from_corner(c: CornerData) -> GridDiagram:
    """Fill the grid whose cell ``(i,j)`` is the image of ``(i,s)`` in ``(0,j)``.

    Horizontal maps become inclusions of image subsets (re-indexed along the
    increasing enumeration) and vertical maps are the restricted quotients.
    """
    c.validate()
    r, s = c.r, c.s
    # inc[i]: composite injection (i,s) -> (0,s); quo[j]: composite surjection (0,s) -> (0,j)
    inc = [identity(c.corner_card)]
    for f in c.top:
        inc.append(compose(inc[-1], f))
    quo = [identity(c.corner_card)]
    for f in c.left:
        quo.append(compose(f, quo[-1]))
    quo.reverse()  # quo[j]: (0,s) -> (0,j)
    subsets = [
        [tuple(sorted({quo[j].img[v] for v in inc[i].img})) for j in range(s + 1)]
        for i in range(r + 1)
    ]
    cards = tuple(tuple(len(subsets[i][j]) for j in range(s + 1)) for i in range(r + 1))
    pos = [
        [{v: k for k, v in enumerate(subsets[i][j])} for j in range(s + 1)]
        for i in range(r + 1)
    ]
    horiz = tuple(
        tuple(
            FinMap(
                cards[i + 1][j],
                cards[i][j],
                tuple(pos[i][j][v] for v in subsets[i + 1][j]),
            )
            for j in range(s + 1)
        )
        for i in range(r)
    )
    step = [c.left[s - 1 - j] for j in range(s)]  # step[j]: (0,j+1) -> (0,j) on ambient labels
    vert = tuple(
        tuple(
            FinMap(
                cards[i][j + 1],
                cards[i][j],
                tuple(pos[i][j][step[j].img[v]] for v in subsets[i][j + 1]),
            )
            for j in range(s)
        )
        for i in range(r + 1)
    )
    grid = GridDiagram(r, s, cards, horiz, vert)
    grid.validate()
    return grid


def restrict(grid: GridDiagram, path) -> MapString:
    """The string of composites along a weakly monotone path of cells."""
    path = [tuple(v) for v in path]
    if not path:
        raise InputError("empty path")
    for (i1, j1), (i2, j2) in zip(path, path[1:]):
        if not (i1 <= i2 and j1 <= j2):
            raise InputError(f"path step {(i1, j1)} -> {(i2, j2)} is not monotone")
    for (i, j) in path:
        if not (0 <= i <= grid.r and 0 <= j <= grid.s):
            raise InputError(f"path cell {(i, j)} outside the grid")
    maps = tuple(grid.arrow(b, a) for a, b in zip(path, path[1:]))
    return MapString(grid.card(*path[0]), maps)


def iter_chains(r: int, s: int):
    """Nonempty strictly increasing chains in the cell poset, as tuples."""
    cells = [(i, j) for i in range(r + 1) for j in range(s + 1)]
    out = []

    def extend(chain):
        out.append(tuple(chain))
        last = chain[-1]
        for v in cells:
            if v != last and v[0] >= last[0] and v[1] >= last[1]:
                chain.append(v)
                extend(chain)
                chain.pop()

    for v in cells:
        extend([v])
    return out


def chain_in_boundary(chain, r: int, s: int) -> bool:
    """True when the chain misses a column value or a row value."""
    return {v[0] for v in chain} != set(range(r + 1)) or {v[1] for v in chain} != set(
        range(s + 1)
    )


def image_subset(grid: GridDiagram) -> StringComplex:
    """Cores of all restricted chains; face-closed by construction."""
    members = {core(restrict(grid, ch))[0] for ch in iter_chains(grid.r, grid.s)}
    return StringComplex(frozenset(members))


def boundary_image(grid: GridDiagram) -> StringComplex:
    """Image of the boundary of the cell prism (chains missing a row/column)."""
    members = {
        core(restrict(grid, ch))[0]
        for ch in iter_chains(grid.r, grid.s)
        if chain_in_boundary(ch, grid.r, grid.s)
    }
    return StringComplex(frozenset(members))


def is_saturated(C: StringComplex) -> bool:
    """Closed under factoring every map of every member into epi-mono pairs.

    Degenerate members need no separate check: saturating a degeneracy gives
    a degeneracy of the saturation of its core.
    """
    return all(C.contains(saturate(z)) for z in C.members if z.degree >= 1)


def _corner_strings(max_card: int, allow_empty: bool):
    """Canonical nondegenerate corner strings (surjections then injections).

    Cardinalities move strictly along proper maps, so both runs terminate
    on their own below ``max_card``.
    """
    lo = 0 if allow_empty else 1
    seen: set[tuple[MapString, int]] = set()
    out = []

    def note(z: MapString, s: int):
        zc = canonicalize(z)
        key = (zc, s)
        if key not in seen:
            seen.add(key)
            out.append((zc, s))

    def grow_top(z: MapString, s: int):
        note(z, s)
        last = z.cards()[-1]
        for new_card in range(lo, last):
            for f in extension_maps(last, new_card):
                if f.is_injective:
                    grow_top(MapString(z.card0, z.maps + (f,)), s)

    def grow_left(z: MapString):
        grow_top(z, z.degree)
        last = z.cards()[-1]
        for new_card in range(last + 1, max_card + 1):
            for f in extension_maps(last, new_card):
                if f.is_surjective:
                    grow_left(MapString(z.card0, z.maps + (f,)))

    for c in range(lo, max_card + 1):
        grow_left(MapString(c))
    return out


def enumerate_corner_grids(max_card: int, allow_empty: bool = False):
    """All grids with nondegenerate corner data and cardinalities <= max_card.

    Returns ``(corner_string, s, r, grid)`` tuples sorted by total degree
    then serialization; one entry per isomorphism class.
    """
    entries = []
    for z, s in _corner_strings(max_card, allow_empty):
        r = z.degree - s
        grid = complete_from_corner(corner_from_string(z, s, r))
        entries.append((z, s, r, grid))
    entries.sort(key=lambda e: (e[0].degree, serialize(e[0]), e[1]))
    return entries


def is_accessible(C: StringComplex) -> bool:
    """True when C is the union of the grid images it contains.

    Candidate grids are bounded by C itself: a grid with nondegenerate
    corner data contains its corner string, a nondegenerate simplex of
    degree r+s, so r+s is at most the top degree of C, and every
    cardinality is at most the defect bound of C's members.
    """
    if not C.members:
        return True
    allow_empty = any(0 in z.cards() for z in C.members)
    max_degree = C.max_degree()
    union: set[MapString] = set()
    for z, s, r, grid in enumerate_corner_grids(C.max_card(), allow_empty):
        if r + s > max_degree:
            continue
        img = image_subset(grid)
        if img.issubset(C):
            union |= img.members
    return union == C.members


def defect_subcomplex(alpha: int, allow_empty: bool = False) -> StringComplex:
    """All canonical nondegenerate strings of defect <= alpha.

    Built two independent ways and compared: once by direct enumeration
    with the defect formula, once as the union of images of all grids with
    cardinalities <= alpha.  Disagreement raises, since it would falsify
    the equivalence the rest of the pipeline relies on.
    """
    if alpha < 1:
        raise InputError("alpha must be >= 1")
    # Degree self-terminates: proper injections strictly shrink cardinality,
    # everything else strictly raises defect.  alpha*(alpha+2) is a safe cap.
    cap = alpha * (alpha + 2) + 1
    by_degree = enumerate_nondegenerate(alpha, cap, allow_empty, max_defect=alpha)
    direct = {z for level in by_degree for z in level}
    assert not by_degree[-1] or len(by_degree) < cap, "degree cap reached"
    union: set[MapString] = set()
    for z, s, r, grid in enumerate_corner_grids(alpha, allow_empty):
        union |= image_subset(grid).members
    if direct != union:
        only_direct = sorted(direct - union, key=MapString.sort_key)
        only_union = sorted(union - direct, key=MapString.sort_key)
        raise DualConstructionError(
            "defect enumeration and grid-image union disagree",
            witness={
                "only_direct": [serialize(z) for z in only_direct[:5]],
                "only_union": [serialize(z) for z in only_union[:5]],
            },
        )
    return StringComplex(frozenset(direct))


def _staircase_cells(T: int):
    cells = {}
    for k in range(T + 1):
        cells[(k, k)] = None
    for k in range(T):
        cells[(k + 1, k)] = None
    return cells


def complete_from_staircase(st: MapString) -> GridDiagram:
    """Complete an alternating string to a full grid along the diagonal.

    The input must alternate proper injections (odd positions) and proper
    surjections (even positions), so its degree is even, say ``2T``.  The
    output is a ``T x T`` grid whose staircase path ``(0,0), (1,0), (1,1),
    ...`` restricts to the input.  Cells left of the staircase are filled so
    that each new square is a strict pullback (the staircase corner becomes
    the preimage of the square's lower-right set); cells right of it are
    images of composites.  The construction is then checked against the
    equal-defect requirement: every ``(T,T)``-shuffle pullback must have the
    same defect as the input.  Inputs whose geometry rules this out make the
    check fail, and the violating shuffles are reported.
    """
    if st.degree % 2 != 0:
        raise InputError("staircase degree must be even")
    T = st.degree // 2
    for k, f in enumerate(st.maps):
        want = MapClass.PROPER_INJECTIVE if k % 2 == 0 else MapClass.PROPER_SURJECTIVE
        if classify(f) is not want:
            raise InputError(f"maps[{k}] must be {want.value}")
    cards: dict[tuple[int, int], int] = {}
    horiz: dict[tuple[int, int], FinMap] = {}  # keyed by target cell (i,j): (i+1,j)->(i,j)
    vert: dict[tuple[int, int], FinMap] = {}   # keyed by target cell (i,j): (i,j+1)->(i,j)
    seq = st.cards()
    for k in range(T + 1):
        cards[(k, k)] = seq[2 * k]
    for k in range(T):
        cards[(k + 1, k)] = seq[2 * k + 1]
        horiz[(k, k)] = st.maps[2 * k]
        vert[(k + 1, k)] = st.maps[2 * k + 1]

    # Right of the staircase: (i,j) with i - j >= 2, by increasing distance.
    # The new cell is the image of the composite through the cell above it.
    for d in range(2, T + 1):
        for j in range(0, T - d + 1):
            i = j + d
            # composite (i, j+1) -> (i-1, j+1) -> (i-1, j)
            g = compose(vert[(i - 1, j)], horiz[(i - 1, j + 1)])
            image = tuple(sorted(set(g.img)))
            rank = {v: k for k, v in enumerate(image)}
            cards[(i, j)] = len(image)
            vert[(i, j)] = FinMap(g.src, len(image), tuple(rank[v] for v in g.img))
            horiz[(i - 1, j)] = FinMap(len(image), cards[(i - 1, j)], image)

    # Left of the staircase: (i,j) with j - i >= 1, by increasing distance.
    # The new cell extends the square below-right of it, adjoining the part
    # of (i,j-1) missed by (i+1,j-1); the finished square is then a strict
    # pullback of its vertical map along its bottom inclusion.
    for d in range(1, T + 1):
        for i in range(0, T - d + 1):
            j = i + d
            tr = cards[(i + 1, j)]
            bl = cards[(i, j - 1)]
            br_incl = horiz[(i, j - 1)]          # (i+1,j-1) -> (i,j-1)
            tr_down = vert[(i + 1, j - 1)]       # (i+1,j) -> (i+1,j-1)
            missing = [v for v in range(bl) if v not in set(br_incl.img)]
            cards[(i, j)] = tr + len(missing)
            horiz[(i, j)] = FinMap(tr, cards[(i, j)], tuple(range(tr)))
            down = [br_incl.img[tr_down.img[k]] for k in range(tr)] + missing
            vert[(i, j - 1)] = FinMap(cards[(i, j)], bl, tuple(down))

    grid = GridDiagram(
        T,
        T,
        tuple(tuple(cards[(i, j)] for j in range(T + 1)) for i in range(T + 1)),
        tuple(tuple(horiz[(i, j)] for j in range(T + 1)) for i in range(T)),
        tuple(tuple(vert[(i, j)] for j in range(T)) for i in range(T + 1)),
    )
    grid.validate()
    stair_path = [(0, 0)]
    for k in range(T):
        stair_path.append((k + 1, k))
        stair_path.append((k + 1, k + 1))
    if restrict(grid, stair_path) != st:
        raise DualConstructionError("staircase restriction does not reproduce the input")

    from .shuffles import enumerate_shuffles  # local import to avoid a cycle

    want = defect(st)
    violations = []
    for sh in enumerate_shuffles(T, T):
        got = defect(restrict(grid, sh.path()))
        if got != want:
            violations.append({"shuffle": sh.word, "defect": got, "expected": want})
    if violations:
        raise StaircaseDefectError(
            "shuffle pullbacks do not all share the staircase defect",
            witness={"staircase": serialize(st), "violations": violations},
        )
    return grid


def grid_from_json(obj, where: str = "grid") -> GridDiagram:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    for name in ("r", "s", "cards", "horiz", "vert"):
        if name not in obj:
            raise InputError(f"{where}.{name}: missing")
    r, s = obj["r"], obj["s"]
    if not isinstance(r, int) or not isinstance(s, int) or isinstance(r, bool) or isinstance(s, bool):
        raise InputError(f"{where}.r / {where}.s: expected integers")

    def int_grid(name, n_i, n_j):
        arr = obj[name]
        if not isinstance(arr, list) or len(arr) != n_i:
            raise InputError(f"{where}.{name}: expected a list of length {n_i}")
        for i, col in enumerate(arr):
            if not isinstance(col, list) or len(col) != n_j:
                raise InputError(f"{where}.{name}[{i}]: expected a list of length {n_j}")
        return arr

    cards_arr = int_grid("cards", r + 1, s + 1)
    for i, col in enumerate(cards_arr):
        for j, v in enumerate(col):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputError(f"{where}.cards[{i}][{j}]: expected a nonnegative integer")
    horiz_arr = int_grid("horiz", r, s + 1) if r else obj["horiz"]
    vert_arr = int_grid("vert", r + 1, s) if s else obj["vert"]
    if r == 0 and horiz_arr != []:
        raise InputError(f"{where}.horiz: expected [] when r=0")
    if s == 0:
        if not isinstance(vert_arr, list) or any(col != [] for col in vert_arr):
            raise InputError(f"{where}.vert: expected empty columns when s=0")
    horiz = tuple(
        tuple(finmap_from_json(m, f"{where}.horiz[{i}][{j}]") for j, m in enumerate(col))
        for i, col in enumerate(horiz_arr)
    )
    vert = tuple(
        tuple(finmap_from_json(m, f"{where}.vert[{i}][{j}]") for j, m in enumerate(col))
        for i, col in enumerate(vert_arr)
    )
    grid = GridDiagram(r, s, tuple(tuple(col) for col in cards_arr), horiz, vert)
    try:
        grid.validate()
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None
    return grid
