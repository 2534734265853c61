"""Composable strings of finite-set maps, treated as simplices.

A degree-``t`` string is ``S_0 <- S_1 <- ... <- S_t`` with ``maps[i-1]``
the map ``S_i -> S_{i-1}``.  Face operators compose adjacent maps (or drop
an end), degeneracies insert identities, and two strings are regarded as
equal when they differ by levelwise bijections.  ``canonicalize`` picks the
lexicographically minimal representative of that equivalence class, which
makes string sets hashable and output byte-stable.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import InputError
from .finmap import FinMap, compose, epi_mono_factor, identity
from .finmap import from_json as finmap_from_json


@dataclass(frozen=True, slots=True)
class MapString:
    """A string of composable maps; ``card0`` is the cardinality of ``S_0``."""

    card0: int
    maps: tuple[FinMap, ...] = ()

    def __post_init__(self):
        if self.card0 < 0:
            raise InputError(f"negative card0: {self.card0}")
        if not isinstance(self.maps, tuple):
            object.__setattr__(self, "maps", tuple(self.maps))
        prev = self.card0
        for k, f in enumerate(self.maps):
            if f.dst != prev:
                raise InputError(f"maps[{k}]: dst={f.dst} does not match previous cardinality {prev}")
            prev = f.src

    @property
    def degree(self) -> int:
        return len(self.maps)

    def cards(self) -> tuple[int, ...]:
        """Cardinalities ``(|S_0|, ..., |S_t|)``."""
        return (self.card0,) + tuple(f.src for f in self.maps)

    def is_nondegenerate(self) -> bool:
        """No bijective map anywhere; degeneracies always insert bijections."""
        return all(not f.is_bijective for f in self.maps)

    def sort_key(self) -> tuple:
        return (self.degree, serialize(self))

    def to_json(self, canonical: bool | None = None) -> dict:
        obj = {"card0": self.card0, "maps": [f.to_json() for f in self.maps]}
        if canonical is not None:
            obj["canonical"] = canonical
        return obj


def serialize(z: MapString) -> str:
    """Compact deterministic JSON form, used as the tie-break sort key."""
    return json.dumps(z.to_json(), sort_keys=True, separators=(",", ":"))


def face(z: MapString, i: int) -> MapString:
    """Drop level ``i``: compose the two adjacent maps, or forget an end."""
    t = z.degree
    if t < 1:
        raise InputError("face of a degree-0 string")
    if not 0 <= i <= t:
        raise InputError(f"face index {i} out of range [0, {t}]")
    if i == 0:
        return MapString(z.maps[0].src, z.maps[1:])
    if i == t:
        return MapString(z.card0, z.maps[:-1])
    merged = compose(z.maps[i - 1], z.maps[i])
    return MapString(z.card0, z.maps[: i - 1] + (merged,) + z.maps[i + 1 :])


def degeneracy(z: MapString, i: int) -> MapString:
    """Repeat level ``i`` by inserting an identity map."""
    t = z.degree
    if not 0 <= i <= t:
        raise InputError(f"degeneracy index {i} out of range [0, {t}]")
    c = z.cards()[i]
    return MapString(z.card0, z.maps[:i] + (identity(c),) + z.maps[i:])


def defect(z: MapString) -> int:
    """``sum |S_i| - sum |im(maps[i])|``; never increases under faces."""
    return sum(z.cards()) - sum(len(set(f.img)) for f in z.maps)


def saturate(z: MapString) -> MapString:
    """Factor every map into surjection-then-inclusion, doubling the degree.

    The pair replacing ``f`` is ``(mono, epi)`` in string order, so the face
    composing them recovers ``f``; the defect is unchanged.
    """
    if z.degree < 1:
        raise InputError("saturate needs degree >= 1")
    out = []
    for f in z.maps:
        epi, mono = epi_mono_factor(f)
        out.append(mono)
        out.append(epi)
    return MapString(z.card0, tuple(out))


@lru_cache(maxsize=None)
def _perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def _inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for k, v in enumerate(p):
        inv[v] = k
    return tuple(inv)


def canonicalize(z: MapString) -> MapString:
    """Lexicographically minimal relabeling of ``z``.

    Minimizes the concatenation ``img(maps[0]) || img(maps[1]) || ...`` over
    all tuples of levelwise bijections.  Block ``k`` depends only on the
    bijections at levels ``k`` and ``k+1``, so a frontier of optimal
    level-``k`` bijections is enough state; the frontier is deduplicated at
    every level, which keeps the sweep polynomial at desk-scale
    cardinalities.  The result is a member of the input's equivalence class,
    so equal canonical forms are equivalent strings by construction.
    """
    if z.degree == 0:
        return z
    cards = z.cards()
    frontier = set(_perms(cards[0]))
    blocks: list[tuple[int, ...]] = []
    for f in z.maps:
        best = None
        winners = set()
        # one source-sorted image per phi_src; distinct pres share work
        pres: dict[tuple[int, ...], list] = {}
        for phi_src in _perms(f.src):
            pres.setdefault(tuple(map(f.img.__getitem__, _inverse(phi_src))), []).append(phi_src)
        for pre, sources in pres.items():
            for phi_dst in frontier:
                block = tuple(map(phi_dst.__getitem__, pre))
                if best is None or block < best:
                    best = block
                    winners = set(sources)
                elif block == best:
                    winners.update(sources)
        frontier = winners
        blocks.append(best)
    maps = tuple(
        FinMap(f.src, f.dst, blk) for f, blk in zip(z.maps, blocks)
    )
    return MapString(z.card0, maps)


def is_canonical(z: MapString) -> bool:
    return canonicalize(z) == z


def relabel(z: MapString, bijections) -> MapString:
    """Apply one bijection per level; used by tests and the core builder."""
    bijections = [tuple(b) for b in bijections]
    if len(bijections) != z.degree + 1:
        raise InputError("need one bijection per level")
    maps = []
    for k, f in enumerate(z.maps):
        phi_dst, phi_src = bijections[k], bijections[k + 1]
        inv = _inverse(phi_src)
        maps.append(FinMap(f.src, f.dst, tuple(phi_dst[f.img[inv[j]]] for j in range(f.src))))
    return MapString(z.card0, tuple(maps))


def core(z: MapString) -> tuple[MapString, tuple[int, ...]]:
    """Strip bijective maps, yielding the nondegenerate base in canonical form.

    Returns ``(base, indices)`` where applying ``degeneracy(.., i)`` for
    ``i`` in reversed ``indices`` rebuilds a string equivalent to ``z``.
    """
    w = z
    indices = []
    while True:
        pos = next((k for k, f in enumerate(w.maps) if f.is_bijective), None)
        if pos is None:
            break
        indices.append(pos)
        w = face(w, pos + 1)
    return canonicalize(w), tuple(indices)


def string_from_json(obj, where: str = "string") -> MapString:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object, got {type(obj).__name__}")
    if "card0" not in obj:
        raise InputError(f"{where}.card0: missing")
    card0 = obj["card0"]
    if not isinstance(card0, int) or isinstance(card0, bool):
        raise InputError(f"{where}.card0: expected an integer")
    maps_obj = obj.get("maps", [])
    if not isinstance(maps_obj, list):
        raise InputError(f"{where}.maps: expected a list")
    maps = tuple(finmap_from_json(m, f"{where}.maps[{k}]") for k, m in enumerate(maps_obj))
    try:
        return MapString(card0, maps)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


@dataclass(frozen=True)
class StringComplex:
    """A face-closed set of canonical nondegenerate strings.

    Degenerate strings are never stored; membership of an arbitrary string
    is decided through its core.  This keeps finite data for objects that
    would be infinite as raw simplex sets.
    """

    members: frozenset[MapString] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))

    @staticmethod
    def closure(seed) -> "StringComplex":
        """Face-closure of arbitrary strings (canonicalized via cores)."""
        todo = [core(z)[0] for z in seed]
        out: set[MapString] = set()
        while todo:
            z = todo.pop()
            if z in out:
                continue
            out.add(z)
            for i in range(z.degree + 1):
                if z.degree >= 1:
                    todo.append(core(face(z, i))[0])
        return StringComplex(frozenset(out))

    def contains(self, z: MapString) -> bool:
        return core(z)[0] in self.members

    def is_face_closed(self) -> bool:
        return all(
            core(face(z, i))[0] in self.members
            for z in self.members
            if z.degree >= 1
            for i in range(z.degree + 1)
        )

    def union(self, other: "StringComplex") -> "StringComplex":
        return StringComplex(self.members | other.members)

    def issubset(self, other: "StringComplex") -> bool:
        return self.members <= other.members

    def max_degree(self) -> int:
        return max((z.degree for z in self.members), default=-1)

    def max_card(self) -> int:
        return max((max(z.cards()) for z in self.members), default=0)

    def sorted_members(self) -> list[MapString]:
        return sorted(self.members, key=MapString.sort_key)

    def to_json(self) -> list:
        return [z.to_json(canonical=True) for z in self.sorted_members()]

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return isinstance(other, StringComplex) and self.members == other.members

    def __hash__(self):
        return hash(self.members)


def _sorted_img_tuples(src: int, dst: int):
    """Image tuples that are weakly increasing: one per source-relabel orbit."""
    yield from itertools.combinations_with_replacement(range(dst), src)


def extension_maps(last_card: int, new_card: int, skip_bijective: bool = True):
    """Non-bijective maps ``new_card -> last_card`` up to source relabeling."""
    ident = tuple(range(last_card))
    for img in _sorted_img_tuples(new_card, last_card):
        if skip_bijective and new_card == last_card and img == ident:
            continue
        yield FinMap(new_card, last_card, img)


def enumerate_nondegenerate(
    max_card: int,
    max_degree: int,
    allow_empty: bool = False,
    max_defect: int | None = None,
) -> list[list[MapString]]:
    """Canonical nondegenerate strings, grouped by degree.

    Extends canonical representatives one map at a time; source-sorted image
    tuples cover every extension up to relabeling of the new level, and a
    canonical pass after each step removes the remaining symmetry.  With
    ``max_defect`` set, branches whose defect exceeds the bound are pruned
    (appending to a string never lowers its defect).
    """
    lo = 0 if allow_empty else 1
    level: list[MapString] = []
    for c in range(lo, max_card + 1):
        z = MapString(c)
        if max_defect is None or defect(z) <= max_defect:
            level.append(z)
    level.sort(key=MapString.sort_key)
    out = [level]
    for _ in range(max_degree):
        seen: set[MapString] = set()
        for z in level:
            last = z.cards()[-1]
            budget = None if max_defect is None else max_defect - defect(z)
            for new_card in range(lo, max_card + 1):
                for f in extension_maps(last, new_card):
                    if budget is not None and new_card - len(set(f.img)) > budget:
                        continue
                    seen.add(canonicalize(MapString(z.card0, z.maps + (f,))))
        level = sorted(seen, key=MapString.sort_key)
        out.append(level)
        if not level:
            break
    return out
