"""Maps between standard finite sets.

The standard set of cardinality ``n`` is ``{0, ..., n-1}``; cardinality 0
(the empty set) is permitted.  A map is stored by its image array, so all
operations are pure integer bookkeeping.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InputError


class MapClass(enum.Enum):
    BIJECTIVE = "bijective"
    PROPER_INJECTIVE = "proper_injective"
    PROPER_SURJECTIVE = "proper_surjective"
    NEITHER = "neither"


@dataclass(frozen=True, slots=True)
class FinMap:
    """A map ``{0,..,src-1} -> {0,..,dst-1}`` given by its image tuple."""

    src: int
    dst: int
    img: tuple[int, ...]

    def __post_init__(self):
        if self.src < 0 or self.dst < 0:
            raise InputError(f"negative cardinality: src={self.src}, dst={self.dst}")
        if not isinstance(self.img, tuple):
            object.__setattr__(self, "img", tuple(self.img))
        if len(self.img) != self.src:
            raise InputError(f"img has length {len(self.img)}, expected src={self.src}")
        for k, v in enumerate(self.img):
            if not 0 <= v < self.dst:
                raise InputError(f"img[{k}]={v} out of range [0, {self.dst})")

    def __call__(self, x: int) -> int:
        return self.img[x]

    @property
    def is_injective(self) -> bool:
        return len(set(self.img)) == self.src

    @property
    def is_surjective(self) -> bool:
        return len(set(self.img)) == self.dst

    @property
    def is_bijective(self) -> bool:
        return self.src == self.dst and self.is_injective

    def image(self) -> tuple[int, ...]:
        """Image of the map as an increasing tuple."""
        return tuple(sorted(set(self.img)))

    def to_json(self) -> dict:
        return {"src": self.src, "dst": self.dst, "img": list(self.img)}


def identity(n: int) -> FinMap:
    return FinMap(n, n, tuple(range(n)))


def classify(f: FinMap) -> MapClass:
    """Classify by the injective/surjective dichotomy."""
    inj, sur = f.is_injective, f.is_surjective
    if inj and sur:
        return MapClass.BIJECTIVE
    if inj:
        return MapClass.PROPER_INJECTIVE
    if sur:
        return MapClass.PROPER_SURJECTIVE
    return MapClass.NEITHER


def compose(g: FinMap, f: FinMap) -> FinMap:
    """The composite ``g after f``; requires ``f.dst == g.src``."""
    if f.dst != g.src:
        raise InputError(f"not composable: f.dst={f.dst} != g.src={g.src}")
    return FinMap(f.src, g.dst, tuple(g.img[v] for v in f.img))


def epi_mono_factor(f: FinMap) -> tuple[FinMap, FinMap]:
    """Factor ``f`` as a surjection onto its image followed by an injection.

    The injection enumerates the image in increasing order, which makes the
    factorization canonical: it is the unique one with an order-preserving
    second factor.  Returns ``(epi, mono)`` with ``compose(mono, epi) == f``.
    """
    image = f.image()
    rank = {v: k for k, v in enumerate(image)}
    epi = FinMap(f.src, len(image), tuple(rank[v] for v in f.img))
    mono = FinMap(len(image), f.dst, image)
    return epi, mono


def all_maps(src: int, dst: int):
    """All maps ``src -> dst`` (empty when dst == 0 < src)."""
    if src == 0:
        yield FinMap(0, dst, ())
        return
    if dst == 0:
        return
    idx = [0] * src
    while True:
        yield FinMap(src, dst, tuple(idx))
        k = src - 1
        while k >= 0 and idx[k] == dst - 1:
            idx[k] = 0
            k -= 1
        if k < 0:
            return
        idx[k] += 1


def from_json(obj, where: str = "map") -> FinMap:
    """Parse a FinMap from ``{"src":…, "dst":…, "img":[…]}``, naming bad fields."""
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object, got {type(obj).__name__}")
    for field in ("src", "dst", "img"):
        if field not in obj:
            raise InputError(f"{where}.{field}: missing")
    src, dst, img = obj["src"], obj["dst"], obj["img"]
    if not isinstance(src, int) or isinstance(src, bool):
        raise InputError(f"{where}.src: expected an integer")
    if not isinstance(dst, int) or isinstance(dst, bool):
        raise InputError(f"{where}.dst: expected an integer")
    if not isinstance(img, list) or any(not isinstance(v, int) or isinstance(v, bool) for v in img):
        raise InputError(f"{where}.img: expected a list of integers")
    try:
        return FinMap(src, dst, tuple(img))
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None
