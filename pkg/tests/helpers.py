"""Shared test utilities: raw enumerations and an independent iso checker."""

import itertools
import random

from finsimp import FinMap, MapString
from finsimp.finmap import all_maps


def raw_strings(max_card, max_degree, allow_empty=False, nondegenerate_only=False):
    """Every string with the given bounds, not up to equivalence."""
    lo = 0 if allow_empty else 1
    level = [MapString(c) for c in range(lo, max_card + 1)]
    yield from level
    for _ in range(max_degree):
        new = []
        for z in level:
            last = z.cards()[-1]
            for c in range(lo, max_card + 1):
                for f in all_maps(c, last):
                    if nondegenerate_only and f.is_bijective:
                        continue
                    new.append(MapString(z.card0, z.maps + (f,)))
        yield from new
        level = new


def are_isomorphic(x: MapString, y: MapString) -> bool:
    """Levelwise-bijection equivalence, decided by a frontier sweep.

    Independent of the canonicalizer: it propagates the set of admissible
    bijections per level instead of minimizing anything.
    """
    if x.cards() != y.cards():
        return False
    frontier = set(itertools.permutations(range(x.card0)))
    for fx, fy in zip(x.maps, y.maps):
        nxt = set()
        for phi_src in itertools.permutations(range(fx.src)):
            relabeled = tuple(fx.img[phi_src.index(k)] for k in range(fx.src))
            for phi_dst in frontier:
                if tuple(phi_dst[v] for v in relabeled) == fy.img:
                    nxt.add(phi_src)
                    break
        if not nxt:
            return False
        frontier = nxt
    return True


def are_isomorphic_exhaustive(x: MapString, y: MapString) -> bool:
    """Ground-truth equivalence by trying every tuple of bijections."""
    if x.cards() != y.cards():
        return False
    from finsimp.strings import relabel

    pools = [list(itertools.permutations(range(c))) for c in x.cards()]
    return any(relabel(x, phis) == y for phis in itertools.product(*pools))


def random_string(rng: random.Random, max_degree=5, max_card=4, allow_empty=False) -> MapString:
    lo = 0 if allow_empty else 1
    degree = rng.randint(0, max_degree)
    cards = [rng.randint(lo, max_card) for _ in range(degree + 1)]
    maps = []
    for k in range(degree):
        src, dst = cards[k + 1], cards[k]
        if dst == 0 and src > 0:
            src = cards[k + 1] = 0
        maps.append(FinMap(src, dst, tuple(rng.randrange(dst) for _ in range(src))))
    return MapString(cards[0], tuple(maps))


def random_relabeling(rng: random.Random, z: MapString):
    out = []
    for c in z.cards():
        phi = list(range(c))
        rng.shuffle(phi)
        out.append(tuple(phi))
    return out
