import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from finsimp import (
    FinMap,
    MapString,
    canonicalize,
    core,
    defect,
    degeneracy,
    face,
    saturate,
)
from finsimp.errors import InputError
from finsimp.finmap import identity
from finsimp.strings import (
    StringComplex,
    enumerate_nondegenerate,
    is_canonical,
    relabel,
    string_from_json,
)

from helpers import are_isomorphic, are_isomorphic_exhaustive, random_relabeling, random_string, raw_strings


def test_face_inner_composes():
    z = MapString(2, (FinMap(1, 2, (1,)), FinMap(2, 1, (0, 0))))
    assert face(z, 1) == MapString(2, (FinMap(2, 2, (1, 1)),))


def test_face_zero_drops_bottom():
    for c0, c1 in [(1, 2), (3, 1)]:
        f = FinMap(c1, c0, tuple(0 for _ in range(c1)))
        z = MapString(c0, (f,))
        assert face(z, 0) == MapString(c1)
        assert face(z, 1) == MapString(c0)


def test_face_index_errors():
    z = MapString(2, (FinMap(1, 2, (0,)),))
    with pytest.raises(InputError):
        face(z, 2)
    with pytest.raises(InputError):
        face(MapString(3), 0)


def test_degeneracy_inserts_identity():
    z = MapString(3)
    assert degeneracy(z, 0) == MapString(3, (identity(3),))
    w = MapString(2, (FinMap(1, 2, (0,)),))
    assert degeneracy(w, 1).maps == (FinMap(1, 2, (0,)), identity(1))
    assert not degeneracy(w, 0).is_nondegenerate()


def _check_simplicial_identities(z):
    t = z.degree
    if t >= 2:
        for j in range(t + 1):
            for i in range(j):
                assert face(face(z, j), i) == face(face(z, i), j - 1)
    for j in range(t + 1):
        for i in range(t + 1):
            sz = degeneracy(z, j)
            if i < j:
                assert face(sz, i) == degeneracy(face(z, i), j - 1)
            elif i in (j, j + 1):
                assert face(sz, i) == z
            elif i > j + 1 and t >= 1:
                assert face(sz, i) == degeneracy(face(z, i - 1), j)
    for j in range(t + 1):
        for i in range(j + 1):
            assert degeneracy(degeneracy(z, j), i) == degeneracy(degeneracy(z, i), j + 1)


def test_simplicial_identities_exhaustive_small():
    for z in raw_strings(2, 3):
        _check_simplicial_identities(z)
    for z in raw_strings(3, 2):
        _check_simplicial_identities(z)


def test_simplicial_identities_random():
    rng = random.Random(2024)
    for _ in range(500):
        _check_simplicial_identities(random_string(rng, max_degree=6, max_card=4))


def test_canonicalize_idempotent_and_invariant():
    rng = random.Random(11)
    for _ in range(300):
        z = random_string(rng)
        zc = canonicalize(z)
        assert canonicalize(zc) == zc
        assert zc.cards() == z.cards()
        assert defect(zc) == defect(z)


def test_canonicalize_equal_on_relabelings():
    rng = random.Random(5)
    for _ in range(200):
        z = random_string(rng, max_degree=5, max_card=4)
        w = relabel(z, random_relabeling(rng, z))
        assert canonicalize(w) == canonicalize(z)


def test_canonicalize_separates_shapes():
    a = canonicalize(MapString(2, (FinMap(2, 2, (0, 0)),)))
    b = canonicalize(MapString(2, (FinMap(2, 2, (0, 1)),)))
    assert a != b
    assert not b.is_nondegenerate() and a.is_nondegenerate()


def test_canonical_form_is_in_the_class():
    # frontier checker is itself anchored against full brute force first
    rng = random.Random(3)
    for _ in range(60):
        z = random_string(rng, max_degree=3, max_card=2)
        w = relabel(z, random_relabeling(rng, z))
        assert are_isomorphic_exhaustive(z, w) == are_isomorphic(z, w)
    for z in raw_strings(2, 3):
        assert are_isomorphic(z, canonicalize(z))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_canonicalize_commutes_with_face(seed):
    rng = random.Random(seed)
    z = random_string(rng, max_degree=4, max_card=3)
    if z.degree == 0:
        return
    i = rng.randrange(z.degree + 1)
    assert canonicalize(face(canonicalize(z), i)) == canonicalize(face(z, i))


def test_core_of_nondegenerate():
    z = canonicalize(MapString(2, (FinMap(1, 2, (0,)), FinMap(2, 1, (0, 0)))))
    assert core(z) == (z, ())


def test_core_strips_degeneracies():
    rng = random.Random(23)
    for _ in range(200):
        z = random_string(rng, max_degree=4, max_card=3)
        base, _ = core(z)
        w = z
        for _ in range(rng.randint(1, 3)):
            w = degeneracy(w, rng.randrange(w.degree + 1))
        assert core(w)[0] == base


def test_core_round_trip():
    rng = random.Random(29)
    for _ in range(200):
        z = random_string(rng, max_degree=4, max_card=3)
        base, indices = core(z)
        w = base
        for i in reversed(indices):
            w = degeneracy(w, i)
        assert canonicalize(w) == canonicalize(z)
        assert base.is_nondegenerate()


def test_defect_degree_zero():
    assert defect(MapString(3)) == 3


def test_defect_injections_then_surjections_profile():
    # two maps, top injective, bottom surjective, middle set of size 4
    z = MapString(2, (FinMap(4, 2, (0, 0, 1, 1)), FinMap(3, 4, (0, 1, 2))))
    assert z.cards() == (2, 4, 3)
    assert defect(z) == 4  # the middle cardinality


def test_defect_never_increases_under_faces():
    for level in enumerate_nondegenerate(3, 4):
        for z in level:
            for i in range(z.degree + 1):
                if z.degree >= 1:
                    assert defect(face(z, i)) <= defect(z)
                assert defect(degeneracy(z, i)) == defect(z)


def test_defect_at_least_max_card():
    for level in enumerate_nondegenerate(4, 4):
        for z in level:
            assert defect(z) >= max(z.cards())


def test_saturate_examples():
    z = MapString(2, (FinMap(2, 2, (1, 0)),))
    e = saturate(z)
    assert e.degree == 2
    assert core(e)[0].degree == 0
    z2 = MapString(1, (FinMap(3, 1, (0, 0, 0)),))
    e2 = saturate(z2)
    assert defect(e2) == defect(z2)
    assert e2.maps[0].is_bijective  # the mono factor of a surjection
    with pytest.raises(InputError):
        saturate(MapString(2))


def test_saturate_preserves_defect_exhaustive():
    for level in enumerate_nondegenerate(3, 3):
        for z in level:
            if z.degree >= 1:
                e = saturate(z)
                assert defect(e) == defect(z)
                for k, f in enumerate(z.maps):
                    # the face composing each factor pair restores the map
                    assert face(e, 2 * k + 1).maps[2 * k] == f


def test_string_complex_closure_and_contains():
    edge = MapString(2, (FinMap(2, 2, (0, 0)),))
    C = StringComplex.closure([edge])
    assert len(C) == 2
    assert C.contains(degeneracy(edge, 0))
    assert C.is_face_closed()
    assert not C.contains(MapString(1))


def test_string_from_json_diagnostics():
    with pytest.raises(InputError) as exc:
        string_from_json({"card0": 2, "maps": [{"src": 1, "dst": 3, "img": [0]}]})
    assert "maps[0]" in str(exc.value)


def test_is_canonical():
    z = MapString(2, (FinMap(1, 2, (1,)),))
    assert not is_canonical(z)
    assert is_canonical(canonicalize(z))


def test_complex_json_ordering_contract():
    from finsimp import defect_subcomplex
    from finsimp.strings import serialize, string_from_json

    C = defect_subcomplex(2)
    listed = C.to_json()
    keys = [
        (len(obj["maps"]), serialize(string_from_json({k: v for k, v in obj.items() if k != "canonical"})))
        for obj in listed
    ]
    assert keys == sorted(keys)
