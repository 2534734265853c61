"""Shuffles of a cell prism, horn certificates, and diagram attachment.

An ``(r,s)``-shuffle is a monotone lattice path from ``(0,0)`` to ``(r,s)``,
stored as a move word over ``H`` (step right) and ``V`` (step up); these
index the top-dimensional simplices of the prism of two standard simplices.
The poset order compares the running count of ``V`` moves prefix by prefix.
Attaching a grid image to a string complex walks the shuffles in a linear
extension of this order and certifies, for each one, that the fresh part
glues along an inner generalized horn (or a boundary sphere for the last
shuffle).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CertificateError, HypothesisError, InputError
from .finmap import MapClass, classify
from .grids import (
    GridDiagram,
    boundary_image,
    chain_in_boundary,
    corner_of,
    image_subset,
    is_saturated,
    iter_chains,
    restrict,
)
from .strings import MapString, StringComplex, core, face


@dataclass(frozen=True, slots=True)
class Shuffle:
    """A lattice path encoded by its move word, e.g. ``"HVH"``."""

    word: str

    def __post_init__(self):
        if any(ch not in "HV" for ch in self.word):
            raise InputError(f"bad move word {self.word!r}")

    @property
    def r(self) -> int:
        return self.word.count("H")

    @property
    def s(self) -> int:
        return self.word.count("V")

    def path(self) -> tuple[tuple[int, int], ...]:
        out = [(0, 0)]
        i = j = 0
        for ch in self.word:
            if ch == "H":
                i += 1
            else:
                j += 1
            out.append((i, j))
        return tuple(out)

    def heights(self) -> tuple[int, ...]:
        """Running V-count per prefix; the coordinates of the poset order."""
        out = [0]
        for ch in self.word:
            out.append(out[-1] + (ch == "V"))
        return tuple(out)

    def le(self, other: "Shuffle") -> bool:
        if (self.r, self.s) != (other.r, other.s):
            raise InputError("shuffles of different shapes are incomparable")
        return all(a <= b for a, b in zip(self.heights(), other.heights()))

    def is_minimal(self) -> bool:
        return self.word == "H" * self.r + "V" * self.s

    def is_maximal(self) -> bool:
        return self.word == "V" * self.s + "H" * self.r


def enumerate_shuffles(r: int, s: int) -> list[Shuffle]:
    """All C(r+s, s) shuffles in a linear extension of the poset order.

    Ascending lexicographic order on move words with ``H < V`` refines the
    poset: at the first differing position the poset-smaller word shows the
    ``H``.  The minimal shuffle comes first, the maximal one last.
    """
    if r < 0 or s < 0:
        raise InputError("r and s must be >= 0")
    words = []
    for v_positions in itertools.combinations(range(r + s), s):
        letters = ["H"] * (r + s)
        for p in v_positions:
            letters[p] = "V"
        words.append("".join(letters))
    words.sort()
    return [Shuffle(w) for w in words]


def hasse_edges(r: int, s: int) -> list[tuple[str, str]]:
    """Covering pairs of the shuffle poset (one ``HV`` swapped to ``VH``)."""
    out = []
    for sh in enumerate_shuffles(r, s):
        w = sh.word
        for k in range(len(w) - 1):
            if w[k] == "H" and w[k + 1] == "V":
                out.append((w, w[:k] + "VH" + w[k + 2 :]))
    return sorted(out)


def poset_dot(r: int, s: int) -> str:
    """DOT rendering of the shuffle poset's Hasse diagram."""
    lines = ["digraph shuffles {"]
    for sh in enumerate_shuffles(r, s):
        lines.append(f'  "{sh.word}";')
    for a, b in hasse_edges(r, s):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ProductSubset:
    """A subchain-closed set of strictly increasing chains in the cell poset."""

    r: int
    s: int
    chains: frozenset[tuple[tuple[int, int], ...]]

    def __contains__(self, chain) -> bool:
        return tuple(chain) in self.chains

    def issubset(self, other: "ProductSubset") -> bool:
        return self.chains <= other.chains

    def __len__(self):
        return len(self.chains)


def _subchains(path):
    n = len(path)
    for k in range(1, n + 1):
        for idx in itertools.combinations(range(n), k):
            yield tuple(path[x] for x in idx)


def _prior_membership(sigma: Shuffle):
    """Predicate deciding membership in the pre-``sigma`` subcomplex.

    A chain belongs when it lies in the prism boundary or inside the path
    of a strictly smaller shuffle.
    """
    r, s = sigma.r, sigma.s
    smaller = [
        frozenset(sh.path())
        for sh in enumerate_shuffles(r, s)
        if sh != sigma and sh.le(sigma)
    ]

    def member(chain) -> bool:
        if chain_in_boundary(chain, r, s):
            return True
        cs = set(chain)
        return any(cs <= p for p in smaller)

    return member


def prior_subcomplex(sigma: Shuffle) -> ProductSubset:
    """Boundary of the prism plus all shuffle simplices strictly below sigma."""
    r, s = sigma.r, sigma.s
    chains = set()
    for sh in enumerate_shuffles(r, s):
        if sh != sigma and sh.le(sigma):
            chains.update(_subchains(sh.path()))
    for ch in iter_chains(r, s):
        if chain_in_boundary(ch, r, s):
            chains.add(ch)
    return ProductSubset(r, s, frozenset(chains))


def is_inner_generalized_horn(S, n: int) -> bool:
    """True when the proper face-index set S of [n] is not an interval."""
    S = set(S)
    if not S <= set(range(n + 1)):
        raise InputError("S must be a subset of [n]")
    if S == set(range(n + 1)):
        raise InputError("S must be a proper subset of [n]")
    if not S:
        return False
    lo, hi = min(S), max(S)
    return any(t not in S for t in range(lo, hi))


@dataclass(frozen=True)
class HornCertificate:
    """Checked shape of the overlap between a shuffle simplex and its past.

    ``facets`` lists the maximal overlap faces as sorted position subsets.
    For a non-maximal shuffle the overlap is a union of codimension-one
    faces whose index set ``S`` is not an interval; for the maximal shuffle
    it is the full boundary sphere.
    """

    sigma: str
    kind: str  # "inner" | "boundary"
    S: tuple[int, ...]
    facets: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma,
            "kind": self.kind,
            "S": list(self.S),
            "facets": [list(t) for t in self.facets],
        }


def _overlap_subsets(sigma: Shuffle):
    """Position subsets T whose face of sigma lies in the prior subcomplex."""
    n = sigma.r + sigma.s
    path = sigma.path()
    member = _prior_membership(sigma)
    inside, outside = [], []
    for k in range(1, n + 2):
        for idx in itertools.combinations(range(n + 1), k):
            chain = tuple(path[x] for x in idx)
            (inside if member(chain) else outside).append(idx)
    return inside, outside


def horn_certificate(sigma: Shuffle) -> HornCertificate:
    """Certify the attachment shape of one shuffle simplex.

    Verifies, by direct computation of the overlap: every maximal overlap
    face has codimension one; the overlap is the union of those facets; for
    a non-maximal shuffle the facet index set is not an interval, and for
    the maximal shuffle the overlap is the entire boundary.  Any failure
    raises, since each of these facts is forced.
    """
    r, s = sigma.r, sigma.s
    if r < 1 or s < 1:
        raise InputError("horn certificates need r >= 1 and s >= 1")
    n = r + s
    inside, _ = _overlap_subsets(sigma)
    inside_set = set(inside)
    full = tuple(range(n + 1))
    if full in inside_set:
        raise CertificateError("shuffle simplex lies in its own past", witness=sigma.word)
    # The overlap is subchain-closed, so maximality is detected by
    # one-element extensions.
    facets = [
        idx
        for idx in inside
        if all(
            tuple(sorted(set(idx) | {x})) not in inside_set
            for x in range(n + 1)
            if x not in idx
        )
    ]
    S = tuple(sorted(i for i in range(n + 1) if tuple(x for x in full if x != i) in inside_set))
    if sigma.is_maximal():
        expected = {idx for k in range(1, n + 1) for idx in itertools.combinations(range(n + 1), k)}
        if inside_set != expected:
            raise CertificateError(
                "maximal shuffle overlap is not the boundary sphere", witness=sigma.word
            )
        return HornCertificate(sigma.word, "boundary", S, tuple(sorted(facets)))
    if any(len(idx) != n for idx in facets):
        raise CertificateError(
            "overlap has a maximal face of codimension > 1",
            witness={"sigma": sigma.word, "facets": sorted(facets)},
        )
    union = set()
    for i in S:
        fc = tuple(x for x in full if x != i)
        for sub in itertools.chain.from_iterable(
            itertools.combinations(fc, k) for k in range(1, n + 1)
        ):
            union.add(sub)
    if union != inside_set:
        raise CertificateError(
            "overlap is not the union of its codimension-one faces", witness=sigma.word
        )
    if not is_inner_generalized_horn(set(S), n):
        raise CertificateError(
            "facet index set is an interval", witness={"sigma": sigma.word, "S": sorted(S)}
        )
    return HornCertificate(sigma.word, "inner", S, tuple(sorted(facets)))


@dataclass(frozen=True)
class AttachmentCertificate:
    """Per-shuffle record of the facts verified while attaching a grid image.

    ``excluded`` lists the faces of the shuffle simplex missing from the
    prior subcomplex (position subsets).  The ``checks`` map records each
    verified fact; a record is re-checkable from the grid, the shuffle and
    the complex as it stood when the shuffle was processed.
    """

    sigma: str
    status: str  # "attached" | "already-present"
    kind: str | None = None  # "inner" | "boundary" | None when skipped
    S: tuple[int, ...] = ()
    excluded: tuple[tuple[int, ...], ...] = ()
    checks: tuple[tuple[str, bool], ...] = ()

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma,
            "status": self.status,
            "kind": self.kind,
            "S": list(self.S),
            "excluded": [list(t) for t in self.excluded],
            "checks": {k: v for k, v in self.checks},
        }


def _gap_pattern_checks(sigma: Shuffle, T: tuple[int, ...]) -> None:
    """Endpoint and gap-move conditions (checks ``a`` and ``b``) on T."""
    n = sigma.r + sigma.s
    word = sigma.word
    ts = set(T)
    if 0 not in ts or n not in ts:
        raise CertificateError(
            "excluded face does not contain both endpoints",
            witness={"sigma": word, "T": sorted(ts)},
        )
    for x in range(n + 1):
        if x in ts:
            continue
        if x - 1 not in ts or x + 1 not in ts:
            raise CertificateError(
                "excluded face has a gap wider than one",
                witness={"sigma": word, "T": sorted(ts), "x": x},
            )
        # moves x and x+1 are word[x-1], word[x]
        if word[x - 1] != "H" or word[x] != "V":
            raise CertificateError(
                "excluded-face gap is not a horizontal-then-vertical corner",
                witness={"sigma": word, "T": sorted(ts), "x": x},
            )


def _recover_gaps(sigma: Shuffle, face_string: MapString, T: tuple[int, ...]) -> None:
    """Recover the composed positions from map classes and compare with T.

    Along an excluded face, single moves stay properly injective (H) or
    properly surjective (V) while each composed gap becomes neither; the
    class pattern of the face string therefore pins down T exactly.
    """
    word = sigma.word
    recovered = [T[0]]
    for k, f in enumerate(face_string.maps):
        cls = classify(f)
        step = T[k + 1] - T[k]
        if step == 1:
            want = MapClass.PROPER_INJECTIVE if word[T[k]] == "H" else MapClass.PROPER_SURJECTIVE
            ok = cls is want
        else:
            ok = step == 2 and cls is MapClass.NEITHER
        if not ok:
            raise CertificateError(
                "face string classes do not determine the excluded face",
                witness={"sigma": word, "T": list(T), "position": k, "class": cls.value},
            )
        recovered.append(T[k] + step)
    if tuple(recovered) != tuple(T):
        raise CertificateError(
            "recovered face index set differs", witness={"T": list(T), "got": recovered}
        )


def attachment_hypothesis(C: StringComplex, grid: GridDiagram) -> dict:
    """Report how far C satisfies the attachment hypotheses for a grid.

    ``corner_faces_in_complex`` records membership for every proper face of
    the grid's corner string; faces that are missing get added while the
    shuffles are walked, so the report, not a hard failure, is the honest
    answer when only some of them are present.
    """
    y = corner_of(grid).to_string()
    faces = []
    if y.degree >= 1:
        faces = [C.contains(face(y, i)) for i in range(y.degree + 1)]
    return {
        "saturated": is_saturated(C),
        "boundary_contained": boundary_image(grid).issubset(C),
        "corner_faces_in_complex": faces,
    }


def attach_diagram(
    C: StringComplex,
    grid: GridDiagram,
    order: list[Shuffle] | None = None,
    check_saturated: bool = True,
) -> tuple[StringComplex, list[AttachmentCertificate]]:
    """Attach the image of a grid to a complex, certifying every shuffle step.

    Requires ``C`` saturated (raises :class:`HypothesisError` otherwise).
    When the image is already contained in ``C`` the complex is returned
    unchanged with no certificates.  Otherwise shuffles are processed in a
    linear extension of the poset order; for each shuffle whose simplex is
    new, the certificate records that the excluded faces are endpoint-
    containing with isolated horizontal-vertical gaps, nondegenerate, not
    yet present, and pairwise distinguishable both by class fingerprints
    and by canonical forms.  The result is exactly ``C`` united with the
    grid image, independent of the chosen linear extension.
    """
    D = image_subset(grid)
    if D.issubset(C):
        return C, []
    hypothesis = attachment_hypothesis(C, grid)
    if check_saturated and not hypothesis["saturated"]:
        raise HypothesisError("complex is not saturated")

    def anomaly(message, witness):
        # with the boundary inside C these conditions are forced facts;
        # without it they just witness the unmet hypothesis
        if hypothesis["boundary_contained"]:
            raise CertificateError(message, witness)
        raise HypothesisError(
            f"{message} (the grid boundary image is not contained in the complex)"
        )

    r, s = grid.r, grid.s
    n = r + s
    if order is None:
        order = enumerate_shuffles(r, s)
    else:
        seen: list[Shuffle] = []
        for sh in order:
            if any(sh.le(prev) and sh != prev for prev in seen):
                raise InputError("order is not a linear extension of the shuffle poset")
            seen.append(sh)
        if sorted(sh.word for sh in seen) != sorted(sh.word for sh in enumerate_shuffles(r, s)):
            raise InputError("order must list every shuffle exactly once")
    current = set(C.members)
    records = []
    for sigma in order:
        path = sigma.path()
        full_string = restrict(grid, path)
        z = core(full_string)[0]
        if z in current:
            records.append(AttachmentCertificate(sigma.word, "already-present"))
            continue
        checks: list[tuple[str, bool]] = []
        if not full_string.is_nondegenerate():
            anomaly(
                "new shuffle simplex is degenerate but its core is missing",
                {"sigma": sigma.word},
            )
        checks.append(("c_nondegenerate", True))
        member = _prior_membership(sigma)
        full = tuple(range(n + 1))
        excluded = []
        for k in range(1, n + 2):
            for idx in itertools.combinations(range(n + 1), k):
                if not member(tuple(path[x] for x in idx)):
                    excluded.append(idx)
        assert full in excluded
        proper_excluded = [idx for idx in excluded if idx != full]
        for T in proper_excluded:
            _gap_pattern_checks(sigma, T)
        checks.append(("a_endpoints_and_isolated_gaps", True))
        checks.append(("b_gap_moves", True))
        face_strings = {}
        for T in proper_excluded:
            w = restrict(grid, [path[x] for x in T])
            face_strings[T] = w
            if not w.is_nondegenerate():
                raise CertificateError(
                    "excluded proper face is degenerate",
                    witness={"sigma": sigma.word, "T": list(T)},
                )
            if core(w)[0] in current:
                anomaly(
                    "excluded face already lies in the complex",
                    {"sigma": sigma.word, "T": list(T)},
                )
        checks.append(("d_excluded_faces_nondegenerate", True))
        checks.append(("ii_excluded_faces_new", True))
        for T, w in face_strings.items():
            _recover_gaps(sigma, w, T)
        by_dim: dict[int, set[MapString]] = {}
        for T, w in face_strings.items():
            by_dim.setdefault(len(T), set()).add(core(w)[0])
        for k, forms in by_dim.items():
            count = sum(1 for T in proper_excluded if len(T) == k)
            if len(forms) != count:
                raise CertificateError(
                    "two excluded faces share a canonical form",
                    witness={"sigma": sigma.word, "dimension": k - 1},
                )
        checks.append(("iii_excluded_faces_distinct", True))
        if r >= 1 and s >= 1 and not sigma.is_maximal():
            cert = horn_certificate(sigma)
            kind, S = cert.kind, cert.S
        else:
            # maximal shuffle (or a single-row/column grid): sphere attachment
            if proper_excluded:
                raise CertificateError(
                    "maximal shuffle has excluded proper faces",
                    witness={"sigma": sigma.word},
                )
            kind, S = "boundary", tuple(range(n + 1)) if n else ()
        for idx in _subchains(path):
            current.add(core(restrict(grid, idx))[0])
        records.append(
            AttachmentCertificate(
                sigma.word,
                "attached",
                kind,
                tuple(S),
                tuple(sorted(proper_excluded)),
                tuple(checks),
            )
        )
    result = StringComplex(frozenset(current))
    if result != C.union(D):
        raise CertificateError("attachment result is not the union with the image")
    return result, records
