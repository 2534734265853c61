"""Presentation skeletons for defect-bounded complexes.

Generators are grids with nondegenerate corner data and cardinalities at
most ``alpha``, replayed in degree order through the certified attachment.
The excess strings (cardinalities bounded, defect above ``alpha``) carry a
run-length profile that splits them into an upper and a lower class, with
an inner-face matching between adjacent degrees and a precedence order
whose audit checks that every non-distinguished face of an upper string
sorts strictly earlier.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from .errors import CertificateError, InputError, MatchingError, OrderAuditError
from .finmap import MapClass, classify, epi_mono_factor
from .grids import (
    GridDiagram,
    boundary_image,
    defect_subcomplex,
    enumerate_corner_grids,
    image_subset,
)
from .shuffles import AttachmentCertificate, attach_diagram
from .strings import (
    MapString,
    StringComplex,
    canonicalize,
    core,
    defect,
    enumerate_nondegenerate,
    face,
    serialize,
)


@dataclass(frozen=True)
class Generator:
    """One attachment cell: a grid plus the audited enumeration flags."""

    index: int
    r: int
    s: int
    corner: MapString
    grid: GridDiagram
    novel: bool
    boundary_contained: bool

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "r": self.r,
            "s": self.s,
            "corner": self.corner.to_json(canonical=True),
            "novel": self.novel,
            "boundary_contained": self.boundary_contained,
        }


def enumerate_generators(alpha: int, allow_empty: bool = False) -> list[Generator]:
    """Grid isomorphism classes in a valid attachment order.

    Candidates are ordered by total degree r+s, then canonical corner
    serialization.  Under this order the boundary image of every candidate
    lies in the union of the earlier images (deleting a grid row or column
    yields a smaller grid), and every candidate is novel: its corner string
    is a nondegenerate simplex of degree r+s that no other candidate of
    equal or smaller degree contains.  Both flags are still checked per
    entry rather than trusted.
    """
    if alpha < 1:
        raise InputError("alpha must be >= 1")
    out = []
    union: set[MapString] = set()
    for z, s, r, grid in enumerate_corner_grids(alpha, allow_empty):
        img = image_subset(grid)
        novel = not img.members <= union
        boundary_ok = boundary_image(grid).members <= union
        if not boundary_ok:
            raise CertificateError(
                "generator boundary not contained in earlier images",
                witness={"corner": serialize(z), "r": r, "s": s},
            )
        if not novel:
            continue
        out.append(Generator(len(out), r, s, z, grid, novel, boundary_ok))
        union |= img.members
    return out


@dataclass(frozen=True)
class PresentationSkeleton:
    alpha: int
    allow_empty: bool
    complex: StringComplex
    generators: tuple[Generator, ...]
    certificates: tuple[tuple[int, tuple[AttachmentCertificate, ...]], ...]
    skeletal_dim: int

    def counts(self) -> dict:
        by_rs = Counter((g.r, g.s) for g in self.generators)
        return {
            "by_rs": {f"{r},{s}": n for (r, s), n in sorted(by_rs.items())},
            "diagonal": sum(n for (r, s), n in by_rs.items() if r == s),
            "total": len(self.generators),
        }

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "allow_empty": self.allow_empty,
            "cells": [
                {"r": g.r, "s": g.s, "corner": g.corner.to_json(canonical=True), "grid": g.grid.to_json()}
                for g in self.generators
            ],
            "attachment_order": [g.index for g in self.generators],
            "certificates": [
                {"cell": idx, "records": [rec.to_json() for rec in recs]}
                for idx, recs in self.certificates
            ],
            "skeletal_dimension": self.skeletal_dim,
            "counts": self.counts(),
            "complex": self.complex.to_json(),
        }


def present(alpha: int, allow_empty: bool = False) -> PresentationSkeleton:
    """Replay the generators through certified attachment.

    The final complex must coincide with the defect-bounded complex built
    independently; any discrepancy raises.
    """
    gens = enumerate_generators(alpha, allow_empty)
    C = StringComplex(frozenset())
    certs = []
    for g in gens:
        C, recs = attach_diagram(C, g.grid)
        certs.append((g.index, tuple(recs)))
    want = defect_subcomplex(alpha, allow_empty)
    if C != want:
        raise CertificateError(
            "replayed complex differs from the defect-bounded complex",
            witness={"alpha": alpha, "allow_empty": allow_empty},
        )
    return PresentationSkeleton(alpha, allow_empty, C, tuple(gens), tuple(certs), C.max_degree())


def verify_skeleton(skel: PresentationSkeleton) -> bool:
    """Re-run every attachment and compare certificates field by field."""
    C = StringComplex(frozenset())
    for g, (idx, recs) in zip(skel.generators, skel.certificates):
        if g.index != idx:
            raise CertificateError("certificate indices out of order")
        C, fresh = attach_diagram(C, g.grid)
        if tuple(fresh) != recs:
            raise CertificateError(
                "attachment records changed under replay", witness={"cell": idx}
            )
    if C != skel.complex:
        raise CertificateError("replay does not reproduce the stored complex")
    return True


def skeletal_dimension(alpha: int, allow_empty: bool = False) -> int:
    """Largest degree of a nondegenerate string of defect <= alpha."""
    return defect_subcomplex(alpha, allow_empty).max_degree()


@dataclass(frozen=True)
class ExcessProfile:
    """Run-length profile of a string with bounded cards but excess defect.

    ``inj_run`` counts the properly injective maps at the top of the
    string, ``surj_run`` the properly surjective maps directly below them.
    The junction map below both runs is properly injective exactly for the
    upper class; it is neither injective nor surjective for the lower one.
    """

    string: MapString
    excess_defect: int
    inj_run: int
    surj_run: int
    side: str  # "upper" | "lower"

    @property
    def degree(self) -> int:
        return self.string.degree

    @property
    def junction(self) -> int:
        """The distinguished inner face index; drops the level below the runs."""
        return self.degree - self.inj_run - self.surj_run

    def weight(self) -> tuple[int, int, int]:
        """Lexicographic sort key (degree, inj_run, -surj_run)."""
        return (self.degree, self.inj_run, -self.surj_run)

    def to_json(self) -> dict:
        return {
            "string": self.string.to_json(canonical=True),
            "defect": self.excess_defect,
            "inj_run": self.inj_run,
            "surj_run": self.surj_run,
            "side": self.side,
        }


def profile_of(z: MapString) -> ExcessProfile:
    """Compute the run-length profile; requires the runs to stop inside."""
    t = z.degree
    r = 0
    while r < t and classify(z.maps[t - 1 - r]) is MapClass.PROPER_INJECTIVE:
        r += 1
    s = 0
    while r + s < t and classify(z.maps[t - 1 - r - s]) is MapClass.PROPER_SURJECTIVE:
        s += 1
    if r + s >= t:
        # A pure surjections-then-injections string has defect equal to the
        # cardinality at the meeting point, hence no excess defect.
        raise CertificateError(
            "runs exhaust an excess string", witness=serialize(z)
        )
    junction_class = classify(z.maps[t - 1 - r - s])
    side = "upper" if junction_class is MapClass.PROPER_INJECTIVE else "lower"
    return ExcessProfile(z, defect(z), r, s, side)


def in_excess(z: MapString, alpha: int) -> bool:
    return (
        z.degree >= 1
        and z.is_nondegenerate()
        and max(z.cards()) <= alpha
        and defect(z) > alpha
    )


def excess_strings(alpha: int, degree_bound: int, allow_empty: bool = False) -> list[ExcessProfile]:
    """Profiles of all canonical excess strings up to the degree bound."""
    if alpha < 1:
        raise InputError("alpha must be >= 1")
    if degree_bound < 2:
        raise InputError("degree_bound must be >= 2")
    by_degree = enumerate_nondegenerate(alpha, degree_bound, allow_empty)
    out = []
    for level in by_degree:
        for z in level:
            if in_excess(z, alpha):
                out.append(profile_of(z))
    return out


def match_partner(p: ExcessProfile) -> MapString:
    """The distinguished inner face, composing the junction with the
    surjection above it."""
    return canonicalize(face(p.string, p.junction))


def match_inverse(p: ExcessProfile) -> MapString:
    """Split the junction of a lower profile into its epi-mono factors."""
    if p.side != "lower":
        raise InputError("inverse is defined on the lower class")
    j = p.junction
    g = p.string.maps[j - 1]
    epi, mono = epi_mono_factor(g)
    maps = p.string.maps[: j - 1] + (mono, epi) + p.string.maps[j:]
    return canonicalize(MapString(p.string.card0, maps))


@dataclass(frozen=True)
class Matching:
    """Verified inner-face matching from the upper to the lower class."""

    alpha: int
    degree_bound: int
    pairs: tuple[tuple[MapString, MapString, int], ...]
    per_degree: tuple[tuple[int, int, int], ...]  # (degree, upper count, lower count)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "degree_bound": self.degree_bound,
            "pairs": [
                {"upper": u.to_json(canonical=True), "lower": l.to_json(canonical=True), "face": j}
                for u, l, j in self.pairs
            ],
            "per_degree": [
                {"degree": d, "upper": nu, "lower": nl} for d, nu, nl in self.per_degree
            ],
        }


def match_excess(profiles: list[ExcessProfile], alpha: int, degree_bound: int) -> Matching:
    """Verify the matching invariants over the enumerated range.

    For every upper string the distinguished face index is strictly inner
    and unique, the face preserves defect, lands in the lower class with
    the surjective run shortened by one, and the assignment is a bijection
    from upper strings of each degree to lower strings one degree down.
    """
    uppers = [p for p in profiles if p.side == "upper"]
    lowers = {p.string: p for p in profiles if p.side == "lower"}
    pairs = []
    image_by_degree: dict[int, set[MapString]] = defaultdict(set)
    for p in uppers:
        n, j = p.degree, p.junction
        if not 0 < j < n:
            raise MatchingError(
                "distinguished face index is not inner", witness=serialize(p.string)
            )
        if p.surj_run < 1:
            raise MatchingError(
                "upper string with empty surjective run", witness=serialize(p.string)
            )
        w = match_partner(p)
        if defect(w) != p.excess_defect:
            raise MatchingError(
                "matched face changes the defect",
                witness={"upper": serialize(p.string), "lower": serialize(w)},
            )
        if w not in lowers:
            raise MatchingError(
                "matched face is not an enumerated lower string",
                witness={"upper": serialize(p.string), "lower": serialize(w)},
            )
        wp = lowers[w]
        if (wp.inj_run, wp.surj_run) != (p.inj_run, p.surj_run - 1):
            raise MatchingError(
                "matched face has the wrong profile",
                witness={"upper": serialize(p.string), "lower": serialize(w)},
            )
        hits = [i for i in range(1, n) if canonicalize(face(p.string, i)) == w]
        if hits != [j]:
            raise MatchingError(
                "distinguished face index is not unique",
                witness={"upper": serialize(p.string), "indices": hits},
            )
        if w in image_by_degree[n]:
            raise MatchingError(
                "two upper strings share a matched face", witness=serialize(w)
            )
        image_by_degree[n].add(w)
        pairs.append((p.string, w, j))
    upper_count = Counter(p.degree for p in uppers)
    lower_count = Counter(p.degree for p in lowers.values())
    for m in range(1, degree_bound):
        want = {p.string for p in lowers.values() if p.degree == m}
        got = image_by_degree[m + 1]
        if want != got:
            missing = sorted(want - got, key=MapString.sort_key)
            raise MatchingError(
                "matching is not onto the lower class",
                witness={"degree": m, "missing": [serialize(z) for z in missing[:5]]},
            )
    degrees = sorted(set(upper_count) | set(lower_count))
    per_degree = tuple((d, upper_count.get(d, 0), lower_count.get(d, 0)) for d in degrees)
    pairs.sort(key=lambda tr: tr[0].sort_key())
    return Matching(alpha, degree_bound, tuple(pairs), per_degree)


def order_excess(profiles: list[ExcessProfile], alpha: int):
    """Sort the upper class by weight and audit the precedence property.

    For every upper string ``z`` and every face other than the
    distinguished one, the face must either be an upper string of lower
    degree, leave the excess family altogether, or be a lower string whose
    match-partner sorts strictly before ``z``; in the last case the face
    index is pinned to one of the two junction-adjacent positions.  A
    violation raises with the witnessing string and face index.
    """
    by_string = {p.string: p for p in profiles}
    uppers = sorted(
        (p for p in profiles if p.side == "upper"),
        key=lambda p: (p.weight(), p.string.sort_key()),
    )
    report = {
        "cases": Counter(),
        "fibers": Counter(p.weight() for p in uppers),
    }
    for p in uppers:
        z, n, j = p.string, p.degree, p.junction
        for i in range(n + 1):
            if i == j:
                continue
            w = canonicalize(face(z, i))
            if not in_excess(w, alpha):
                report["cases"]["c_leaves_family"] += 1
                base = core(w)[0]
                if in_excess(base, alpha) and base.degree >= n:
                    raise OrderAuditError(
                        "degenerate face has a core of full degree",
                        witness={"string": serialize(z), "face": i},
                    )
                continue
            wp = by_string.get(w) or profile_of(w)
            if wp.side == "upper":
                report["cases"]["b_upper_degree_drop"] += 1
                if not (wp.weight(), w.sort_key()) < (p.weight(), z.sort_key()):
                    raise OrderAuditError(
                        "upper face does not sort earlier",
                        witness={"string": serialize(z), "face": i},
                    )
                continue
            # lower face: must sit at one of the two junction-adjacent indices
            partner = match_inverse(wp)
            pp = profile_of(partner)
            if match_partner(pp) != w:
                raise OrderAuditError(
                    "inverse matching failed to recover the face",
                    witness={"string": serialize(z), "face": i},
                )
            if i == j - 1:
                report["cases"]["e_surj_run_grows"] += 1
                ok = pp.degree == n and pp.inj_run == p.inj_run and pp.surj_run > p.surj_run
            elif i == n - p.inj_run and p.inj_run > 0:
                report["cases"]["e_inj_run_shrinks"] += 1
                ok = pp.degree == n and pp.inj_run < p.inj_run
            else:
                raise OrderAuditError(
                    "lower face at an unexpected index",
                    witness={
                        "string": serialize(z),
                        "face": i,
                        "junction": j,
                        "inj_run": p.inj_run,
                        "surj_run": p.surj_run,
                        "partner": serialize(partner),
                        "partner_weight": list(pp.weight()),
                        "weight": list(p.weight()),
                    },
                )
            if not ok or not pp.weight() < p.weight():
                raise OrderAuditError(
                    "matched partner of a face does not sort earlier",
                    witness={
                        "string": serialize(z),
                        "face": i,
                        "partner": serialize(partner),
                        "partner_weight": list(pp.weight()),
                        "weight": list(p.weight()),
                    },
                )
    report["cases"] = dict(report["cases"])
    report["fibers"] = {str(list(k)): v for k, v in sorted(report["fibers"].items())}
    return uppers, report
