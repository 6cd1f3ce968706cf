"""Cross-checks between catalogs: the degenerate-orbit correspondence and validation reports."""

from __future__ import annotations

from typing import Dict, List, Tuple

from ..exterior import KVector
from ..orbits import b_form, embed_form, is_nondegenerate, is_stable
from .build import builtin_catalog, certificate_supported
from .classify import orbit_key
from .table import infinite_row


class Lemma2Error(AssertionError):
    pass


def lemma2_pairs(n_max: int = 9) -> List[Tuple[int, int]]:
    """All (n, k), k >= 1, with both (n, k) and (n - 1, k) finite."""
    return [(n, k) for n in range(3, n_max + 1) for k in range(1, n)
            if not infinite_row(n, k) and not infinite_row(n - 1, k)]


def lemma2_consistency(n: int, k: int) -> dict:
    """Degenerate (n, k) orbits against all (n - 1, k) orbits, via ``embed_form``.

    Raises ``Lemma2Error`` if the counts differ or the embedded lower
    representatives do not match the degenerate entries one-to-one.
    """
    upper = builtin_catalog(n, k)
    lower = builtin_catalog(n - 1, k)
    degenerate = [e for e in upper if not is_nondegenerate(e.rep)]
    by_key: Dict[object, List[str]] = {}
    for e in degenerate:
        by_key.setdefault(orbit_key(e.rep), []).append(e.id)
    matching: Dict[str, str] = {}
    problems: List[str] = []
    for e in lower:
        hits = by_key.get(orbit_key(embed_form(e.rep)), [])
        if len(hits) != 1:
            problems.append(f"{e.id} matches {hits or 'nothing'}")
        else:
            matching[e.id] = hits[0]
    if len(set(matching.values())) != len(matching):
        problems.append("two lower orbits land on one degenerate orbit")
    report = {"case": [n, k], "degenerate": len(degenerate), "lower_total": len(lower),
              "matching": matching, "problems": problems}
    if len(degenerate) != len(lower):
        raise Lemma2Error(f"({n}, {k}): {len(degenerate)} degenerate orbits but "
                          f"{len(lower)} orbits of ({n - 1}, {k})")
    if problems:
        raise Lemma2Error(f"({n}, {k}): " + "; ".join(problems))
    return report


def _certificate_audit(entries) -> List[dict]:
    audit = []
    for e in entries:
        row = {"id": e.id, "certificate": None, "nonexistence": None}
        if e.negdet_certificate is not None or e.reversal_certificate is not None:
            row["certificate"] = "verified" if certificate_supported(e) else "FAILED"
        elif (e.n, e.k) == (7, 3):
            p, z, q = b_form(e.as_multivector()).signature
            if p != q:
                row["nonexistence"] = f"b_signature ({p}, {z}, {q})"
            else:
                row["nonexistence"] = "undecided"
        audit.append(row)
    return audit


def validation_report(n: int, k: int) -> dict:
    entries = builtin_catalog(n, k)
    keys = [orbit_key(e.rep) for e in entries]
    size = len(entries)
    separation = [[int(keys[i] != keys[j]) for j in range(size)] for i in range(size)]
    collisions = []
    for i in range(size):
        for j in range(i + 1, size):
            if keys[i] == keys[j]:
                a, b = entries[i], entries[j]
                explained = a.provenance == "literature" and b.provenance == "literature"
                collisions.append({"pair": [a.id, b.id], "explained": explained})
    flags = [
        {"id": e.id, "degenerate_ok": e.degenerate == (not is_nondegenerate(e.rep)),
         "stable_ok": e.stable == is_stable(e.rep)}
        for e in entries
    ]
    return {
        "case": [n, k],
        "counts": {"total": size,
                   "nondegenerate": sum(1 for e in entries if not e.degenerate),
                   "stable": sum(1 for e in entries if e.stable)},
        "separation_matrix": separation,
        "collisions": collisions,
        "certificate_audit": _certificate_audit(entries),
        "flags": flags,
    }
