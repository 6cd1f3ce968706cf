"""Assigning a form to its catalog orbit, and sampling forms from an orbit."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

from ..exterior import KForm, act_on_form
from ..orbits import OrbitFingerprint, fingerprint, two_form_rank
from ..sampling import random_gl
from .build import builtin_catalog, find_entry
from .table import InfiniteFamilyError, UnsupportedCaseError, infinite_row


class ClassificationError(RuntimeError):
    """No catalog entry matches: the catalog or an invariant is broken."""


@dataclass(frozen=True)
class Classification:
    orbit_id: str
    certainty: str  # "exact", "fingerprint-unique" or "ambiguous"
    candidates: Tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {"orbit_id": self.orbit_id, "certainty": self.certainty,
                "candidates": list(self.candidates)}


def orbit_key(alpha: KForm) -> OrbitFingerprint:
    """Fingerprint with orientation-dependent parts made orientation-free."""
    return fingerprint(alpha, oriented=False)


@lru_cache(maxsize=None)
def _catalog_keys(n: int, k: int) -> Dict[OrbitFingerprint, Tuple[str, ...]]:
    keys: Dict[OrbitFingerprint, List[str]] = {}
    for e in builtin_catalog(n, k):
        keys.setdefault(orbit_key(e.rep), []).append(e.id)
    return {key: tuple(ids) for key, ids in keys.items()}


def classify(alpha: KForm) -> Classification:
    n, k = alpha.n, alpha.k
    if infinite_row(n, k):
        raise InfiniteFamilyError(n, k)
    if n < 2 or n > 9:
        raise UnsupportedCaseError(f"catalogs cover 2 <= n <= 9, got n = {n}")
    entries = builtin_catalog(n, k)
    if k in (0, 1, n - 1, n):
        return Classification(entries[1 if alpha else 0].id, "exact")
    if k == 2:
        return Classification(entries[two_form_rank(alpha) // 2].id, "exact")
    ids = _catalog_keys(n, k).get(orbit_key(alpha))
    if not ids:
        raise ClassificationError(f"no ({n}, {k}) catalog entry matches the fingerprint")
    if len(ids) == 1:
        return Classification(ids[0], "fingerprint-unique")
    return Classification(ids[0], "ambiguous", ids)


def sample_orbit(orbit_id: str, seed: int) -> KForm:
    """``g . rep`` for a seeded pseudorandom rational ``g``.

    Orientation-split orbits are sampled with ``det g > 0``.
    """
    entry = find_entry(orbit_id)
    rng = random.Random(f"{orbit_id}:{seed}")
    g = random_gl(entry.n, rng, det_sign=1 if entry.orientation else None)
    return act_on_form(g, entry.rep)
