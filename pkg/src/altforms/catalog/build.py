"""Orbit representative catalogs: constructed, shipped as data, and derived by duality."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..exterior import (
    GLElement, KForm, KVector, format_form, format_matrix, parse_form, parse_matrix,
    volume_form,
)
from ..orbits import (
    hodge_dual, is_nondegenerate, is_stable, support, verify_negdet_certificate,
    verify_reversal_certificate,
)
from .table import InfiniteFamilyError, UnsupportedCaseError, infinite_row, published_counts

PROVENANCES = ("paper", "construction", "literature")
DATA_FILES = {(6, 3): "trivectors_6.json", (7, 3): "trivectors_7.json", (8, 3): "trivectors_8.json"}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    n: int
    k: int
    rep: Union[KForm, KVector]
    degenerate: bool
    stable: bool
    provenance: str
    negdet_certificate: Optional[GLElement] = None
    notes: str = ""
    source: Optional[str] = None
    orientation: Optional[int] = None
    reversal_certificate: Optional[GLElement] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id, "n": self.n, "k": self.k, "rep": format_form(self.rep),
            "degenerate": self.degenerate, "stable": self.stable, "provenance": self.provenance,
            "certificate": format_matrix(self.negdet_certificate) if self.negdet_certificate else None,
            "notes": self.notes,
        }

    def as_multivector(self) -> KVector:
        """The multivector with the same coefficients (identifying e_i with e^i)."""
        return KVector(self.n, self.k, dict(self.rep.items()))


def _entry_id(n: int, k: int, i: int) -> str:
    return f"{n}-{k}-{i:02d}"


def _entry(n: int, k: int, i: int, rep, provenance: str, **kw) -> CatalogEntry:
    form = rep if isinstance(rep, KForm) else KForm(n, k, dict(rep.items()))
    return CatalogEntry(id=_entry_id(n, k, i), n=n, k=k, rep=rep,
                        degenerate=not is_nondegenerate(form), stable=is_stable(rep),
                        provenance=provenance, **kw)


def load_catalog_file(path: Union[str, Path]) -> List[CatalogEntry]:
    with open(path) as fh:
        return parse_catalog(json.load(fh))


def parse_catalog(items: Iterable[dict]) -> List[CatalogEntry]:
    out = []
    for d in items:
        if d["provenance"] not in PROVENANCES:
            raise CatalogError(f"{d['id']}: unknown provenance {d['provenance']!r}")
        rep = parse_form(d["rep"], n=d["n"], k=d["k"])
        cert = parse_matrix(d["certificate"]) if d.get("certificate") else None
        out.append(CatalogEntry(id=d["id"], n=d["n"], k=d["k"], rep=rep, degenerate=d["degenerate"],
                                stable=d["stable"], provenance=d["provenance"],
                                negdet_certificate=cert, notes=d.get("notes", "")))
    return out


def dump_catalog(entries: Sequence[CatalogEntry]) -> str:
    return json.dumps([e.to_dict() for e in entries], indent=1)


def _data_catalog(n: int, k: int) -> List[CatalogEntry]:
    ref = resources.files("altforms.catalog").joinpath("data", DATA_FILES[(n, k)])
    return parse_catalog(json.loads(ref.read_text()))


def _check_case(n: int, k: int) -> None:
    if n < 1 or not 0 <= k <= n:
        raise UnsupportedCaseError(f"no catalog for (n, k) = ({n}, {k})")
    if infinite_row(n, k):
        raise InfiniteFamilyError(n, k)


def _swap_pairs(n: int) -> GLElement:
    """``e_{2i-1} <-> e_{2i}``; reverses the sign of the standard symplectic 2-vector."""
    rows = [[0] * n for _ in range(n)]
    for i in range(0, n - 1, 2):
        rows[i][i + 1] = rows[i + 1][i] = 1
    if n % 2:
        rows[n - 1][n - 1] = 1
    return GLElement(rows)


def two_vector_catalog(n: int) -> List[CatalogEntry]:
    """Standard 2-vectors of every rank, with reversal certificates where they exist."""
    from ..certificates import reflection_certificate

    out = []
    for r in range(n // 2 + 1):
        xi = KVector(n, 2, {(2 * i - 1, 2 * i): 1 for i in range(1, r + 1)})
        swap = _swap_pairs(n) if 2 * r == n and n % 4 == 0 else None
        out.append(_entry(n, 2, r + 1, xi, "construction", negdet_certificate=reflection_certificate(xi),
                          reversal_certificate=swap, notes=f"rank {2 * r}"))
    return out


def multivector_catalog(n: int, k: int) -> List[CatalogEntry]:
    """Source catalogs for duality: multivector representatives with certificates."""
    if k == 2:
        return two_vector_catalog(n)
    if (n, k) in DATA_FILES:
        return [replace(e, rep=e.as_multivector()) for e in builtin_catalog(n, k)]
    raise UnsupportedCaseError(f"no multivector catalog for (n, k) = ({n}, {k})")


def derive_by_duality(source: Sequence[CatalogEntry], n: int, k: int,
                      omega: Optional[KForm] = None) -> List[CatalogEntry]:
    """Orbits of (n-k)-forms from a complete catalog of k-vector orbits.

    ``c`` maps distinct multivector orbits to distinct form orbits up to the
    sign of ``c``.  For odd ``n - k`` the forms ``+-c(xi)`` are related by
    ``-id``.  For even ``n - k`` they share an orbit exactly when some ``g``
    rescales ``xi`` by ``nu`` with ``nu det g < 0``; entries carrying such a
    certificate are merged, the others are emitted as a ``+``/``-`` pair.
    """
    if omega is None:
        omega = volume_form(n)
    expected_source = published_counts(n, k).total if k >= 1 else 2
    if len(source) != expected_source:
        raise CatalogError(f"source catalog for ({n}, {k}) has {len(source)} entries, "
                           f"expected {expected_source}")
    target = n - k
    out: List[CatalogEntry] = []
    for e in source:
        xi = e.rep if isinstance(e.rep, KVector) else e.as_multivector()
        rho = hodge_dual(xi, omega)
        merged = target % 2 == 1 or any(
            g is not None and verify_reversal_certificate(g, xi)
            for g in (e.negdet_certificate, e.reversal_certificate))
        if merged:
            out.append(_entry(n, target, len(out) + 1, rho, "paper", source=e.id,
                              notes=f"dual of {e.id}"))
        else:
            for sign in (1, -1):
                out.append(_entry(n, target, len(out) + 1, rho * sign, "paper", source=e.id,
                                  orientation=sign,
                                  notes=f"{'+' if sign > 0 else '-'}dual of {e.id}"))
    want = published_counts(n, target).total
    if len(out) != want:
        raise CatalogError(f"derived catalog for ({n}, {target}) has {len(out)} entries, expected {want}")
    return out


@lru_cache(maxsize=None)
def _builtin(n: int, k: int) -> Tuple[CatalogEntry, ...]:
    _check_case(n, k)
    if k == 0:
        reps = [KForm(n, 0), KForm(n, 0, {(): 1})]
        return tuple(_entry(n, 0, i + 1, r, "construction") for i, r in enumerate(reps))
    if k == 1:
        reps = [KForm(n, 1), KForm(n, 1, {(1,): 1})]
        return tuple(_entry(n, 1, i + 1, r, "construction") for i, r in enumerate(reps))
    if k == 2:
        return tuple(_entry(n, 2, r + 1, KForm(n, 2, {(2 * i - 1, 2 * i): 1 for i in range(1, r + 1)}),
                            "construction", notes=f"rank {2 * r}")
                     for r in range(n // 2 + 1))
    if k == n:
        reps = [KForm(n, n), volume_form(n)]
        return tuple(_entry(n, n, i + 1, r, "construction") for i, r in enumerate(reps))
    if k == n - 1:
        reps = [KForm(n, n - 1), hodge_dual(KVector(n, 1, {(1,): 1}))]
        return tuple(_entry(n, n - 1, i + 1, r, "construction") for i, r in enumerate(reps))
    if k == n - 2:
        return tuple(derive_by_duality(two_vector_catalog(n), n, 2))
    if (n, k) in DATA_FILES:
        return tuple(_data_catalog(n, k))
    if (n, k) in ((7, 4), (8, 5)):
        return tuple(derive_by_duality(multivector_catalog(n, n - k), n, n - k))
    raise UnsupportedCaseError(f"no catalog for (n, k) = ({n}, {k})")


def builtin_catalog(n: int, k: int) -> List[CatalogEntry]:
    return list(_builtin(n, k))


def finite_cases(n_max: int = 9) -> List[Tuple[int, int]]:
    return [(n, k) for n in range(2, n_max + 1) for k in range(0, n + 1) if not infinite_row(n, k)]


def all_entries(n_max: int = 9) -> List[CatalogEntry]:
    return [e for n, k in finite_cases(n_max) for e in builtin_catalog(n, k)]


def find_entry(orbit_id: str) -> CatalogEntry:
    try:
        n, k, _ = (int(x) for x in orbit_id.split("-"))
    except ValueError:
        raise KeyError(f"malformed orbit id {orbit_id!r}") from None
    for e in builtin_catalog(n, k):
        if e.id == orbit_id:
            return e
    raise KeyError(f"unknown orbit id {orbit_id!r}")


def certificate_supported(entry: CatalogEntry) -> bool:
    """Shipped certificates (if any) pass verification against the multivector."""
    xi = entry.rep if isinstance(entry.rep, KVector) else entry.as_multivector()
    if entry.negdet_certificate is not None and not verify_negdet_certificate(entry.negdet_certificate, xi):
        return False
    if entry.reversal_certificate is not None and not verify_reversal_certificate(entry.reversal_certificate, xi):
        return False
    return True
