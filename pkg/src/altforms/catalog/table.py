"""Orbit counts of GL(n) on k-forms: the published table and its recomputation."""

from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import List, Optional, Tuple, Union

Count = Union[int, float]
INFINITE = inf


class InfiniteFamilyError(ValueError):
    """(n, k) lies in a family with infinitely many orbits."""

    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        super().__init__(f"infinite orbit family: (n, k) = ({n}, {k}) is in the row {infinite_row(n, k)!r}")


class UnsupportedCaseError(ValueError):
    pass


class TableMismatch(AssertionError):
    def __init__(self, n: int, k: int, column: str, expected, computed):
        self.n, self.k, self.column = n, k, column
        super().__init__(f"(n, k) = ({n}, {k}): {column} computed {fmt_count(computed)}, "
                         f"expected {fmt_count(expected)}")


@dataclass(frozen=True)
class CaseCounts:
    n: int
    k: int
    total: Count
    nondegenerate: Count
    stable: int

    def as_tuple(self) -> Tuple[Count, Count, int]:
        return (self.total, self.nondegenerate, self.stable)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "total": fmt_count(self.total),
                "nondegenerate": fmt_count(self.nondegenerate), "stable": self.stable}


def fmt_count(c: Count) -> Union[int, str]:
    return "inf" if c == inf else int(c)


def infinite_row(n: int, k: int) -> Optional[str]:
    if (n, k) == (8, 4):
        return "k=4, n=8"
    if n >= 9 and 3 <= k <= n - 3:
        return "3<=k<=n-3, n>=9"
    return None


def is_finite_case(n: int, k: int) -> bool:
    return n >= 1 and 0 <= k <= n and infinite_row(n, k) is None


def published_counts(n: int, k: int) -> CaseCounts:
    """Published (total, non-degenerate, stable) orbit counts for ``n >= 2``, ``1 <= k <= n``."""
    if n < 2 or not 1 <= k <= n:
        raise UnsupportedCaseError(f"no published row for (n, k) = ({n}, {k})")
    special = {(6, 3): (6, 3, 2), (7, 3): (14, 8, 2), (8, 3): (35, 21, 3),
               (7, 4): (20, 15, 4), (8, 5): (35, 31, 3)}
    if infinite_row(n, k):
        return CaseCounts(n, k, inf, inf, 0)
    if (n, k) in special:
        return CaseCounts(n, k, *special[(n, k)])
    if k == 1 or k == n - 1:
        return CaseCounts(n, k, 2, 0, 1)
    if k == n:
        return CaseCounts(n, k, 2, 1, 1)
    if k == 2:
        if n % 2 == 0:
            return CaseCounts(n, k, n // 2 + 1, 1, 1)
        return CaseCounts(n, k, (n + 1) // 2, 0, 1)
    if k == n - 2:
        if n % 4 == 2:
            return CaseCounts(n, k, n // 2 + 2, n // 2, 2)
        return CaseCounts(n, k, n // 2 + 1, n // 2 - 1, 1)
    raise UnsupportedCaseError(f"(n, k) = ({n}, {k}) is not covered by the table")


def computed_counts(n: int, k: int) -> CaseCounts:
    """Counts recomputed from the catalog by re-deciding every flag."""
    from ..orbits import is_nondegenerate, is_stable
    from .build import builtin_catalog

    if infinite_row(n, k):
        return CaseCounts(n, k, inf, inf, 0)
    entries = builtin_catalog(n, k)
    return CaseCounts(
        n, k, len(entries),
        sum(1 for e in entries if is_nondegenerate(e.rep)),
        sum(1 for e in entries if is_stable(e.rep)),
    )


def theorem_table(n_max: int = 9, verify: bool = True) -> List[CaseCounts]:
    rows = []
    for n in range(2, n_max + 1):
        for k in range(1, n + 1):
            got = computed_counts(n, k)
            if verify:
                want = published_counts(n, k)
                for column in ("total", "nondegenerate", "stable"):
                    if getattr(got, column) != getattr(want, column):
                        raise TableMismatch(n, k, column, getattr(want, column), getattr(got, column))
            rows.append(got)
    return rows
