"""Randomized property suites shared by ``altforms selfcheck`` and the tests.

Each suite returns a :class:`SuiteResult`; all randomness comes from
``random.Random`` instances seeded from the caller's seed, so a run is
reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .catalog import (
    ClassificationError, all_entries, builtin_catalog, classify, finite_cases, lemma2_consistency,
    lemma2_pairs, sample_orbit,
)
from .catalog.build import certificate_supported
from .catalog.report import Lemma2Error
from .exterior import act_on_form, act_on_multivector
from .orbits import b_form, hodge_dual, is_nondegenerate, is_stable
from .sampling import random_gl, random_multivector

MAX_REPORTED = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "failures": self.failures[:MAX_REPORTED], "failure_count": len(self.failures)}


def duality_equivariance(n: int, k: int, trials: int, rng: random.Random) -> Tuple[int, List[str]]:
    """``g . c(xi) == det(g) c(g^-1 . xi)`` for random ``g`` and k-vectors ``xi``."""
    failures = []
    for t in range(trials):
        g = random_gl(n, rng)
        xi = random_multivector(n, k, rng)
        lhs = act_on_form(g, hodge_dual(xi))
        rhs = hodge_dual(act_on_multivector(g.inverse(), xi)) * g.det
        if lhs != rhs:
            failures.append(f"({n}, {k}) trial {t}")
    return trials, failures


def suite_duality(seed: int, trials: int, cases: Optional[Sequence[Tuple[int, int]]] = None) -> SuiteResult:
    res = SuiteResult("duality equivariance")
    for n, k in cases if cases is not None else finite_cases():
        checked, failures = duality_equivariance(n, k, trials, random.Random(f"dual:{seed}:{n}:{k}"))
        res.checked += checked
        res.failures.extend(failures)
    return res


def suite_lemma2() -> SuiteResult:
    res = SuiteResult("degenerate orbit correspondence")
    for n, k in lemma2_pairs():
        res.checked += 1
        try:
            lemma2_consistency(n, k)
        except Lemma2Error as exc:
            res.fail(str(exc))
    return res


def suite_certificates() -> SuiteResult:
    """Every shipped certificate verifies; the (7, 3) accounting is 8 certificates
    (6 degenerate, 2 non-degenerate non-stable) and B-signature obstructions for
    the other 6 entries."""
    res = SuiteResult("certificate audit")
    for e in all_entries():
        res.checked += 1
        if not certificate_supported(e):
            res.fail(f"{e.id}: shipped certificate does not verify")
    seven = builtin_catalog(7, 3)
    certified = [e for e in seven if e.negdet_certificate is not None]
    degenerate = [e for e in certified if e.degenerate]
    middle = [e for e in certified if not e.degenerate and not e.stable]
    if (len(certified), len(degenerate), len(middle)) != (8, 6, 2):
        res.fail(f"(7, 3): {len(certified)} certificates, {len(degenerate)} degenerate, "
                 f"{len(middle)} non-degenerate non-stable; expected 8, 6, 2")
    for e in seven:
        if e.negdet_certificate is None:
            res.checked += 1
            p, _, q = b_form(e.as_multivector()).signature
            if p == q:
                res.fail(f"{e.id}: no certificate and no B-signature obstruction")
    return res


def suite_roundtrip(seed: int, trials: int, entries=None) -> SuiteResult:
    res = SuiteResult("classification round trip")
    for e in entries if entries is not None else all_entries():
        for t in range(trials):
            res.checked += 1
            alpha = sample_orbit(e.id, seed * 100003 + t)
            try:
                got = classify(alpha)
            except ClassificationError as exc:
                res.fail(f"{e.id} seed {t}: {exc}")
                continue
            if got.orbit_id != e.id or got.certainty == "ambiguous":
                res.fail(f"{e.id} seed {t}: classified as {got.orbit_id} ({got.certainty})")
    return res


def suite_flags() -> SuiteResult:
    """Stored degeneracy and stability flags match recomputation."""
    res = SuiteResult("catalog flags")
    for e in all_entries():
        res.checked += 1
        if e.degenerate != (not is_nondegenerate(e.rep)) or e.stable != is_stable(e.rep):
            res.fail(f"{e.id}: stored flags disagree with recomputation")
    return res


SUITES: Dict[str, Callable[[int, int], SuiteResult]] = {
    "certificate audit": lambda seed, trials: suite_certificates(),
    "catalog flags": lambda seed, trials: suite_flags(),
    "classification round trip": suite_roundtrip,
    "degenerate orbit correspondence": lambda seed, trials: suite_lemma2(),
    "duality equivariance": suite_duality,
}


def run_all(seed: int, trials: int) -> List[SuiteResult]:
    """All suites, ordered by name."""
    return [SUITES[name](seed, trials) for name in sorted(SUITES)]
