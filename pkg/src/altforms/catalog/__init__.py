"""Orbit catalogs for every finite case of GL(n) acting on k-forms, n <= 9."""

from .build import (
    CatalogEntry, CatalogError, all_entries, builtin_catalog, derive_by_duality, dump_catalog,
    finite_cases, find_entry, load_catalog_file, multivector_catalog, two_vector_catalog,
)
from .table import (
    INFINITE, CaseCounts, InfiniteFamilyError, TableMismatch, UnsupportedCaseError,
    computed_counts, infinite_row, is_finite_case, published_counts, theorem_table,
)
from .classify import Classification, ClassificationError, classify, sample_orbit
from .report import lemma2_consistency, lemma2_pairs, validation_report
