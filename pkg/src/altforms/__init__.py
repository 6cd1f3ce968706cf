"""Orbits of GL(n, R) on alternating forms: exact exterior algebra, orbit
invariants, and orbit catalogs for every finite case with n <= 9."""

from .exterior import (
    GLElement, KForm, KVector, ParseError, act_on_form, act_on_multivector, blades, contract_multi,
    contract_vector, evaluate, format_form, format_matrix, parse_form, parse_matrix, volume_form,
    volume_multivector, wedge,
)
from .orbits import (
    OrbitFingerprint, SymmetricForm, annihilator, b_form, embed_form, fingerprint, hitchin_invariant,
    hodge_dual, inverse_hodge_dual, is_nondegenerate, is_stable, orbit_tangent_rank, signature,
    stabilizer_algebra, support, two_form_rank,
)

__version__ = "0.1.0"
