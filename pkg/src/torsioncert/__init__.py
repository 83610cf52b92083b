"""Exact certificates for torsion-candidate vanishing checks.

The package is layered bottom-up:

- ``polyring``: sparse exact polynomials over the integers or a prime field.
- ``groebner``: Buchberger over prime fields, strong bases over the integers,
  and membership certificates with cofactor tracking.
- ``cohomology``: relation instances, torsion candidates, annihilation
  certificates and bounded vanishing scans.
- ``catalog``: ready-made relation instances used by tests, docs and the CLI.
- ``identities``: the binomial, telescoping and determinantal identities that
  produce closed-form witnesses without Groebner search.
- ``cli``: the ``torsioncert`` command line front end.
"""

from .catalog import (
    hypersurface_relation,
    koszul_relation,
    minor_polys,
    minors_ring,
    minors_row_relation,
    plucker_relation,
    plucker_ring,
)
from .cohomology import (
    IncompatibleRelationsError,
    NotARelationError,
    RelationInstance,
    TorsionCandidate,
    VanishingReport,
    WrongArityError,
    annihilation_certificate,
    combine_relations,
    combine_with_weights,
    koszul_certificate,
    make_relation,
    relation_from_json,
    shift_certificate,
    torsion_candidate,
    two_term_closed_form,
    vanishing_scan,
)
from .groebner import (
    CertificateInvalidError,
    GroebnerBasis,
    GroebnerOptions,
    MembershipCertificate,
    ResourceBoundError,
    buchberger,
    groebner_basis,
    membership,
    normal_form,
    relation_lift,
    strong_groebner,
)
from .identities import (
    DecompositionError,
    IdentityReport,
    PluckerWitness,
    TelescopeCheck,
    binom,
    binom_alternating_certificate,
    binom_alternating_in_range,
    binom_alternating_scan,
    binom_alternating_sum,
    binom_alternating_term,
    binom_convolution_certificate,
    binom_convolution_eval,
    binom_convolution_in_scope,
    binom_convolution_scan,
    binom_convolution_sum,
    binom_convolution_term,
    clearing_multiplier,
    containment_check,
    cyclic_identity_check,
    kernel_identity_check,
    minor_identity_check,
    minor_identity_mod_p_lift,
    minor_relation_witness,
    parity,
    plucker_witness,
    regular_sequence_witness,
)
from .polyring import (
    DEGLEX,
    DEGREVLEX,
    LEX,
    AlgebraError,
    NotDivisibleError,
    NotPrimeError,
    Polynomial,
    PolynomialSyntaxError,
    RingMismatchError,
    RingSpec,
    UnassignedVariableError,
    UnknownVariableError,
    embed,
    exact_div,
    exact_div_int,
    extend_ring,
    format_poly,
    is_prime,
    mod_reduce,
    parse,
    poly_from_json,
    poly_to_json,
    substitute,
    variables,
)

__all__ = [
    "AlgebraError",
    "CertificateInvalidError",
    "DEGLEX",
    "DEGREVLEX",
    "DecompositionError",
    "GroebnerBasis",
    "GroebnerOptions",
    "IdentityReport",
    "IncompatibleRelationsError",
    "LEX",
    "MembershipCertificate",
    "NotARelationError",
    "NotDivisibleError",
    "NotPrimeError",
    "PluckerWitness",
    "Polynomial",
    "PolynomialSyntaxError",
    "RelationInstance",
    "ResourceBoundError",
    "RingMismatchError",
    "RingSpec",
    "TelescopeCheck",
    "TorsionCandidate",
    "UnassignedVariableError",
    "UnknownVariableError",
    "VanishingReport",
    "WrongArityError",
    "annihilation_certificate",
    "binom",
    "binom_alternating_certificate",
    "binom_alternating_in_range",
    "binom_alternating_scan",
    "binom_alternating_sum",
    "binom_alternating_term",
    "binom_convolution_certificate",
    "binom_convolution_eval",
    "binom_convolution_in_scope",
    "binom_convolution_scan",
    "binom_convolution_sum",
    "binom_convolution_term",
    "buchberger",
    "clearing_multiplier",
    "combine_relations",
    "combine_with_weights",
    "containment_check",
    "cyclic_identity_check",
    "embed",
    "exact_div",
    "exact_div_int",
    "extend_ring",
    "format_poly",
    "groebner_basis",
    "hypersurface_relation",
    "is_prime",
    "kernel_identity_check",
    "koszul_certificate",
    "koszul_relation",
    "make_relation",
    "membership",
    "minor_identity_check",
    "minor_identity_mod_p_lift",
    "minor_polys",
    "minor_relation_witness",
    "minors_ring",
    "minors_row_relation",
    "mod_reduce",
    "normal_form",
    "parity",
    "parse",
    "plucker_relation",
    "plucker_ring",
    "plucker_witness",
    "poly_from_json",
    "poly_to_json",
    "regular_sequence_witness",
    "relation_from_json",
    "relation_lift",
    "shift_certificate",
    "strong_groebner",
    "substitute",
    "torsion_candidate",
    "two_term_closed_form",
    "vanishing_scan",
]
