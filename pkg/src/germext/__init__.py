"""Exact tests of the integral extension condition for Morse germs along spheres."""

from .barannikov import CanonicalForm, FieldSpec, FmcState, canonical_form, fmc_from_germ, reduce_to_trivial
from .generate import gen
from .germio import dumps_germ, load_germ, loads_germ
from .intmat import (
    IntMatrix,
    det,
    determinantal_divisors,
    elementary,
    hnf,
    identity,
    is_surjective,
    is_unimodular,
    snf,
    transpose,
)
from .morse import (
    CriticalPoint,
    GaugeElement,
    GermComplex,
    block_decompose,
    conjugate,
    curley_graph,
    gauge_membership,
    handle_slide,
    homology_Z,
    natural_order,
    opposite_germ,
    trivial_germ,
    validate_germ,
)
from .omega import OmegaInstance, OmegaVerdict, omega_bruteforce, omega_construct, omega_decide
from .propertyp import PropertyPVerdict, check_property_P, check_property_P_minus, two_index_check

__version__ = "0.1.0"
