"""Smooth toric surfaces: fans, divisors, adjunction, and Chern-class bounds
for ample vector bundles."""

from .adjunction import (
    AdjunctionSequence,
    classify_adjoint,
    iterated_sequence,
    kl_check,
    telescoped_genus_check,
)
from .bogomolov import case2_infeasibility_oracle, destabilizer_search, eq1_check
from .bounds import (
    ChernData,
    BoundReport,
    c1sq_lower_bound,
    c2_lower_bound,
    conjectured_c2_bound,
    verify_table1,
)
from .divisors import DivisorClass, canonical_class, divisor, from_degrees, intersect
from .errors import ToricaError
from .fan import Fan, blowdown, blowup, hirzebruch, projective_plane, realize_profile, validate_fan
from .harness import enumerate_surfaces, run_verification

__version__ = "0.1.0"
