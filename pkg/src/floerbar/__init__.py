"""Hole-counting Floer-type complexes over GF(2)[T] and their barcodes."""

from .poly2 import ONE, T, ZERO, PolyT, poly_eval, poly_mul
from .complexes import (
    F2,
    F2T,
    ChainMap,
    FilteredComplex,
    Generator,
    ValidationReport,
    action_of,
    apply_basis_change,
    complex_from_json,
    complex_to_json,
    evaluation_map,
    tensor_with_T,
    truncate_above,
    validate,
)
from .barannikov import (
    Bar,
    Barcode,
    BarannikovBasis,
    SpectralInvariants,
    StandardnessVerdict,
    TorsionCertificate,
    barannikov_reduce,
    barcode_of,
    barcode_standard,
    bottleneck_distance,
    boundary_depth,
    quotient_mod_T,
    spectral_invariants,
    standardness_test,
)
from .bifurcation import (
    BifurcationEvent,
    BirthDatum,
    PiecewiseFamily,
    Timeline,
    apply_birth,
    apply_death,
    handle_slide_map,
    propagate_basis,
    track_family,
    verify_birth_identities,
)
from .annulus import (
    AnnulusScenario,
    CriticalPoint,
    Harmonic,
    Tolerances,
    critical_points,
    detect_bifurcations,
    evolve,
    floer_complex,
    scenario_from_json,
    scenario_to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
