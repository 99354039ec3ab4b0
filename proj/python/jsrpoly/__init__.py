"""Certified joint-spectral-radius bounds via the invariant polytope algorithm."""

from ._jsrpoly import (
    BudgetExceeded,
    CapacityResult,
    EngineResult,
    InputError,
    JsrBounds,
    MatrixSet,
    NumericalFailure,
    ProductWord,
    RegularityResult,
    SearchReport,
    UnsupportedCase,
    brute_force_bounds,
    canonicalize_word,
    capacity,
    classic_gripenberg,
    compute_jsr,
    daubechies_mask,
    daubechies_regularity,
    evaluate,
    fixture,
    fixture_names,
    gripenberg_lower,
    minkowski_norm,
    normalized_spectral_radius,
    operator_norm,
    regularity,
    spectral_radius,
)

__all__ = [
    "BudgetExceeded",
    "CapacityResult",
    "EngineResult",
    "InputError",
    "JsrBounds",
    "MatrixSet",
    "NumericalFailure",
    "ProductWord",
    "RegularityResult",
    "SearchReport",
    "UnsupportedCase",
    "brute_force_bounds",
    "canonicalize_word",
    "capacity",
    "classic_gripenberg",
    "compute_jsr",
    "daubechies_mask",
    "daubechies_regularity",
    "evaluate",
    "fixture",
    "fixture_names",
    "gripenberg_lower",
    "minkowski_norm",
    "normalized_spectral_radius",
    "operator_norm",
    "regularity",
    "spectral_radius",
]
