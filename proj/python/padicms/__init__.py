"""Limit-(quasi-)periodic model sets with p-adic internal spaces.

Thin wrapper over the compiled extension. Exact quantities cross the
boundary as strings (rationals like "57/8192", quadratic integers like
"2+3*sqrt2"); convert with fractions.Fraction where useful.
"""

import json

from _padicms import (
    amplitudes,
    chair_class,
    chair_deficit,
    chair_patch,
    dekking_coincidence,
    fourier_bohr,
    intensity,
    member_full,
    padic_distance,
    quasi_patch_sizes,
    quasi_sandwich_json,
    sequence_on_range,
    spectrum_max_rel_err,
    verify_windows,
    window_measures,
)

__all__ = [
    "amplitudes",
    "chair_class",
    "chair_deficit",
    "chair_patch",
    "dekking_coincidence",
    "fourier_bohr",
    "intensity",
    "member_full",
    "padic_distance",
    "quasi_patch_sizes",
    "quasi_sandwich",
    "quasi_sandwich_json",
    "sequence_on_range",
    "spectrum_max_rel_err",
    "verify_windows",
    "window_measures",
]


def quasi_sandwich(steps, depth):
    """Sandwich report as a dict (see quasi_sandwich_json for the raw string)."""
    return json.loads(quasi_sandwich_json(steps, depth))
