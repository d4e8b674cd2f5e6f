"""Deterministic one-way document exchange and edit-error-correcting codes for bit strings."""
from .det_sample import DetSample, PeriodicDetSample, build_det_sample, build_periodic_det_sample, check_sample
from .ecc import EditCodeword, ecc_decode, ecc_encode, redundancy_bits
from .harness import apply_random_edits, edit_distance
from .rs_codec import rs_decode, rs_encode
from .sketch import DetectedFailure, Sketch, SketchFormatError, build_sketch, expected_sketch_bits, reconstruct
from .strings_core import (
    APERIODIC,
    LceIndex,
    Run,
    build_lce_index,
    compute_runs,
    find_high_period_window,
    has_period,
    periods_of_length_m,
    query_has_period,
    shortest_period,
)

__all__ = [
    "APERIODIC",
    "DetSample",
    "DetectedFailure",
    "EditCodeword",
    "LceIndex",
    "PeriodicDetSample",
    "Run",
    "Sketch",
    "SketchFormatError",
    "apply_random_edits",
    "build_det_sample",
    "build_lce_index",
    "build_periodic_det_sample",
    "build_sketch",
    "check_sample",
    "compute_runs",
    "ecc_decode",
    "ecc_encode",
    "edit_distance",
    "expected_sketch_bits",
    "find_high_period_window",
    "has_period",
    "periods_of_length_m",
    "query_has_period",
    "reconstruct",
    "redundancy_bits",
    "rs_decode",
    "rs_encode",
    "shortest_period",
]
