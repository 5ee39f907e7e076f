"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when the
extension is missing or when UAVCOVER_BACKEND=python is set. Both expose the
same functions with identical semantics.
"""

import os

_requested = os.environ.get("UAVCOVER_BACKEND", "auto").lower()

if _requested in ("python", "fallback", "pure"):
    from uavcover.kernels import _fallback as impl

    BACKEND = "python"
elif _requested in ("native", "auto", ""):
    try:
        from uavcover.kernels import _native as impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        if _requested == "native":
            raise
        from uavcover.kernels import _fallback as impl  # type: ignore[no-redef]

        BACKEND = "python"
else:
    raise RuntimeError(f"unknown UAVCOVER_BACKEND value: {_requested!r}")

mec = impl.mec
covered_mask = impl.covered_mask
coverage_count = impl.coverage_count
correct_sweep = impl.correct_sweep
greedy_mec_filter = impl.greedy_mec_filter
candidate_rows = impl.candidate_rows

__all__ = [
    "BACKEND",
    "mec",
    "covered_mask",
    "coverage_count",
    "correct_sweep",
    "greedy_mec_filter",
    "candidate_rows",
]
