"""Kernel dispatch.

The compiled module is used when it imports and every quantity of a call
fits in int64; otherwise the reference kernels on Python integers run.
Setting ``POLYRIGID_PURE_PYTHON=1`` forces the reference kernels.
All functions return plain lists of ints.
"""
from __future__ import annotations

import os

from . import _pykernels
from .plan import INT64_SAFE, BPlan, LevelPlan

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

COMPILED_AVAILABLE = _ckernels is not None
BACKEND = "cython" if COMPILED_AVAILABLE and not os.environ.get("POLYRIGID_PURE_PYTHON") else "python"

__all__ = ["BACKEND", "COMPILED_AVAILABLE", "BPlan", "LevelPlan", "backend_names",
           "prefix_b_many", "window_sums", "boundary_counts", "level_prefix_many",
           "birkhoff_many"]


def backend_names() -> list[str]:
    return ["python", "cython"] if COMPILED_AVAILABLE else ["python"]


def _compiled(backend: str | None):
    name = BACKEND if backend is None else backend
    if name == "cython":
        if not COMPILED_AVAILABLE:
            raise RuntimeError("compiled kernels are not built")
        return _ckernels
    if name != "python":
        raise ValueError(f"unknown backend {name!r}")
    return None


def prefix_b_many(qs, bp: BPlan, backend: str | None = None) -> list[int]:
    ck = _compiled(backend)
    if ck is not None and bp.fits_int64():
        return ck.prefix_b_many(qs, bp).tolist()
    return _pykernels.prefix_b_many(qs, bp)


def window_sums(starts, width: int, bp: BPlan, backend: str | None = None) -> list[int]:
    ck = _compiled(backend)
    if ck is not None and bp.fits_int64() and width < INT64_SAFE:
        return ck.window_sums(starts, width, bp).tolist()
    return _pykernels.window_sums(starts, width, bp)


def boundary_counts(starts, width: int, bp: BPlan, backend: str | None = None) -> list[int]:
    ck = _compiled(backend)
    if ck is not None and bp.fits_int64() and width < INT64_SAFE:
        return ck.boundary_counts(starts, width, bp).tolist()
    return _pykernels.boundary_counts(starts, width, bp)


def _split_prefix(ck, levels: list[int], lp: LevelPlan) -> list[int]:
    # peel the top stage in Python so the rest fits the compiled kernel
    n = lp.heights[-2]
    qs, rs = zip(*(divmod(L, n) for L in levels)) if levels else ((), ())
    top = ck.prefix_b_many(list(qs), lp.stages[-1]).tolist()
    low = ck.level_prefix_many(list(rs), lp.truncated(lp.T - 1)).tolist()
    k, sig = lp.k, lp.sigmas[-2]
    return [(q * sig + a + b) % k for q, a, b in zip(qs, top, low)]


def _splittable(lp: LevelPlan) -> bool:
    return lp.T >= 2 and lp.truncated(lp.T - 1).fits_int64() and lp.stages[-1].fits_int64()


def level_prefix_many(levels, lp: LevelPlan, backend: str | None = None) -> list[int]:
    ck = _compiled(backend)
    levels = [int(L) for L in levels]
    if ck is not None:
        if lp.fits_int64():
            return ck.level_prefix_many(levels, lp).tolist()
        if _splittable(lp):
            return _split_prefix(ck, levels, lp)
    return _pykernels.level_prefix_many(levels, lp)


def birkhoff_many(levels, m: int, lp: LevelPlan, backend: str | None = None) -> list[int]:
    """``S_T(L + m) - S_T(L)`` mod k for each level ``L``."""
    ck = _compiled(backend)
    levels = [int(L) for L in levels]
    if ck is not None:
        if lp.fits_int64() and m < INT64_SAFE and lp.heights[-1] + m < INT64_SAFE:
            return ck.birkhoff_many(levels, m, lp).tolist()
        if _splittable(lp):
            hi = _split_prefix(ck, [L + m for L in levels], lp)
            lo = _split_prefix(ck, levels, lp)
            return [(a - b) % lp.k for a, b in zip(hi, lo)]
    return _pykernels.birkhoff_many(levels, m, lp)
