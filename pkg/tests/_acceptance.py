"""Bookkeeping for the acceptance suite: one PASS/FAIL line per criterion."""

from __future__ import annotations

import time
from contextlib import contextmanager

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time the block, record a PASS/FAIL line and enforce the time limit."""
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        passed = ok and dt <= limit
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'} ({dt:.1f}s, limit {limit:.0f}s) {title}"
        RESULTS[number] = line
        print(line)
    assert dt <= limit, f"criterion {number} took {dt:.1f}s, limit {limit:.0f}s"
