"""Argument-principle zero counting on rectangles."""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError

MAX_PHASE_STEP = np.pi / 4


def _edge_phase(f, a: complex, b: complex, spacing: float = 2e-3,
                max_points: int = 1 << 15) -> float:
    """Total change of ``arg f`` along the straight segment ``a -> b``.

    The initial sampling is dense enough (``spacing``) that the phase cannot
    wrap unnoticed between samples for the functions used here; it is then
    refined until consecutive samples differ by less than ``MAX_PHASE_STEP``.
    """
    n0 = max(16, int(np.ceil(abs(b - a) / spacing)))
    s = np.linspace(0.0, 1.0, n0 + 1)
    while True:
        w = f(a + (b - a) * s)
        if np.any(w == 0) or not np.all(np.isfinite(w)):
            raise ConvergenceError(f"zero or non-finite value on contour segment {a} -> {b}")
        d = np.angle(w[1:] / w[:-1])
        bad = np.abs(d) > MAX_PHASE_STEP
        if not np.any(bad):
            return float(np.sum(d))
        if s.size > max_points or np.min((s[1:] - s[:-1])[bad]) < 1e-13:
            raise ConvergenceError(f"phase of f cannot be resolved on segment {a} -> {b}")
        mids = 0.5 * (s[:-1][bad] + s[1:][bad])
        s = np.sort(np.concatenate([s, mids]))


def winding(f, x0: float, x1: float, y0: float, y1: float) -> float:
    """``(1/2π)`` times the phase change of ``f`` around the rectangle (counter-clockwise)."""
    c = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = sum(_edge_phase(f, c[i], c[(i + 1) % 4]) for i in range(4))
    return total / (2 * np.pi)


def _count(f, cell):
    w = winding(f, *cell)
    n = int(round(w))
    if abs(w - n) > 0.1:
        raise ConvergenceError(f"non-integer winding {w:.3f} on cell {cell}")
    return n


def locate_zeros(f, x0: float, x1: float, y0: float, y1: float, min_cell: float = 1e-4,
                 max_cell: float = 0.25, max_cells: int = 200000):
    """Isolate the zeros of analytic ``f`` in a rectangle.

    Returns a list of ``(cell, count)`` with ``cell = (x0, x1, y0, y1)``.  Cells
    are split in four until they hold a single zero and are no wider than
    ``max_cell``; cells that still hold several zeros at ``min_cell`` are
    returned with their count.  A cell whose boundary passes too close to a
    zero is re-split at a shifted point.
    """
    out = []
    stack = [((x0, x1, y0, y1), None)]
    processed = 0
    while stack:
        cell, n = stack.pop()
        processed += 1
        if processed > max_cells:
            raise ConvergenceError("zero isolation exceeded the cell budget")
        if n is None:
            n = _count(f, cell)
        if n == 0:
            continue
        a, b, c, d = cell
        size = max(b - a, d - c)
        if (n == 1 and size <= max_cell) or size <= min_cell:
            out.append((cell, n))
            continue
        children = _split(f, cell)
        stack.extend(children)
    return out


def _split(f, cell, fractions=(0.5, 0.47, 0.53, 0.41, 0.59)):
    """Split a cell in two along a long side, or in four when it is roughly square."""
    a, b, c, d = cell
    wide, tall = b - a, d - c
    last = None
    for fr in fractions:
        xm = a + fr * wide
        ym = c + fr * tall
        if wide > 2 * tall:
            parts = [(a, xm, c, d), (xm, b, c, d)]
        elif tall > 2 * wide:
            parts = [(a, b, c, ym), (a, b, ym, d)]
        else:
            parts = [(a, xm, c, ym), (xm, b, c, ym), (a, xm, ym, d), (xm, b, ym, d)]
        try:
            return [(q, _count(f, q)) for q in parts]
        except ConvergenceError as exc:  # zero sits on a cut line; move it
            last = exc
    raise last
