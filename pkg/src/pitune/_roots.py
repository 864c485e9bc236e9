"""Bracketing root finders shared by the transcendental solvers."""

import math

from .errors import RootFindingError


def bisect(f, lo, hi, xtol=1e-12, maxiter=200, flo=None, fhi=None):
    """Plain bisection on a sign-changing bracket ``[lo, hi]``.

    Returns the midpoint of the final bracket.  An exact zero at either end
    is returned as-is.
    """
    flo = f(lo) if flo is None else flo
    fhi = f(hi) if fhi is None else fhi
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise RootFindingError("no sign change in bracket", (lo, hi))
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid in (lo, hi):
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_roots(f, start, stop, step=0.01, count=1, xtol=1e-12):
    """First ``count`` roots of ``f`` in ``(start, stop]`` by scan + bisection.

    The scan walks a fixed grid; a double root that touches zero without a
    sign change between grid nodes is invisible to it.
    """
    roots = []
    n = int(math.ceil((stop - start) / step))
    x0, f0 = start, f(start)
    for k in range(1, n + 1):
        x1 = min(start + k * step, stop)
        f1 = f(x1)
        if f1 == 0.0:
            roots.append(x1)
        elif f0 != 0.0 and (f0 > 0) != (f1 > 0):
            roots.append(bisect(f, x0, x1, xtol=xtol, flo=f0, fhi=f1))
        if len(roots) == count:
            return roots
        x0, f0 = x1, f1
    if len(roots) < count:
        raise RootFindingError(
            f"found {len(roots)} of {count} roots while scanning", (start, stop)
        )
    return roots


def golden_min(f, lo, hi, xtol):
    """Golden-section minimisation; returns ``(x, f(x))`` of the best probe."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best = min((fc, c), (fd, d))
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
            best = min(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
            best = min(best, (fd, d))
    return best[1], best[0]
