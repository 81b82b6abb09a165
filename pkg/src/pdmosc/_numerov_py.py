"""Pure-Python Numerov recurrences; same contract as the compiled ``_numerov``."""
from __future__ import annotations

BIG = 1e100
SMALL = 1e-100


def numerov_nodes(w, p0: float, p1: float) -> int:
    """Sign changes of psi[1], ..., psi[n-1] (zeros skipped)."""
    w = w.tolist() if hasattr(w, "tolist") else list(w)
    prev, cur = p0, p1
    last = p1
    nodes = 0
    for i in range(1, len(w) - 1):
        nxt = (2.0 * (1.0 - 5.0 * w[i]) * cur - (1.0 + w[i - 1]) * prev) / (1.0 + w[i + 1])
        if abs(nxt) > BIG:
            nxt *= SMALL
            cur *= SMALL
        if nxt != 0.0:
            if last == 0.0:
                last = nxt
            elif (nxt > 0.0) != (last > 0.0):
                nodes += 1
                last = nxt
        prev, cur = cur, nxt
    return nodes


def numerov_fill(w, p0: float, p1: float, out) -> None:
    """Write psi into ``out`` (same length as w); rescales the prefix on overflow."""
    wl = w.tolist() if hasattr(w, "tolist") else list(w)
    n = len(wl)
    psi = [0.0] * n
    psi[0] = p0
    if n > 1:
        psi[1] = p1
    for i in range(1, n - 1):
        nxt = (2.0 * (1.0 - 5.0 * wl[i]) * psi[i] - (1.0 + wl[i - 1]) * psi[i - 1]) / (1.0 + wl[i + 1])
        psi[i + 1] = nxt
        if abs(nxt) > BIG:
            for j in range(i + 2):
                psi[j] *= SMALL
    out[:] = psi
