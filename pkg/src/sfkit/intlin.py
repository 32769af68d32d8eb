"""Integer linear systems and rational feasibility at desk scale.

Column-style Hermite elimination gives integer solutions and lattice kernels;
Fourier-Motzkin elimination decides rational feasibility of small systems of
inequalities without floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _col_op(mat: list[list[int]], i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    """Replace columns (i, j) by (a*ci + b*cj, c*ci + d*cj)."""
    for row in mat:
        x, y = row[i], row[j]
        row[i] = a * x + b * y
        row[j] = c * x + d * y


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def column_echelon(a: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Return (H, U, pivot_rows) with a.U = H, U unimodular, H in column echelon form."""
    h = [list(row) for row in a]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    pivot_rows: list[int] = []
    p = 0
    for i in range(len(h)):
        if p == ncols:
            break
        row = h[i]
        for j in range(p + 1, ncols):
            if row[j] == 0:
                continue
            if row[p] == 0:
                _col_op(h, p, j, 0, 1, 1, 0)
                _col_op(u, p, j, 0, 1, 1, 0)
                continue
            x, y = row[p], row[j]
            g, s, t = _ext_gcd(x, y)
            # new col p = s*cp + t*cj ; new col j = (-y/g)*cp + (x/g)*cj
            _col_op(h, p, j, s, t, -y // g, x // g)
            _col_op(u, p, j, s, t, -y // g, x // g)
        if row[p] != 0:
            if row[p] < 0:
                for m in (h, u):
                    for r in m:
                        r[p] = -r[p]
            pivot_rows.append(i)
            p += 1
    return h, u, pivot_rows


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> list[int] | None:
    """Some integer solution of a.x = b, or None."""
    h, u, pivot_rows = column_echelon(a, ncols)
    z = [0] * ncols
    npiv = 0
    pivot_set = {r: k for k, r in enumerate(pivot_rows)}
    for i, row in enumerate(h):
        known = sum(row[j] * z[j] for j in range(npiv))
        if i in pivot_set:
            k = pivot_set[i]
            rest = b[i] - known
            if rest % row[k]:
                return None
            z[k] = rest // row[k]
            npiv = k + 1
        elif known != b[i]:
            return None
    return [sum(u[i][j] * z[j] for j in range(ncols)) for i in range(ncols)]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A lattice basis of {x in Z^n : a.x = 0}."""
    h, u, pivot_rows = column_echelon(a, ncols)
    rank = len(pivot_rows)
    return [[u[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def feasible(constraints: list[tuple[Sequence, object]], nvars: int) -> bool:
    """Is there a rational x with coeffs.x >= const for every (coeffs, const)?"""
    rows = [([Fraction(c) for c in coeffs], Fraction(const)) for coeffs, const in constraints]
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for coeffs, const in rows:
            if coeffs[var] > 0:
                pos.append((coeffs, const))
            elif coeffs[var] < 0:
                neg.append((coeffs, const))
            else:
                rest.append((coeffs, const))
        new = rest
        for pc, pk in pos:
            for nc, nk in neg:
                lp, ln = pc[var], -nc[var]
                coeffs = [ln * x + lp * y for x, y in zip(pc, nc)]
                new.append((coeffs, ln * pk + lp * nk))
        # drop duplicates after normalising by the leading nonzero magnitude
        seen = set()
        rows = []
        for coeffs, const in new:
            scale = next((abs(c) for c in coeffs if c), None)
            key = tuple(c / scale for c in coeffs) + (const / scale,) if scale else tuple(coeffs) + (const,)
            if key not in seen:
                seen.add(key)
                rows.append((coeffs, const))
    return all(const <= 0 for _, const in rows)
