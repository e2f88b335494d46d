"""Dense exact linear algebra over a field, for the small matrices used by
trace forms and transfers (typical size <= 8)."""

from __future__ import annotations

from .errors import DegenerateForm


def mat_det(rows, field):
    """Determinant by fraction-free-enough Gaussian elimination (exact
    field arithmetic, so plain elimination is fine)."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = field.one()
    for i in range(n):
        piv = next((r for r in range(i, n) if not m[r][i].is_zero), None)
        if piv is None:
            return field.zero()
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det = det * m[i][i]
        inv = m[i][i].inverse()
        for r in range(i + 1, n):
            if m[r][i].is_zero:
                continue
            f = m[r][i] * inv
            for c in range(i, n):
                m[r][c] = m[r][c] - f * m[i][c]
    return det


def sym_diagonalize(rows, field):
    """Pivots of a congruence diagonalization of a symmetric matrix,
    char != 2.  Pivoting: first nonzero diagonal entry, else a symmetric
    completion step.  Raises DegenerateForm on singular input."""
    n = len(rows)
    m = [list(r) for r in rows]
    pivots = []
    for i in range(n):
        if m[i][i].is_zero:
            j = next((j for j in range(i + 1, n) if not m[j][j].is_zero), None)
            if j is not None:
                _swap_sym(m, i, j)
            else:
                pair = next(
                    ((r, c) for r in range(i, n) for c in range(r + 1, n)
                     if not m[r][c].is_zero),
                    None,
                )
                if pair is None:
                    raise DegenerateForm("degenerate symmetric matrix")
                r, c = pair
                # row/col c added to row/col r gives diagonal 2*m[r][c] != 0
                for k in range(n):
                    m[r][k] = m[r][k] + m[c][k]
                for k in range(n):
                    m[k][r] = m[k][r] + m[k][c]
                if r != i:
                    _swap_sym(m, i, r)
        d = m[i][i]
        pivots.append(d)
        inv = d.inverse()
        for r in range(i + 1, n):
            if m[r][i].is_zero:
                continue
            f = m[r][i] * inv
            for k in range(n):
                m[r][k] = m[r][k] - f * m[i][k]
            for k in range(n):
                m[k][r] = m[k][r] - f * m[k][i]
    return pivots


def _swap_sym(m, i, j):
    m[i], m[j] = m[j], m[i]
    for row in m:
        row[i], row[j] = row[j], row[i]
