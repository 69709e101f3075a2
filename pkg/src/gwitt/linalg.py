"""Exact integer matrix algebra.

Matrices are lists of rows of Python ints.  Every routine is exact; there is
no floating point.  Functions that accept a matrix with zero rows take an
explicit ``ncols`` argument since the width cannot be read off the data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def shape(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> tuple[int, int]:
    m = len(A)
    if m:
        return m, len(A[0])
    return 0, ncols or 0


def transpose(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    m, n = shape(A, ncols)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    m = len(A)
    k = len(B)
    n = len(B[0]) if k else (ncols or 0)
    out = zeros(m, n)
    for i in range(m):
        row = A[i]
        acc = out[i]
        for t in range(k):
            a = row[t]
            if a:
                brow = B[t]
                for j in range(n):
                    acc[j] += a * brow[j]
    return out


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    """Stack column vectors into an ``nrows x len(cols)`` matrix."""
    return [[c[i] for c in cols] for i in range(nrows)]


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _row_sub(rows: Matrix, i: int, t: int, q: int) -> None:
    if q:
        ri, rt = rows[i], rows[t]
        for j in range(len(ri)):
            ri[j] -= q * rt[j]


def hnf(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``.  ``H`` is in
    echelon form with positive pivots and entries above each pivot reduced to
    ``[0, pivot)``.  Zero rows are at the bottom.
    """
    m, n = shape(A, ncols)
    H = [list(r) for r in A]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            if p != r:
                H[p], H[r] = H[r], H[p]
                U[p], U[r] = U[r], U[p]
            clean = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    _row_sub(H, i, r, q)
                    _row_sub(U, i, r, q)
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            _row_sub(H, i, r, q)
            _row_sub(U, i, r, q)
        r += 1
    return H, U


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == diag`` with ``U``, ``V`` unimodular; ``U_inv`` is kept for lifting."""

    diag: tuple[int, ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    U_inv: tuple[tuple[int, ...], ...]
    rows: int
    cols: int

    def factor(self, i: int) -> int:
        """Diagonal entry ``i`` padded with zeros up to ``rows``."""
        return self.diag[i] if i < len(self.diag) else 0

    def cokernel_factors(self) -> tuple[int, ...]:
        """Invariant factors of ``Z^rows / colspan(A)``, 1's dropped, 0 for a free summand."""
        return tuple(d for d in (self.factor(i) for i in range(self.rows)) if d != 1)


def snf(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SmithForm:
    """Smith normal form with smallest-pivot elimination."""
    m, n = shape(A, ncols)
    D = [list(r) for r in A]
    U = identity(m)
    Ui = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def row_sub(i, t, q):
        # row_i -= q * row_t
        _row_sub(D, i, t, q)
        _row_sub(U, i, t, q)
        for row in Ui:
            row[t] += q * row[i]

    def col_sub(j, t, q):
        # col_j -= q * col_t
        for row in D:
            row[j] -= q * row[t]
        for row in V:
            row[j] -= q * row[t]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                Di = D[i]
                for j in range(t, n):
                    x = Di[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_sub(i, t, D[i][t] // p)
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    col_sub(j, t, D[t][j] // p)
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row_t += row_bad
            row_sub(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
    diag = tuple(D[i][i] for i in range(min(m, n)))
    tup = lambda M: tuple(tuple(r) for r in M)
    return SmithForm(diag, tup(U), tup(V), tup(Ui), m, n)


def cokernel_factors(A: Sequence[Sequence[int]], nrows: int) -> tuple[int, ...]:
    """Invariant factors of ``Z^nrows / colspan(A)`` (A has ``nrows`` rows)."""
    if nrows == 0:
        return ()
    return snf(A).cokernel_factors()


def _reduce_against(v: Sequence[int], H: Matrix) -> tuple[list[int], list[int]]:
    """Reduce row vector ``v`` by the echelon rows of ``H``; return (remainder, multipliers)."""
    w = list(v)
    qs = [0] * len(H)
    for k, row in enumerate(H):
        c = next((j for j, x in enumerate(row) if x), None)
        if c is None:
            break
        q = w[c] // row[c]
        if q:
            qs[k] = q
            for j in range(c, len(w)):
                w[j] -= q * row[j]
    return w, qs


def lattice_residue(v: Sequence[int], A: Sequence[Sequence[int]]) -> list[int]:
    """Canonical representative of ``v`` modulo the column lattice of ``A``."""
    m = len(v)
    if not A or not A[0]:
        return list(v)
    H, _ = hnf(transpose(A), ncols=m)
    return _reduce_against(v, H)[0]


def in_lattice(v: Sequence[int], A: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
    """Coefficients ``x`` with ``A x = v`` if ``v`` lies in the column lattice, else ``None``."""
    m = len(v)
    n = len(A[0]) if A else 0
    if n == 0:
        return () if not any(v) else None
    H, U = hnf(transpose(A), ncols=m)
    w, qs = _reduce_against(v, H)
    if any(w):
        return None
    x = [0] * n
    for k, q in enumerate(qs):
        if q:
            for j in range(n):
                x[j] += q * U[k][j]
    return tuple(x)


def solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[int, ...]:
    """Exact integer solution of ``A x = b``; raises ``ValueError`` when none exists."""
    x = in_lattice(b, A)
    if x is None:
        raise ValueError("no integer solution")
    return x


def kernel(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    """Basis (as rows) of the integer kernel ``{x : A x = 0}``."""
    m, n = shape(A, ncols)
    if n == 0:
        return []
    H, U = hnf(transpose(A, ncols=n), ncols=m)
    return [U[k] for k in range(n) if not any(H[k])]


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> Matrix:
    """Nonzero HNF rows of the lattice spanned by the row vectors ``gens``."""
    if not gens:
        return []
    H, _ = hnf(gens, ncols=dim)
    return [r for r in H if any(r)]


def same_lattice(gens_a: Sequence[Sequence[int]], gens_b: Sequence[Sequence[int]], dim: int) -> bool:
    return lattice_basis(gens_a, dim) == lattice_basis(gens_b, dim)
