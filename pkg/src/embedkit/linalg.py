"""Linear algebra over the chain ring Z/l^c.

Row spans are kept in Howell normal form: echelon rows whose pivots are
powers of l, entries above each pivot reduced modulo that pivot, and the
Howell property (every span element vanishing on the first k columns is a
combination of the rows that vanish there).  The form is unique per span,
so tuples of its rows are used as dictionary keys throughout.

Matrices are lists of rows of Python ints.  Vectors are acted on as columns,
``sigma @ v``; a span is given by rows that are such vectors.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .modarith import Poly

Matrix = list[list[int]]
Basis = tuple[tuple[int, ...], ...]

_INT64_SAFE = 2**62


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def reduce_matrix(a: Sequence[Sequence[int]], modulus: int) -> Matrix:
    return [[x % modulus for x in row] for row in a]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], modulus: int) -> Matrix:
    if not a or not b:
        ncols = len(b[0]) if b else 0
        return zeros(len(a), ncols)
    inner = len(b)
    # int64 accumulation is exact while inner * (modulus - 1)^2 stays small
    dtype = np.int64 if inner * (modulus - 1) ** 2 < _INT64_SAFE else object
    out = np.asarray(a, dtype=dtype) @ np.asarray(b, dtype=dtype)
    return [[int(x) % modulus for x in row] for row in out]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int], modulus: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) % modulus for row in a]


def mat_add(a, b, modulus: int) -> Matrix:
    return [[(x + y) % modulus for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, k: int, modulus: int) -> Matrix:
    return [[x * k % modulus for x in row] for row in a]


def mat_pow(a: Sequence[Sequence[int]], e: int, modulus: int) -> Matrix:
    result = identity(len(a))
    base = [list(r) for r in a]
    while e:
        if e & 1:
            result = matmul(result, base, modulus)
        base = matmul(base, base, modulus)
        e >>= 1
    return result


def poly_at_matrix(f: Poly, a: Sequence[Sequence[int]], modulus: int) -> Matrix:
    """Evaluate ``f`` at the square matrix ``a`` (Horner)."""
    n = len(a)
    acc = zeros(n, n)
    for coeff in reversed(f.coeffs):
        acc = matmul(acc, a, modulus)
        for i in range(n):
            acc[i][i] = (acc[i][i] + coeff) % modulus
    return acc


def apply_poly_to_rows(f: Poly, a: Sequence[Sequence[int]], rows, modulus: int) -> Matrix:
    """Rows of ``f(a) @ v`` for each row ``v`` of ``rows``."""
    if not rows:
        return []
    # work with column vectors: V has the vectors as columns
    v = transpose(rows)
    acc = zeros(len(v), len(rows))
    for coeff in reversed(f.coeffs):
        acc = matmul(a, acc, modulus)
        for i in range(len(acc)):
            for j in range(len(rows)):
                acc[i][j] = (acc[i][j] + coeff * v[i][j]) % modulus
    return transpose(acc)


def _val(x: int, l: int) -> int:
    v = 0
    while x % l == 0:
        x //= l
        v += 1
    return v


def howell_form(rows: Sequence[Sequence[int]], l: int, c: int, ncols: int | None = None) -> Basis:
    """Howell normal form of the row span of ``rows`` over Z/l^c."""
    N = l**c
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [[x % N for x in r] for r in rows]
    work = [r for r in work if any(r)]
    result: list[tuple[list[int], int, int]] = []  # (row, pivot column, valuation)
    for col in range(ncols):
        best, best_v = -1, c
        for idx, r in enumerate(work):
            if r[col]:
                v = _val(r[col], l)
                if v < best_v:
                    best, best_v = idx, v
                    if v == 0:
                        break
        if best < 0:
            continue
        piv = work.pop(best)
        lv = l**best_v
        inv = pow(piv[col] // lv, -1, N)
        piv = [x * inv % N for x in piv]
        rest = []
        for r in work:
            if r[col]:
                f = r[col] // lv
                r = [(x - f * y) % N for x, y in zip(r, piv)]
            if any(r):
                rest.append(r)
        if best_v:
            extra = [x * l ** (c - best_v) % N for x in piv]
            if any(extra):
                rest.append(extra)
        work = rest
        result.append((piv, col, best_v))
    for k, (row_k, col_k, v_k) in enumerate(result):
        lv = l**v_k
        for i in range(k):
            q = result[i][0][col_k] // lv
            if q:
                result[i] = ([(x - q * y) % N for x, y in zip(result[i][0], row_k)],
                             result[i][1], result[i][2])
    return tuple(tuple(r) for r, _, _ in result)


def pivots(basis: Basis) -> list[tuple[int, int]]:
    """``(column, pivot value)`` for each row of a Howell basis."""
    out = []
    for row in basis:
        for j, x in enumerate(row):
            if x:
                out.append((j, x))
                break
    return out


def log_size(basis: Basis, l: int, c: int) -> int:
    """log_l of the number of elements in the span of a Howell basis."""
    return sum(c - _val(x, l) for _, x in pivots(basis))


def in_span(v: Sequence[int], basis: Basis, l: int, c: int, cols: Sequence[int] | None = None) -> bool:
    """Membership test; ``cols`` (pivot columns of ``basis``) may be passed to skip the scan."""
    N = l**c
    x = [a % N for a in v]
    if cols is None:
        cols = [next(k for k, y in enumerate(row) if y) for row in basis]
    for row, j in zip(basis, cols):
        if any(x[:j]):
            return False
        if x[j] % row[j]:
            return False
        q = x[j] // row[j]
        if q:
            x = [(a - q * b) % N for a, b in zip(x, row)]
    return not any(x)


def kernel(a: Sequence[Sequence[int]], l: int, c: int, ncols: int | None = None) -> Basis:
    """Howell basis of ``{v : a @ v == 0}`` over Z/l^c."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if n == 0:
        return ()
    k = len(a)
    at = transpose(a) if a else [[] for _ in range(n)]
    aug = [list(at[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    h = howell_form(aug, l, c, k + n)
    vecs = [row[k:] for row in h if not any(row[:k])]
    return howell_form(vecs, l, c, n)


def span_sum(a: Basis, b: Basis, l: int, c: int, ncols: int) -> Basis:
    return howell_form(list(a) + list(b), l, c, ncols)


def span_intersection(a: Basis, b: Basis, l: int, c: int, ncols: int) -> Basis:
    rows = [list(r) + list(r) for r in a] + [list(r) + [0] * ncols for r in b]
    h = howell_form(rows, l, c, 2 * ncols)
    vecs = [row[ncols:] for row in h if not any(row[:ncols])]
    return howell_form(vecs, l, c, ncols)


def scale_span(basis: Basis, k: int, l: int, c: int, ncols: int) -> Basis:
    return howell_form([[x * k for x in r] for r in basis], l, c, ncols)


def rank_mod_prime(rows: Sequence[Sequence[int]], l: int) -> int:
    return len(howell_form(rows, l, 1))


def independent_rows_mod_l(rows: Sequence[Sequence[int]], l: int) -> tuple[list[int], list[int]]:
    """Greedy choice of rows independent modulo ``l``.

    Returns the chosen row indices and a set of columns on which the chosen
    rows have an invertible (mod l) square minor.
    """
    chosen: list[int] = []
    echelon: list[tuple[int, list[int]]] = []
    for idx, r in enumerate(rows):
        x = [a % l for a in r]
        for j, e in echelon:
            if x[j]:
                f = x[j]
                x = [(a - f * b) % l for a, b in zip(x, e)]
        lead = next((j for j, a in enumerate(x) if a), None)
        if lead is None:
            continue
        inv = pow(x[lead], -1, l)
        x = [a * inv % l for a in x]
        # keep the echelon fully reduced so later leads stay distinct
        echelon = [(j, [(a - e[lead] * b) % l for a, b in zip(e, x)]) for j, e in echelon]
        echelon.append((lead, x))
        chosen.append(idx)
    return chosen, [j for j, _ in echelon]


def mat_inverse(a: Sequence[Sequence[int]], modulus: int) -> Matrix:
    """Inverse of a square matrix over Z/modulus, modulus a prime power.

    Raises ``ValueError`` if the matrix is singular.
    """
    n = len(a)
    m = [[x % modulus for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            try:
                inv = pow(m[r][col], -1, modulus)
            except ValueError:
                continue
            piv = r
            break
        if piv is None:
            raise ValueError("matrix is not invertible")
        m[col], m[piv] = m[piv], m[col]
        m[col] = [x * inv % modulus for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % modulus for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def solve_in_free_basis(basis_rows: Sequence[Sequence[int]], cols: Sequence[int],
                        vectors: Sequence[Sequence[int]], modulus: int) -> Matrix:
    """Coordinates of ``vectors`` in a free basis.

    ``cols`` picks columns on which ``basis_rows`` has an invertible minor;
    each vector must lie in the span.  Row ``i`` of the result holds the
    coordinates of ``vectors[i]``.
    """
    minor = [[row[j] for j in cols] for row in basis_rows]
    inv = mat_inverse(minor, modulus)
    restricted = [[v[j] for j in cols] for v in vectors]
    return matmul(restricted, inv, modulus)
