"""
Dense exact linear algebra on lists of lists.

Entries are elements of a ``TruncWittRing`` or ``SquareZeroRing``.  Both are
local rings, so elimination only ever pivots on units; ``rank`` and
``nullspace`` are taken over the residue field.
"""

from __future__ import annotations

from itertools import combinations

Matrix = list  # list[list[element]]


def zeros(ring, rows: int, cols: int) -> Matrix:
    return [[ring.zero for _ in range(cols)] for _ in range(rows)]


def identity(ring, n: int) -> Matrix:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def mat_mul(A: Matrix, B: Matrix, ring) -> Matrix:
    n = len(B)
    if A and len(A[0]) != n:
        raise ValueError(f"cannot multiply {shape(A)} by {shape(B)}")
    cols = len(B[0]) if B else 0
    # the matrices in play are mostly zeros, so walk the nonzeros of B once
    Bnz = [[(j, b) for j, b in enumerate(row) if b] for row in B]
    zero = ring.zero
    out = []
    for row in A:
        new = [zero] * cols
        for k, a in enumerate(row):
            if a:
                for j, b in Bnz[k]:
                    new[j] = new[j] + a * b
        out.append(new)
    return out


def mat_vec(A: Matrix, v: list, ring) -> list:
    return [sum((a * x for a, x in zip(row, v) if a), ring.zero) for row in A]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_map(f, A: Matrix) -> Matrix:
    return [[f(a) for a in row] for row in A]


def mat_frobenius(A: Matrix, times: int = 1) -> Matrix:
    for _ in range(times):
        A = [[a.frobenius() for a in row] for row in A]
    return A


def residue_matrix(A: Matrix) -> Matrix:
    return [[a.residue() for a in row] for row in A]


def kron(A: Matrix, B: Matrix) -> Matrix:
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def is_zero(A: Matrix) -> bool:
    return not any(x for row in A for x in row)


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over a field; returns (R, pivot columns)."""
    R = [list(row) for row in A]
    rows, cols = shape(R)
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv if x else x for x in R[r]]
        nz = [(j, y) for j, y in enumerate(R[r]) if y]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                row = list(R[i])
                for j, y in nz:
                    row[j] = row[j] - f * y
                R[i] = row
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(A: Matrix) -> int:
    """Rank of the residue matrix (the honest rank over a field)."""
    if not A or not A[0]:
        return 0
    return len(rref(residue_matrix(A))[1])


def nullspace(A: Matrix, ring) -> list[list]:
    """Basis of {v : A v = 0} over a field, in RREF order (one per free column)."""
    cols = len(A[0]) if A else 0
    if not A:
        return [[ring.one if i == j else ring.zero for i in range(cols)] for j in range(cols)]
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ring.zero] * cols
        v[f] = ring.one
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def column_space_basis(A: Matrix) -> list[list]:
    """Pivot columns of A (over a field)."""
    _, pivots = rref(A)
    return [[row[c] for row in A] for c in pivots]


def same_span(U: list[list], W: list[list]) -> bool:
    """Do two lists of vectors (over a field) span the same subspace?"""
    if not U and not W:
        return True
    ru = rank(U) if U else 0
    rw = rank(W) if W else 0
    return ru == rw == rank(list(U) + list(W))


def det(A: Matrix, ring):
    """Determinant over a commutative local ring.

    Eliminates on unit pivots; a column with no unit left is expanded by
    cofactors, which stays cheap for the small families used here.
    """
    n = len(A)
    if n == 0:
        return ring.one
    if any(len(row) != n for row in A):
        raise ValueError("det of a non-square matrix")
    M = [list(row) for row in A]
    sign = ring.one
    acc = ring.one
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c].is_unit()), None)
        if piv is None:
            sub = [row[c:] for row in M[c:]]
            return sign * acc * _cofactor_det(sub, ring)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        pv = M[c][c]
        inv = pv.inverse()
        acc = acc * pv
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return sign * acc


def _cofactor_det(A: Matrix, ring):
    n = len(A)
    if n == 0:
        return ring.one
    if n == 1:
        return A[0][0]
    total = ring.zero
    for i in range(n):
        if not A[i][0]:
            continue
        minor = [row[1:] for k, row in enumerate(A) if k != i]
        term = A[i][0] * det(minor, ring)
        total = total + term if i % 2 == 0 else total - term
    return total


def principal_minors(A: Matrix, ring):
    """Yield (index subset, minor) over all nonempty principal submatrices."""
    n = len(A)
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            sub = [[A[i][j] for j in idx] for i in idx]
            yield idx, det(sub, ring)


def inverse(A: Matrix, ring) -> Matrix:
    """Inverse over a local ring (Gauss-Jordan on unit pivots)."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("inverse of a non-square matrix")
    M = [list(row) + [ring.one if i == j else ring.zero for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c].is_unit()), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse()
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[n:] for row in M]


def solve_in_span(gens: list[list], w: list, ring) -> list:
    """Coefficients x with sum_k x_k gens[k] = w, over a local ring.

    The residues of ``gens`` must be linearly independent.  Raises
    ValueError when w is not in the span.
    """
    k = len(gens)
    N = len(w)
    if k == 0:
        if any(w):
            raise ValueError("vector is not in the (empty) span")
        return []
    # augmented N x (k+1) system, columns are generators
    M = [[gens[j][i] for j in range(k)] + [w[i]] for i in range(N)]
    row = 0
    pivrows = []
    for c in range(k):
        piv = next((i for i in range(row, N) if M[i][c].is_unit()), None)
        if piv is None:
            raise ValueError("generators are dependent modulo the maximal ideal")
        M[row], M[piv] = M[piv], M[row]
        inv = M[row][c].inverse()
        M[row] = [x * inv for x in M[row]]
        for i in range(N):
            if i != row and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[row])]
        pivrows.append(row)
        row += 1
    for i in range(row, N):
        if M[i][k]:
            raise ValueError("vector is not in the span of the generators")
    return [M[r][k] for r in pivrows]
