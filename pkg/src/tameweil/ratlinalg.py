"""Exact linear algebra over Q and integer lattice arithmetic.

Matrices are plain lists of row lists.  Rational routines use Fraction
throughout; the lattice kit works on integer row matrices, with a
lattice represented by the row span of a Hermite normal form basis.
Sizes in this package are tiny (dimension rarely above 50), so the
implementations favor clarity over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .errors import InvalidInputError
from .exactalg import Poly

Row = List[Fraction]
Matrix = List[Row]


# -- construction and basic ops ---------------------------------------


def mat_identity(n: int) -> Matrix:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def mat_zero(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def mat_copy(A: Matrix) -> Matrix:
    return [list(r) for r in A]


def transpose(A: Matrix) -> Matrix:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A: Matrix) -> Matrix:
    return [[c * a for a in r] for r in A]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise InvalidInputError("matrix shapes do not match")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A: Matrix, v: Sequence) -> List:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def vec_mat(v: Sequence, A: Matrix) -> List:
    return mat_vec(transpose(A), v)


def mat_pow(A: Matrix, k: int) -> Matrix:
    n = len(A)
    result = mat_identity(n)
    base = mat_copy(A)
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return len(A) == len(B) and all(ra == rb for ra, rb in zip(A, B))


def trace(A: Matrix) -> Fraction:
    return sum(A[i][i] for i in range(len(A)))


# -- elimination over Q -----------------------------------------------


def rref(A: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns (R, pivot column list)."""
    R = [[Fraction(x) for x in row] for row in A]
    m = len(R)
    n = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def solve_right(A: Matrix, b: Sequence) -> Optional[List[Fraction]]:
    """One solution x of A x = b over Q, or None."""
    m = len(A)
    n = len(A[0]) if A else 0
    aug = [list(map(Fraction, A[i])) + [Fraction(b[i])] for i in range(m)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = R[i][n]
    return x


def nullspace(A: Matrix) -> List[List[Fraction]]:
    """Basis of the right kernel {v : A v = 0} over Q."""
    if not A:
        return []
    n = len(A[0])
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fc]
        basis.append(v)
    return basis


def det(A: Matrix) -> Fraction:
    n = len(A)
    if any(len(r) != n for r in A):
        raise InvalidInputError("determinant needs a square matrix")
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] * inv
                for j in range(c, n):
                    M[i][j] -= f * M[c][j]
    return d


def inverse(A: Matrix) -> Optional[Matrix]:
    n = len(A)
    aug = [list(map(Fraction, A[i])) + [Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in R]


def charpoly(A: Matrix) -> Poly:
    """Characteristic polynomial det(xI - A), monic, by Faddeev-LeVerrier."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise InvalidInputError("charpoly needs a square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = mat_identity(n)
    for k in range(1, n + 1):
        AM = mat_mul(A, M)
        c = -trace(AM) / k
        coeffs[n - k] = c
        M = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return Poly(coeffs)


def matrix_minpoly(A: Matrix) -> Poly:
    """Minimal polynomial of a square matrix over Q."""
    n = len(A)
    powers = [mat_identity(n)]
    flat_rows: Matrix = [[c for row in powers[0] for c in row]]
    cur = mat_copy(A)
    while True:
        target = [c for row in cur for c in row]
        combo = solve_right(transpose(flat_rows), target)
        if combo is not None:
            return Poly([-c for c in combo] + [Fraction(1)])
        powers.append(cur)
        flat_rows.append(target)
        cur = mat_mul(cur, A)


# -- elimination over F_p ---------------------------------------------


def kernel_mod_p(A: List[List[int]], p: int) -> List[List[int]]:
    """Basis of the right kernel of A over F_p."""
    if not A:
        return []
    m = len(A)
    n = len(A[0])
    R = [[x % p for x in row] for row in A]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if R[i][c] % p != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = pow(R[r][c], -1, p)
        R[r] = [x * inv % p for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] % p:
                f = R[i][c]
                R[i] = [(x - f * y) % p for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-R[i][fc]) % p
        basis.append(v)
    return basis


# -- integer HNF and lattices -----------------------------------------


def hnf(rows: List[List[int]]) -> List[List[int]]:
    """Row-style Hermite normal form of the row span.

    Result rows are independent, pivots positive, entries above each
    pivot reduced into [0, pivot).  Zero rows are dropped.  The row span
    equals the span of the input.
    """
    if not rows:
        return []
    n = len(rows[0])
    work = [list(r) for r in rows if any(r)]
    if any(len(r) != n for r in work):
        raise InvalidInputError("ragged matrix")
    basis: List[List[int]] = []
    for c in range(n):
        # collect rows with first nonzero entry at column c
        stash = []
        rest = []
        for r in work:
            if r[c] != 0:
                stash.append(r)
            else:
                rest.append(r)
        if not stash:
            work = rest
            continue
        # gcd-combine stash into one pivot row
        piv = stash[0]
        for r in stash[1:]:
            while r[c] != 0:
                if abs(piv[c]) > abs(r[c]):
                    piv, r = r, piv
                q = r[c] // piv[c]
                for j in range(c, n):
                    r[j] -= q * piv[j]
            if any(r):
                rest.append(r)
        if piv[c] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        work = rest
    # reduce above pivots
    for i in range(len(basis) - 1, -1, -1):
        c = next(j for j, x in enumerate(basis[i]) if x != 0)
        for k in range(i):
            if basis[k][c] != 0:
                q = basis[k][c] // basis[i][c]
                if q:
                    basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
    return basis


def hnf_with_transform(rows: List[List[int]]) -> Tuple[List[List[int]], List[List[int]]]:
    """(H, U): H = hnf-style reduction of rows, U integral with U*rows = H.

    Zero rows of the reduction are kept here (with their transform rows)
    so that kernels can be read off.
    """
    if not rows:
        return [], []
    n = len(rows[0])
    m = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    # run the same elimination on the augmented matrix, prioritizing the
    # first n columns only
    basis: List[List[int]] = []
    work = aug
    for c in range(n):
        stash = [r for r in work if r[c] != 0]
        rest = [r for r in work if r[c] == 0]
        if not stash:
            work = rest
            continue
        piv = stash[0]
        for r in stash[1:]:
            while r[c] != 0:
                if abs(piv[c]) > abs(r[c]):
                    piv, r = r, piv
                q = r[c] // piv[c]
                for j in range(c, n + m):
                    r[j] -= q * piv[j]
                # entries before c are already zero for both rows
            rest.append(r)
        if piv[c] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        work = rest
    for i in range(len(basis) - 1, -1, -1):
        c = next(j for j in range(n) if basis[i][j] != 0)
        for k in range(i):
            if basis[k][c] != 0:
                q = basis[k][c] // basis[i][c]
                if q:
                    basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
    all_rows = basis + work
    H = [r[:n] for r in all_rows]
    U = [r[n:] for r in all_rows]
    return H, U


def znullspace(rows: List[List[int]]) -> List[List[int]]:
    """Basis of the left kernel {x in Z^m : x * rows = 0}."""
    H, U = hnf_with_transform(rows)
    return [u for h, u in zip(H, U) if not any(h)]


def zsolve_left(rows: List[List[int]], target: List[int]) -> Optional[List[int]]:
    """One integer solution x of x * rows = target, or None."""
    H, U = hnf_with_transform(rows)
    pairs = [(h, u) for h, u in zip(H, U) if any(h)]
    t = list(target)
    coeffs = []
    for h, u in pairs:
        c = next(j for j, x in enumerate(h) if x != 0)
        if t[c] % h[c] != 0:
            # may still be fixable only if divisible; HNF pivots are canonical
            return None
        q = t[c] // h[c]
        coeffs.append((q, u))
        t = [a - q * b for a, b in zip(t, h)]
    if any(t):
        return None
    m = len(rows)
    x = [0] * m
    for q, u in coeffs:
        for i in range(m):
            x[i] += q * u[i]
    return x


def lattice_reduce(v: Sequence[int], H: List[List[int]]) -> List[int]:
    """Canonical representative of v modulo the row span of H (H in HNF)."""
    t = list(v)
    for row in H:
        c = next(j for j, x in enumerate(row) if x != 0)
        q = t[c] // row[c]
        if q:
            t = [a - q * b for a, b in zip(t, row)]
    return t


def lattice_contains(H: List[List[int]], v: Sequence[int]) -> bool:
    return not any(lattice_reduce(v, H))


def lattice_sum(H1: List[List[int]], H2: List[List[int]]) -> List[List[int]]:
    return hnf(list(H1) + list(H2))


def lattice_intersect(H1: List[List[int]], H2: List[List[int]]) -> List[List[int]]:
    """Intersection of the row spans of H1 and H2."""
    if not H1 or not H2:
        return []
    stacked = list(H1) + list(H2)
    kern = znullspace(stacked)
    m1 = len(H1)
    vecs = []
    for k in kern:
        v = [0] * len(H1[0])
        for i in range(m1):
            if k[i]:
                v = [a + k[i] * b for a, b in zip(v, H1[i])]
        vecs.append(v)
    return hnf(vecs)


def zright_kernel(M: List[List[int]]) -> List[List[int]]:
    """Basis of {z in Z^k : M z = 0} for an integer matrix M."""
    if not M:
        return []
    return znullspace([list(col) for col in zip(*M)])


def lattice_preimage(A: List[List[int]], H: List[List[int]]) -> List[List[int]]:
    """HNF basis of {y in Z^n : A y lies in the row span of H}.

    A is m x n acting on column vectors; H rows span a lattice in Z^m.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    if not H:
        # target lattice is zero: plain integer kernel of A
        return hnf(zright_kernel(A))
    k = len(H)
    block = [list(A[i]) + [-H[j][i] for j in range(k)] for i in range(m)]
    kern = zright_kernel(block)
    return hnf([v[:n] for v in kern])


def lattice_index(H: List[List[int]]) -> int:
    """Index [Z^n : L] for a full-rank lattice in HNF; raises if not full rank."""
    if not H:
        raise InvalidInputError("empty lattice has no finite index")
    n = len(H[0])
    if len(H) != n:
        raise InvalidInputError("lattice is not full rank")
    idx = 1
    for row in H:
        c = next(j for j, x in enumerate(row) if x != 0)
        idx *= row[c]
    return idx


def lattice_scale(c: int, H: List[List[int]]) -> List[List[int]]:
    return [[c * x for x in row] for row in H]


def row_gcd_normalize(v: Sequence[int]) -> List[int]:
    """Divide an integer vector by the gcd of its entries (primitive form)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    w = [x // g for x in v]
    for x in w:
        if x != 0:
            if x < 0:
                w = [-y for y in w]
            break
    return w


def clear_denominators(rows: Matrix) -> Tuple[List[List[int]], int]:
    """Scale rational rows to integers; returns (int rows, common denominator)."""
    den = 1
    for row in rows:
        for x in row:
            f = Fraction(x)
            den = den * f.denominator // gcd(den, f.denominator)
    out = [[int(Fraction(x) * den) for x in row] for row in rows]
    return out, den
