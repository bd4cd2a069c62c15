"""Definite quaternion algebras ramified at one finite place.

Everything here is computed over Q with exact rational coordinates.
Elements of an algebra (a, b) are 4-vectors in the basis 1, i, j, k with
i^2 = a, j^2 = b, k = ij = -ji; no splitting field is ever constructed.
Local invariants come from the closed-form Hilbert symbol, and the
order-8 unit normalizing the Frobenius slot is verified by direct matrix
arithmetic over the algebra.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple, Union

from . import ratlinalg as rla
from .errors import InvalidInputError, SearchBudgetError
from .exactalg import factor_int, is_probable_prime, primes_from

Place = Union[int, str]
Quat = Tuple[Fraction, Fraction, Fraction, Fraction]


# -- Hilbert symbols ---------------------------------------------------


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def _eps(u: int) -> int:
    # (u - 1)/2 mod 2 for odd u
    return 1 if u % 4 == 3 else 0


def _omega(u: int) -> int:
    # (u^2 - 1)/8 mod 2 for odd u
    return 1 if u % 8 in (3, 5) else 0


def _split_at(n: int, p: int) -> Tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a: int, b: int, v: Place) -> int:
    """(a, b)_v in {+1, -1} for nonzero integers a, b.

    The place v is "inf", 2, or an odd prime.  Closed formulas only:
    the sign rule at infinity, the epsilon/omega exponents at 2, and
    Legendre symbols at odd primes.
    """
    if a == 0 or b == 0:
        raise InvalidInputError("Hilbert symbol needs nonzero entries")
    if v == "inf":
        return -1 if a < 0 and b < 0 else 1
    if not isinstance(v, int) or not is_probable_prime(v):
        raise InvalidInputError(f"not a place: {v!r}")
    if v == 2:
        alpha, u = _split_at(a, 2)
        beta, w = _split_at(b, 2)
        expo = _eps(u) * _eps(w) + alpha * _omega(w) + beta * _omega(u)
        return -1 if expo % 2 else 1
    alpha, u = _split_at(a, v)
    beta, w = _split_at(b, v)
    sign = 1
    if alpha % 2 and beta % 2 and _eps(v):
        sign = -sign
    if beta % 2:
        sign *= _legendre(u, v)
    if alpha % 2:
        sign *= _legendre(w, v)
    return sign


def ramification_set(a: int, b: int) -> Tuple[Place, ...]:
    """Places where the quaternion algebra (a, b) is ramified.

    Only 2, infinity and the odd primes dividing ab can appear; the
    result is sorted with "inf" last.
    """
    if a == 0 or b == 0:
        raise InvalidInputError("(a, b) needs nonzero entries")
    places: List[Place] = [2]
    for q in sorted(set(factor_int(a)) | set(factor_int(b))):
        if q != 2:
            places.append(q)
    ram: List[Place] = [v for v in places if hilbert_symbol(a, b, v) == -1]
    if hilbert_symbol(a, b, "inf") == -1:
        ram.append("inf")
    if len(ram) % 2:
        raise AssertionError("odd ramification set contradicts reciprocity")
    return tuple(ram)


# -- the algebras ------------------------------------------------------


@dataclass(frozen=True)
class QuaternionAlg:
    """The rational quaternion algebra with i^2 = a, j^2 = b, ij = -ji."""
    a: int
    b: int

    def elem(self, x0=0, x1=0, x2=0, x3=0) -> Quat:
        return (Fraction(x0), Fraction(x1), Fraction(x2), Fraction(x3))

    def one(self) -> Quat:
        return self.elem(1)

    def zero(self) -> Quat:
        return self.elem()

    def mul(self, x: Quat, y: Quat) -> Quat:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def add(self, x: Quat, y: Quat) -> Quat:
        return tuple(u + v for u, v in zip(x, y))

    def neg(self, x: Quat) -> Quat:
        return tuple(-u for u in x)

    def conj(self, x: Quat) -> Quat:
        return (x[0], -x[1], -x[2], -x[3])

    def norm(self, x: Quat) -> Fraction:
        """Reduced norm x * conj(x)."""
        return x[0] ** 2 - self.a * x[1] ** 2 - self.b * x[2] ** 2 \
            + self.a * self.b * x[3] ** 2

    def inv(self, x: Quat) -> Quat:
        n = self.norm(x)
        if n == 0:
            raise ZeroDivisionError("non-invertible quaternion")
        return tuple(c / n for c in self.conj(x))

    def left_matrix(self, x: Quat) -> rla.Matrix:
        """Left multiplication by x on the basis 1, i, j, k over Q."""
        cols = [self.mul(x, e) for e in
                (self.elem(1), self.elem(0, 1), self.elem(0, 0, 1),
                 self.elem(0, 0, 0, 1))]
        return [[cols[j][i] for j in range(4)] for i in range(4)]


def dpinfty(p: int) -> QuaternionAlg:
    """The definite quaternion algebra ramified exactly at p and infinity.

    Standard presentations for p = 3 mod 4 and p = 5 mod 8; for
    p = 1 mod 8 the first auxiliary prime q = 3 mod 4 that is a
    non-residue mod p is used.  The ramification set is re-verified on
    every output.
    """
    if not is_probable_prime(p) or p == 2:
        raise InvalidInputError("dpinfty is defined for odd primes")
    if p % 4 == 3:
        alg = QuaternionAlg(-1, -p)
    elif p % 8 == 5:
        alg = QuaternionAlg(-2, -p)
    else:
        alg = None
        for q in primes_from(3):
            if q > 100000:
                raise SearchBudgetError(f"no auxiliary prime below 1e5 for {p}")
            if q % 4 == 3 and _legendre(q, p) == -1:
                alg = QuaternionAlg(-q, -p)
                break
    got = ramification_set(alg.a, alg.b)
    if got != (p, "inf"):
        raise AssertionError(f"({alg.a}, {alg.b}) ramifies at {got}")
    return alg


# -- 2x2 matrices over an algebra --------------------------------------

QMat = List[List[Quat]]


def _qm_mul(alg: QuaternionAlg, A: QMat, B: QMat) -> QMat:
    n = len(A)
    out = [[alg.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = alg.zero()
            for t in range(n):
                acc = alg.add(acc, alg.mul(A[i][t], B[t][j]))
            out[i][j] = acc
    return out


def _qm_identity(alg: QuaternionAlg, n: int) -> QMat:
    return [[alg.one() if i == j else alg.zero() for j in range(n)]
            for i in range(n)]


def _qm_pow(alg: QuaternionAlg, A: QMat, k: int) -> QMat:
    result = _qm_identity(alg, len(A))
    base = A
    while k:
        if k & 1:
            result = _qm_mul(alg, result, base)
        base = _qm_mul(alg, base, base)
        k >>= 1
    return result


def _qm_eq(A: QMat, B: QMat) -> bool:
    return A == B


def _qm_regular_rep(alg: QuaternionAlg, A: QMat) -> rla.Matrix:
    """Left action of A on the rational coordinates of the column module."""
    n = len(A)
    out = [[Fraction(0)] * (4 * n) for _ in range(4 * n)]
    for i in range(n):
        for j in range(n):
            L = alg.left_matrix(A[i][j])
            for r in range(4):
                for c in range(4):
                    out[4 * i + r][4 * j + c] = L[r][c]
    return out


# -- the order-8 normalizing unit --------------------------------------


@dataclass(frozen=True)
class TauReport:
    p: int
    algebra: QuaternionAlg
    tau: Tuple[Tuple[Quat, ...], ...]
    frobenius_slot: Tuple[Tuple[Quat, ...], ...]
    tau_norm_square: Fraction
    frobenius_norm_square: Fraction


def _tau_matrix(alg: QuaternionAlg, p: int) -> QMat:
    half = Fraction(1, 2)
    if p % 8 == 3:
        # entries in Q(i) with i = zeta_4
        return [[alg.zero(), alg.elem(-half, half)],
                [alg.elem(1, -1), alg.zero()]]
    if p % 8 == 7:
        return [[alg.zero(), alg.elem(half, half)],
                [alg.elem(1, 1), alg.zero()]]
    # p = 5 mod 8: entries are multiples of 1/xi with xi^2 = -2
    xi_inv = alg.elem(0, -half)
    return [[xi_inv, xi_inv],
            [alg.neg(xi_inv), xi_inv]]


def verify_tau(p: int) -> TauReport:
    """Construct and fully verify the order-8 unit normalizing j.

    Checks, by exact matrix arithmetic over the algebra: tau satisfies
    the eighth cyclotomic polynomial, conjugation by the diagonal j-slot
    sends tau to its p-th power, and the rational determinants of both
    matrices are the expected norm squares.  Any failure is raised as an
    implementation bug, never a soft report.
    """
    if not is_probable_prime(p) or p == 2:
        raise InvalidInputError("the unit corpus covers odd primes")
    if p % 8 == 1:
        raise InvalidInputError(
            "p = 1 mod 8 carries no rational order-8 unit here")
    alg = dpinfty(p)
    tau = _tau_matrix(alg, p)
    f0 = [[alg.elem(0, 0, 1), alg.zero()],
          [alg.zero(), alg.elem(0, 0, 1)]]

    t4 = _qm_pow(alg, tau, 4)
    minus_one = [[alg.elem(-1), alg.zero()], [alg.zero(), alg.elem(-1)]]
    if not _qm_eq(t4, minus_one):
        raise AssertionError("tau does not satisfy the eighth cyclotomic polynomial")

    lhs = _qm_mul(alg, f0, tau)
    rhs = _qm_mul(alg, _qm_pow(alg, tau, p), f0)
    if not _qm_eq(lhs, rhs):
        raise AssertionError("conjugation by the Frobenius slot is not the p-th power")

    nt = rla.det(_qm_regular_rep(alg, tau))
    nf = rla.det(_qm_regular_rep(alg, f0))
    if nt != 1:
        raise AssertionError("tau norm is not a root of unity")
    if nf != Fraction(p) ** 4:
        raise AssertionError("Frobenius slot norm is not the expected power of p")
    return TauReport(p, alg,
                     tuple(tuple(r) for r in tau),
                     tuple(tuple(r) for r in f0),
                     nt, nf)


# -- corpus assembly ---------------------------------------------------


@dataclass(frozen=True)
class CorpusRow:
    p: int
    residue_mod_8: int
    a: int
    b: int
    ramified_at: Tuple[Place, ...]
    has_order8_unit: bool
    tau: Union[Tuple[Tuple[Quat, ...], ...], None]


def corpus_row(p: int) -> CorpusRow:
    alg = dpinfty(p)
    ram = ramification_set(alg.a, alg.b)
    if p % 8 == 1:
        return CorpusRow(p, 1, alg.a, alg.b, ram, False, None)
    rep = verify_tau(p)
    return CorpusRow(p, p % 8, alg.a, alg.b, ram, True, rep.tau)


def build_corpus(primes: Sequence[int]) -> Tuple[CorpusRow, ...]:
    """Verified corpus rows for the given odd primes, in input order."""
    rows = []
    for p in primes:
        rows.append(corpus_row(p))
    return tuple(rows)
