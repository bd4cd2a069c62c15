"""Exact coefficient models for filtration data on tame representations.

The checks in this module run over a number field presented once and for
all, never over truncated p-adic approximations.  The coefficient ring is
a tower E = B[t]/(t^e - p) where B is a number field carrying

  * a designated unramified part of degree s, defined by a monic integral
    polynomial that stays irreducible mod p, and
  * a primitive e-th root of unity zeta, so the inertia twist t -> zeta*t
    is an honest ring automorphism of E.

The Frobenius lift acts on B (p-th power on roots of unity, the canonical
generator on the unramified part) and fixes t.  Filtration subspaces are
given by their column span over E; all ranks, stabilities and pairings are
decided by exact linear algebra in that tower.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd
import random
from typing import Callable, List, Optional, Sequence, Tuple

from . import ratlinalg as rla
from .errors import (
    InvalidInputError,
    RandomizedInconclusiveError,
    SearchBudgetError,
)
from .exactalg import (
    Poly,
    cyclotomic,
    factor_over_z,
    is_irreducible_mod_p,
    is_probable_prime,
    multiplicative_order,
    primes_from,
)
from .numberfield import (
    NfElem,
    NumberField,
    absolute_field,
    kp_degree,
    kp_divmod,
    kp_ext_gcd,
    kp_mul,
    kp_trim,
)
from .tamerep import _cyclotomic_order

TowerElem = Tuple[NfElem, ...]


class GlobalModel:
    """The coefficient tower E = B[t]/(t^e - p) with its two ring maps."""

    def __init__(self, s: int, e: int, p: int, base: NumberField,
                 unram_poly: Poly, unram_gen: NfElem, sigma_gen: NfElem,
                 zeta: NfElem):
        self.s = s
        self.e = e
        self.p = p
        self.base = base
        self.unram_poly = unram_poly
        self.unram_gen = unram_gen
        self.sigma_gen = sigma_gen
        self.zeta = zeta
        pows = [base.one()]
        for _ in range(base.degree - 1):
            pows.append(pows[-1] * sigma_gen)
        self._sigma_pows = pows
        zpows = [base.one()]
        for _ in range(e - 1):
            zpows.append(zpows[-1] * zeta)
        self._zeta_pows = zpows

    @property
    def degree(self) -> int:
        """Q-dimension of the full tower."""
        return self.base.degree * self.e

    def __repr__(self):
        return f"GlobalModel(s={self.s}, e={self.e}, p={self.p})"

    # -- the Frobenius lift on coefficients ---------------------------

    def apply_sigma(self, a: NfElem) -> NfElem:
        acc = self.base.zero()
        for i, c in enumerate(a.coords):
            if c:
                acc = acc + self._sigma_pows[i] * c
        return acc

    # -- tower elements ------------------------------------------------

    def zero(self) -> TowerElem:
        return (self.base.zero(),) * self.e

    def one(self) -> TowerElem:
        return self.from_rational(1)

    def uniformizer(self) -> TowerElem:
        if self.e == 1:
            # t = p in the degenerate tower
            return self.from_rational(self.p)
        v = [self.base.zero()] * self.e
        v[1] = self.base.one()
        return tuple(v)

    def from_rational(self, q) -> TowerElem:
        v = [self.base.zero()] * self.e
        v[0] = self.base.from_rational(q)
        return tuple(v)

    def from_coords(self, rows: Sequence[Sequence]) -> TowerElem:
        rows = list(rows)
        if len(rows) > self.e:
            raise InvalidInputError("too many t-coordinates for the tower")
        out = [self.base.from_coeffs(list(r)) for r in rows]
        out += [self.base.zero()] * (self.e - len(out))
        return tuple(out)

    def coerce(self, x) -> TowerElem:
        if isinstance(x, tuple) and x and isinstance(x[0], NfElem):
            if len(x) != self.e or any(c.field != self.base for c in x):
                raise InvalidInputError("tower element from a different model")
            return x
        if isinstance(x, NfElem):
            if x.field != self.base:
                raise InvalidInputError("coefficient from a different base field")
            return tuple([x] + [self.base.zero()] * (self.e - 1))
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        if isinstance(x, (list, tuple)):
            return self.from_coords(x)
        raise InvalidInputError(f"cannot coerce {x!r} into the tower")

    def flatten(self, x: TowerElem) -> List[Fraction]:
        """Q-coordinates of a tower element, t-degree major."""
        out: List[Fraction] = []
        for c in x:
            out.extend(c.coords)
        return out

    # -- ring operations ----------------------------------------------

    def add(self, x: TowerElem, y: TowerElem) -> TowerElem:
        return tuple(a + b for a, b in zip(x, y))

    def neg(self, x: TowerElem) -> TowerElem:
        return tuple(-a for a in x)

    def sub(self, x: TowerElem, y: TowerElem) -> TowerElem:
        return tuple(a - b for a, b in zip(x, y))

    def mul(self, x: TowerElem, y: TowerElem) -> TowerElem:
        e = self.e
        conv = [self.base.zero()] * (2 * e - 1)
        for i, a in enumerate(x):
            if a.is_zero():
                continue
            for j, b in enumerate(y):
                if not b.is_zero():
                    conv[i + j] = conv[i + j] + a * b
        # reduce along t^e = p
        for k in range(2 * e - 2, e - 1, -1):
            if not conv[k].is_zero():
                conv[k - e] = conv[k - e] + conv[k] * self.p
        return tuple(conv[:e])

    def scale(self, c: NfElem, x: TowerElem) -> TowerElem:
        return tuple(c * a for a in x)

    def inv(self, x: TowerElem) -> TowerElem:
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero in the coefficient tower")
        modulus = [self.base.from_rational(-self.p)] + \
            [self.base.zero()] * (self.e - 1) + [self.base.one()]
        d, u, _ = kp_ext_gcd(kp_trim(list(x)), modulus)
        if kp_degree(d) != 0:
            raise AssertionError("tower modulus is not irreducible over the base")
        red = kp_divmod(u, modulus)[1]
        red = list(red) + [self.base.zero()] * (self.e - len(red))
        return tuple(red[:self.e])

    def is_zero(self, x: TowerElem) -> bool:
        return all(a.is_zero() for a in x)

    def eq(self, x: TowerElem, y: TowerElem) -> bool:
        return self.is_zero(self.sub(x, y))

    # -- the two semilinear twists ------------------------------------

    def frob(self, x: TowerElem) -> TowerElem:
        """sigma on coefficients; the uniformizer is fixed."""
        return tuple(self.apply_sigma(a) for a in x)

    def theta(self, x: TowerElem) -> TowerElem:
        """t -> zeta * t, identity on B."""
        return tuple(a * self._zeta_pows[j] for j, a in enumerate(x))

    def apply_word(self, x: TowerElem, a: int, b: int) -> TowerElem:
        """theta^b after sigma^a."""
        for _ in range(a % self.s):
            x = self.frob(x)
        b %= self.e
        if b:
            return tuple(c * self._zeta_pows[(j * b) % self.e]
                         for j, c in enumerate(x))
        return x


# -- model construction ------------------------------------------------


def build_global_model(s: int, e: int, p: int) -> GlobalModel:
    """Deterministically construct the coefficient tower for (s, e, p).

    The unramified part has degree s and its defining polynomial remains
    irreducible mod p; a primitive e-th root of unity is adjoined when the
    unramified part does not already contain one, so the inertia twist is
    definable.  Raises InvalidInputError for incoherent parameters and
    SearchBudgetError if no auxiliary conductor is found.
    """
    if s < 1 or e < 1:
        raise InvalidInputError("residue degree and inertia order must be >= 1")
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if gcd(e, p) != 1:
        raise InvalidInputError("inertia order must be prime to p")
    d0 = multiplicative_order(p % e, e) if e > 1 else 1
    if s % d0 != 0:
        raise InvalidInputError(
            f"residue degree {s} does not absorb ord(p mod {e}) = {d0}")

    phi_e = cyclotomic(e).degree if e > 1 else 1
    if s == 1:
        model = _trivial_unramified_model(e, p)
    elif e >= 3 and phi_e == s and d0 == s:
        model = _cyclotomic_model(s, e, p)
    else:
        model = _composite_model(s, e, p)
    verify_model(model)
    return model


def _trivial_unramified_model(e: int, p: int) -> GlobalModel:
    # unramified part is Q itself; for e >= 3 the root of unity is
    # bookkeeping adjoined on top (p = 1 mod e, so sigma fixes it).
    line = Poly([-1, 1])
    if e <= 2:
        base = NumberField(line)
        zeta = base.from_rational(1 if e == 1 else -1)
        return GlobalModel(1, e, p, base, line, base.one(), base.gen(), zeta)
    base = NumberField(cyclotomic(e))
    sigma_gen = base.gen() ** (p % e)
    return GlobalModel(1, e, p, base, line, base.one(), sigma_gen, base.gen())


def _cyclotomic_model(s: int, e: int, p: int) -> GlobalModel:
    base = NumberField(cyclotomic(e))
    g = base.gen()
    return GlobalModel(s, e, p, base, cyclotomic(e), g, g ** (p % e), g)


def _composite_model(s: int, e: int, p: int) -> GlobalModel:
    unram, sigma_unram, _ = _cyclic_unramified_field(s, p, e)
    if e <= 2:
        zeta = unram.from_rational(1 if e == 1 else -1)
        return GlobalModel(s, e, p, unram, unram.minpoly, unram.gen(),
                           sigma_unram, zeta)

    # adjoin zeta_e; the auxiliary conductor is prime to e, so the
    # cyclotomic polynomial stays irreducible over the unramified part
    h = [unram.from_rational(c) for c in cyclotomic(e).coeffs]
    ext = absolute_field(unram, h)
    B = ext.field
    n0, me = unram.degree, cyclotomic(e).degree
    N = n0 * me

    cols, cols_s = [], []
    root_p = ext.root ** (p % e)
    gi, gi_s = unram.one(), unram.one()
    emb_pows, emb_pows_s = [], []
    for _ in range(n0):
        emb_pows.append(ext.embed(gi))
        emb_pows_s.append(ext.embed(gi_s))
        gi = gi * unram.gen()
        gi_s = gi_s * sigma_unram
    zj, zj_s = B.one(), B.one()
    for _ in range(me):
        for i in range(n0):
            cols.append(list((emb_pows[i] * zj).coords))
            cols_s.append(list((emb_pows_s[i] * zj_s).coords))
        zj = zj * ext.root
        zj_s = zj_s * root_p
    P = rla.transpose(cols)
    Ps = rla.transpose(cols_s)
    Pinv = rla.inverse(P)
    if Pinv is None:
        raise AssertionError("compositum product basis failed to span")
    S = rla.mat_mul(Ps, Pinv)
    gen_coords = [Fraction(0)] * N
    gen_coords[1] = Fraction(1)
    sigma_gen = B.from_coeffs(rla.mat_vec(S, gen_coords))
    return GlobalModel(s, e, p, B, unram.minpoly, ext.base_gen, sigma_gen,
                       ext.root)


def _cyclic_unramified_field(s: int, p: int,
                             coprime_to: int) -> Tuple[NumberField, NfElem, int]:
    """A degree-s cyclic field in which p stays inert, with its Frobenius.

    Searches auxiliary prime conductors m = 1 mod s with p a primitive
    root mod m; the field is the fixed field of the index-s subgroup of
    (Z/m)^x, presented by the minimal polynomial of a Gauss period.
    Returns (field, image of the generator under zeta_m -> zeta_m^p, m).
    """
    for m in primes_from(3):
        if m > 100000:
            raise SearchBudgetError(
                f"no auxiliary conductor for degree {s} over p = {p}")
        if m == p or coprime_to % m == 0:
            continue
        if (m - 1) % s != 0 or multiplicative_order(p % m, m) != m - 1:
            continue
        Z = NumberField(cyclotomic(m))
        block = (m - 1) // s
        periods = []
        for j in range(s):
            acc = Z.zero()
            for k in range(block):
                acc = acc + Z.gen() ** pow(p, j + s * k, m)
            periods.append(acc)
        poly = [Z.one()]
        for g in periods:
            poly = kp_mul(poly, [-g, Z.one()])
        coeffs = []
        for c in poly:
            if any(x != 0 for x in c.coords[1:]):
                raise AssertionError("period polynomial is not rational")
            coeffs.append(c.coords[0])
        mp = Poly(coeffs)
        if not mp.is_integral():
            raise AssertionError("period polynomial is not integral")
        if not is_irreducible_mod_p([int(c) for c in mp.coeffs], p):
            continue
        field = NumberField(mp)
        # express the Frobenius image (the next period) in the power basis
        pows = []
        acc = Z.one()
        for _ in range(s):
            pows.append(list(acc.coords))
            acc = acc * periods[0]
        c = rla.solve_right(rla.transpose(pows), list(periods[1].coords))
        if c is None:
            raise AssertionError("Gauss period powers failed to span")
        return field, field.from_coeffs(c), m
    raise SearchBudgetError("prime iterator exhausted")  # pragma: no cover


def verify_model(model: GlobalModel) -> None:
    """Re-check every structural invariant of a coefficient tower."""
    s, e, p = model.s, model.e, model.p
    B = model.base
    if not is_probable_prime(p) or gcd(e, p) != 1:
        raise InvalidInputError("model parameters are incoherent")
    mp = model.unram_poly
    if mp.degree != s or not mp.is_integral() or mp.coeffs[-1] != 1:
        raise AssertionError("unramified part has a malformed defining polynomial")
    if not is_irreducible_mod_p([int(c) for c in mp.coeffs], p):
        raise AssertionError("unramified defining polynomial splits mod p")

    # the adjoined root of unity has exact order e
    acc = model.zeta
    for k in range(1, e):
        if acc == B.one():
            raise AssertionError(f"root of unity has order {k} < {e}")
        acc = acc * model.zeta
    if acc != B.one():
        raise AssertionError("root of unity does not have order e")

    # sigma is a ring map of exact order s fixing the tower relations
    if not Poly(B.minpoly.coeffs).evaluate(model.sigma_gen).is_zero():
        raise AssertionError("Frobenius image does not satisfy the field polynomial")
    acc = B.gen()
    for k in range(1, s + 1):
        acc = model.apply_sigma(acc)
        if acc == B.gen():
            if k != s:
                raise AssertionError(f"Frobenius lift has order {k} < {s}")
            break
    else:
        raise AssertionError("Frobenius lift order exceeds the residue degree")
    if model.apply_sigma(model.zeta) != model.zeta ** (p % e if e > 1 else 1):
        raise AssertionError("Frobenius lift moves the root of unity wrongly")

    # sigma stabilizes the unramified part and lifts x -> x^p on it
    pows = []
    acc = B.one()
    for _ in range(s):
        pows.append(list(acc.coords))
        acc = acc * model.unram_gen
    c = rla.solve_right(rla.transpose(pows),
                        list(model.apply_sigma(model.unram_gen).coords))
    if c is None:
        raise AssertionError("Frobenius lift leaves the unramified part")
    diff = model.apply_sigma(model.unram_gen) - model.unram_gen ** p
    basis_coords = rla.solve_right(rla.transpose(pows), list(diff.coords))
    if basis_coords is None:
        raise AssertionError("Frobenius congruence leaves the unramified part")
    for x in basis_coords:
        if x.denominator % p == 0 or x.numerator % p != 0:
            raise AssertionError("Frobenius lift fails the mod-p congruence")


# -- filtration input --------------------------------------------------


class FiltrationInput:
    """A column-span presentation of the filtration step inside E^(2d)."""

    def __init__(self, model: GlobalModel, columns: Sequence[Sequence],
                 nrows: Optional[int] = None):
        self.model = model
        cols = []
        for col in columns:
            col = [model.coerce(x) for x in col]
            if nrows is None:
                nrows = len(col)
            elif len(col) != nrows:
                raise InvalidInputError("filtration columns have mixed lengths")
            cols.append(tuple(col))
        self.columns: Tuple[Tuple[TowerElem, ...], ...] = tuple(cols)
        self.nrows = nrows if nrows is not None else 0
        self._rank: Optional[int] = None

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def rank(self) -> int:
        if self._rank is None:
            self._rank = _t_rank(self.model, [list(c) for c in self.columns])
        return self._rank

    def validate(self) -> List[str]:
        failed = []
        if self.ncols and self.rank() != self.ncols:
            failed.append("fil1-rank")
        if not 0 < self.ncols < self.nrows:
            failed.append("fil1-nontrivial")
        return failed

    def require(self) -> None:
        failed = self.validate()
        if failed:
            raise InvalidInputError(
                "filtration input fails: " + ", ".join(failed))


# -- linear algebra over the tower ------------------------------------


def _t_rank(model: GlobalModel, vectors: List[List[TowerElem]]) -> int:
    """Rank of the span of the given tower vectors."""
    rows = [list(v) for v in vectors]
    rank = 0
    col = 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        piv = next((i for i in range(rank, len(rows))
                    if not model.is_zero(rows[i][col])), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = model.inv(rows[rank][col])
        rows[rank] = [model.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not model.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [model.sub(x, model.mul(f, y))
                           for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _t_matrix(model: GlobalModel, M: Sequence[Sequence]) -> List[List[TowerElem]]:
    return [[model.coerce(x) for x in row] for row in M]

def _t_mat_vec(model, M, v):
    return [
        _t_sum(model, [model.mul(a, x) for a, x in zip(row, v)])
        for row in M
    ]


def _t_sum(model: GlobalModel, xs: List[TowerElem]) -> TowerElem:
    acc = model.zero()
    for x in xs:
        acc = model.add(acc, x)
    return acc


def _t_mat_mul(model, A, B):
    Bt = list(zip(*B))
    return [
        [_t_sum(model, [model.mul(a, b) for a, b in zip(row, col)]) for col in Bt]
        for row in A
    ]


def _in_span(model: GlobalModel, columns: List[List[TowerElem]],
             vec: List[TowerElem], base_rank: int) -> bool:
    return _t_rank(model, columns + [vec]) == base_rank


# -- the Hodge-Tate and Galois-stability gates -------------------------


def hodge_tate_check(fi: FiltrationInput, d: int) -> bool:
    """Whether the filtration step has the unique admissible dimension d."""
    if d < 1 or fi.nrows != 2 * d:
        raise InvalidInputError("ambient dimension must be twice the target")
    if fi.ncols and fi.rank() != fi.ncols:
        raise InvalidInputError("filtration columns are dependent")
    return fi.ncols == d


@dataclass(frozen=True)
class _SemilinearOp:
    """A map M o (theta^b sigma^a) acting on tower column vectors."""
    mat: tuple
    a: int
    b: int


def _op_apply_word(model, M, a, b):
    return tuple(tuple(model.apply_word(x, a, b) for x in row) for row in M)


def _op_compose(model: GlobalModel, f: _SemilinearOp,
                g: _SemilinearOp) -> _SemilinearOp:
    mat = _t_mat_mul(model, [list(r) for r in f.mat],
                     [list(r) for r in _op_apply_word(model, g.mat, f.a, f.b)])
    a = (f.a + g.a) % model.s
    b = (f.b + g.b * pow(model.p, f.a, model.e)) % model.e
    return _SemilinearOp(tuple(tuple(r) for r in mat), a, b)


def _op_identity(model: GlobalModel, n: int) -> _SemilinearOp:
    mat = tuple(tuple(model.one() if i == j else model.zero()
                      for j in range(n)) for i in range(n))
    return _SemilinearOp(mat, 0, 0)


def _op_pow(model: GlobalModel, f: _SemilinearOp, k: int) -> _SemilinearOp:
    result = _op_identity(model, len(f.mat))
    base = f
    while k:
        if k & 1:
            result = _op_compose(model, result, base)
        base = _op_compose(model, base, base)
        k >>= 1
    return result


def _op_eq(model: GlobalModel, f: _SemilinearOp, g: _SemilinearOp) -> bool:
    if f.a != g.a or f.b != g.b:
        return False
    return all(model.eq(x, y) for rf, rg in zip(f.mat, g.mat)
               for x, y in zip(rf, rg))


def galois_stable_check(fi: FiltrationInput, frob_mat: Sequence[Sequence],
                        inertia_mat: Sequence[Sequence]) -> bool:
    """Whether both semilinear generators carry the filtration into itself.

    The matrices act through the ring twists: the Frobenius-lift descent
    matrix composes with sigma on coordinates, inertia with the
    t -> zeta*t twist.  Note the Frobenius argument is the matrix of a
    residue-field generator of the Galois group, a finite-order descent
    datum; it is not the crystalline Frobenius, which the group action
    must commute with rather than contain.  For a totally ramified
    ground model (s = 1) the group has no Frobenius part at all and the
    only admissible matrix is the identity.  The tame relations (inertia
    order e, Frobenius part of order s, conjugation acting as the p-th
    power on inertia) are verified before any stability is decided.
    """
    model = fi.model
    fi.require()
    n = fi.nrows
    Mf = _t_matrix(model, frob_mat)
    Mt = _t_matrix(model, inertia_mat)
    if len(Mf) != n or any(len(r) != n for r in Mf) or \
            len(Mt) != n or any(len(r) != n for r in Mt):
        raise InvalidInputError("action matrices must be square of the ambient size")

    F = _SemilinearOp(tuple(tuple(r) for r in Mf), 1, 0)
    T = _SemilinearOp(tuple(tuple(r) for r in Mt), 0, 1)
    ident = _op_identity(model, n)
    if not _op_eq(model, _op_pow(model, T, model.e), ident):
        raise InvalidInputError("inertia action does not have order e")
    if not _op_eq(model, _op_pow(model, F, model.s), ident):
        raise InvalidInputError("Frobenius descent action does not have order s")
    lhs = _op_compose(model, F, T)
    rhs = _op_compose(model, _op_pow(model, T, model.p), F)
    if not _op_eq(model, lhs, rhs):
        raise InvalidInputError(
            "Frobenius conjugation does not act as the p-th power on inertia")

    cols = [list(c) for c in fi.columns]
    base_rank = fi.rank()
    for op in (F, T):
        for c in fi.columns:
            moved = [model.apply_word(x, op.a, op.b) for x in c]
            image = _t_mat_vec(model, [list(r) for r in op.mat], moved)
            if not _in_span(model, cols, image, base_rank):
                return False
    return True


# -- the skew pairing search -------------------------------------------


@dataclass(frozen=True)
class SkewFormReport:
    ok: bool
    witness: Optional[Tuple[Tuple[Fraction, ...], ...]]
    space_dim: int
    method: str


def _antisym_from_upper(n: int, values: Sequence[Fraction]) -> List[List[Fraction]]:
    B = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            B[i][j] = Fraction(values[k])
            B[j][i] = -Fraction(values[k])
            k += 1
    return B


def _nondegenerate_combination(mats: List[rla.Matrix], n: int, seed: int,
                               sample_cap: int,
                               grid_budget: int) -> Optional[rla.Matrix]:
    """A nonsingular Q-combination of the given matrices, or a proof of None.

    Small parameter counts are decided exhaustively on a grid large enough
    that a vanishing determinant there is identically zero.  Beyond the
    grid budget the search samples with a seeded generator and raises
    RandomizedInconclusiveError at the cap; it never claims a false
    positive since every candidate determinant is computed exactly.
    """
    k = len(mats)
    if k == 0:
        return None
    for M in mats:
        if rla.det(M) != 0:
            return M
    pts = n + 1
    if pts ** k <= grid_budget:
        for lam in product(range(pts), repeat=k):
            if sum(lam) == 0:
                continue
            M = [[sum(l * mats[t][i][j] for t, l in enumerate(lam))
                  for j in range(n)] for i in range(n)]
            if rla.det(M) != 0:
                return M
        return None
    rng = random.Random(seed)
    for _ in range(sample_cap):
        lam = [rng.randint(-(n * n + 1), n * n + 1) for _ in range(k)]
        M = [[sum(l * mats[t][i][j] for t, l in enumerate(lam))
              for j in range(n)] for i in range(n)]
        if rla.det(M) != 0:
            return M
    raise RandomizedInconclusiveError(
        "no nonsingular combination found within the sampling cap")


def skew_form_filtered(frob_mat: rla.Matrix, inertia_mat: rla.Matrix,
                       fi: FiltrationInput, seed: int = 0,
                       sample_cap: int = 32,
                       grid_budget: int = 200000) -> SkewFormReport:
    """Search for a compatible nondegenerate alternating pairing.

    The pairing must be alternating, scale by p under the linear Frobenius
    matrix, be an isometry for the inertia matrix, and make the filtration
    columns isotropic.  Those constraints cut out a Q-linear space of Gram
    matrices; the report says whether it contains a nonsingular element
    and returns one as an exact witness when it does.
    """
    model = fi.model
    if fi.ncols and fi.rank() != fi.ncols:
        raise InvalidInputError("filtration columns are dependent")
    n = fi.nrows
    if len(frob_mat) != n or any(len(r) != n for r in frob_mat) or \
            len(inertia_mat) != n or any(len(r) != n for r in inertia_mat):
        raise InvalidInputError("action matrices must be square of the ambient size")
    p = model.p

    unknowns = [(i, j) for i in range(n) for j in range(i + 1, n)]
    k = len(unknowns)
    rows: List[List[Fraction]] = []

    def push_matrix_rows(transform: Callable[[rla.Matrix], rla.Matrix]) -> None:
        per_unknown = []
        for (i, j) in unknowns:
            Bu = [[Fraction(0)] * n for _ in range(n)]
            Bu[i][j] = Fraction(1)
            Bu[j][i] = Fraction(-1)
            per_unknown.append(transform(Bu))
        for (r, c) in unknowns:
            rows.append([per_unknown[t][r][c] for t in range(k)])

    Ft = rla.transpose(frob_mat)
    push_matrix_rows(lambda B: rla.mat_sub(
        rla.mat_mul(rla.mat_mul(Ft, B), frob_mat), rla.mat_scale(p, B)))
    Tt = rla.transpose(inertia_mat)
    push_matrix_rows(lambda B: rla.mat_sub(
        rla.mat_mul(rla.mat_mul(Tt, B), inertia_mat), B))

    for ci in range(fi.ncols):
        for cj in range(ci + 1, fi.ncols):
            u, v = fi.columns[ci], fi.columns[cj]
            coeffs = []
            for (i, j) in unknowns:
                coeffs.append(model.sub(model.mul(u[i], v[j]),
                                        model.mul(u[j], v[i])))
            flat = [model.flatten(c) for c in coeffs]
            for pos in range(model.degree):
                rows.append([flat[t][pos] for t in range(k)])

    basis = rla.nullspace(rows) if rows else \
        [[Fraction(1) if t == t0 else Fraction(0) for t in range(k)]
         for t0 in range(k)]
    mats = [_antisym_from_upper(n, v) for v in basis]
    if not mats:
        return SkewFormReport(False, None, 0, "empty")
    method = "symbolic-grid" if (n + 1) ** len(mats) <= grid_budget else "sampled"
    W = _nondegenerate_combination(mats, n, seed, sample_cap, grid_budget)
    if W is None:
        return SkewFormReport(False, None, len(mats), method)
    _verify_skew_witness(model, frob_mat, inertia_mat, fi, W)
    return SkewFormReport(True, tuple(tuple(r) for r in W), len(mats), method)


def _verify_skew_witness(model: GlobalModel, frob_mat: rla.Matrix,
                         inertia_mat: rla.Matrix, fi: FiltrationInput,
                         W: rla.Matrix) -> None:
    """Exact substitution re-check of every witness property."""
    n = len(W)
    if any(W[i][j] != -W[j][i] for i in range(n) for j in range(n)):
        raise AssertionError("witness is not alternating")
    if rla.det(W) == 0:
        raise AssertionError("witness is singular")
    Ft = rla.transpose(frob_mat)
    lhs = rla.mat_mul(rla.mat_mul(Ft, W), frob_mat)
    if not rla.mat_eq(lhs, rla.mat_scale(model.p, W)):
        raise AssertionError("witness fails Frobenius equivariance")
    Tt = rla.transpose(inertia_mat)
    if not rla.mat_eq(rla.mat_mul(rla.mat_mul(Tt, W), inertia_mat), W):
        raise AssertionError("witness fails the inertia isometry")
    WT = _t_matrix(model, W)
    for ci in range(fi.ncols):
        for cj in range(ci, fi.ncols):
            u, v = fi.columns[ci], fi.columns[cj]
            Wv = _t_mat_vec(model, WT, list(v))
            val = _t_sum(model, [model.mul(a, b) for a, b in zip(u, Wv)])
            if not model.is_zero(val):
                raise AssertionError("witness fails filtration isotropy")


# -- the weak admissibility screen -------------------------------------


@dataclass(frozen=True)
class SubobjectCheck:
    label: str
    dim: int
    t_newton: int
    t_hodge: int
    ok: bool


@dataclass(frozen=True)
class WAScreenReport:
    ok: bool
    t_newton: int
    t_hodge: int
    entries: Tuple[SubobjectCheck, ...]


def _vp(x: Fraction, p: int) -> int:
    if x == 0:
        raise InvalidInputError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _stable_atoms(frob_mat: rla.Matrix, inertia_mat: rla.Matrix,
                  p: int) -> List[Tuple[str, List[List[Fraction]]]]:
    """Isotypic pieces cut out by rational polynomials in the commutant.

    First split along the cyclotomic factors of the inertia minimal
    polynomial; inside each piece the s-th power of Frobenius commutes
    with everything rational, so its irreducible factors refine the
    splitting.  Every atom is stable under both actions.
    """
    n = len(frob_mat)
    _, tfactors = factor_over_z(rla.matrix_minpoly(inertia_mat))
    atoms = []
    for hT, _ in sorted(tfactors, key=lambda fm: (fm[0].degree, fm[0].coeffs)):
        r = _cyclotomic_order(hT)
        if not r:
            raise InvalidInputError(
                "inertia matrix must have a cyclotomic minimal polynomial")
        hT_mat = _rat_mat_poly(inertia_mat, hT)
        wbasis = rla.nullspace(hT_mat)
        if not wbasis:
            continue
        Wcols = rla.transpose(wbasis)
        for b in wbasis:
            img = rla.mat_vec(frob_mat, b)
            if rla.solve_right(Wcols, img) is None:
                raise InvalidInputError(
                    "inertia isotypic pieces must be Frobenius-stable")
        F_w = _restrict_matrix(frob_mat, wbasis)
        s_r = multiplicative_order(p % r, r) if r > 1 else 1
        u = rla.mat_pow(F_w, s_r)
        _, ufactors = factor_over_z(rla.matrix_minpoly(u))
        for idx, (hu, _) in enumerate(sorted(
                ufactors, key=lambda fm: (fm[0].degree, fm[0].coeffs))):
            inner = rla.nullspace(_rat_mat_poly(u, hu))
            if not inner:
                continue
            lifted = [rla.mat_vec(Wcols, v) for v in inner]
            label = f"r={r}|g={tuple(int(c) for c in hu.coeffs)}"
            atoms.append((label, lifted))
    total = sum(len(basis) for _, basis in atoms)
    if total != n:
        raise InvalidInputError("isotypic pieces do not fill the space")
    return atoms


def _rat_mat_poly(M: rla.Matrix, f: Poly) -> rla.Matrix:
    n = len(M)
    acc = rla.mat_zero(n, n)
    for c in reversed(f.coeffs):
        acc = rla.mat_mul(acc, M)
        if c:
            acc = rla.mat_add(acc, rla.mat_scale(c, rla.mat_identity(n)))
    return acc


def _restrict_matrix(M: rla.Matrix, basis: List[List[Fraction]]) -> rla.Matrix:
    cols = rla.transpose(basis)
    out_cols = []
    for b in basis:
        sol = rla.solve_right(cols, rla.mat_vec(M, b))
        if sol is None:
            raise AssertionError("restriction left the subspace")
        out_cols.append(sol)
    return rla.transpose(out_cols)


def wa_screen(frob_mat: rla.Matrix, inertia_mat: rla.Matrix,
              fi: FiltrationInput) -> WAScreenReport:
    """Screen Newton against Hodge numbers over the isotypic lattice.

    Checks the global equality of the two invariants and, for every
    proper subobject generated by the isotypic pieces, that the Hodge
    number does not exceed the Newton number.  This is a screening of
    the admissibility inequalities over the rational subobject lattice,
    not a certification over all subobjects.
    """
    model = fi.model
    fi.require()
    n = fi.nrows
    if len(frob_mat) != n or len(inertia_mat) != n:
        raise InvalidInputError("action matrices must match the ambient size")
    p = model.p
    dF = rla.det(frob_mat)
    if dF == 0:
        raise InvalidInputError("the linear Frobenius matrix must be invertible")
    t_newton = _vp(dF, p)
    t_hodge = fi.ncols

    atoms = _stable_atoms(frob_mat, inertia_mat, p)
    if len(atoms) > 10:
        raise SearchBudgetError("isotypic lattice too large to enumerate")
    fil_cols = [list(c) for c in fi.columns]
    entries = []
    for size in range(1, len(atoms)):
        for subset in combinations(range(len(atoms)), size):
            basis: List[List[Fraction]] = []
            labels = []
            for i in subset:
                labels.append(atoms[i][0])
                basis.extend(atoms[i][1])
            sub_tn = _vp(rla.det(_restrict_matrix(frob_mat, basis)), p)
            embedded = [[model.from_rational(x) for x in b] for b in basis]
            joint = _t_rank(model, fil_cols + embedded)
            sub_th = fi.ncols + len(basis) - joint
            entries.append(SubobjectCheck("+".join(labels), len(basis),
                                          sub_tn, sub_th, sub_th <= sub_tn))
    ok = t_newton == t_hodge and all(c.ok for c in entries)
    return WAScreenReport(ok, t_newton, t_hodge, tuple(entries))
