"""Number fields, maximal orders, and prime decomposition, all exact.

A field is Q[x]/(f) for a monic irreducible integer polynomial f;
elements are coordinate tuples in the power basis.  Orders are full-rank
lattices given by rational basis rows over the power basis, and ideals
of an order are integer lattices in the order's own coordinates.

Everything here reduces to integer lattice manipulation: maximal orders
by radical/multiplier-ring enlargement one prime at a time, prime
splitting by slicing the Frobenius-fixed subalgebra of O/rad, valuations
by ideal-power membership, and local norms by lifting a place idempotent
to O/l^k and taking a determinant there.  No completions and no
floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import InvalidInputError, SearchBudgetError
from .exactalg import (
    Poly,
    count_real_roots,
    factor_int,
    factor_mod_p,
    factor_over_z,
    is_irreducible_z,
    poly_ext_gcd,
    poly_gcd,
    primitive_part,
)
from . import ratlinalg as rla


class NumberField:
    """Q(alpha) for alpha a root of a monic irreducible integer polynomial."""

    def __init__(self, minpoly: Poly, check: bool = True):
        if not (minpoly.is_monic() and minpoly.is_integral() and minpoly.degree >= 1):
            raise InvalidInputError("field polynomial must be monic integral of degree >= 1")
        if check and not is_irreducible_z(minpoly):
            raise InvalidInputError("field polynomial is reducible")
        self.minpoly = minpoly
        self.degree = minpoly.degree
        self._pow_red = self._power_reductions()
        self._signature: Optional[Tuple[int, int]] = None

    def _power_reductions(self) -> List[Tuple[Fraction, ...]]:
        n = self.degree
        rows = []
        for k in range(n):
            v = [Fraction(0)] * n
            v[k] = Fraction(1)
            rows.append(tuple(v))
        # alpha^n = -(c_0 + c_1 alpha + ...)
        top = tuple(-c for c in self.minpoly.coeffs[:n])
        rows.append(top)
        for _ in range(n - 2):
            prev = rows[-1]
            shifted = [Fraction(0)] + list(prev[: n - 1])
            lead = prev[n - 1]
            v = [s + lead * t for s, t in zip(shifted, top)]
            rows.append(tuple(v))
        return rows

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"NumberField({self.minpoly})"

    # -- element constructors -----------------------------------------

    def zero(self) -> "NfElem":
        return NfElem(self, (Fraction(0),) * self.degree)

    def one(self) -> "NfElem":
        return self.from_rational(1)

    def gen(self) -> "NfElem":
        v = [Fraction(0)] * self.degree
        if self.degree == 1:
            # alpha is rational: its value is the root of the linear minpoly
            return self.from_rational(-self.minpoly.coeffs[0])
        v[1] = Fraction(1)
        return NfElem(self, tuple(v))

    def from_rational(self, q) -> "NfElem":
        v = [Fraction(0)] * self.degree
        v[0] = Fraction(q)
        return NfElem(self, tuple(v))

    def from_coeffs(self, cs: Sequence) -> "NfElem":
        cs = [Fraction(c) for c in cs]
        if len(cs) > self.degree:
            raise InvalidInputError("too many coordinates for field degree")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return NfElem(self, tuple(cs))

    # -- field invariants ---------------------------------------------

    def signature(self) -> Tuple[int, int]:
        if self._signature is None:
            r1 = count_real_roots(self.minpoly)
            self._signature = (r1, (self.degree - r1) // 2)
        return self._signature

    def has_real_embedding(self) -> bool:
        return self.signature()[0] > 0

    def minpoly_of(self, a: "NfElem") -> Poly:
        """Minimal polynomial of a over Q (monic)."""
        n = self.degree
        vecs = [list(self.one().coords)]
        cur = a
        while True:
            combo = rla.solve_right(rla.transpose(vecs), list(cur.coords))
            if combo is not None:
                return Poly([-c for c in combo] + [Fraction(1)])
            vecs.append(list(cur.coords))
            cur = cur * a
            if len(vecs) > n + 1:
                raise AssertionError("minimal polynomial search overran the field degree")

    def charpoly_of(self, a: "NfElem") -> Poly:
        """Characteristic polynomial of multiplication by a (degree n)."""
        m = self.minpoly_of(a)
        if self.degree % m.degree != 0:
            raise AssertionError("minimal polynomial degree does not divide field degree")
        return m ** (self.degree // m.degree)

    def norm(self, a: "NfElem") -> Fraction:
        cp = self.charpoly_of(a)
        return (-1) ** self.degree * cp.constant()

    def trace(self, a: "NfElem") -> Fraction:
        cp = self.charpoly_of(a)
        return -cp.coeffs[self.degree - 1] if self.degree >= 1 else Fraction(0)


class NfElem:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Tuple[Fraction, ...]):
        self.field = field
        self.coords = coords

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise InvalidInputError("element is not rational")
        return self.coords[0]

    def is_integral_coords(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, NfElem)
            and self.field.minpoly == other.field.minpoly
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.field.minpoly, self.coords))

    def __repr__(self):
        return f"NfElem({[str(c) for c in self.coords]})"

    def _coerce(self, other) -> "NfElem":
        if isinstance(other, NfElem):
            if other.field.minpoly != self.field.minpoly:
                raise InvalidInputError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        raise InvalidInputError(f"cannot coerce {other!r} into the field")

    def __add__(self, other):
        o = self._coerce(other)
        return NfElem(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NfElem(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        n = self.field.degree
        conv = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(o.coords):
                if b != 0:
                    conv[i + j] += a * b
        red = self.field._pow_red
        out = [Fraction(0)] * n
        for k, c in enumerate(conv):
            if c != 0:
                row = red[k]
                for t in range(n):
                    out[t] += c * row[t]
        return NfElem(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "NfElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        d, u, _ = poly_ext_gcd(Poly(self.coords), self.field.minpoly)
        if d.degree != 0:
            raise AssertionError("element shares a factor with the field polynomial")
        # d is monic of degree 0, i.e. exactly 1, so u is the inverse
        return self.field.from_coeffs(list((u % self.field.minpoly).coeffs))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


# -- polynomials with NfElem coefficients -----------------------------
# Represented as trimmed little-endian lists of NfElem.


def kp_trim(l: List[NfElem]) -> List[NfElem]:
    while l and l[-1].is_zero():
        l.pop()
    return l


def kp_from_qpoly(K: NumberField, f: Poly) -> List[NfElem]:
    return kp_trim([K.from_rational(c) for c in f.coeffs])


def kp_degree(f: List[NfElem]) -> int:
    return len(f) - 1


def kp_add(f, g):
    if not f and not g:
        return []
    n = max(len(f), len(g))
    K = (f or g)[0].field
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else K.zero()
        b = g[i] if i < len(g) else K.zero()
        out.append(a + b)
    return kp_trim(out)


def kp_neg(f):
    return [-a for a in f]


def kp_sub(f, g):
    return kp_add(f, kp_neg(g))


def kp_mul(f, g):
    if not f or not g:
        return []
    K = f[0].field
    out = [K.zero() for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        if not a.is_zero():
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
    return kp_trim(out)


def kp_scale(c: NfElem, f):
    return kp_trim([c * a for a in f])


def kp_divmod(f, g):
    if not g:
        raise ZeroDivisionError
    K = g[0].field
    inv = g[-1].inverse()
    rem = list(f)
    dq = len(f) - len(g)
    q = [K.zero() for _ in range(max(0, dq + 1))]
    while len(rem) >= len(g):
        rem = kp_trim(rem)
        if len(rem) < len(g):
            break
        k = len(rem) - len(g)
        c = rem[-1] * inv
        q[k] = c
        for i, b in enumerate(g):
            rem[k + i] = rem[k + i] - c * b
        rem.pop()
    return kp_trim(q), kp_trim(rem)


def kp_monic(f):
    if not f:
        return f
    inv = f[-1].inverse()
    return [a * inv for a in f]


def kp_gcd(f, g):
    a, b = list(f), list(g)
    while b:
        _, r = kp_divmod(a, b)
        a, b = b, r
    return kp_monic(a)


def kp_ext_gcd(f, g):
    """(d, u, v) with u*f + v*g = d = gcd(f, g), d monic."""
    K = (f or g)[0].field
    a, b = kp_trim(list(f)), kp_trim(list(g))
    ua, va = [K.one()], []
    ub, vb = [], [K.one()]
    while b:
        q, r = kp_divmod(a, b)
        a, b = b, r
        ua, ub = ub, kp_sub(ua, kp_mul(q, ub))
        va, vb = vb, kp_sub(va, kp_mul(q, vb))
    if not a:
        return [], [], []
    inv = a[-1].inverse()
    return kp_monic(a), [x * inv for x in ua], [x * inv for x in va]


def kp_derivative(f):
    return kp_trim([i * a for i, a in enumerate(f)][1:])


def kp_compose_linear(f, shift: NfElem):
    """f(x + shift) for a K-polynomial f."""
    K = shift.field
    out: List[NfElem] = []
    lin = [shift, K.one()]
    for a in reversed(f):
        out = kp_add(kp_mul(out, lin), [a])
    return kp_trim(out)


# -- Trager factorization over a number field -------------------------


def _norm_poly(K: NumberField, h: List[NfElem]) -> Poly:
    """Norm of a monic K-polynomial down to Q[x], exactly.

    Computed as the determinant of the y-Sylvester matrix of the field
    polynomial f(y) against h with its generator replaced by y, where
    the y-degree is held fixed so specialization commutes with the
    determinant; values at deg(f)*deg(h)+1 points are interpolated.
    """
    n = K.degree
    m = kp_degree(h)
    dy = 0
    for a in h:
        for k in range(n - 1, -1, -1):
            if a.coords[k] != 0:
                dy = max(dy, k)
                break
    if dy == 0:
        q = Poly([a.coords[0] for a in h])
        return q ** n
    fc = list(reversed(K.minpoly.coeffs))  # degree n, monic
    deg_n = n * m
    pts = []
    t = 0
    vals = []
    while len(pts) < deg_n + 1:
        x = Fraction(t)
        # specialize: P(y) with formal degree dy
        pc = []
        for k in range(dy + 1):
            acc = Fraction(0)
            pw = Fraction(1)
            for a in h:
                acc += a.coords[k] * pw
                pw *= x
            pc.append(acc)
        pc_rev = list(reversed(pc))
        size = n + dy
        rows = []
        for i in range(dy):
            rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - n - 1 - i))
        for i in range(n):
            rows.append([Fraction(0)] * i + pc_rev + [Fraction(0)] * (size - dy - 1 - i))
        vals.append(rla.det(rows))
        pts.append(x)
        t = -t if t > 0 else -t + 1
    return _interpolate(pts, vals)


def _interpolate(xs: List[Fraction], ys: List[Fraction]) -> Poly:
    """Lagrange interpolation through distinct points."""
    result = Poly([])
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num = Poly([yi])
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                num = num * Poly([-xj, 1])
                den *= xi - xj
        result = result + num * (1 / den)
    return result


def nf_factor_squarefree(K: NumberField, f: List[NfElem]) -> List[List[NfElem]]:
    """Irreducible monic factors of a squarefree monic K-polynomial."""
    f = kp_monic(list(f))
    if kp_degree(f) <= 1:
        return [f] if kp_degree(f) == 1 else []
    alpha = K.gen()
    for s in range(0, 40):
        shifted = kp_compose_linear(f, alpha * Fraction(-s))
        N = _norm_poly(K, shifted)
        if N.degree != K.degree * kp_degree(f):
            raise AssertionError("norm degree mismatch")
        if poly_gcd(N, N.derivative()).degree == 0:
            break
    else:
        raise SearchBudgetError("no squarefree norm found in 40 shifts")
    _, qfacs = factor_over_z(primitive_part(N))
    if len(qfacs) == 1:
        return [f]
    out = []
    for Ni, _ in qfacs:
        cand = kp_compose_linear(kp_from_qpoly(K, Ni), alpha * Fraction(s))
        g = kp_gcd(f, cand)
        if kp_degree(g) >= 1:
            out.append(kp_monic(g))
    if sum(kp_degree(g) for g in out) != kp_degree(f):
        raise AssertionError("norm factorization did not fully split the input")
    out.sort(key=lambda g: (kp_degree(g), [a.coords for a in g]))
    return out


def nf_factor(K: NumberField, f: List[NfElem]) -> List[Tuple[List[NfElem], int]]:
    """Factor a nonzero K-polynomial into monic irreducibles with multiplicity."""
    f = list(f)
    if not f:
        raise InvalidInputError("cannot factor the zero polynomial")
    work = kp_monic(f)
    if kp_degree(work) >= 1:
        sf = kp_divmod(work, kp_gcd(work, kp_derivative(work)))[0]
    else:
        sf = [K.one()]
    out = []
    for g in nf_factor_squarefree(K, sf):
        k = 0
        while True:
            q, r = kp_divmod(work, g)
            if r:
                break
            work = q
            k += 1
        if k == 0:
            raise AssertionError("squarefree factor does not divide the input")
        out.append((g, k))
    if kp_degree(work) != 0:
        raise AssertionError("factors did not exhaust the polynomial")
    out.sort(key=lambda t: (kp_degree(t[0]), [tuple(a.coords) for a in t[0]]))
    return out


# -- compositum via a primitive element -------------------------------


class AbsoluteExtension:
    """Absolute model M = Q(gamma) of K[theta]/(h), with embeddings.

    Attributes: field (the absolute NumberField), base_gen (image of the
    K generator), root (image of theta), embed (K-element -> M-element).
    """

    def __init__(self, field: NumberField, base_gen: NfElem, root: NfElem,
                 embed: Callable[[NfElem], NfElem]):
        self.field = field
        self.base_gen = base_gen
        self.root = root
        self.embed = embed


def absolute_field(K: NumberField, h: List[NfElem]) -> AbsoluteExtension:
    """Build Q(gamma) containing K and a root of h (irreducible over K)."""
    n = K.degree
    m = kp_degree(h)
    h = kp_monic(list(h))
    N = n * m

    def tensor_mul(a: List[NfElem], b: List[NfElem]) -> List[NfElem]:
        return kp_divmod(kp_mul(a, b), h)[1]

    def flatten(a: List[NfElem]) -> List[Fraction]:
        v = [Fraction(0)] * N
        for j, c in enumerate(a):
            for i in range(n):
                v[j * n + i] = c.coords[i]
        return v

    basis_tensors = []
    for j in range(m):
        for i in range(n):
            coeffs = [K.zero()] * j + [K.gen() ** i]
            basis_tensors.append(kp_trim(coeffs))

    for t in range(1, 60):
        gamma = kp_trim([K.gen() * t, K.one()] if m > 1 else [K.gen() * t + _theta_of_linear(h)])
        cols = [flatten(tensor_mul(gamma, bt)) for bt in basis_tensors]
        Mg = rla.transpose(cols)
        mp = rla.matrix_minpoly(Mg)
        if mp.degree == N:
            if not mp.is_integral():
                raise AssertionError("primitive element is not integral")
            M = NumberField(mp, check=False)
            powers = []
            cur = [K.one()]
            for _ in range(N):
                powers.append(flatten(cur))
                cur = tensor_mul(cur, gamma)
            P = rla.transpose(powers)
            alpha_vec = flatten([K.gen()])
            theta_vec = flatten([K.zero(), K.one()] if m > 1 else [_theta_of_linear(h)])
            ac = rla.solve_right(P, alpha_vec)
            tc = rla.solve_right(P, theta_vec)
            if ac is None or tc is None:
                raise AssertionError("primitive powers failed to span")
            base_gen = M.from_coeffs(ac)
            root = M.from_coeffs(tc)

            def embed(x: NfElem, _M=M, _bg=base_gen) -> NfElem:
                return Poly(x.coords).evaluate(_bg)

            return AbsoluteExtension(M, base_gen, root, embed)
    raise SearchBudgetError("no primitive element found in 60 attempts")


def _theta_of_linear(h: List[NfElem]) -> NfElem:
    # root of a linear polynomial x + c: theta = -c
    return -h[0]


# -- orders ------------------------------------------------------------


class Order:
    """A full-rank ring of integers candidate inside a number field."""

    def __init__(self, field: NumberField, basis_rows: rla.Matrix):
        self.field = field
        n = field.degree
        int_rows, den = rla.clear_denominators(basis_rows)
        H = rla.hnf(int_rows)
        if len(H) != n:
            raise InvalidInputError("order basis is not full rank")
        self.den = den
        self.lattice = H  # basis = rows of H / den
        self.basis = [field.from_coeffs([Fraction(c, den) for c in row]) for row in H]
        self._binv = rla.inverse([[Fraction(c, den) for c in row] for row in H])
        self._table: Optional[List[List[List[int]]]] = None
        self._disc: Optional[int] = None

    def __eq__(self, other):
        return (
            isinstance(other, Order)
            and self.field == other.field
            and self.den == other.den
            and self.lattice == other.lattice
        )

    def coords_of(self, x: NfElem) -> List[Fraction]:
        return rla.vec_mat(list(x.coords), self._binv)

    def contains(self, x: NfElem) -> bool:
        return all(c.denominator == 1 for c in self.coords_of(x))

    def int_coords(self, x: NfElem) -> List[int]:
        cs = self.coords_of(x)
        if any(c.denominator != 1 for c in cs):
            raise InvalidInputError("element does not lie in the order")
        return [int(c) for c in cs]

    def elem(self, coords: Sequence[int]) -> NfElem:
        acc = self.field.zero()
        for c, b in zip(coords, self.basis):
            if c:
                acc = acc + b * c
        return acc

    def mult_table(self) -> List[List[List[int]]]:
        if self._table is None:
            n = self.field.degree
            tab = []
            for i in range(n):
                row = []
                for j in range(n):
                    row.append(self.int_coords(self.basis[i] * self.basis[j]))
                tab.append(row)
            self._table = tab
        return self._table

    def mult_vector(self, x: List[int], y: List[int], mod: Optional[int] = None) -> List[int]:
        """Product of two order elements in order coordinates."""
        tab = self.mult_table()
        n = len(x)
        out = [0] * n
        for i in range(n):
            if x[i]:
                for j in range(n):
                    if y[j]:
                        c = x[i] * y[j]
                        row = tab[i][j]
                        for k in range(n):
                            out[k] += c * row[k]
        if mod is not None:
            out = [v % mod for v in out]
        return out

    def mult_matrix(self, x: List[int]) -> List[List[int]]:
        """Matrix of multiplication by x on the order, acting on columns."""
        n = self.field.degree
        cols = []
        unit = [[1 if t == j else 0 for t in range(n)] for j in range(n)]
        for j in range(n):
            cols.append(self.mult_vector(x, unit[j]))
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def one_coords(self) -> List[int]:
        return self.int_coords(self.field.one())

    def disc(self) -> int:
        if self._disc is None:
            n = self.field.degree
            T = [[self.field.trace(self.basis[i] * self.basis[j]) for j in range(n)] for i in range(n)]
            d = rla.det(T)
            if d.denominator != 1:
                raise AssertionError("order discriminant is not an integer")
            self._disc = int(d)
        return self._disc


def _pow_vector(order: Order, v: List[int], e: int, mod: int) -> List[int]:
    result = [c % mod for c in order.one_coords()]
    base = [c % mod for c in v]
    while e:
        if e & 1:
            result = order.mult_vector(result, base, mod)
        base = order.mult_vector(base, base, mod)
        e >>= 1
    return result


def _radical_mod(order: Order, ell: int) -> List[List[int]]:
    """F_ell-basis of the radical of O/ell, as order-coordinate vectors."""
    n = order.field.degree
    q = ell
    while q < n:
        q *= ell
    cols = []
    for i in range(n):
        e = [1 if t == i else 0 for t in range(n)]
        cols.append(_pow_vector(order, e, q, ell))
    F = [[cols[j][i] % ell for j in range(n)] for i in range(n)]
    return rla.kernel_mod_p(F, ell)


def enlarge_at(order: Order, ell: int) -> Order:
    """One multiplier-ring step at ell; returns a (possibly) larger order."""
    n = order.field.degree
    rad = _radical_mod(order, ell)
    ell_rows = [[ell if t == i else 0 for t in range(n)] for i in range(n)]
    J = rla.hnf([list(v) for v in rad] + ell_rows)
    lJ = rla.lattice_scale(ell, J)
    Y: Optional[List[List[int]]] = None
    for jrow in J:
        A = order.mult_matrix(list(jrow))
        Yt = rla.lattice_preimage(A, lJ)
        Y = Yt if Y is None else rla.lattice_intersect(Y, Yt)
    assert Y is not None
    # new basis: order plus Y/ell in field coordinates
    new_rows: rla.Matrix = [[Fraction(c, order.den) for c in row] for row in order.lattice]
    for y in Y:
        elem = order.elem(y)
        new_rows.append([c / ell for c in elem.coords])
    return Order(order.field, new_rows)


def maximal_order(K: NumberField, candidate_primes: Optional[Sequence[int]] = None,
                  start: Optional[Order] = None) -> Order:
    """The maximal order, enlarging at the given primes (or at all primes
    whose square divides the starting discriminant)."""
    order = start if start is not None else Order(K, rla.mat_identity(K.degree))
    if candidate_primes is None:
        d = order.disc()
        candidate_primes = sorted(p for p, e in factor_int(d).items() if e >= 2)
    for ell in sorted(set(candidate_primes)):
        while True:
            bigger = enlarge_at(order, ell)
            if bigger == order:
                break
            order = bigger
    return order


# -- prime splitting ---------------------------------------------------


class PrimeIdeal:
    """A maximal ideal above ell in a maximal order, as an integer lattice."""

    def __init__(self, order: Order, ell: int, lattice: List[List[int]], f: int):
        self.order = order
        self.ell = ell
        self.lattice = lattice
        self.f = f
        self.e: Optional[int] = None
        self._powers: List[List[List[int]]] = [None, lattice]  # type: ignore

    def power(self, k: int) -> List[List[int]]:
        if k == 0:
            n = self.order.field.degree
            return [[1 if t == i else 0 for t in range(n)] for i in range(n)]
        while len(self._powers) <= k:
            self._powers.append(_ideal_mul(self.order, self._powers[-1], self.lattice))
        return self._powers[k]

    def elem_valuation(self, coords: List[int]) -> int:
        if not any(coords):
            raise InvalidInputError("valuation of zero")
        k = 0
        while rla.lattice_contains(self.power(k + 1), coords):
            k += 1
            if k > 10000:
                raise AssertionError("runaway valuation")
        return k


def _ideal_mul(order: Order, A: List[List[int]], B: List[List[int]]) -> List[List[int]]:
    rows = []
    for a in A:
        for b in B:
            rows.append(order.mult_vector(list(a), list(b)))
    return rla.hnf(rows)


def _echelon_mod(rows: List[List[int]], ell: int) -> List[List[int]]:
    """Reduced echelon basis mod ell (rows may be dependent)."""
    R = [[x % ell for x in r] for r in rows if any(x % ell for x in r)]
    basis: List[List[int]] = []
    for r in R:
        r = _reduce_vec(r, basis, ell)
        if any(r):
            piv = next(i for i, x in enumerate(r) if x)
            inv = pow(r[piv], -1, ell)
            r = [x * inv % ell for x in r]
            basis.append(r)
            basis.sort(key=lambda v: next(i for i, x in enumerate(v) if x))
            # re-reduce for canonical form
            for idx in range(len(basis)):
                others = basis[:idx] + basis[idx + 1:]
                basis[idx] = _reduce_vec(basis[idx], others, ell)
    return [b for b in basis if any(b)]


def _reduce_vec(v: List[int], basis: List[List[int]], ell: int) -> List[int]:
    v = [x % ell for x in v]
    for b in basis:
        piv = next(i for i, x in enumerate(b) if x)
        if v[piv]:
            c = v[piv] * pow(b[piv], -1, ell) % ell
            v = [(x - c * y) % ell for x, y in zip(v, b)]
    return v


def split_prime(order: Order, ell: int) -> List[PrimeIdeal]:
    """Prime ideals above ell in a maximal order, with e and f set."""
    n = order.field.degree
    rad = _echelon_mod(_radical_mod(order, ell), ell)
    one = order.one_coords()

    # Frobenius matrix on O/ell
    frob_cols = []
    for i in range(n):
        e = [1 if t == i else 0 for t in range(n)]
        frob_cols.append(_pow_vector(order, e, ell, ell))
    F = [[frob_cols[j][i] % ell for j in range(n)] for i in range(n)]

    results: List[List[List[int]]] = []

    def recurse(S: List[List[int]]):
        # S: echelon basis of (the mod-ell image of) an ideal containing rad
        # fixed space of Frobenius on O/S
        C_cols = []
        for i in range(n):
            e = [1 if t == i else 0 for t in range(n)]
            Fe = [sum(F[r][c] * e[c] for c in range(n)) % ell for r in range(n)]
            diff = [(a - b) % ell for a, b in zip(Fe, e)]
            C_cols.append(_reduce_vec(diff, S, ell))
        C = [[C_cols[j][i] for j in range(n)] for i in range(n)]
        V = rla.kernel_mod_p(C, ell)
        r = len(V) - len(S)
        if r <= 0:
            raise AssertionError("component count dropped to zero")
        if r == 1:
            results.append(S)
            return
        # find a fixed vector that is not scalar modulo S
        scalar_basis = _echelon_mod(S + [one], ell)
        v = None
        for cand in V:
            if any(_reduce_vec(list(cand), scalar_basis, ell)):
                v = [x % ell for x in cand]
                break
        if v is None:
            raise AssertionError("no separating fixed vector found")
        # minimal polynomial of v on O/S by power dependence
        powers = [_reduce_vec(one, S, ell)]
        cur = list(v)
        minpoly_coeffs: Optional[List[int]] = None
        for _ in range(n + 1):
            red = _reduce_vec(cur, S, ell)
            M = [[powers[k][i] for k in range(len(powers))] for i in range(n)]
            aug = [M[i] + [red[i]] for i in range(n)]
            sol = _solve_mod(aug, len(powers), ell)
            if sol is not None:
                minpoly_coeffs = [(-c) % ell for c in sol] + [1]
                break
            powers.append(red)
            cur = order.mult_vector(cur, v, ell)
        if minpoly_coeffs is None:
            raise AssertionError("no dependence among element powers")
        facs = factor_mod_p(minpoly_coeffs, ell)
        if any(len(g) != 2 for g, _ in facs):
            raise AssertionError("separating element has a nonlinear factor")
        for g, _ in facs:
            c = (-g[0]) % ell
            shifted = [(x - c * o) % ell for x, o in zip(v, one)]
            gens = list(S)
            for i in range(n):
                e = [1 if t == i else 0 for t in range(n)]
                gens.append(order.mult_vector(shifted, e, ell))
            recurse(_echelon_mod(gens, ell))

    recurse(rad)

    primes = []
    for S in results:
        lat_rows = [list(b) for b in S] + [[ell if t == i else 0 for t in range(n)] for i in range(n)]
        H = rla.hnf(lat_rows)
        P = PrimeIdeal(order, ell, H, n - len(S))
        primes.append(P)
    # set ramification via the valuation of ell
    ell_coords = [ell * c for c in one]
    for P in primes:
        P.e = P.elem_valuation(ell_coords)
    if sum(P.e * P.f for P in primes) != n:
        raise AssertionError("e*f sum mismatch in prime splitting")
    primes.sort(key=lambda P: (P.f, P.e, P.lattice))
    return primes


def _solve_mod(aug: List[List[int]], ncols: int, ell: int) -> Optional[List[int]]:
    """Solve the augmented system (last column = rhs) over F_ell."""
    rows = [[x % ell for x in r] for r in aug]
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c] % ell), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, ell)
        rows[r] = [x * inv % ell for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] % ell:
                f = rows[i][c]
                rows[i] = [(x - f * y) % ell for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if rows[i][ncols] % ell:
            return None
    sol = [0] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][ncols] % ell
    return sol


# -- local norms via idempotents --------------------------------------


def place_idempotent(order: Order, primes: List[PrimeIdeal], idx: int, ell: int,
                     prec: int) -> List[int]:
    """Coordinates of an idempotent congruent to 1 at primes[idx] and 0 at
    the other primes above ell, modulo ell^prec."""
    n = order.field.degree
    one = order.one_coords()
    modulus = ell ** prec
    if len(primes) == 1:
        return [c % modulus for c in one]
    m = max(p.e for p in primes) + 1
    other = None
    for j, P in enumerate(primes):
        if j != idx:
            other = P.power(m) if other is None else _ideal_mul(order, other, P.power(m))
    target = primes[idx].power(m)
    stacked = list(other) + list(target)
    sol = rla.zsolve_left(stacked, one)
    if sol is None:
        raise AssertionError("place idempotent CRT failed")
    eps = [0] * n
    for c, row in zip(sol[: len(other)], other):
        for i in range(n):
            eps[i] += c * row[i]
    eps = [c % modulus for c in eps]
    for _ in range(64):
        sq = order.mult_vector(eps, eps, modulus)
        if sq == eps:
            return eps
        cube = order.mult_vector(sq, eps, modulus)
        eps = [(3 * a - 2 * b) % modulus for a, b in zip(sq, cube)]
    raise AssertionError("idempotent refinement did not converge")


def local_norm_mod(order: Order, primes: List[PrimeIdeal], idx: int,
                   u_coords: List[int], ell: int, prec: int) -> int:
    """N(u) at the chosen place, as an integer mod ell^prec.

    u is given in order coordinates and must be integral.  The result is
    the determinant of multiplication by eps*u + (1-eps) on O/ell^prec.
    """
    modulus = ell ** prec
    eps = place_idempotent(order, primes, idx, ell, prec)
    one = order.one_coords()
    w = order.mult_vector(eps, u_coords, modulus)
    w = [(a + o - e) % modulus for a, o, e in zip(w, one, eps)]
    Mw = order.mult_matrix(w)
    d = rla.det([[Fraction(x % modulus) for x in row] for row in Mw])
    if d.denominator != 1:
        raise AssertionError("norm determinant is not an integer")
    return int(d) % modulus
