"""Exact univariate polynomial arithmetic over Z and Q.

Coefficient sequences are stored lowest degree first, matching the
little-endian integer arrays used in the JSON interchange formats.  All
arithmetic is exact: rational coefficients are fractions.Fraction, and
nothing in this module touches floating point.

The factorization routine is classical Zassenhaus: squarefree
decomposition, factorization modulo a good odd prime, quadratic Hensel
lifting to a Landau-Mignotte height bound, then bounded subset
recombination.  Degrees in this package stay small (at most a few tens),
so subset recombination is never the bottleneck.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import EndpointRootError, InvalidInputError, SearchBudgetError


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise InvalidInputError(f"coefficient {c!r} is not an integer or Fraction")


class Poly:
    """Immutable dense univariate polynomial with exact rational coefficients.

    ``Poly([c0, c1, c2])`` is c0 + c1*x + c2*x^2.  The zero polynomial
    has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def constant(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[0]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> List[int]:
        if not self.is_integral():
            raise InvalidInputError("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*x" if c != 1 else "x")
            else:
                parts.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return " + ".join(reversed(parts))

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        return self + (-_coerce(other))

    def __mul__(self, other) -> "Poly":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return _coerce(other) - self

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise InvalidInputError("negative polynomial power")
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> Tuple["Poly", "Poly"]:
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lcinv = 1 / other.lc()
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            f = rem[-1] * lcinv
            q[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= f * c
            rem.pop()
        return Poly(q), Poly(rem)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    # -- calculus and transforms --------------------------------------

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        """Horner evaluation; works for any value supporting + and *."""
        if not self.coeffs:
            return 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        acc = self.coeffs[-1] if isinstance(x, (int, Fraction)) else self.coeffs[-1] * (x ** 0)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        return self.evaluate(x)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = 1 / self.lc()
        return Poly([c * inv for c in self.coeffs])

    def shift(self, c) -> "Poly":
        """Return f(x + c)."""
        c = _as_fraction(c)
        out = Poly([])
        for a in reversed(self.coeffs):
            out = out * Poly([c, 1]) + Poly([a])
        return out

    def scale_arg(self, c) -> "Poly":
        """Return f(c*x)."""
        c = _as_fraction(c)
        pw = Fraction(1)
        cs = []
        for a in self.coeffs:
            cs.append(a * pw)
            pw *= c
        return Poly(cs)

    def reverse(self) -> "Poly":
        """Return x^deg * f(1/x)."""
        return Poly(list(reversed(self.coeffs)))

    def compose(self, other: "Poly") -> "Poly":
        out = Poly([])
        for a in reversed(self.coeffs):
            out = out * other + Poly([a])
        return out


def _coerce(v) -> Poly:
    if isinstance(v, Poly):
        return v
    return Poly([v])


X = Poly([0, 1])


def poly_from_ints(cs: Sequence[int]) -> Poly:
    return Poly(list(cs))


# -- gcd machinery over Q ---------------------------------------------


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over Q (Euclid; degrees here are small)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def poly_ext_gcd(f: Poly, g: Poly) -> Tuple[Poly, Poly, Poly]:
    """Return (d, u, v) with u*f + v*g = d, d the monic gcd."""
    r0, r1 = f, g
    s0, s1 = Poly([1]), Poly([])
    t0, t1 = Poly([]), Poly([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc()
    return r0.monic(), s0 * inv, t0 * inv


def squarefree_part(f: Poly) -> Poly:
    if f.degree <= 0:
        return f.monic() if not f.is_zero() else f
    return (f // poly_gcd(f, f.derivative())).monic()


def yun_squarefree(f: Poly) -> List[Tuple[Poly, int]]:
    """Squarefree decomposition over Q: f = lc * prod a_i^i, a_i monic squarefree."""
    f = f.monic()
    if f.degree <= 0:
        return []
    out = []
    g = poly_gcd(f, f.derivative())
    c = f // g
    d = f.derivative() // g - c.derivative()
    i = 1
    while c.degree > 0:
        a = poly_gcd(c, d)
        if a.degree > 0:
            out.append((a.monic(), i))
        c2 = c // a
        d = d // a - c2.derivative()
        c = c2
        i += 1
    return out


# -- integer polynomial utilities -------------------------------------


def content(f: Poly) -> Fraction:
    """Positive rational content; content(0) = 0."""
    if f.is_zero():
        return Fraction(0)
    num = 0
    den = 1
    for c in f.coeffs:
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(num, den)


def primitive_part(f: Poly) -> Poly:
    """Integer primitive part with positive leading coefficient."""
    if f.is_zero():
        return f
    c = content(f)
    g = Poly([a / c for a in f.coeffs])
    if g.lc() < 0:
        g = -g
    return g


# -- arithmetic mod m on int lists ------------------------------------
# Little-endian int lists; modulus m need not be prime except where noted.


def _pm_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pm_add(a, b, m):
    n = max(len(a), len(b))
    return _pm_trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _pm_sub(a, b, m):
    n = max(len(a), len(b))
    return _pm_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _pm_mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return _pm_trim(out)


def _pm_divmod_monic(a, b, m):
    """Divide by b with lc(b) invertible mod m (unit leading coefficient)."""
    a = list(a)
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, m)
    db = len(b) - 1
    q = [0] * max(0, len(a) - db)
    while len(_pm_trim(a)) - 1 >= db and a:
        a = _pm_trim(a)
        if len(a) - 1 < db:
            break
        k = len(a) - 1 - db
        f = (a[-1] * inv) % m
        q[k] = f
        for i, c in enumerate(b):
            a[k + i] = (a[k + i] - f * c) % m
        a.pop()
    return _pm_trim(q), _pm_trim(a)


def _pm_gcd(a, b, p):
    """Monic gcd mod prime p."""
    a, b = [c % p for c in a], [c % p for c in b]
    a, b = _pm_trim(a), _pm_trim(b)
    while b:
        _, r = _pm_divmod_monic(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _pm_ext_gcd(a, b, p):
    """(g, s, t) with s*a + t*b = g monic, mod prime p."""
    r0, r1 = _pm_trim([c % p for c in a]), _pm_trim([c % p for c in b])
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pm_divmod_monic(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _pm_sub(s0, _pm_mul(q, s1, p), p)
        t0, t1 = t1, _pm_sub(t0, _pm_mul(q, t1, p), p)
    if r0:
        inv = pow(r0[-1], -1, p)
        r0 = [c * inv % p for c in r0]
        s0 = [c * inv % p for c in s0]
        t0 = [c * inv % p for c in t0]
    return r0, s0, t0


def _pm_pow_mod(base, e, modpoly, p):
    result = [1]
    base = _pm_divmod_monic(base, modpoly, p)[1]
    while e:
        if e & 1:
            result = _pm_divmod_monic(_pm_mul(result, base, p), modpoly, p)[1]
        base = _pm_divmod_monic(_pm_mul(base, base, p), modpoly, p)[1]
        e >>= 1
    return result


def _pm_deriv(a, p):
    return _pm_trim([(i * c) % p for i, c in enumerate(a)][1:])


# -- factorization over F_p -------------------------------------------


def _sqfree_mod_p(f, p):
    """Squarefree decomposition mod p; returns [(monic squarefree, mult)]."""
    f = _pm_trim([c % p for c in f])
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    out = []

    def rec(g, base_mult):
        if len(g) <= 1:
            return
        dg = _pm_deriv(g, p)
        if not dg:
            # g is a p-th power: g(x) = h(x^p) with identical coefficients
            h = [g[i] for i in range(0, len(g), p)]
            rec(h, base_mult * p)
            return
        w = _pm_gcd(g, dg, p)
        c = _pm_divmod_monic(g, w, p)[0]
        i = 1
        while len(c) > 1:
            y = _pm_gcd(w, c, p)
            a = _pm_divmod_monic(c, y, p)[0]
            if len(a) > 1:
                out.append((a, base_mult * i))
            c = y
            w = _pm_divmod_monic(w, y, p)[0]
            i += 1
        if len(w) > 1:
            rec(w, base_mult)

    rec(f, 1)
    # merge repeated bases
    merged = {}
    for g, m in out:
        merged[tuple(g)] = merged.get(tuple(g), 0) + m
    return [(list(g), m) for g, m in sorted(merged.items())]


def _ddf(f, p):
    """Distinct-degree factorization of monic squarefree f mod p."""
    out = []
    h = [0, 1]
    v = list(f)
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        h = _pm_pow_mod(h, p, v, p)
        g = _pm_gcd(_pm_sub(h, [0, 1], p), v, p)
        if len(g) > 1:
            out.append((g, d))
            v = _pm_divmod_monic(v, g, p)[0]
            h = _pm_divmod_monic(h, v, p)[1]
    if len(v) > 1:
        out.append((v, len(v) - 1))
    return out


def _edf(f, d, p, rng):
    """Equal-degree splitting: f monic squarefree, all factors of degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = _pm_trim(a)
        if len(a) <= 1:
            continue
        if p == 2:
            t = list(a)
            acc = list(a)
            for _ in range(d - 1):
                acc = _pm_pow_mod(acc, 2, f, p)
                t = _pm_add(t, acc, p)
            g = _pm_gcd(t, f, p)
        else:
            g = _pm_gcd(a, f, p)
            if 1 < len(g) < len(f):
                pass
            else:
                b = _pm_pow_mod(a, (p ** d - 1) // 2, f, p)
                g = _pm_gcd(_pm_sub(b, [1], p), f, p)
        if 1 < len(g) < len(f):
            h = _pm_divmod_monic(f, g, p)[0]
            return _edf(g, d, p, rng) + _edf(h, d, p, rng)


def factor_mod_p(f: Sequence[int], p: int) -> List[Tuple[List[int], int]]:
    """Factor f mod p into monic irreducibles with multiplicity.

    Deterministic: the equal-degree splitting RNG is seeded from (f, p).
    """
    f = _pm_trim([c % p for c in f])
    if len(f) <= 1:
        raise InvalidInputError("cannot factor a constant mod p")
    seed = (p * 0x9E3779B1 + sum((c + 1) * (i + 7) for i, c in enumerate(f))) & 0xFFFFFFFF
    rng = random.Random(seed)
    out = []
    for g, mult in _sqfree_mod_p(f, p):
        for h, d in _ddf(g, p):
            for irr in _edf(h, d, p, rng):
                out.append((irr, mult))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin irreducibility test mod p."""
    f = _pm_trim([c % p for c in f])
    n = len(f) - 1
    if n <= 0:
        return False
    if f[-1] % p == 0:
        return False
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    if n == 1:
        return True
    h = _pm_pow_mod([0, 1], p ** n, f, p)
    if _pm_trim(_pm_sub(h, [0, 1], p)):
        return False
    for q in {q for q in _prime_factors(n)}:
        h = _pm_pow_mod([0, 1], p ** (n // q), f, p)
        if len(_pm_gcd(_pm_sub(h, [0, 1], p), f, p)) > 1:
            return False
    return True


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primes_from(start: int):
    """Infinite iterator over primes >= start (trial division; small uses only)."""
    n = max(2, start)
    while True:
        if all(n % d for d in range(2, isqrt(n) + 1)):
            yield n
        n += 1


# -- Hensel lifting ---------------------------------------------------


def _hensel_step(f, g, h, s, t, m):
    """One quadratic step: from mod m to mod m^2.

    Preconditions: f = g*h (mod m), s*g + t*h = 1 (mod m), lc(h) = 1,
    lc(g) invertible mod m^2.
    """
    m2 = m * m
    e = _pm_sub(f, _pm_mul(g, h, m2), m2)
    q, r = _pm_divmod_monic(_pm_mul(s, e, m2), h, m2)
    g1 = _pm_add(g, _pm_add(_pm_mul(t, e, m2), _pm_mul(q, g, m2), m2), m2)
    h1 = _pm_add(h, r, m2)
    b = _pm_sub(_pm_add(_pm_mul(s, g1, m2), _pm_mul(t, h1, m2), m2), [1], m2)
    c, d = _pm_divmod_monic(_pm_mul(s, b, m2), h1, m2)
    s1 = _pm_sub(s, d, m2)
    t1 = _pm_sub(t, _pm_add(_pm_mul(t, b, m2), _pm_mul(c, g1, m2), m2), m2)
    return g1, h1, s1, t1


def _hensel_pair(f, g0, h0, p, target):
    """Lift f = g0*h0 from mod p to mod p^k >= target; returns (g, h, modulus)."""
    _, s, t = _pm_ext_gcd(g0, h0, p)
    m = p
    g, h = list(g0), list(h0)
    while m < target:
        g, h, s, t = _hensel_step([c % (m * m) for c in f], g, h, s, t, m)
        m = m * m
    return g, h, m


def hensel_lift_factors(f: Sequence[int], factors_p: List[List[int]], p: int, target: int):
    """Lift pairwise-coprime monic factors of monic f from mod p to mod p^k >= target.

    Returns (lifted factor list, modulus).  The product of the lifted
    factors is f modulo the returned modulus.
    """
    k = 1
    m = p
    while m < target:
        m *= p
        k += 1
    modulus = p ** k

    def rec(fcur, parts):
        if len(parts) == 1:
            return [[c % modulus for c in fcur]]
        mid = len(parts) // 2
        left, right = parts[:mid], parts[mid:]
        gl = [1]
        for q in left:
            gl = _pm_mul(gl, q, p)
        hr = [1]
        for q in right:
            hr = _pm_mul(hr, q, p)
        g, h, m2 = _hensel_pair(fcur, gl, hr, p, modulus)
        g = [c % modulus for c in g]
        h = [c % modulus for c in h]
        return rec(g, left) + rec(h, right)

    return rec([c % modulus for c in f], factors_p), modulus


# -- Zassenhaus factorization over Z ----------------------------------


def _sym(c: int, m: int) -> int:
    c %= m
    if 2 * c > m:
        c -= m
    return c


def _mignotte_target(f_int: List[int]) -> int:
    n = len(f_int) - 1
    norm = isqrt(sum(c * c for c in f_int)) + 1
    return 2 * (2 ** n) * norm + 1


def _divides_exactly(f: Poly, g: Poly) -> bool:
    q, r = divmod(f, g)
    return r.is_zero() and q.is_integral()


def _factor_squarefree_monic_z(f: Poly) -> List[Poly]:
    """Irreducible factors of a monic squarefree integer polynomial."""
    n = f.degree
    if n <= 1:
        return [f]
    fi = f.int_coeffs()
    # good odd prime: squarefree reduction
    p = None
    for cand in primes_from(3):
        if fi[-1] % cand == 0:
            continue
        if len(_pm_gcd(fi, _pm_deriv([c % cand for c in fi], cand), cand)) == 1:
            p = cand
            break
        if cand > 1000:
            raise InvalidInputError("no good factorization prime below 1000; input may not be squarefree")
    fac_p = [g for g, _ in factor_mod_p(fi, p)]
    if len(fac_p) == 1:
        return [f]
    target = _mignotte_target(fi)
    lifted, modulus = hensel_lift_factors(fi, fac_p, p, target)
    # subset recombination
    remaining = f
    pool = list(range(len(lifted)))
    found: List[Poly] = []
    size = 1
    while 2 * size <= len(pool):
        progress = False
        for combo in itertools.combinations(pool, size):
            prod = [1]
            for i in combo:
                prod = _pm_mul(prod, lifted[i], modulus)
            cand = Poly([_sym(c, modulus) for c in prod])
            if cand.degree < 1:
                continue
            if _divides_exactly(remaining, cand):
                found.append(cand)
                remaining = remaining // cand
                pool = [i for i in pool if i not in combo]
                progress = True
                break
        if not progress:
            size += 1
    if remaining.degree >= 1:
        found.append(remaining)
    found.sort(key=lambda g: (g.degree, g.coeffs))
    return found


def factor_over_z(f: Poly) -> Tuple[Fraction, List[Tuple[Poly, int]]]:
    """Factor an integer polynomial into primitive irreducibles over Z.

    Returns (unit, [(g_i, m_i)]) with unit * prod g_i^m_i == f exactly,
    each g_i primitive with positive leading coefficient, sorted.
    """
    if f.is_zero():
        raise InvalidInputError("cannot factor the zero polynomial")
    if not f.is_integral():
        raise InvalidInputError("factor_over_z expects integer coefficients")
    unit = content(f) * (1 if f.lc() > 0 else -1)
    g = primitive_part(f)
    if g.degree == 0:
        return unit, []
    out: List[Tuple[Poly, int]] = []
    for sq, mult in yun_squarefree(g):
        # sq is monic with rational coefficients; restore a primitive integer model
        sqz = primitive_part(sq)
        lead = sqz.lc()
        if lead != 1:
            # non-monic squarefree part: monicize, factor, and map back
            n = sqz.degree
            c = int(lead)
            F = Poly([sqz.coeffs[i] * c ** (n - 1 - i) for i in range(n)] + [1])
            assert F.is_monic() and F.is_integral()
            sub = []
            for G in _factor_squarefree_monic_z(F):
                sub.append(primitive_part(G.scale_arg(c)))
            out.extend((h, mult) for h in sub)
        else:
            out.extend((h, mult) for h in _factor_squarefree_monic_z(sqz))
    # unit bookkeeping: f = unit' * prod out
    prod = Poly([1])
    for h, m in out:
        prod = prod * h ** m
    unit_total = Fraction(f.lc(), prod.lc())
    if prod * unit_total != f:
        raise AssertionError("internal factorization check failed")
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return unit_total, out


def is_irreducible_z(f: Poly) -> bool:
    """True when f is irreducible over Q (degree >= 1, content ignored)."""
    if f.degree < 1:
        return False
    _, facs = factor_over_z(primitive_part(f))
    return len(facs) == 1 and facs[0][1] == 1


# -- cyclotomic polynomials -------------------------------------------

_CYCLO_CACHE = {}


def cyclotomic(r: int) -> Poly:
    """The r-th cyclotomic polynomial, exact and memoized."""
    if r < 1:
        raise InvalidInputError("cyclotomic index must be >= 1")
    if r in _CYCLO_CACHE:
        return _CYCLO_CACHE[r]
    f = Poly([-1] + [0] * (r - 1) + [1])
    for d in range(1, r):
        if r % d == 0:
            f = f // cyclotomic(d)
    _CYCLO_CACHE[r] = f
    return f


# -- resultants and discriminants -------------------------------------


def resultant(f: Poly, g: Poly) -> Fraction:
    """Res(f, g) over Q via Gaussian elimination on the Sylvester matrix."""
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        piv = None
        for r in range(col, size):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col] != 0:
                factor = rows[r][col] * inv
                for c2 in range(col, size):
                    rows[r][c2] -= factor * rows[col][c2]
    return det


def discriminant(f: Poly) -> Fraction:
    n = f.degree
    if n < 1:
        raise InvalidInputError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc()


# -- Sturm sequences --------------------------------------------------


def sturm_sequence(f: Poly) -> List[Poly]:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        seq.append(-(seq[-2] % seq[-1]))
    if seq[-1].is_zero():
        seq.pop()
    return seq


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: List[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(f: Poly, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of squarefree f in (a, b].

    Raises EndpointRootError when f vanishes at a or b; the caller must
    handle that factor exactly rather than have us guess a perturbation.
    """
    a, b = _as_fraction(a), _as_fraction(b)
    if a >= b:
        raise InvalidInputError("sturm_count needs a < b")
    if f.degree < 1:
        return 0
    if f.evaluate(a) == 0 or f.evaluate(b) == 0:
        raise EndpointRootError(f"polynomial vanishes at an endpoint of ({a}, {b})")
    seq = sturm_sequence(f)
    va = _variations([_sign(s.evaluate(a)) for s in seq])
    vb = _variations([_sign(s.evaluate(b)) for s in seq])
    return va - vb


def _sign_at_inf(f: Poly, positive: bool) -> int:
    if f.is_zero():
        return 0
    s = _sign(f.lc())
    if not positive and f.degree % 2 == 1:
        s = -s
    return s


def count_real_roots(f: Poly) -> int:
    """Number of distinct real roots of squarefree f on the whole line."""
    if f.degree < 1:
        return 0
    seq = sturm_sequence(f)
    vneg = _variations([_sign_at_inf(s, positive=False) for s in seq])
    vpos = _variations([_sign_at_inf(s, positive=True) for s in seq])
    return vneg - vpos


def cauchy_root_bound(f: Poly) -> Fraction:
    """All complex roots of f lie strictly inside |x| < bound."""
    if f.degree < 1:
        raise InvalidInputError("root bound needs degree >= 1")
    lc = abs(f.lc())
    return 1 + max(abs(c) / lc for c in f.coeffs[:-1]) if f.degree >= 1 else Fraction(1)


# -- Newton power sums ------------------------------------------------


def power_sums(f: Poly, count: int) -> List[Fraction]:
    """p_1..p_count for the roots of monic f, by Newton's identities."""
    if not f.is_monic():
        raise InvalidInputError("power_sums expects a monic polynomial")
    n = f.degree
    # e_i with sign: f = x^n - e1 x^(n-1) + e2 x^(n-2) - ...
    e = [Fraction(0)] * (n + 1)
    for i in range(1, n + 1):
        e[i] = (-1) ** i * f.coeffs[n - i]
    p = [Fraction(0)] * (count + 1)
    for k in range(1, count + 1):
        if k <= n:
            acc = (-1) ** (k - 1) * k * e[k]
            for i in range(1, k):
                acc += (-1) ** (k - 1 + i) * e[k - i] * p[i]
            p[k] = acc
        else:
            acc = Fraction(0)
            for i in range(1, n + 1):
                acc += (-1) ** (i - 1) * e[i] * p[k - i]
            p[k] = acc
    return p[1:]


def _miller_rabin_witness(a: int, n: int) -> bool:
    """True when a witnesses that n is composite."""
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed base set.

    Deterministic for n < 3.3e24; above that the fixed bases make a
    false positive astronomically unlikely and irrelevant for the sizes
    this package produces.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    return not any(_miller_rabin_witness(a, n) for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37))


def _pollard_rho(n: int, rng: random.Random) -> int:
    """One nontrivial factor of odd composite n (Brent's cycle variant)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
            if r > 1 << 22:
                raise SearchBudgetError(f"integer factorization budget exhausted on {n}")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factor_int(n: int) -> Dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise InvalidInputError("cannot factor zero")
    n = abs(n)
    out: Dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= n and d < 100000:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += wheel[i]
        i = (i + 1) % 8
    if n == 1:
        return out
    rng = random.Random(0xFAC70 + (n & 0xFFFFFFFF))
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend([r, r])
            continue
        g = _pollard_rho(m, rng)
        stack.extend([g, m // g])
    return out


def multiplicative_order(t: int, r: int) -> int:
    """Order of t in (Z/r)^x; requires gcd(t, r) = 1."""
    t %= r
    if r == 1:
        return 1
    if gcd(t, r) != 1:
        raise InvalidInputError(f"{t} is not a unit mod {r}")
    # order divides the Carmichael-style exponent; scan divisors of phi
    phi = 1
    for p, e in factor_int(r).items():
        phi *= (p - 1) * p ** (e - 1)
    order = phi
    for p in factor_int(phi):
        while order % p == 0 and pow(t, order // p, r) == 1:
            order //= p
    return order


def poly_from_power_sums(psums: Sequence[Fraction], degree: int) -> Poly:
    """Monic polynomial of the given degree with prescribed root power sums."""
    if len(psums) < degree:
        raise InvalidInputError("not enough power sums")
    e = [Fraction(1)] + [Fraction(0)] * degree
    for k in range(1, degree + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * psums[i - 1]
        e[k] = acc / k
    coeffs = [(-1) ** (degree - i) * e[degree - i] for i in range(degree + 1)]
    return Poly(coeffs)
