"""Exact arithmetic in cyclotomic fields Q(zeta_E) and their ell-local subrings.

Elements are integer polynomial vectors of length phi(E), reduced modulo the
E-th cyclotomic polynomial, together with a positive integer denominator.
Everything is exact; no floating point, no precision management.  Operations
between elements of different conductors embed both into the lcm conductor.
Operations that would require roots outside the current field never extend it
silently: they raise :class:`ConductorError` carrying the minimal sufficient
conductor.

The ell-local subring ("denominators prime to ell") is the same element type;
:func:`is_ell_local`, :func:`ell_local_inv` and :class:`ResidueField` provide
the extra structure, including the residue map to F_ell[x]/(g) for a chosen
irreducible factor g of the cyclotomic polynomial mod ell.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional

__all__ = [
    "Cyc",
    "ConductorError",
    "EllLocalError",
    "ResidueField",
    "cyclotomic_poly",
    "discrete_log",
    "ell_local_inv",
    "euler_phi",
    "is_ell_local",
    "kth_roots",
    "lcm_all",
    "prime_factors",
    "root_of_unity_order",
]


class ConductorError(ValueError):
    """Raised when an operation needs roots of unity absent from the field."""

    def __init__(self, message: str, minimal_conductor: int):
        super().__init__(f"{message} (minimal sufficient conductor: {minimal_conductor})")
        self.minimal_conductor = minimal_conductor


class EllLocalError(ArithmeticError):
    """Raised on division by an element that is not an ell-local unit."""


def euler_phi(n: int) -> int:
    assert n >= 1
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def prime_factors(n: int) -> list[int]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic with integer coefficients, so the remainder stays integral.
    num = list(num)
    q = [0] * max(0, len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c:
            q[i] = c
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return q, _poly_trim(num)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Monic E-th cyclotomic polynomial, ascending coefficients."""
    assert n >= 1
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not r, (n, d)
            poly = q
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_context(conductor: int) -> tuple[int, tuple[int, ...]]:
    phi = euler_phi(conductor)
    return phi, cyclotomic_poly(conductor)


def _reduce_mod_cyclotomic(coeffs: list[int], conductor: int) -> tuple[int, ...]:
    phi, poly = _reduction_context(conductor)
    _, rem = _poly_divmod(list(coeffs), list(poly))
    rem += [0] * (phi - len(rem))
    return tuple(rem[:phi])


def _content(coeffs: Iterable[int]) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    return g


class Cyc:
    """An element of Q(zeta_E), in canonical form.

    Canonical form: the numerator vector is reduced modulo the cyclotomic
    polynomial, the denominator is >= 1, and gcd(content, denominator) = 1.
    """

    __slots__ = ("conductor", "num", "den", "_min_key")

    def __init__(self, conductor: int, num: Iterable[int], den: int = 1, _canonical: bool = False):
        assert conductor >= 1
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.conductor = conductor
        if _canonical:
            self.num = tuple(num)
            self.den = den
        else:
            coeffs = list(num)
            phi = euler_phi(conductor)
            if len(coeffs) > phi:
                coeffs = list(_reduce_mod_cyclotomic(coeffs, conductor))
            coeffs += [0] * (phi - len(coeffs))
            if den < 0:
                den = -den
                coeffs = [-c for c in coeffs]
            g = gcd(_content(coeffs), den)
            if g > 1:
                coeffs = [c // g for c in coeffs]
                den //= g
            if all(c == 0 for c in coeffs):
                den = 1
            self.num = tuple(coeffs)
            self.den = den
        self._min_key = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(conductor: int = 1) -> "Cyc":
        return Cyc(conductor, [0] * euler_phi(conductor), 1, _canonical=True)

    @staticmethod
    def one(conductor: int = 1) -> "Cyc":
        return Cyc.integer(1, conductor)

    @staticmethod
    def integer(n: int, conductor: int = 1) -> "Cyc":
        v = [0] * euler_phi(conductor)
        v[0] = n
        return Cyc(conductor, v)

    @staticmethod
    def rational(value: Fraction | int, conductor: int = 1) -> "Cyc":
        f = Fraction(value)
        v = [0] * euler_phi(conductor)
        v[0] = f.numerator
        return Cyc(conductor, v, f.denominator)

    @staticmethod
    def zeta(conductor: int, exponent: int = 1) -> "Cyc":
        """zeta_E^exponent as an element of Q(zeta_E)."""
        e = exponent % conductor
        coeffs = [0] * e + [1]
        return Cyc(conductor, coeffs)

    @staticmethod
    def root_of_unity(order: int, exponent: int, conductor: int) -> "Cyc":
        """The canonical zeta_order^exponent inside Q(zeta_conductor)."""
        if order == 1:
            return Cyc.one(conductor)
        if conductor % order == 0:
            return Cyc.zeta(conductor, (conductor // order) * exponent)
        if order % 2 == 0 and (order // 2) % 2 == 1 and conductor % (order // 2) == 0:
            # zeta_{2s} = -zeta_s^{(s+1)/2} for odd s
            s = order // 2
            k = (s + 1) // 2
            sign = -Cyc.one(conductor) if exponent % 2 else Cyc.one(conductor)
            return sign * Cyc.zeta(conductor, (conductor // s) * ((k * exponent) % s))
        raise ConductorError(
            f"mu_{order} not contained in Q(zeta_{conductor})",
            minimal_conductor=_lcm(conductor, order),
        )

    # -- basic structure ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def as_rational(self) -> Optional[Fraction]:
        if any(c != 0 for c in self.num[1:]):
            return None
        return Fraction(self.num[0], self.den)

    def embed(self, conductor: int) -> "Cyc":
        """Image under Q(zeta_E) -> Q(zeta_E'), zeta_E -> zeta_E'^(E'/E)."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor != 0:
            raise ConductorError(
                f"cannot embed conductor {self.conductor} into {conductor}",
                minimal_conductor=_lcm(self.conductor, conductor),
            )
        step = conductor // self.conductor
        coeffs = [0] * ((len(self.num) - 1) * step + 1 if self.num else 1)
        for i, c in enumerate(self.num):
            if c:
                coeffs[i * step] += c
        return Cyc(conductor, coeffs, self.den)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> tuple["Cyc", "Cyc"]:
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(Fraction(other), 1)
        if not isinstance(other, Cyc):
            return NotImplemented, NotImplemented  # type: ignore[return-value]
        if self.conductor == other.conductor:
            return self, other
        e = _lcm(self.conductor, other.conductor)
        return self.embed(e), other.embed(e)

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        den = a.den * b.den
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return Cyc(a.conductor, num, den)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.conductor, [-c for c in self.num], self.den, _canonical=True)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        out = [0] * (2 * len(a.num) - 1 if a.num else 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        out[i + j] += x * y
        return Cyc(a.conductor, out, a.den * b.den)

    __rmul__ = __mul__

    def inv(self) -> "Cyc":
        """Multiplicative inverse; extended Euclid against the cyclotomic polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        modulus = [Fraction(c) for c in cyclotomic_poly(self.conductor)]
        a = [Fraction(c, self.den) for c in self.num]
        # extended gcd over Q[x]: find u with u*a = 1 mod Phi_E
        r0, r1 = modulus, _ftrim(a)
        s0, s1 = [], [Fraction(1)]
        while True:
            q, r = _fdivmod(r0, r1)
            if not r:
                break
            s = _fsub(s0, _fmul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s
        # r1 is the (nonzero constant) gcd since Phi_E is irreducible over Q
        assert len(r1) == 1, "cyclotomic polynomial must be irreducible over Q"
        lead = r1[0]
        u = [c / lead for c in s1]
        # clear denominators
        den_lcm = 1
        for c in u:
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        ints = [int(c * den_lcm) for c in u]
        return Cyc(self.conductor, ints, den_lcm)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = Cyc.one(self.conductor)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison and hashing --------------------------------------------

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        return hash(self.min_key())

    def min_key(self) -> tuple:
        """Canonical key independent of the ambient conductor.

        Reduces to the minimal cyclotomic subfield containing the element
        (including the odd-conductor normalisation Q(zeta_{2m}) = Q(zeta_m)),
        so equal elements at different conductors share a key.
        """
        if self._min_key is None:
            e, num, den = _minimize(self.conductor, self.num, self.den)
            self._min_key = (e, num, den)
        return self._min_key

    def sort_key(self) -> tuple:
        k = self.min_key()
        return (k[0], k[2]) + k[1]

    def __repr__(self):
        if self.is_zero():
            return "Cyc(0)"
        terms = []
        for i, c in enumerate(self.num):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*z{self.conductor}")
            else:
                terms.append(f"{c}*z{self.conductor}^{i}")
        s = " + ".join(terms)
        if self.den != 1:
            s = f"({s})/{self.den}"
        return f"Cyc[{s}]"


def _ftrim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fdivmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / lead
        if c:
            q[i] = c
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return _ftrim(q), _ftrim(num)


def _fmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ftrim(out)


def _fsub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _ftrim(out)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = _lcm(out, v)
    return out


# -- conductor minimisation ---------------------------------------------------


def _subfield_descend(conductor: int, num: tuple[int, ...], den: int, sub: int):
    """Express the element in Q(zeta_sub) if possible, else return None."""
    from . import linalg

    step = conductor // sub
    phi_sub = euler_phi(sub)
    basis = []
    for i in range(phi_sub):
        vec = [0] * (i * step + 1)
        vec[i * step] = 1
        basis.append(_reduce_mod_cyclotomic(vec, conductor))
    # solve sum c_i basis_i = num over Q
    phi = euler_phi(conductor)
    rows = []
    for r in range(phi):
        rows.append([Fraction(basis[i][r]) for i in range(phi_sub)] + [Fraction(num[r])])
    sol = linalg.solve_augmented(rows, Fraction(0), Fraction(1))
    if sol is None:
        return None
    q_lcm = 1
    for c in sol:
        q_lcm = _lcm(q_lcm, c.denominator)
    coeffs = [int(c * q_lcm) for c in sol]
    return sub, tuple(coeffs), den * q_lcm


def _minimize(conductor: int, num: tuple[int, ...], den: int):
    e, n, d = conductor, num, den
    changed = True
    while changed:
        changed = False
        if e % 2 == 0 and (e // 2) % 2 == 1:
            # zeta_{2m} = -zeta_m^{(m+1)/2} for odd m: conductor 2m is never minimal
            m = e // 2
            k = (m + 1) // 2
            acc = Cyc.zero(m)
            zm = Cyc.zeta(m)
            for i, c in enumerate(n):
                if c:
                    acc = acc + Cyc.integer((-1) ** (i % 2) * c, 1) * zm ** ((k * i) % m)
            cy = Cyc(m, acc.num, acc.den * d)
            e, n, d = cy.conductor, cy.num, cy.den
            changed = True
            continue
        for p in prime_factors(e):
            sub = e // p
            if euler_phi(e) > euler_phi(sub):
                down = _subfield_descend(e, n, d, sub)
                if down is not None:
                    cy = Cyc(down[0], down[1], down[2])
                    e, n, d = cy.conductor, cy.num, cy.den
                    changed = True
                    break
    return e, n, d


# -- roots of unity -----------------------------------------------------------


def _mu_order(conductor: int) -> int:
    """Order of the group of roots of unity in Q(zeta_E)."""
    return conductor if conductor % 2 == 0 else 2 * conductor


def _mu_generator(conductor: int) -> Cyc:
    m = _mu_order(conductor)
    if conductor % 2 == 0:
        return Cyc.zeta(conductor)
    return -Cyc.zeta(conductor)  # order 2E when E odd


def root_of_unity_order(x: Cyc) -> Optional[int]:
    """Multiplicative order of x if x is a root of unity, else None."""
    if x.is_zero() or x.den != 1:
        return None
    m = _mu_order(x.conductor)
    if not (x ** m == Cyc.one()):
        return None
    order = m
    for p in prime_factors(m):
        while order % p == 0 and x ** (order // p) == Cyc.one():
            order //= p
    return order


def discrete_log(x: Cyc) -> tuple[int, int]:
    """(m, e) with x = g^e for g the canonical generator of mu_m, m = mu-order."""
    m = _mu_order(x.conductor)
    g = _mu_generator(x.conductor)
    acc = Cyc.one(x.conductor)
    for e in range(m):
        if acc == x:
            return m, e
        acc = acc * g
    raise ValueError("not a root of unity")


def kth_roots(alpha: Cyc, k: int) -> list[Cyc]:
    """The k elements beta with beta^k = alpha, for alpha of finite order.

    Requires the working conductor to contain all the roots (k * ord(alpha)
    divides the mu-order); otherwise raises ConductorError with the minimal
    sufficient conductor.  The result is a single coset of mu_k.
    """
    assert k >= 1
    order = root_of_unity_order(alpha)
    if order is None:
        raise ValueError("kth_roots requires a root of unity")
    e = alpha.conductor
    m = _mu_order(e)
    if m % (k * order) != 0:
        raise ConductorError(
            f"roots of order {k * order} not available at conductor {e}",
            minimal_conductor=lcm_all([e, k * order]),
        )
    m2, u = discrete_log(alpha)
    # solve k*v = u (mod m)
    g = gcd(k, m)
    if u % g != 0:
        raise ConductorError(
            f"no k-th root at conductor {e}",
            minimal_conductor=lcm_all([e, k * order]),
        )
    v0 = (u // g) * pow(k // g, -1, m // g) % (m // g)
    gen = _mu_generator(e)
    beta0 = gen ** v0
    step = m // k
    roots = [beta0 * gen ** (step * i) for i in range(k)]
    assert all(r ** k == alpha for r in roots)
    assert len({r.min_key() for r in roots}) == k
    return roots


# -- ell-local structure ------------------------------------------------------


def is_ell_local(x: Cyc, ell: int) -> bool:
    """Whether x lies in the ell-local subring (denominator prime to ell)."""
    return x.den % ell != 0


def ell_local_inv(x: Cyc, ell: int) -> Cyc:
    """Inverse inside the ell-local subring; the result must stay ell-local."""
    if not is_ell_local(x, ell):
        raise EllLocalError(f"element is not ell-local at ell={ell}")
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero")
    y = x.inv()
    if y.den % ell == 0:
        raise EllLocalError(f"element is not a unit in the ell-local subring at ell={ell}")
    return y


# -- residue field F_ell[x]/(g) ----------------------------------------------


def _gf_poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _gf_poly_mod(a: list[int], mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    a = [c % p for c in a]
    inv_lead = pow(mod[-1], -1, p)
    for i in range(len(a) - len(mod), -1, -1):
        c = a[i + len(mod) - 1] * inv_lead % p
        if c:
            for j, d in enumerate(mod):
                a[i + j] = (a[i + j] - c * d) % p
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _gf_poly_divides(a: tuple[int, ...], b: tuple[int, ...], p: int) -> bool:
    return not _gf_poly_mod(list(b), a, p)


class ResidueField:
    """F_ell[x]/(g) for a fixed irreducible factor g of Phi_E mod ell.

    ell-power roots of unity reduce to 1; the prime-to-ell part of zeta_E maps
    to the class of x.  The factor g is chosen deterministically (lexicographic
    least among irreducible factors of the prime-to-ell cyclotomic polynomial).
    """

    def __init__(self, ell: int, conductor: int, factor: Optional[tuple[int, ...]] = None):
        self.ell = ell
        self.conductor = conductor
        e_prime = conductor
        ell_part = 1
        while e_prime % ell == 0:
            e_prime //= ell
            ell_part *= ell
        self.conductor_prime = e_prime
        self.conductor_ell = ell_part
        phi_mod = tuple(c % ell for c in cyclotomic_poly(e_prime))
        if factor is None:
            factor = self._least_irreducible_factor(phi_mod)
        else:
            factor = tuple(c % ell for c in factor)
            if not _gf_poly_divides(factor, phi_mod, ell):
                raise ValueError("factor does not divide the cyclotomic polynomial mod ell")
        self.factor = factor
        self.degree = len(factor) - 1

    def _least_irreducible_factor(self, phi_mod: tuple[int, ...]) -> tuple[int, ...]:
        if self.conductor_prime == 1:
            return (-1 % self.ell, 1)  # x - 1
        d = 1
        while pow(self.ell, d, self.conductor_prime) != 1 % self.conductor_prime:
            d += 1
        # scan monic degree-d polynomials in lexicographic coefficient order
        p = self.ell
        for code in range(p ** d):
            coeffs = []
            c = code
            for _ in range(d):
                coeffs.append(c % p)
                c //= p
            cand = tuple(coeffs) + (1,)
            if _gf_poly_divides(cand, phi_mod, p):
                if d == 1 or self._is_irreducible(cand):
                    return cand
        raise AssertionError("no factor found")

    def _is_irreducible(self, f: tuple[int, ...]) -> bool:
        # x^(p^d) == x mod f and x^(p^(d/r)) != x for prime r | d
        p, d = self.ell, len(f) - 1

        def frobenius_iterate(e: int) -> tuple[int, ...]:
            r: tuple[int, ...] = (0, 1)
            for _ in range(e):
                result: tuple[int, ...] = (1,)
                base = r
                n = p
                while n:
                    if n & 1:
                        result = _gf_poly_mod(_gf_poly_mul(result, base, p), f, p)
                    base = _gf_poly_mod(_gf_poly_mul(base, base, p), f, p)
                    n >>= 1
                r = result
            return r

        if frobenius_iterate(d) != (0, 1):
            return False
        for r in prime_factors(d):
            if frobenius_iterate(d // r) == (0, 1):
                return False
        return True

    # elements are coefficient tuples over F_ell, length <= degree

    def zero(self) -> tuple[int, ...]:
        return ()

    def one(self) -> tuple[int, ...]:
        return (1,)

    def from_int(self, n: int) -> tuple[int, ...]:
        n %= self.ell
        return (n,) if n else ()

    def add(self, a, b):
        out = [0] * max(len(a), len(b))
        for i, x in enumerate(a):
            out[i] = x
        for i, y in enumerate(b):
            out[i] = (out[i] + y) % self.ell
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def neg(self, a):
        return tuple((-x) % self.ell for x in a)

    def mul(self, a, b):
        return _gf_poly_mod(_gf_poly_mul(a, b, self.ell), self.factor, self.ell)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in residue field")
        # extended Euclid in F_ell[x]
        p = self.ell
        r0, r1 = list(self.factor), list(a)
        s0, s1 = [], [1]
        while r1:
            q, r = self._divmod(r0, r1)
            s = self._sub(s0, _gf_poly_mul(tuple(q), tuple(s1), p))
            r0, r1, s0, s1 = r1, r, s1, s
        lead_inv = pow(r0[-1], -1, p) if len(r0) == 1 else None
        if lead_inv is None:
            raise ZeroDivisionError("element not invertible")
        return _gf_poly_mod([c * lead_inv % p for c in s0], self.factor, p)

    def _divmod(self, num, den):
        p = self.ell
        num = [c % p for c in num]
        q = [0] * max(0, len(num) - len(den) + 1)
        inv_lead = pow(den[-1], -1, p)
        for i in range(len(num) - len(den), -1, -1):
            c = num[i + len(den) - 1] * inv_lead % p
            if c:
                q[i] = c
                for j, d in enumerate(den):
                    num[i + j] = (num[i + j] - c * d) % p
        while num and num[-1] == 0:
            num.pop()
        while q and q[-1] == 0:
            q.pop()
        return q, num

    def _sub(self, a, b):
        out = [0] * max(len(a), len(b))
        for i, x in enumerate(a):
            out[i] = x % self.ell
        for i, y in enumerate(b):
            out[i] = (out[i] - y) % self.ell
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def reduce(self, x: Cyc) -> tuple[int, ...]:
        """Residue of an ell-local element: ring homomorphism to F_ell[x]/(g)."""
        y = x.embed(self.conductor) if x.conductor != self.conductor else x
        if y.den % self.ell == 0:
            raise EllLocalError("element is not ell-local; no residue")
        den_inv = pow(y.den % self.ell, -1, self.ell)
        # zeta_E = zeta_{ell^k} * zeta_{E'} (CRT on exponents); ell-part maps to 1
        e_p = self.conductor_prime
        acc = self.zero()
        for i, c in enumerate(y.num):
            if c:
                # exponent i of zeta_E: prime-to-ell component exponent i mod E'
                term_exp = i % e_p if e_p > 1 else 0
                xpow = self._x_power(term_exp)
                acc = self.add(acc, tuple(v * (c % self.ell) % self.ell for v in xpow))
        return self.mul(acc, self.from_int(den_inv))

    def _x_power(self, e: int) -> tuple[int, ...]:
        cache = getattr(self, "_xp_cache", None)
        if cache is None:
            cache = {}
            self._xp_cache = cache
        if e in cache:
            return cache[e]
        value = self._x_power_uncached(e)
        cache[e] = value
        return value

    def _x_power_uncached(self, e: int) -> tuple[int, ...]:
        # (class of zeta_{E'})^e = x^e mod g, adjusted because zeta_E^i has
        # ell-part zeta_{ell^k}^i -> 1 and prime part zeta_{E'}^{i * inverse(ell^k mod E')}
        if self.conductor_prime == 1:
            return self.one()
        shift = pow(self.conductor_ell, -1, self.conductor_prime)
        exp = (e * shift) % self.conductor_prime
        base = (0, 1)
        result = self.one()
        n = exp
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result
