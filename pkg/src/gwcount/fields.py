"""Exact fields of characteristic != 2: descriptors, elements, square classes.

Supported kinds: the rationals Q, finite fields F(p^m) with p an odd prime,
a real closed field R and its quadratic closure C, the p-adic fields Qp(p)
for odd p, and simple separable extensions of any of these.  R and Qp
elements are modelled by nonzero rationals (dense subfields); this is exact
for every square-class, norm, trace, signature and Hilbert-symbol
computation done here.  C elements are Gaussian rationals.

Every value is immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    FieldMismatch,
    InseparableModulus,
    MathRejection,
    ReducibleModulus,
    Unsupported,
    ZeroClass,
)


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _rational_is_square(q):
    """True iff the rational q is the square of a rational."""
    if q < 0:
        return False
    if q == 0:
        return True
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def _rational_sqrt(q):
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


def squarefree_part(n):
    """Squarefree part of a nonzero integer, with sign."""
    from sympy import factorint

    if n == 0:
        raise ZeroClass("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def odd_primes_dividing(q):
    """Odd primes dividing the numerator or denominator of a rational."""
    from sympy import factorint

    out = set()
    for n in (q.numerator, q.denominator):
        for p in factorint(abs(n)):
            if p != 2:
                out.add(p)
    return out


def padic_valuation(q, p):
    if q == 0:
        raise ZeroClass("valuation of 0")
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def legendre(a, p):
    """Legendre symbol (a/p) in {-1, 0, 1} for odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def legendre_fraction(q, p):
    """Legendre symbol of a p-unit rational."""
    return legendre(q.numerator % p, p) * legendre(q.denominator % p, p)


# ---------------------------------------------------------------------------
# descriptors


class FieldDescriptor:
    """Base class for field descriptors.  Structural equality, hashable."""

    base = None  # immediate base field, or None for absolute fields
    degree = 1  # degree over the immediate base

    @property
    def characteristic(self):
        return 0

    @property
    def absolute_degree(self):
        d, f = 1, self
        while f.base is not None:
            d *= f.degree
            f = f.base
        return d

    def tower(self):
        """Chain [self, base, base of base, ...] down to the absolute field."""
        out, f = [self], self
        while f.base is not None:
            f = f.base
            out.append(f)
        return out

    def element(self, value):
        return coerce(value, self)

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def __str__(self):
        return self._literal()


@dataclass(frozen=True)
class Rationals(FieldDescriptor):
    def _literal(self):
        return "Q"


@dataclass(frozen=True)
class RealClosed(FieldDescriptor):
    def _literal(self):
        return "R"


@dataclass(frozen=True)
class ComplexClosed(FieldDescriptor):
    degree = 2

    @property
    def base(self):
        return RR

    def _literal(self):
        return "C"


@dataclass(frozen=True)
class PAdic(FieldDescriptor):
    p: int

    def __post_init__(self):
        if self.p == 2:
            raise Unsupported("Qp(2) is excluded: residue characteristic 2")
        if not _is_prime(self.p):
            raise MathRejection(f"{self.p} is not prime")

    def _literal(self):
        return f"Qp({self.p})"


@dataclass(frozen=True)
class FiniteField(FieldDescriptor):
    p: int
    m: int = 1

    def __post_init__(self):
        if self.p == 2:
            raise Unsupported("characteristic 2 fields are excluded")
        if not _is_prime(self.p):
            raise MathRejection(f"{self.p} is not prime")
        if self.m < 1:
            raise MathRejection("extension degree must be positive")

    @property
    def characteristic(self):
        return self.p

    @property
    def degree(self):
        return self.m

    @property
    def base(self):
        return FiniteField(self.p) if self.m > 1 else None

    @property
    def order(self):
        return self.p ** self.m

    def modulus(self):
        """Monic modulus of F(p^m) over F(p): the lexicographically least
        irreducible choice, so the construction is reproducible."""
        return _ff_modulus(self.p, self.m)

    def _literal(self):
        return f"F({self.p})" if self.m == 1 else f"F({self.p}^{self.m})"


@dataclass(frozen=True)
class SimpleExtension(FieldDescriptor):
    base_field: FieldDescriptor
    min_poly: tuple  # monic: coefficients c0..c_{n-1}, elements of base_field

    @property
    def base(self):
        return self.base_field

    @property
    def characteristic(self):
        return self.base_field.characteristic

    @property
    def degree(self):
        return len(self.min_poly)

    def generator(self):
        n = self.degree
        payload = tuple(
            self.base_field.one() if i == 1 else self.base_field.zero() for i in range(n)
        )
        return FieldElement(self, payload)

    def _literal(self):
        coeffs = [c for c in self.min_poly] + [self.base_field.one()]
        return f"{self.base_field._literal()}[x]/({format_poly(coeffs)})"


QQ = Rationals()
RR = RealClosed()
CC = ComplexClosed()


# ---------------------------------------------------------------------------
# elements


class FieldElement:
    __slots__ = ("owner", "payload")

    def __init__(self, owner, payload):
        self.owner = owner
        self.payload = payload

    # -- predicates

    @property
    def is_zero(self):
        if isinstance(self.owner, (Rationals, RealClosed, PAdic)):
            return self.payload == 0
        return all(_coeff_is_zero(c) for c in self.payload)

    # -- arithmetic

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.owner != self.owner:
                raise FieldMismatch(
                    f"element of {other.owner} used in {self.owner}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return coerce(other, self.owner)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.owner
        if isinstance(F, (Rationals, RealClosed, PAdic)):
            return FieldElement(F, self.payload + other.payload)
        if isinstance(F, ComplexClosed):
            a, b = self.payload
            c, d = other.payload
            return FieldElement(F, (a + c, b + d))
        if isinstance(F, FiniteField):
            p = F.p
            return FieldElement(
                F, tuple((x + y) % p for x, y in zip(self.payload, other.payload))
            )
        return FieldElement(
            F, tuple(x + y for x, y in zip(self.payload, other.payload))
        )

    __radd__ = __add__

    def __neg__(self):
        F = self.owner
        if isinstance(F, (Rationals, RealClosed, PAdic)):
            return FieldElement(F, -self.payload)
        if isinstance(F, ComplexClosed):
            a, b = self.payload
            return FieldElement(F, (-a, -b))
        if isinstance(F, FiniteField):
            return FieldElement(F, tuple((-x) % F.p for x in self.payload))
        return FieldElement(F, tuple(-x for x in self.payload))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.owner
        if isinstance(F, (Rationals, RealClosed, PAdic)):
            return FieldElement(F, self.payload * other.payload)
        if isinstance(F, ComplexClosed):
            a, b = self.payload
            c, d = other.payload
            return FieldElement(F, (a * c - b * d, a * d + b * c))
        if isinstance(F, FiniteField):
            prod = _ffpoly_mulmod(self.payload, other.payload, F.modulus(), F.p)
            return FieldElement(F, prod)
        prod = _poly_mulmod(
            list(self.payload), list(other.payload), _full_modulus(F), F.base_field
        )
        return FieldElement(F, tuple(prod))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError(f"division by zero in {self.owner}")
        F = self.owner
        if isinstance(F, (Rationals, RealClosed, PAdic)):
            return FieldElement(F, 1 / self.payload)
        if isinstance(F, ComplexClosed):
            a, b = self.payload
            n = a * a + b * b
            return FieldElement(F, (a / n, -b / n))
        if isinstance(F, FiniteField):
            # x^(q-2) = x^{-1}
            return self ** (F.order - 2)
        g, u, _ = _poly_ext_gcd(list(self.payload), _full_modulus(F), F.base_field)
        if len(g) != 1:
            raise ZeroDivisionError("modulus is not irreducible")  # unreachable
        c = g[0].inverse()
        inv = _poly_mod([x * c for x in u], _full_modulus(F), F.base_field)
        return FieldElement(F, _pad(inv, F.degree, F.base_field))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.owner.one()
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    # -- structure

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = coerce(other, self.owner)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.owner == other.owner and self.payload == other.payload

    def __hash__(self):
        return hash((self.owner, self.payload))

    def __repr__(self):
        return f"{format_element(self)} : {self.owner}"

    def __str__(self):
        return format_element(self)


def _coeff_is_zero(c):
    return c == 0 if isinstance(c, int) else c.is_zero


def coerce(value, F):
    """Coerce an int, Fraction or lower-tower element into the field F."""
    if isinstance(value, FieldElement):
        if value.owner == F:
            return value
        return embed(value, F)
    if isinstance(value, (int, Fraction)):
        q = Fraction(value)
        if isinstance(F, (Rationals, RealClosed, PAdic)):
            return FieldElement(F, q)
        if isinstance(F, ComplexClosed):
            return FieldElement(F, (q, Fraction(0)))
        if isinstance(F, FiniteField):
            if q.denominator % F.p == 0:
                raise ZeroDivisionError(f"denominator of {q} vanishes in {F}")
            a = q.numerator * pow(q.denominator, -1, F.p) % F.p
            return FieldElement(F, (a,) + (0,) * (F.m - 1))
        lo = coerce(q, F.base_field)
        payload = (lo,) + tuple(F.base_field.zero() for _ in range(F.degree - 1))
        return FieldElement(F, payload)
    raise TypeError(f"cannot coerce {value!r} into {F}")


def embed(x, E):
    """Embed x into the extension E, whose tower must pass through x.owner."""
    if x.owner == E:
        return x
    if E.base is None:
        raise FieldMismatch(f"{x.owner} does not embed in {E}")
    lower = embed(x, E.base)
    if isinstance(E, ComplexClosed):
        return FieldElement(E, (lower.payload, Fraction(0)))
    if isinstance(E, FiniteField):
        return FieldElement(E, lower.payload + (0,) * (E.m - 1))
    payload = (lower,) + tuple(E.base_field.zero() for _ in range(E.degree - 1))
    return FieldElement(E, payload)


def relative_degree(E, K):
    d, f = 1, E
    while f != K:
        if f.base is None:
            raise FieldMismatch(f"{K} is not in the tower of {E}")
        d *= f.degree
        f = f.base
    return d


# ---------------------------------------------------------------------------
# polynomials over F(p) as int tuples (used for finite-field moduli)


def _ffpoly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _ffpoly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ffpoly_trim(out)


def _ffpoly_rem(a, b, p):
    # b monic
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    while len(_ffpoly_trim(a)) - 1 >= db:
        a = list(_ffpoly_trim(a))
        shift = len(a) - 1 - db
        f = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
    return _ffpoly_trim(a)


def _ffpoly_gcd(a, b, p):
    a, b = _ffpoly_trim(a), _ffpoly_trim(b)
    while b:
        a, b = b, _ffpoly_rem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = tuple(c * inv % p for c in a)
    return a


def _ffpoly_powmod(a, n, mod, p):
    out = (1,)
    a = _ffpoly_rem(a, mod, p)
    while n:
        if n & 1:
            out = _ffpoly_rem(_ffpoly_mul(out, a, p), mod, p)
        a = _ffpoly_rem(_ffpoly_mul(a, a, p), mod, p)
        n >>= 1
    return out


@lru_cache(maxsize=None)
def _ff_modulus(p, m):
    """Lexicographically least monic irreducible of degree m over F(p)."""
    if m == 1:
        return (0, 1)
    for k in range(p ** m):
        digits = []
        kk = k
        for _ in range(m):
            digits.append(kk % p)
            kk //= p
        # counting order on k = lex order on (c_{m-1}, ..., c_0)
        f = tuple(digits) + (1,)
        if _ffpoly_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")


def _ffpoly_irreducible(f, p):
    """Rabin test: monic f of degree n is irreducible over F(p) iff
    x^(p^n) = x mod f and gcd(x^(p^(n/t)) - x, f) = 1 for primes t | n."""
    n = len(f) - 1
    if n == 1:
        return True
    x = (0, 1)
    h = _ffpoly_powmod(x, p ** n, f, p)
    if _ffpoly_sub(h, x, p) != ():
        return False
    for t in {t for t in range(2, n + 1) if n % t == 0 and _is_prime(t)}:
        h = _ffpoly_powmod(x, p ** (n // t), f, p)
        g = _ffpoly_gcd(_ffpoly_sub(h, x, p), f, p)
        if len(g) > 1:
            return False
    return True


def _ffpoly_sub(a, b, p):
    n = max(len(a), len(b))
    return _ffpoly_trim(
        tuple(((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n))
    )


def _ffpoly_mulmod(a, b, modulus, p):
    prod = _ffpoly_rem(_ffpoly_mul(a, b, p), modulus, p)
    m = len(modulus) - 1
    return tuple(prod[i] if i < len(prod) else 0 for i in range(m))


# ---------------------------------------------------------------------------
# generic polynomials over a field (lists of FieldElement, low to high)


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1].is_zero:
        i -= 1
    return c[:i]


def _poly_add(a, b, F):
    n = max(len(a), len(b))
    z = F.zero()
    return _poly_trim([(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)])


def _poly_sub(a, b, F):
    return _poly_add(a, [-x for x in b], F)


def _poly_mul(a, b, F):
    if not a or not b:
        return []
    out = [F.zero() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if not x.is_zero:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _poly_trim(out)


def _poly_divmod(a, b, F):
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = b[-1].inverse()
    q = [F.zero() for _ in range(max(0, len(a) - len(b) + 1))]
    while len(a) >= len(b):
        f = a[-1] * inv_lead
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - f * c
        a = _poly_trim(a)
    return _poly_trim(q), a


def _poly_mod(a, b, F):
    return _poly_divmod(a, b, F)[1]


def _poly_mulmod(a, b, modulus, F):
    prod = _poly_mod(_poly_mul(a, b, F), modulus, F)
    n = len(modulus) - 1
    z = F.zero()
    return [prod[i] if i < len(prod) else z for i in range(n)]


def _poly_gcd(a, b, F):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, F)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _poly_ext_gcd(a, b, F):
    """Monic gcd g with u*a + v*b = g."""
    one, zero = F.one(), F.zero()
    r0, r1 = _poly_trim(list(a)), _poly_trim(list(b))
    u0, u1 = [one], []
    v0, v1 = [], [one]
    while r1:
        q, r = _poly_divmod(r0, r1, F)
        r0, r1 = r1, r
        u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1, F), F)
        v0, v1 = v1, _poly_sub(v0, _poly_mul(q, v1, F), F)
    if r0:
        inv = r0[-1].inverse()
        r0 = [c * inv for c in r0]
        u0 = [c * inv for c in u0]
        v0 = [c * inv for c in v0]
    return r0, u0, v0


def _poly_derivative(a, F):
    return _poly_trim([coerce(i, F) * a[i] for i in range(1, len(a))])


def _pad(coeffs, n, F):
    z = F.zero()
    return tuple(coeffs[i] if i < len(coeffs) else z for i in range(n))


def _full_modulus(E):
    """Modulus of a SimpleExtension including the leading 1."""
    return list(E.min_poly) + [E.base_field.one()]


def format_poly(coeffs, var="x"):
    """Format a polynomial given low-to-high coefficients (FieldElements,
    ints or Fractions) the way the literal grammar reads them: x^2-5."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if isinstance(c, FieldElement):
            if c.is_zero:
                continue
            s = format_element(c)
        else:
            if c == 0:
                continue
            s = str(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        if i == 0:
            term = mag
        else:
            xo = var if i == 1 else f"{var}^{i}"
            term = xo if mag == "1" else f"{mag}*{xo}" if not mag.isdigit() and "/" not in mag else f"{mag}{xo}"
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("-" if neg else "+") + term)
    return "".join(parts) if parts else "0"


def format_element(x):
    F = x.owner
    if isinstance(F, (Rationals, RealClosed, PAdic)):
        return str(x.payload)
    if isinstance(F, ComplexClosed):
        a, b = x.payload
        if b == 0:
            return str(a)
        bi = "i" if b == 1 else ("-i" if b == -1 else f"{b}i")
        if a == 0:
            return bi
        return f"{a}+{bi}" if not bi.startswith("-") else f"{a}{bi}"
    if isinstance(F, FiniteField):
        return format_poly(list(x.payload))
    return format_poly(list(x.payload))


# ---------------------------------------------------------------------------
# building extensions


def make_extension(base, min_poly):
    """Build the simple extension base[x]/(min_poly).

    min_poly: low-to-high coefficients (ints, Fractions or base elements),
    monic, of degree >= 2.  Rejects reducible input with a witness factor
    and inseparable input with a gcd certificate.
    """
    coeffs = [coerce(c, base) for c in min_poly]
    coeffs = _poly_trim(coeffs)
    n = len(coeffs) - 1
    if n < 1:
        raise MathRejection("modulus must have degree at least 1")
    if coeffs[-1] != base.one():
        raise MathRejection("modulus must be monic")
    if n == 1:
        raise MathRejection(
            "degree-1 modulus gives a trivial extension; use the base field"
        )

    d = _poly_derivative(coeffs, base)
    if not d:
        raise InseparableModulus(
            "derivative vanishes identically", certificate=tuple(coeffs)
        )
    g = _poly_gcd(coeffs, d, base)
    if len(g) > 1:
        if len(g) == len(coeffs):
            raise InseparableModulus("gcd(f, f') = f", certificate=tuple(g))
        raise ReducibleModulus(
            f"repeated factor {format_poly(g)}", witness=tuple(g)
        )

    witness = _reducibility_witness(coeffs, base)
    if witness is not None:
        w, msg = witness
        raise ReducibleModulus(msg, witness=w)
    return SimpleExtension(base, tuple(coeffs[:-1]))


def _reducibility_witness(coeffs, base):
    """None if irreducible; else (witness factor or None, message)."""
    n = len(coeffs) - 1
    if base.characteristic > 0:
        return _finite_reducibility_witness(coeffs, base)
    if isinstance(base, Rationals):
        if n == 2:
            disc = coeffs[1].payload ** 2 - 4 * coeffs[0].payload
            if _rational_is_square(disc):
                root = (-coeffs[1].payload + _rational_sqrt(disc)) / 2
                w = (base.element(-root), base.one())
                return w, f"root {root}; factor {format_poly(list(w))}"
            return None
        return _sympy_reducibility_witness(coeffs, base)
    if isinstance(base, RealClosed):
        if n == 2:
            disc = coeffs[1].payload ** 2 - 4 * coeffs[0].payload
            if disc >= 0:
                return None, f"discriminant {disc} >= 0 has real roots"
            return None
        return None, f"degree {n} > 2 over a real closed field is reducible"
    if isinstance(base, ComplexClosed):
        return None, "C is quadratically closed; no proper extensions"
    if isinstance(base, PAdic):
        if n == 2:
            disc = coeffs[1] * coeffs[1] - 4 * coeffs[0]
            if is_square(disc):
                return None, f"discriminant {disc} is a square in {base}"
            return None
        raise Unsupported(
            f"irreducibility of degree {n} over {base} is not supported"
        )
    # tower base: quadratic steps only, decided by squareness of the
    # discriminant where the base supports a square test
    if n == 2:
        disc = coeffs[1] * coeffs[1] - 4 * coeffs[0]
        if disc.is_zero:
            raise AssertionError("separable quadratic has nonzero discriminant")
        if is_square(disc):
            sq = _sqrt_in_field(disc)
            if sq is not None:
                root = (sq - coeffs[1]) / 2
                w = (-root, base.one())
                return w, f"factor {format_poly(list(w))}"
            return None, "discriminant is a square in the base"
        return None
    raise Unsupported(
        f"irreducibility of degree {n} over {base} is not supported"
    )


def _finite_reducibility_witness(coeffs, base):
    # generic Rabin test over any finite kind via powmod of x
    F = base
    q = F.characteristic ** F.absolute_degree
    n = len(coeffs) - 1
    x = [F.zero(), F.one()]
    h = _poly_powmod_generic(x, q ** n, coeffs, F)
    if _poly_sub(h, x, F):
        return _finite_witness_factor(coeffs, F), "reducible over finite field"
    for t in {t for t in range(2, n + 1) if n % t == 0 and _is_prime(t)}:
        h = _poly_powmod_generic(x, q ** (n // t), coeffs, F)
        g = _poly_gcd(_poly_sub(h, x, F), coeffs, F)
        if len(g) > 1:
            return tuple(g), f"factor {format_poly(g)}"
    return None


def _poly_powmod_generic(a, e, mod, F):
    out = [F.one()]
    a = _poly_mod(list(a), mod, F)
    while e:
        if e & 1:
            out = _poly_mod(_poly_mul(out, a, F), mod, F)
        a = _poly_mod(_poly_mul(a, a, F), mod, F)
        e >>= 1
    return out


def _finite_witness_factor(coeffs, F):
    # root search, then trial factors of low degree; fields here are small
    for a in iter_elements(F):
        val = _poly_eval(coeffs, a, F)
        if val.is_zero:
            return (-a, F.one())
    n = len(coeffs) - 1
    elems = list(iter_elements(F))
    for d in range(2, n // 2 + 1):
        for combo in itertools.product(elems, repeat=d):
            cand = list(combo) + [F.one()]
            _, r = _poly_divmod(list(coeffs), cand, F)
            if not r:
                return tuple(cand)
    return None


def _poly_eval(coeffs, a, F):
    out = F.zero()
    for c in reversed(coeffs):
        out = out * a + c
    return out


def _sympy_reducibility_witness(coeffs, base):
    from sympy import Poly, Symbol

    xs = Symbol("x")
    sp = Poly([c.payload for c in reversed(coeffs)], xs, domain="QQ")
    _, factors = sp.factor_list()
    if len(factors) == 1 and factors[0][1] == 1:
        return None
    f0 = factors[0][0]
    w = tuple(base.element(Fraction(c)) for c in reversed(f0.all_coeffs()))
    return w, f"factor {format_poly(list(w))}"


def iter_elements(F):
    """Iterate the elements of a finite field kind in a fixed order."""
    if isinstance(F, FiniteField):
        for k in range(F.order):
            digits = []
            kk = k
            for _ in range(F.m):
                digits.append(kk % F.p)
                kk //= F.p
            yield FieldElement(F, tuple(digits))
        return
    if isinstance(F, SimpleExtension) and F.characteristic > 0:
        base_elems = list(iter_elements(F.base_field))
        for combo in itertools.product(base_elems, repeat=F.degree):
            yield FieldElement(F, tuple(combo))
        return
    raise Unsupported(f"{F} is not a finite field")


# ---------------------------------------------------------------------------
# norms and traces


def multiplication_matrix(x):
    """Matrix of y -> x*y over the immediate base, in the power basis."""
    F = x.owner
    if F.base is None:
        return [[x]]
    if isinstance(F, ComplexClosed):
        a, b = x.payload
        ra, rb = FieldElement(RR, a), FieldElement(RR, b)
        return [[ra, -rb], [rb, ra]]
    if isinstance(F, FiniteField):
        B = F.base
        cols = []
        g = FieldElement(F, (0, 1) + (0,) * (F.m - 2))
        cur = x
        for _ in range(F.m):
            cols.append([FieldElement(B, (c,)) for c in cur.payload])
            cur = cur * g
        return [[cols[j][i] for j in range(F.m)] for i in range(F.m)]
    cols = []
    g = F.generator()
    cur = x
    for _ in range(F.degree):
        cols.append(list(cur.payload))
        cur = cur * g
    return [[cols[j][i] for j in range(F.degree)] for i in range(F.degree)]


def norm(x):
    """Norm to the immediate base: det of the multiplication matrix."""
    F = x.owner
    if F.base is None:
        raise FieldMismatch(f"{F} has no base field to take a norm to")
    from .linalg import mat_det

    return mat_det(multiplication_matrix(x), F.base)


def trace(x):
    """Trace to the immediate base: trace of the multiplication matrix."""
    F = x.owner
    if F.base is None:
        raise FieldMismatch(f"{F} has no base field to take a trace to")
    m = multiplication_matrix(x)
    out = m[0][0]
    for i in range(1, len(m)):
        out = out + m[i][i]
    return out


def norm_to(x, K):
    while x.owner != K:
        x = norm(x)
    return x


def trace_to(x, K):
    while x.owner != K:
        x = trace(x)
    return x


# ---------------------------------------------------------------------------
# square classes


def _quadratic_sqrt_coords(E):
    """For a quadratic extension of Q (or a tower step), the pair (D, to_AB)
    where to_AB maps an element to (A, B) with value A + B*sqrt(D)."""
    b, = (E.min_poly[1],)
    c = E.min_poly[0]
    D = b * b - coerce(4, E.base_field) * c

    def to_ab(x):
        a0, a1 = x.payload
        two = coerce(2, E.base_field)
        return a0 - a1 * b / two, a1 / two

    return D, to_ab


def is_square(x):
    """True iff x is a nonzero square in its field."""
    if not isinstance(x, FieldElement):
        raise TypeError("is_square expects a FieldElement")
    if x.is_zero:
        raise ZeroClass("0 has no square class")
    F = x.owner
    if isinstance(F, Rationals):
        return _rational_is_square(x.payload)
    if isinstance(F, RealClosed):
        return x.payload > 0
    if isinstance(F, ComplexClosed):
        return True
    if isinstance(F, PAdic):
        v = padic_valuation(x.payload, F.p)
        if v % 2:
            return False
        u = x.payload / Fraction(F.p) ** v
        return legendre_fraction(u, F.p) == 1
    if F.characteristic > 0:
        q = F.characteristic ** F.absolute_degree
        return x ** ((q - 1) // 2) == F.one()
    if isinstance(F, SimpleExtension):
        tower = F.tower()
        if isinstance(tower[-1], RealClosed):
            # quadratically closed model of C
            return True
        if isinstance(F.base_field, Rationals) and F.degree == 2:
            return _is_square_quadratic_over_Q(x)
        raise Unsupported(f"square test in {F} is not supported")
    raise Unsupported(f"square test in {F} is not supported")


def _is_square_quadratic_over_Q(x):
    E = x.owner
    D, to_ab = _quadratic_sqrt_coords(E)
    d = D.payload
    A, B = to_ab(x)
    a, b = A.payload, B.payload
    if b == 0:
        return _rational_is_square(a) or _rational_is_square(a / d)
    n2 = a * a - b * b * d
    if not _rational_is_square(n2):
        return False
    n = _rational_sqrt(n2)
    for s2 in ((a + n) / 2, (a - n) / 2):
        if s2 != 0 and _rational_is_square(s2):
            return True
    return False


def _sqrt_in_field(x):
    """An explicit square root when one is cheap to produce, else None."""
    F = x.owner
    if isinstance(F, Rationals) and _rational_is_square(x.payload):
        return F.element(_rational_sqrt(x.payload))
    if F.characteristic > 0:
        q = F.characteristic ** F.absolute_degree
        if q % 4 == 3:
            r = x ** ((q + 1) // 4)
            return r if r * r == x else None
        for a in iter_elements(F):
            if a * a == x:
                return a
        return None
    return None


class SquareClass:
    """An element of F*/(F*)^2, held by a representative.

    Representatives are canonical for Q, R, C, Qp and finite fields.  For a
    quadratic extension Q(sqrt d) the representative is only normalized up
    to rational square factors, and equality multiplies and tests
    squareness instead.
    """

    __slots__ = ("owner", "rep")

    def __init__(self, owner, rep):
        self.owner = owner
        self.rep = rep

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        if self.owner != other.owner:
            return False
        if _has_canonical_classes(self.owner):
            return self.rep == other.rep
        return is_square(self.rep * other.rep)

    def __hash__(self):
        if _has_canonical_classes(self.owner):
            return hash((self.owner, self.rep))
        return hash(self.owner)

    def __mul__(self, other):
        if self.owner != other.owner:
            raise FieldMismatch("square classes over different fields")
        return square_class(self.rep * other.rep)

    def __neg__(self):
        return square_class(-self.rep)

    @property
    def is_trivial(self):
        return is_square(self.rep)

    def sort_key(self):
        return _payload_key(self.rep)

    def __repr__(self):
        return f"<{format_element(self.rep)}> mod squares over {self.owner}"

    def __str__(self):
        return f"<{format_element(self.rep)}>"


def _payload_key(x):
    p = x.payload
    if isinstance(p, Fraction):
        return (0, p.numerator, p.denominator)
    if isinstance(p, tuple) and p and isinstance(p[0], Fraction):
        return (1,) + tuple(v for q in p for v in (q.numerator, q.denominator))
    if isinstance(p, tuple) and p and isinstance(p[0], int):
        return (2,) + p
    return (3, str(p))


def _has_canonical_classes(F):
    if isinstance(F, (Rationals, RealClosed, ComplexClosed, PAdic, FiniteField)):
        return True
    if F.characteristic > 0:
        return True
    if isinstance(F, SimpleExtension) and isinstance(F.tower()[-1], RealClosed):
        return True
    return False


@lru_cache(maxsize=None)
def least_nonresidue(F):
    """First nonsquare in the fixed element order of a finite field."""
    for a in iter_elements(F):
        if not a.is_zero and not is_square(a):
            return a
    raise AssertionError("odd finite field has a nonresidue")


def square_class(x):
    """Canonical square class of a nonzero element."""
    if x.is_zero:
        raise ZeroClass(f"0 in {x.owner} has no square class")
    F = x.owner
    if isinstance(F, Rationals):
        n = x.payload.numerator * x.payload.denominator
        return SquareClass(F, F.element(squarefree_part(n)))
    if isinstance(F, RealClosed):
        return SquareClass(F, F.element(1 if x.payload > 0 else -1))
    if isinstance(F, ComplexClosed):
        return SquareClass(F, F.one())
    if isinstance(F, PAdic):
        p = F.p
        v = padic_valuation(x.payload, p) % 2
        u = x.payload / Fraction(p) ** padic_valuation(x.payload, p)
        unit_sq = legendre_fraction(u, p) == 1
        rep = 1 if unit_sq else least_nonresidue(FiniteField(p)).payload[0]
        if v:
            rep *= p
        return SquareClass(F, F.element(rep))
    if F.characteristic > 0:
        if is_square(x):
            return SquareClass(F, F.one())
        return SquareClass(F, least_nonresidue(F))
    if isinstance(F, SimpleExtension):
        if isinstance(F.tower()[-1], RealClosed):
            return SquareClass(F, F.one())
        if isinstance(F.base_field, Rationals) and F.degree == 2:
            if _is_square_quadratic_over_Q(x):
                return SquareClass(F, F.one())
            return SquareClass(F, _strip_rational_squares(x))
        raise Unsupported(f"square classes in {F} are not canonical")
    raise Unsupported(f"square classes in {F} are not supported")


def _strip_rational_squares(x):
    """Scale by the square of a rational to get integer, square-reduced
    power-basis coordinates.  Cosmetic: any representative is valid."""
    E = x.owner
    a0, a1 = (c.payload for c in x.payload)
    lcm = math.lcm(a0.denominator, a1.denominator)
    n0, n1 = int(a0 * lcm), int(a1 * lcm)
    g = math.gcd(abs(n0), abs(n1))
    if g:
        s = 1
        k = 2
        while k * k <= g:
            while g % (k * k) == 0:
                g //= k * k
                s *= k
            k += 1
        if s > 1:
            n0 //= s * s
            n1 //= s * s
    return FieldElement(E, (E.base_field.element(n0), E.base_field.element(n1)))


def real_sign(x, conjugate=False):
    """Exact sign of an element of Q, R or a real quadratic extension of Q
    under the chosen embedding (conjugate flips sqrt(d) -> -sqrt(d))."""
    F = x.owner
    if isinstance(F, (Rationals, RealClosed)):
        if x.payload == 0:
            return 0
        return 1 if x.payload > 0 else -1
    if isinstance(F, SimpleExtension) and isinstance(F.base_field, Rationals) and F.degree == 2:
        D, to_ab = _quadratic_sqrt_coords(F)
        d = D.payload
        if d < 0:
            raise Unsupported(f"{F} has no real embedding")
        A, B = to_ab(x)
        a, b = A.payload, (-B.payload if conjugate else B.payload)
        if b == 0:
            return 0 if a == 0 else (1 if a > 0 else -1)
        if a == 0:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 and b^2 d
        big = a * a - b * b * d
        if big == 0:
            return 0
        lead = a if big > 0 else b
        return 1 if lead > 0 else -1
    raise Unsupported(f"no real sign for elements of {F}")
