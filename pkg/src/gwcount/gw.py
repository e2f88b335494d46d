"""Arithmetic in GW(k): formal diagonal forms, classifying invariants, and
a terminating equality decision for Q, R, C, finite fields and Qp.

Conventions (documented so every oracle agrees):
  * discriminant = plain product of the diagonal entries, unsigned;
  * Hasse invariant = prod_{i<j} (a_i, a_j)_v over the diagonal entries;
  * equality over Q compares rank, signature, discriminant and the Hasse
    invariant at the real place, 2 and every odd prime dividing a diagonal
    entry; complete by Hasse-Minkowski plus Witt cancellation.
Virtual forms are compared after adding rank-1 forms to both sides until
both are honest and of equal rank (valid by Witt cancellation, char != 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatch, MathRejection, Unsupported, ZeroClass
from .fields import (
    ComplexClosed,
    FieldElement,
    FiniteField,
    FieldDescriptor,
    PAdic,
    Rationals,
    RealClosed,
    SimpleExtension,
    SquareClass,
    coerce,
    legendre_fraction,
    odd_primes_dividing,
    padic_valuation,
    real_sign,
    square_class,
)


@dataclass(frozen=True)
class RealPlace:
    """The real place; conjugate selects the second embedding of a real
    quadratic field."""

    conjugate: bool = False


@dataclass(frozen=True)
class FinitePlace:
    p: int


@dataclass(frozen=True)
class LocalPlace:
    """The unique place of the p-adic field carrying the form."""


class GWElement:
    """Formal integer combination of rank-1 classes <a> over a fixed field.

    Structural operators (+, -, *) never decide equality; use .equals for
    equality in GW(k).  Terms are kept merged with nonzero multiplicities.
    """

    __slots__ = ("owner", "terms")

    def __init__(self, owner, terms=()):
        self.owner = owner
        self.terms = _merge_terms(terms)

    # -- constructors

    @staticmethod
    def zero(field):
        return GWElement(field)

    @staticmethod
    def rank_one(field, a):
        if not isinstance(a, FieldElement):
            a = coerce(a, field)
        if a.is_zero:
            raise ZeroClass("<0> is not a rank-1 form")
        return GWElement(field, [(square_class(a), 1)])

    @staticmethod
    def from_class(cls, mult=1):
        return GWElement(cls.owner, [(cls, mult)])

    @staticmethod
    def hyperbolic(field, n=1):
        if n < 0:
            raise MathRejection("hyperbolic multiplicity must be >= 0")
        one = GWElement.rank_one(field, 1)
        minus = GWElement.rank_one(field, -1)
        return (one + minus) * n

    # -- ring structure

    def _check(self, other):
        if not isinstance(other, GWElement):
            raise TypeError("expected a GWElement")
        if other.owner != self.owner:
            raise FieldMismatch(
                f"forms over {self.owner} and {other.owner} cannot be combined"
            )

    def __add__(self, other):
        self._check(other)
        return GWElement(self.owner, list(self.terms) + list(other.terms))

    def __neg__(self):
        return GWElement(self.owner, [(c, -m) for c, m in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GWElement(self.owner, [(c, m * other) for c, m in self.terms])
        self._check(other)
        prods = []
        for c1, m1 in self.terms:
            for c2, m2 in other.terms:
                prods.append((c1 * c2, m1 * m2))
        return GWElement(self.owner, prods)

    __rmul__ = __mul__

    # -- basic invariants

    @property
    def rank(self):
        return sum(m for _, m in self.terms)

    @property
    def is_honest(self):
        return all(m >= 0 for _, m in self.terms)

    def diagonal(self):
        """Diagonal entries of an honest form, with multiplicity."""
        if not self.is_honest:
            raise MathRejection("virtual form has no diagonal")
        out = []
        for c, m in self.terms:
            out.extend([c.rep] * m)
        return out

    def discriminant(self):
        if not self.is_honest:
            raise MathRejection("discriminant requires an honest form")
        rep = self.owner.one()
        for c, m in self.terms:
            rep = rep * c.rep ** m
        return square_class(rep)

    def signature(self, place=RealPlace()):
        if not isinstance(place, RealPlace):
            raise MathRejection("signature is taken at a real place")
        F = self.owner
        if isinstance(F, (Rationals, RealClosed)) or (
            isinstance(F, SimpleExtension)
            and isinstance(F.base_field, Rationals)
            and F.degree == 2
        ):
            total = 0
            for c, m in self.terms:
                s = real_sign(c.rep, conjugate=place.conjugate)
                total += s * m
            return total
        raise Unsupported(f"no signature over {F}")

    def hasse(self, place):
        """Hasse invariant prod_{i<j} (a_i, a_j) at the place."""
        F = self.owner
        if isinstance(F, PAdic):
            if not isinstance(place, LocalPlace):
                raise FieldMismatch("forms over Qp carry only their own place")
            place = FinitePlace(F.p)
        elif isinstance(F, Rationals):
            if isinstance(place, LocalPlace):
                raise FieldMismatch("LocalPlace applies to forms over Qp")
        else:
            raise Unsupported(f"no Hasse invariant over {F}")
        entries = self.diagonal()
        if not entries:
            raise MathRejection("Hasse invariant requires rank >= 1")
        out = 1
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                out *= hilbert_symbol(entries[i], entries[j], place)
        return out

    # -- equality and Witt reduction

    def equals(self, other):
        """Equality in GW(k); decidable for Q, R, C, Qp and finite fields."""
        self._check(other)
        a, b = _honest_pair(self, other)
        if a.rank != b.rank:
            return False
        F = self.owner
        if isinstance(F, ComplexClosed) or _is_quadratically_closed(F):
            return True
        if isinstance(F, RealClosed):
            return a.signature() == b.signature()
        if F.characteristic > 0:
            return a.discriminant() == b.discriminant()
        if isinstance(F, PAdic):
            if a.discriminant() != b.discriminant():
                return False
            if a.rank == 0:
                return True
            return a.hasse(LocalPlace()) == b.hasse(LocalPlace())
        if isinstance(F, Rationals):
            if a.signature() != b.signature():
                return False
            if a.discriminant() != b.discriminant():
                return False
            if a.rank == 0:
                return True
            places = [RealPlace(), FinitePlace(2)]
            primes = set()
            for q in (a, b):
                for entry in q.diagonal():
                    primes |= odd_primes_dividing(entry.payload)
            places += [FinitePlace(p) for p in sorted(primes)]
            return all(a.hasse(v) == b.hasse(v) for v in places)
        raise Unsupported(f"equality in GW({F}) is not decidable here")

    def witt_class(self):
        """Canonical representative modulo the hyperbolic form."""
        terms = list(self.terms)
        out = []
        used = [False] * len(terms)
        for i, (c, m) in enumerate(terms):
            if used[i]:
                continue
            used[i] = True
            neg = -c
            if neg == c:
                # -1 is a square: <c> + <c> is hyperbolic
                net = m % 2
                if net:
                    out.append((c, net))
                continue
            j = next(
                (j for j in range(i + 1, len(terms))
                 if not used[j] and terms[j][0] == neg),
                None,
            )
            if j is None:
                out.append((c, m))
                continue
            used[j] = True
            net = m - terms[j][1]
            if net > 0:
                out.append((c, net))
            elif net < 0:
                out.append((neg, -net))
        return GWElement(self.owner, out)

    # -- structural comparison and display

    def __eq__(self, other):
        if not isinstance(other, GWElement):
            return NotImplemented
        return self.owner == other.owner and self.terms == other.terms

    def __hash__(self):
        return hash((self.owner, self.terms))

    def __repr__(self):
        from .parsing import format_form

        return f"{format_form(self)} over {self.owner}"

    def __str__(self):
        from .parsing import format_form

        return format_form(self)


def _merge_terms(pairs):
    merged = []
    for c, m in pairs:
        if m == 0:
            continue
        for i, (c0, m0) in enumerate(merged):
            if c0 == c:
                merged[i] = (c0, m0 + m)
                break
        else:
            merged.append((c, m))
    merged = [(c, m) for c, m in merged if m != 0]
    merged.sort(key=lambda t: t[0].sort_key())
    return tuple(merged)


def _is_quadratically_closed(F):
    return isinstance(F, SimpleExtension) and isinstance(F.tower()[-1], RealClosed)


def _honest_pair(a, b):
    """Add the same rank-1 forms to both sides until both are honest, then
    pad the smaller with <1> to equalize ranks."""
    fill = []
    for q in (a, b):
        for c, m in q.terms:
            if m < 0:
                fill.append((c, -m))
    if fill:
        filler = GWElement(a.owner, fill)
        a, b = a + filler, b + filler
    ra, rb = a.rank, b.rank
    if ra < rb:
        a = a + GWElement.rank_one(a.owner, 1) * (rb - ra)
    elif rb < ra:
        b = b + GWElement.rank_one(b.owner, 1) * (ra - rb)
    return a, b


# ---------------------------------------------------------------------------
# Hilbert symbols


def _as_rational(x):
    if isinstance(x, FieldElement):
        if not isinstance(x.owner, (Rationals, PAdic, RealClosed)):
            raise Unsupported(f"Hilbert symbol needs rational data, got {x.owner}")
        return x.payload
    return Fraction(x)


def hilbert_symbol(a, b, place):
    """(a, b)_v in {-1, +1} for nonzero rationals (or Qp elements)."""
    qa, qb = _as_rational(a), _as_rational(b)
    if qa == 0 or qb == 0:
        raise ZeroClass("Hilbert symbol of 0")
    if isinstance(place, RealPlace):
        return -1 if qa < 0 and qb < 0 else 1
    if isinstance(place, LocalPlace):
        owner = a.owner if isinstance(a, FieldElement) else None
        if not isinstance(owner, PAdic):
            raise FieldMismatch("LocalPlace needs Qp elements")
        return _hilbert_odd(qa, qb, owner.p)
    if isinstance(place, FinitePlace):
        if place.p == 2:
            return _hilbert_two(qa, qb)
        return _hilbert_odd(qa, qb, place.p)
    raise MathRejection(f"unknown place {place!r}")


def _hilbert_odd(qa, qb, p):
    alpha = padic_valuation(qa, p)
    beta = padic_valuation(qb, p)
    u = qa / Fraction(p) ** alpha
    v = qb / Fraction(p) ** beta
    eps = legendre_fraction(Fraction(-1), p)
    out = eps ** (alpha * beta)
    out *= legendre_fraction(u, p) ** beta
    out *= legendre_fraction(v, p) ** alpha
    return out


def _mod8(q):
    # odd rational mod 8
    return q.numerator * pow(q.denominator, -1, 8) % 8


def _hilbert_two(qa, qb):
    alpha = padic_valuation(qa, 2)
    beta = padic_valuation(qb, 2)
    u = qa / Fraction(2) ** alpha
    v = qb / Fraction(2) ** beta
    u8, v8 = _mod8(u), _mod8(v)
    eps_u = (u8 - 1) // 2 % 2
    eps_v = (v8 - 1) // 2 % 2
    omega_u = (u8 * u8 - 1) // 8 % 2
    omega_v = (v8 * v8 - 1) // 8 % 2
    e = eps_u * eps_v + alpha * omega_v + beta * omega_u
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# residue maps for Qp


def qp_residues(q):
    """Split an honest form over Qp into its two GW(F_p) residue
    components: unit-part classes at even and odd valuation, the second
    reduced modulo the hyperbolic form."""
    F = q.owner
    if not isinstance(F, PAdic):
        raise FieldMismatch("qp_residues needs a form over Qp")
    if not q.is_honest:
        raise MathRejection("qp_residues requires an honest form")
    p = F.p
    k = FiniteField(p)
    even = GWElement.zero(k)
    odd = GWElement.zero(k)
    for entry in q.diagonal():
        val = padic_valuation(entry.payload, p)
        u = entry.payload / Fraction(p) ** val
        residue = u.numerator * pow(u.denominator, -1, p) % p
        cls = GWElement.rank_one(k, residue)
        if val % 2 == 0:
            even = even + cls
        else:
            odd = odd + cls
    return even, odd.witt_class()
