"""Integer lattice model of Pic(S) for del Pezzo surfaces.

Two kinds: blow-ups of P^2 at up to 7 points (basis e0 = hyperplane,
e1..er exceptional, pairing diag(1, -1, ..., -1)) and P1 x P1 (pairing
(a,b).(a',b') = ab' + a'b).  Effectiveness of divisor classes is not
verified; callers supply classes they know to be effective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MathRejection, Unsupported
from .fields import FieldDescriptor
from .gw import GWElement
from .transfer import EtaleAlgebra, trace_form

BLOWUP = "BlP2"
QUADRIC = "P1xP1"


@dataclass(frozen=True)
class PicardClass:
    coefficients: tuple

    def __str__(self):
        if len(self.coefficients) == 2:
            return f"[{self.coefficients[0]}, {self.coefficients[1]}]"
        a0, *rest = self.coefficients
        return f"[{a0}; {', '.join(str(a) for a in rest)}]" if rest else f"[{a0}]"


@dataclass(frozen=True)
class DelPezzoModel:
    """A del Pezzo surface: P^2 blown up at closed points with given
    residue fields, or P1 x P1.  An externally supplied enriched Euler
    characteristic overrides the computed one (used for cubic surfaces
    whose Euler class is quoted, not derived here)."""

    kind: str
    base: FieldDescriptor
    point_fields: tuple = ()
    r_override: int | None = None
    external_euler: GWElement | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in (BLOWUP, QUADRIC):
            raise MathRejection(f"unknown surface kind {self.kind!r}")
        if self.kind == BLOWUP and self.blowup_count > 7:
            raise MathRejection("blow-ups of P^2 support at most 7 points")

    @property
    def blowup_count(self):
        if self.kind == QUADRIC:
            return 0
        if self.r_override is not None:
            return self.r_override
        total = 0
        for f in self.point_fields:
            total += _degree_over(f, self.base)
        return total

    @property
    def surface_degree(self):
        return 8 if self.kind == QUADRIC else 9 - self.blowup_count

    @property
    def rank(self):
        # Picard rank of the lattice model
        return 2 if self.kind == QUADRIC else 1 + self.blowup_count


def _degree_over(f, base):
    d, cur = 1, f
    while cur != base:
        if cur.base is None:
            raise MathRejection(f"point field {f} does not lie over {base}")
        d *= cur.degree
        cur = cur.base
    return d


def divisor(model, coefficients):
    coeffs = tuple(int(c) for c in coefficients)
    if len(coeffs) != model.rank:
        raise MathRejection(
            f"class needs {model.rank} coordinates for this surface, got {len(coeffs)}"
        )
    return PicardClass(coeffs)


def intersect(model, D1, D2):
    a, b = D1.coefficients, D2.coefficients
    if model.kind == QUADRIC:
        return a[0] * b[1] + a[1] * b[0]
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def canonical_class(model):
    if model.kind == QUADRIC:
        return PicardClass((-2, -2))
    return PicardClass((-3,) + (1,) * model.blowup_count)


def curve_degree(model, D):
    """d = -K.D, the anticanonical degree of the class."""
    K = canonical_class(model)
    return -intersect(model, K, D)


def marked_points(model, D):
    return curve_degree(model, D) - 1


def node_count(model, D):
    """delta = D.(K + D)/2 + 1, the number of nodes of a rational curve in
    the class."""
    K = canonical_class(model)
    KD = PicardClass(tuple(k + d for k, d in zip(K.coefficients, D.coefficients)))
    twice = intersect(model, D, KD)
    if twice % 2:
        raise MathRejection("D.(K+D) is odd; not a valid adjunction pairing")
    return twice // 2 + 1


def minus_one_curves(model, bound=4):
    """All classes E with E.E = -1 and E.K = -1, by bounded search.  The
    default bound on |a0| is safe for r <= 7 (Cauchy-Schwarz on the two
    constraints); bound-insensitivity is checked in the tests."""
    if model.kind == QUADRIC:
        return []  # 2ab = -1 has no integer solutions
    r = model.blowup_count
    out = []
    for a0 in range(-bound, bound + 1):
        target_sum = 1 - 3 * a0
        target_sq = a0 * a0 + 1
        for tail in _bounded_tuples(r, target_sum, target_sq):
            out.append(PicardClass((a0,) + tail))
    return out


def _bounded_tuples(r, total, total_sq):
    """Integer r-tuples with given sum and sum of squares."""
    if total_sq < 0:
        return
    if r == 0:
        if total == 0 and total_sq == 0:
            yield ()
        return
    limit = math.isqrt(total_sq)
    for a in range(-limit, limit + 1):
        rest_sq = total_sq - a * a
        rest = total - a
        # Cauchy-Schwarz: the remaining coordinates need rest^2 <= (r-1)*rest_sq
        if rest * rest > (r - 1) * rest_sq:
            continue
        for tail in _bounded_tuples(r - 1, rest, rest_sq):
            yield (a,) + tail


def hypothesis_failures(model, D):
    """Degree-condition and multiple-cover checks; empty list means pass.
    Effectiveness of D is trusted, not verified."""
    reasons = []
    ds = model.surface_degree
    d = curve_degree(model, D)
    if ds >= 4:
        pass
    elif ds == 3:
        if d == 6:
            reasons.append("d = 6 on a degree-3 surface")
    elif ds == 2:
        if d < 7:
            reasons.append(f"d = {d} < 7 on a degree-2 surface")
    else:
        reasons.append(f"surface degree {ds} < 2 is out of range")
    for E in minus_one_curves(model):
        m = _exact_multiple(D.coefficients, E.coefficients)
        if m is not None and m > 1:
            reasons.append(f"{m}-fold multiple of the -1-curve {E}")
    return reasons


def _exact_multiple(dc, ec):
    """m with dc == m * ec, or None."""
    m = None
    for dd, ee in zip(dc, ec):
        if ee == 0:
            if dd != 0:
                return None
            continue
        if dd % ee != 0:
            return None
        q = dd // ee
        if m is None:
            m = q
        elif m != q:
            return None
    return m


def projective_space_euler(base, n):
    """Enriched Euler characteristic of P^n: sum of <(-1)^i>, i = 0..n."""
    out = GWElement.zero(base)
    for i in range(n + 1):
        out = out + GWElement.rank_one(base, 1 if i % 2 == 0 else -1)
    return out


def euler_char(model):
    """Enriched Euler characteristic: blow-up additivity over the blown-up
    points, multiplicativity for P1 x P1; an external value wins."""
    if model.external_euler is not None:
        return model.external_euler
    base = model.base
    if model.kind == QUADRIC:
        chi_p1 = projective_space_euler(base, 1)
        return chi_p1 * chi_p1
    chi = projective_space_euler(base, 2)
    if model.blowup_count and not model.point_fields:
        raise Unsupported(
            "blown-up point fields are unknown; supply them or an external "
            "Euler characteristic"
        )
    if model.point_fields:
        algebra = EtaleAlgebra(base, tuple(model.point_fields))
        chi = chi + GWElement.rank_one(base, -1) * trace_form(algebra)
    return chi
