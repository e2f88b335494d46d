"""Etale algebras over a base field: trace forms, Scharlau transfers,
discriminants, the tower-discriminant identity, and node masses.

All Gram matrices use power bases (products of generator powers down the
tower), so two runs produce identical diagonal entries; comparisons across
pivoting choices still go through GWElement.equals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateForm, FieldMismatch, MathRejection
from .fields import (
    ComplexClosed,
    FieldDescriptor,
    FieldElement,
    FiniteField,
    SimpleExtension,
    SquareClass,
    embed,
    is_square,
    make_extension,
    norm_to,
    relative_degree,
    square_class,
    trace_to,
)
from .gw import GWElement
from .linalg import mat_det, sym_diagonalize


@dataclass(frozen=True)
class EtaleAlgebra:
    """A finite product of field extensions of a common base.

    Factors may be iterated (tower) extensions of the base; each factor's
    tower must pass through the base field.
    """

    base: FieldDescriptor
    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise MathRejection("etale algebra needs at least one factor")
        for f in self.factors:
            relative_degree(f, self.base)  # raises if not a tower over base

    @property
    def total_degree(self):
        return sum(relative_degree(f, self.base) for f in self.factors)

    def __str__(self):
        return " x ".join(str(f) for f in self.factors) + f" over {self.base}"


@dataclass(frozen=True)
class NodeRecord:
    """An ordinary double point: curve field k(u), node field k(p) lying
    over it, and the square class of the tangent-direction element, or
    None for a split node (two branches already defined over k(p))."""

    curve_field: FieldDescriptor
    node_field: FieldDescriptor
    tangent: SquareClass | None = None

    def __post_init__(self):
        relative_degree(self.node_field, self.curve_field)
        if self.tangent is not None and self.tangent.owner != self.node_field:
            raise FieldMismatch("tangent class must live in the node field")

    @property
    def is_split(self):
        return self.tangent is None


def relative_basis(E, K):
    """Power-product basis of E as a K-vector space, going down the tower."""
    if E == K:
        return [K.one()]
    lower = relative_basis(E.base, K)
    gen = _generator(E)
    out = []
    power = E.one()
    for _ in range(E.degree):
        for b in lower:
            out.append(embed(b, E) * power)
        power = power * gen
    return out


def _generator(E):
    if isinstance(E, SimpleExtension):
        return E.generator()
    if isinstance(E, ComplexClosed):
        return FieldElement(E, (Fraction(0), Fraction(1)))
    if isinstance(E, FiniteField) and E.m > 1:
        return FieldElement(E, (0, 1) + (0,) * (E.m - 2))
    raise FieldMismatch(f"{E} has no generator over a base")


def gram_matrix(E, K, scale=None):
    """Gram matrix Tr_{E/K}(scale * b_i * b_j) in the power-product basis."""
    basis = relative_basis(E, K)
    if scale is None:
        scale = E.one()
    n = len(basis)
    return [
        [trace_to(scale * basis[i] * basis[j], K) for j in range(n)]
        for i in range(n)
    ]


def gram_diagonalize(rows, field):
    """GW class of a nondegenerate symmetric matrix over the field."""
    pivots = sym_diagonalize(rows, field)
    out = GWElement.zero(field)
    for d in pivots:
        out = out + GWElement.rank_one(field, d)
    return out


def trace_form(algebra):
    """Transfer of <1>: diagonalized Gram of the trace pairing; rank equals
    the total degree of the algebra."""
    out = GWElement.zero(algebra.base)
    for f in algebra.factors:
        if f == algebra.base:
            out = out + GWElement.rank_one(algebra.base, 1)
            continue
        try:
            out = out + gram_diagonalize(gram_matrix(f, algebra.base), algebra.base)
        except DegenerateForm:
            raise MathRejection(
                f"trace form of {f} over {algebra.base} is degenerate; "
                "the extension is not separable"
            )
    return out


def transfer_along(E, K, beta):
    """Scharlau transfer GW(E) -> GW(K) of an honest form beta."""
    if beta.owner != E:
        raise FieldMismatch("form is not owned by the extension")
    if not beta.is_honest:
        raise MathRejection(
            "transfer of a virtual form: decompose into honest parts first"
        )
    out = GWElement.zero(K)
    if E == K:
        return beta + out
    for entry in beta.diagonal():
        out = out + gram_diagonalize(gram_matrix(E, K, scale=entry), K)
    return out


def transfer(algebra, beta):
    """Transfer along the factor of the algebra that owns beta."""
    if beta.owner == algebra.base:
        return transfer_along(algebra.base, algebra.base, beta)
    for f in algebra.factors:
        if beta.owner == f:
            return transfer_along(f, algebra.base, beta)
    raise FieldMismatch("form is not owned by any factor of the algebra")


def disc_element(E, K):
    """det Tr(b_i b_j) as a field element of K (1 for the trivial step)."""
    if E == K:
        return K.one()
    d = mat_det(gram_matrix(E, K), K)
    if d.is_zero:
        raise MathRejection(f"degenerate trace pairing for {E} over {K}")
    return d


def disc_algebra(algebra):
    """Square class of the Gram determinant; multiplicative over factors."""
    out = algebra.base.one()
    for f in algebra.factors:
        out = out * disc_element(f, algebra.base)
    return square_class(out)


def tower_disc(K, L, M):
    """disc(M/K) from the tower K in L in M:
    disc(L/K)^[M:L] * N_{L/K}(disc(M/L))."""
    relative_degree(L, K)
    relative_degree(M, L)
    dlk = disc_element(L, K)
    dml = disc_element(M, L)
    out = dlk ** relative_degree(M, L) * norm_to(dml, K)
    return square_class(out)


def mass(node):
    """<N_{k(p)/k(u)} D(p)> in GW(k(u)); <1> for a split node."""
    if node.is_split:
        return GWElement.rank_one(node.curve_field, 1)
    n = norm_to(node.tangent.rep, node.curve_field)
    return GWElement.rank_one(node.curve_field, n)


def node_algebra(node):
    """The rank-2[k(p):k(u)] algebra k(p)[x]/(x^2 - D(p)) over k(u); a
    split node (or square tangent class) gives k(p) x k(p)."""
    if node.is_split or is_square(node.tangent.rep):
        return EtaleAlgebra(node.curve_field, (node.node_field, node.node_field))
    ext = make_extension(node.node_field, [-node.tangent.rep, 0, 1])
    return EtaleAlgebra(node.curve_field, (ext,))
