"""GW-valued local and global degrees from explicit fiber data.

Inputs are residue fields plus Jacobian square classes, not polynomial
systems: at a point where the map is etale the local degree is the
transfer of the rank-1 Jacobian class, and the degree over a regular value
is the sum over the fiber.  Ramified points are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatch, MathRejection
from .fields import FieldDescriptor, SquareClass, relative_degree
from .gw import GWElement
from .transfer import EtaleAlgebra, trace_form, transfer_along


@dataclass(frozen=True)
class EtalePointRecord:
    """A point of the source with residue field k(x) over the target's
    k(y), and the square class of the Jacobian there."""

    source: FieldDescriptor
    target: FieldDescriptor
    jacobian: SquareClass

    def __post_init__(self):
        relative_degree(self.source, self.target)
        if self.jacobian.owner != self.source:
            raise FieldMismatch("Jacobian class must live in the source field")


@dataclass(frozen=True)
class FiberRecord:
    target: FieldDescriptor
    points: tuple

    def __post_init__(self):
        for pt in self.points:
            if pt.target != self.target:
                raise FieldMismatch("fiber points must share the target field")


def local_degree(point):
    """Tr_{k(x)/k(y)} <Jf(x)>; rank equals [k(x):k(y)]."""
    beta = GWElement.from_class(point.jacobian)
    return transfer_along(point.source, point.target, beta)


def global_degree_at(fiber):
    """Sum of the local degrees over the fiber (0 for an empty cover)."""
    out = GWElement.zero(fiber.target)
    for pt in fiber.points:
        out = out + local_degree(pt)
    return out


def etale_map_degree(algebra):
    """Degree of the finite etale map Spec(algebra) -> Spec(base): the
    classical trace form."""
    return trace_form(algebra)


def point_record(source, target, jacobian_elem):
    """Build a record from a raw Jacobian element, rejecting the ramified
    case explicitly."""
    from .fields import square_class

    if jacobian_elem.is_zero:
        raise MathRejection(
            "zero Jacobian: the point is not etale; local-algebra degrees "
            "are unsupported"
        )
    return EtalePointRecord(source, target, square_class(jacobian_elem))


def fiber_from_json(obj, parse_field, parse_element):
    """Read {"target": ..., "points": [{"field": ..., "jacobian": ...}]}."""
    target = parse_field(obj["target"])
    points = []
    for p in obj.get("points", []):
        src = parse_field(p["field"])
        jac = parse_element(p["jacobian"], src)
        points.append(point_record(src, target, jac))
    return FiberRecord(target, tuple(points))
