"""Literal grammars for fields, elements and diagonal forms.

Field literals:   Q | R | C | F(p) | F(p^m) | Qp(p) | <base>[x]/(<poly>)
                  (suffixes chain, so Q[x]/(x^2-2)[x]/(x^2-3) is a tower)
Polynomials:      x^2-5, x^2+x+2, 1/2x - 3
Elements:         rational literals, or polynomials in x (i over C)
Forms:            form := ['-'] term (('+'|'-') term)*
                  term := [uint] '<' element '>'  |  [uint] 'h'

Errors carry the offending position.  parse_form(format_form(q)) returns a
structurally identical form.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError, ZeroClass
from .fields import (
    CC,
    ComplexClosed,
    FieldDescriptor,
    FiniteField,
    PAdic,
    QQ,
    RR,
    Rationals,
    RealClosed,
    SimpleExtension,
    coerce,
    format_element,
    make_extension,
)
from .gw import GWElement


class _Scanner:
    def __init__(self, text, pos=0):
        self.text = text
        self.pos = pos

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected):
        self.skip_ws()
        if not self.text.startswith(expected, self.pos):
            raise ParseError(f"expected {expected!r}", self.text, self.pos)
        self.pos += len(expected)

    def try_take(self, expected):
        self.skip_ws()
        if self.text.startswith(expected, self.pos):
            self.pos += len(expected)
            return True
        return False

    def integer(self):
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-"):
            raise ParseError("expected an integer", self.text, start)
        return int(self.text[start:self.pos])

    def unsigned(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected digits", self.text, start)
        return int(self.text[start:self.pos])

    def rational(self):
        n = self.integer()
        if self.try_take("/"):
            return Fraction(n, self.unsigned())
        return Fraction(n)

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)


# ---------------------------------------------------------------------------
# fields


def parse_field(text):
    sc = _Scanner(text)
    field = _field_atom(sc)
    while sc.peek() == "[":
        field = _field_suffix(sc, field)
    if not sc.at_end():
        raise ParseError("trailing input after field literal", text, sc.pos)
    return field


def _field_atom(sc):
    if sc.try_take("Qp"):
        sc.take("(")
        p = sc.unsigned()
        sc.take(")")
        return PAdic(p)
    if sc.try_take("Q"):
        return QQ
    if sc.try_take("R"):
        return RR
    if sc.try_take("C"):
        return CC
    if sc.try_take("F"):
        sc.take("(")
        p = sc.unsigned()
        m = sc.unsigned() if sc.try_take("^") else 1
        sc.take(")")
        return FiniteField(p, m)
    raise ParseError("expected a field literal", sc.text, sc.pos)


def _field_suffix(sc, base):
    sc.take("[")
    sc.take("x")
    sc.take("]")
    sc.take("/")
    sc.take("(")
    coeffs = _poly_body(sc)
    sc.take(")")
    return make_extension(base, [coerce(c, base) for c in coeffs])


def _poly_body(sc, var="x"):
    """Rational-coefficient polynomial; returns low-to-high coefficients.
    Stops at the first character that cannot continue a term; the caller
    checks what follows."""
    coeffs = {}
    sign = -1 if sc.try_take("-") else 1
    while True:
        coef, power = _poly_term(sc, var)
        coeffs[power] = coeffs.get(power, Fraction(0)) + sign * coef
        sc.skip_ws()
        if sc.try_take("+"):
            sign = 1
        elif sc.try_take("-"):
            sign = -1
        else:
            break
    top = max(coeffs) if coeffs else 0
    return [coeffs.get(i, Fraction(0)) for i in range(top + 1)]


def _poly_term(sc, var):
    sc.skip_ws()
    coef = Fraction(1)
    have_coef = False
    if sc.peek().isdigit():
        coef = sc.rational()
        have_coef = True
        sc.try_take("*")
    if sc.try_take(var):
        power = sc.unsigned() if sc.try_take("^") else 1
        return coef, power
    if not have_coef:
        raise ParseError("expected a coefficient or variable", sc.text, sc.pos)
    return coef, 0


# ---------------------------------------------------------------------------
# elements


def parse_element(text, field):
    sc = _Scanner(text)
    x = _element_body(sc, field)
    if not sc.at_end():
        raise ParseError("trailing input after element", text, sc.pos)
    return x


def _element_body(sc, field):
    var = "i" if isinstance(field, ComplexClosed) else "x"
    if isinstance(field, (Rationals, RealClosed, PAdic)):
        q = sc.rational()
        return field.element(q)
    start = sc.pos
    coeffs = _poly_body(sc, var=var)
    gen_degree = field.degree
    if len(coeffs) > gen_degree:
        raise ParseError(
            f"element degree exceeds [{field}] = {gen_degree}", sc.text, start
        )
    out = field.zero()
    gen = _field_generator(field)
    power = field.one()
    for c in coeffs:
        out = out + field.element(c) * power
        power = power * gen
    return out


def _field_generator(field):
    from .transfer import _generator

    return _generator(field)


# ---------------------------------------------------------------------------
# forms


def parse_form(text, field):
    sc = _Scanner(text)
    out = GWElement.zero(field)
    sign = -1 if sc.try_take("-") else 1
    while True:
        out = out + _form_term(sc, field) * sign
        if sc.try_take("+"):
            sign = 1
        elif sc.try_take("-"):
            sign = -1
        else:
            break
    if not sc.at_end():
        raise ParseError("trailing input after form", sc.text, sc.pos)
    return out


def _form_term(sc, field):
    mult = 1
    if sc.peek().isdigit():
        mult = sc.unsigned()
    if sc.try_take("h"):
        return GWElement.hyperbolic(field, 1) * mult
    sc.take("<")
    start = sc.pos
    end = sc.text.find(">", start)
    if end < 0:
        raise ParseError("unterminated '<'", sc.text, start)
    inner = sc.text[start:end]
    sub = _Scanner(sc.text, start)
    elem = _element_body(sub, field)
    sub.skip_ws()
    if sub.pos != end:
        raise ParseError("malformed element inside '< >'", sc.text, sub.pos)
    sc.pos = end + 1
    if elem.is_zero:
        raise ZeroClass("<0> is not a rank-1 form")
    return GWElement.rank_one(field, elem) * mult


def format_form(q):
    if not q.terms:
        return "0"
    parts = []
    for cls, m in q.terms:
        body = f"<{format_element(cls.rep)}>"
        mag = abs(m)
        chunk = body if mag == 1 else f"{mag}{body}"
        if not parts:
            parts.append(chunk if m > 0 else f"-{chunk}")
        else:
            parts.append(f"+ {chunk}" if m > 0 else f"- {chunk}")
    return " ".join(parts)


def format_field(field):
    return str(field)
