"""Exception types shared across the library.

``MathRejection`` covers inputs that are well-formed but mathematically
invalid (reducible modulus, zero in a square class, degree mismatches).
The CLI maps these to exit code 2, keeping them distinct from usage
errors.  Every rejection carries a short machine-readable ``code``.
"""

from __future__ import annotations


class MathRejection(Exception):
    code = "rejected"

    def __init__(self, message, **data):
        super().__init__(message)
        self.message = message
        self.data = data


class ReducibleModulus(MathRejection):
    code = "reducible-modulus"

    def __init__(self, message, witness=None):
        super().__init__(message, witness=witness)
        self.witness = witness


class InseparableModulus(MathRejection):
    code = "inseparable-modulus"

    def __init__(self, message, certificate=None):
        super().__init__(message, certificate=certificate)
        self.certificate = certificate


class Unsupported(MathRejection):
    code = "unsupported"


class FieldMismatch(MathRejection):
    code = "field-mismatch"


class ZeroClass(MathRejection):
    code = "zero-class"


class DegenerateForm(MathRejection):
    code = "degenerate-form"


class ParseError(Exception):
    """Syntax error in a field/element/form literal, with position."""

    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} (at position {pos}: {text[pos:pos + 12]!r})")
        self.message = message
        self.text = text
        self.pos = pos
