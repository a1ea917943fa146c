"""Exception hierarchy.

Every error carries a stable ``code`` string so reports and the CLI can
name the failure without depending on class names.
"""


class RhoGroupsError(Exception):
    code = "ERROR"


class PreconditionViolation(RhoGroupsError, ValueError):
    code = "PRECONDITION_VIOLATION"


class NonDivisible(RhoGroupsError, ArithmeticError):
    code = "NON_DIVISIBLE"


class QNotDividing(PreconditionViolation):
    code = "Q_NOT_DIVIDING"


class RecipeInvalid(RhoGroupsError, ValueError):
    code = "RECIPE_INVALID"


class OrderCapExceeded(RhoGroupsError, ValueError):
    code = "ORDER_CAP_EXCEEDED"


class GroupAxiomViolation(RhoGroupsError):
    code = "GROUP_AXIOM_VIOLATION"


class NotNormal(RhoGroupsError, ValueError):
    code = "NOT_NORMAL"


class PNotDividing(PreconditionViolation):
    code = "P_NOT_DIVIDING"


class LatticeCapExceeded(RhoGroupsError):
    code = "LATTICE_CAP_EXCEEDED"


class ComplementNotFound(RhoGroupsError):
    code = "COMPLEMENT_NOT_FOUND"


class NotCoprime(PreconditionViolation):
    code = "NOT_COPRIME"


class SylowNotCyclic(PreconditionViolation):
    code = "SYLOW_NOT_CYCLIC"


class ParseError(RhoGroupsError, ValueError):
    """Corpus/recipe syntax error with a 1-based source position."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)


class DuplicateLabel(ParseError):
    code = "DUPLICATE_LABEL"
