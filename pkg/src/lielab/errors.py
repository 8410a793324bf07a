"""Exception hierarchy.

Every error carries a stable ``code`` string so that reports and the CLI can
name the failure without depending on class names.
"""


class LieLabError(Exception):
    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class DimensionMismatch(LieLabError):
    code = "DIMENSION_MISMATCH"


class NonSplitOperator(LieLabError):
    code = "NON_SPLIT_OPERATOR"


class ParentMismatch(LieLabError):
    code = "PARENT_MISMATCH"


class AxiomViolation(LieLabError):
    code = "AXIOM_VIOLATION"


class NotAnIdeal(LieLabError):
    code = "NOT_AN_IDEAL"


class CharTooSmall(LieLabError):
    code = "CHAR_TOO_SMALL"


class BadParity(LieLabError):
    code = "BAD_PARITY"


class BadChar(LieLabError):
    code = "BAD_CHAR"


class NoSuchElement(LieLabError):
    code = "NO_SUCH_ELEMENT"


class DegenerateForm(LieLabError):
    code = "DEGENERATE_FORM"


class ZeroElement(LieLabError):
    code = "ZERO_ELEMENT"


class PreconditionFailed(LieLabError):
    code = "PRECONDITION_FAILED"


class NotJordanElement(LieLabError):
    code = "NOT_JORDAN_ELEMENT"


class NotIdempotent(LieLabError):
    code = "NOT_IDEMPOTENT"


class NotRegular(LieLabError):
    code = "NOT_REGULAR"


class WitnessInvalid(LieLabError):
    code = "WITNESS_INVALID"


class Sl2SearchExhausted(LieLabError):
    code = "SL2_SEARCH_EXHAUSTED"


class FactorialNotInvertible(LieLabError):
    code = "FACTORIAL_NOT_INVERTIBLE"


class NotNilpotent(LieLabError):
    code = "NOT_NILPOTENT"


class DuplicateNodes(LieLabError):
    code = "DUPLICATE_NODES"


class NonzeroDegreeRequired(LieLabError):
    code = "NONZERO_DEGREE_REQUIRED"


class BudgetExceeded(LieLabError):
    code = "BUDGET_EXCEEDED"


class SizeBudget(LieLabError):
    code = "SIZE_BUDGET"


class NotInK(LieLabError):
    code = "NOT_IN_K"


class ProbeFailed(LieLabError):
    code = "PROBE_FAILED"


class SizeMismatch(LieLabError):
    code = "SIZE_MISMATCH"


class TheoremViolation(LieLabError):
    """A verified postcondition that a proven statement guarantees has failed."""

    code = "THEOREM_VIOLATION"
