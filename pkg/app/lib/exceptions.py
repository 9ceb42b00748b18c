class AlgebraError(Exception):
    """Base error; `detail` carries the message shown to the user."""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InputError(AlgebraError):
    """Bad input rather than a failed computation; the CLI exits with 2."""


class UnsupportedTypeError(InputError):
    pass


class NonFiniteCartanError(InputError):
    pass


class FieldMismatchError(AlgebraError):
    pass


class SingularMatrixError(AlgebraError):
    pass


class LabelVanishesError(AlgebraError):
    pass


class PreconditionError(InputError):
    pass


class AmbiguousEdgeLabelError(AlgebraError):
    pass


class InvalidMorphismError(AlgebraError):
    def __init__(self, detail: str, violations: list[str] | None = None):
        super().__init__(detail)
        self.violations = violations or []


class NotMinimalRepresentativeError(InputError):
    pass


class GraphStructureError(AlgebraError):
    pass


class UsageError(InputError):
    pass
