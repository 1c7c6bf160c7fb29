"""Exception types shared across framekit."""


class FramekitError(Exception):
    """Base class for all framekit errors."""


class InputError(FramekitError, ValueError):
    """Malformed numeric input (non-finite entries, wrong shapes, bad indices)."""


class ValidationError(InputError):
    """A sequence specification violates one of its invariants.

    ``code`` names the violated invariant, e.g. ``"dimension mismatch"``.
    """

    def __init__(self, code, detail="", field=None, line=None):
        self.code = code
        self.detail = detail
        self.field = field
        self.line = line
        msg = code
        if detail:
            msg += f": {detail}"
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        if where:
            msg += " (" + ", ".join(where) + ")"
        super().__init__(msg)


class UnsupportedFamilyError(FramekitError, ValueError):
    """Structured family outside the closed forms the analytic backend can decide."""


class ResourceError(FramekitError, RuntimeError):
    """A truncation would exceed the configured ambient dimension."""


class DegenerateFrameError(FramekitError, ValueError):
    """The generalized frame operator has no positive lower bound on the span."""

    def __init__(self, eigenvalue, threshold):
        self.eigenvalue = eigenvalue
        self.threshold = threshold
        super().__init__(
            f"degenerate frame: smallest span eigenvalue {eigenvalue:.6g} "
            f"<= threshold {threshold:.6g}"
        )


class NotMinimalError(FramekitError, ValueError):
    """A biorthogonal system was requested for a non-minimal sequence."""

    def __init__(self, column):
        self.column = column
        super().__init__(
            f"not minimal: element {column} lies in the closed span of the others"
        )


class ConsistencyError(FramekitError, AssertionError):
    """An identity that must hold at finite scale failed its tolerance check."""
