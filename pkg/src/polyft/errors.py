"""Exception hierarchy.

Everything raised on purpose derives from :class:`PolyFTError`. The CLI maps
:class:`InputDataError` subclasses to exit code 3 and :class:`NumericError`
subclasses to exit code 4.
"""


class PolyFTError(Exception):
    """Base class for all errors raised by polyft."""


class InputDataError(PolyFTError):
    """Bad geometry or file contents supplied by the caller."""


class NumericError(PolyFTError):
    """A numeric evaluation could not produce a finite, defined result."""


# geometry
class DegenerateSegment(InputDataError):
    pass


class DegenerateFacet(InputDataError):
    pass


class OpenMesh(InputDataError):
    """The surface is not closed and consistently oriented."""


# surfacemesh / csv parsing
class MeshFormatError(InputDataError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BadHeader(MeshFormatError):
    pass


class CountMismatch(MeshFormatError):
    pass


class IndexOutOfRange(MeshFormatError):
    pass


class MalformedNumber(MeshFormatError):
    pass


class FieldFormatError(InputDataError):
    pass


class InvalidSpec(InputDataError):
    pass


class GridMismatch(InputDataError):
    pass


class ZeroWavevector(NumericError):
    """A per-element term was requested at Q = 0, where it is undefined."""


class NonFiniteValue(NumericError):
    pass


class FieldEvaluationError(PolyFTError):
    """Wraps a backend failure together with the Q point that triggered it."""

    def __init__(self, q, cause):
        qs = ",".join(repr(float(v)) for v in q)
        super().__init__(f"at q=({qs}): {cause}")
        self.q = tuple(float(v) for v in q)
        self.cause = cause
