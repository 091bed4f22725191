"""Error types shared by every layer of the engine.

Each error carries a stable ``code`` string so the CLI and the harness can
map failures to exit codes and to skipped-check reasons without string
matching on messages.
"""


class CAError(Exception):
    code = "E_INTERNAL"

    def __init__(self, message=""):
        super().__init__(message or self.code)
        self.message = message or self.code


class ParseError(CAError):
    code = "E_PARSE"


class NotHomogeneousError(CAError):
    code = "E_NOT_HOMOGENEOUS"


class DegreeLimitError(CAError):
    """An S-polynomial exceeded the configured degree cap; runaway computation."""

    code = "E_DEGREE_LIMIT"


class PdCutoffError(CAError):
    """A resolution needed beyond the cutoff could not be completed."""

    code = "E_PD_CUTOFF"


class ZeroModuleError(CAError):
    code = "E_ZERO_MODULE"


class NotSopError(CAError):
    """The supplied sequence is not a system of parameters (quotient not finite)."""

    code = "E_NOT_SOP"


class InfiniteIntersectionError(CAError):
    code = "E_INFINITE_INTERSECTION"


class NotAComplexError(CAError):
    code = "E_NOT_A_COMPLEX"


class TriesExhaustedError(CAError):
    code = "E_TRIES_EXHAUSTED"


class DimMismatchError(CAError):
    code = "E_DIM_MISMATCH"


class NotEquidimensionalError(CAError):
    code = "E_NOT_EQUIDIM"


class UnknownCheckError(CAError):
    code = "E_UNKNOWN_CHECK"
