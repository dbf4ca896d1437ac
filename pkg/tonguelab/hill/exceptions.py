class HillError(Exception):
    """Base class for every error raised by the hill app."""


class SeriesError(HillError, ArithmeticError):
    pass


class CoefficientOverflow(SeriesError):
    def __init__(self, bits, limit):
        super().__init__(f"rational coefficient needs {bits} bits, limit is {limit}")
        self.bits = bits
        self.limit = limit


class ResonantRHS(SeriesError):
    def __init__(self, coefficient):
        super().__init__(f"right-hand side has resonant cos(2t) coefficient {coefficient}")
        self.coefficient = coefficient


class OrderMismatch(SeriesError):
    def __init__(self, left, right):
        super().__init__(f"truncation orders differ: {left} != {right}")
        self.left = left
        self.right = right


class UnsupportedParity(SeriesError):
    pass


class InvalidSpec(SeriesError, ValueError):
    pass


class OracleError(HillError):
    pass


class InadmissibleAmplitude(OracleError, ValueError):
    pass


class NoTurningPoint(OracleError):
    pass


class QuadratureNonConvergent(OracleError):
    pass


class IntegratorFailure(OracleError):
    pass


class BracketNotFound(OracleError):
    def __init__(self, N, q, window):
        lo, hi = window
        super().__init__(f"no eigenvalue bracket for N={N}, q={q!r} on [{lo!r}, {hi!r}]")
        self.N = N
        self.q = q
        self.window = window


class AmbiguousBracket(OracleError):
    def __init__(self, N, q, count):
        super().__init__(f"{count} sign changes for N={N}, q={q!r}; narrow the window")
        self.N = N
        self.q = q
        self.count = count


class AnalysisError(HillError):
    pass


class DegenerateFit(AnalysisError):
    pass


class InsufficientData(AnalysisError, ValueError):
    pass


class ConfigError(HillError, ValueError):
    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}


class VerificationFailure(AnalysisError):
    pass
