"""Exception hierarchy shared by all df_spectra modules."""


class DFSpectraError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(DFSpectraError, ValueError):
    """A parameter is outside its admissible domain."""


class PoleError(InvalidInput):
    """The gamma function was evaluated at a non-positive integer."""


class ParseError(DFSpectraError, ValueError):
    """A data file could not be parsed.

    Parameters
    ----------
    message : str
        What went wrong.
    line : int, optional
        1-based line number in the offending file.
    path : str, optional
        File the line came from.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class NoBoundState(DFSpectraError):
    """The closed form admits no bound state for the requested quantum numbers.

    ``reason`` is either ``"discriminant"`` or ``"quantization root negative"``.
    """

    def __init__(self, reason, detail=""):
        self.reason = reason
        super().__init__(f"no bound state ({reason}){': ' + detail if detail else ''}")


class NumericalError(DFSpectraError, ArithmeticError):
    """A numerical procedure produced a non-finite or unconverged result."""


class ConvergenceError(NumericalError):
    """An iterative expansion did not converge within its term cap."""
