"""Exception hierarchy shared by every module."""


class ScreeningError(Exception):
    """Base class for all errors raised by factorscreen."""


class NonFiniteInput(ScreeningError, ValueError):
    pass


class ZeroVarianceColumn(ScreeningError, ValueError):
    def __init__(self, column, sd=None):
        self.column = column
        self.sd = sd
        super().__init__(f"column {column} has (near) zero variance (sd={sd})")


class ConvergenceFailure(ScreeningError, RuntimeError):
    pass


class DegenerateSpectrum(ScreeningError, ValueError):
    pass


class InvalidFactorCount(ScreeningError, ValueError):
    pass


class InvalidTruncation(InvalidFactorCount):
    pass


class SingularScale(ScreeningError, ValueError):
    pass


class InvalidK(ScreeningError, ValueError):
    pass


class EmptySubset(ScreeningError, ValueError):
    pass


class DegenerateFit(ScreeningError, ValueError):
    pass


class EmptyValidGrid(ScreeningError, ValueError):
    pass


class NotPositiveDefinite(ScreeningError, ValueError):
    pass


class InvalidSpikeCounts(ScreeningError, ValueError):
    pass


class IndexOutOfRange(ScreeningError, IndexError):
    pass


class CsvError(ScreeningError, ValueError):
    """Base class for malformed CSV input."""


class EmptyFile(CsvError):
    pass


class MissingResponse(CsvError):
    pass


class RaggedRows(CsvError):
    pass


class NonNumericCell(CsvError):
    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"non-numeric cell {value!r} at row {row}, column {col!r}")
