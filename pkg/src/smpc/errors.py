"""Exception hierarchy shared by every module of the package."""


class SmpcError(Exception):
    """Base class for all errors raised by :mod:`smpc`."""


class ShapeError(SmpcError, ValueError):
    """Operands have incompatible dimensions."""


class SparsityError(SmpcError, ValueError):
    """Requested sparsity is not small enough for the channel length."""


class DomainError(SmpcError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateSignalError(SmpcError, ValueError):
    """A finite SNR was requested for an all-zero clean signal."""


class OverdeterminedSupportError(SmpcError, ValueError):
    """A support set has more columns than the matrix has rows."""

    def __init__(self, size, rows):
        super().__init__(f"support of size {size} exceeds the {rows} available rows")
        self.size = size
        self.rows = rows


class SingularSupportError(SmpcError, ArithmeticError):
    """The column submatrix indexed by a support set is rank deficient."""

    def __init__(self, support, ratio):
        support = [int(i) for i in support]
        super().__init__(
            f"columns {support} are numerically dependent "
            f"(min/max |R_ii| = {ratio:.3e})"
        )
        self.support = support
        self.ratio = ratio


class SingularSystemError(SmpcError, ArithmeticError):
    """``A A^T`` is not invertible within tolerance."""


class CombinatorialLimitError(SmpcError, ValueError):
    """Exhaustive enumeration would visit too many supports."""


class SolverError(SmpcError, RuntimeError):
    """The LP solver stopped without an optimal solution."""

    def __init__(self, status, message=""):
        super().__init__(f"simplex terminated with status {status!r}" + (f": {message}" if message else ""))
        self.status = status
