"""
Exception hierarchy for weak-wreath.

Checkers never raise on a mathematical failure; they return a CheckReport.
The exceptions below are raised by constructors that require valid input
and by the file readers.
"""

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from weak_wreath.models import CheckReport


class WreathError(Exception):
    """Base class for every error raised by weak-wreath."""


class ShapeMismatch(WreathError, ValueError):
    """Two maps or spaces cannot be combined because their shapes differ."""


class NotIdempotent(WreathError):
    """A matrix passed to a splitting routine does not satisfy e.e = e."""


class AxiomFailure(WreathError):
    """
    A structure failed the axioms a constructor requires.

    Attributes:
        report: The failing check report, with witnesses
    """

    def __init__(self, message: str, report: Optional["CheckReport"] = None):
        super().__init__(message)
        self.report = report


class DemimonadAxiomFailure(AxiomFailure):
    """The input is not a demimonad."""


class InvalidLaw(AxiomFailure):
    """The input is not a weak distributive law."""


class InvalidOneCell(AxiomFailure):
    """The input is not a 1-cell between the given laws."""


class PathsDisagree(WreathError):
    """Two composites that must agree on a valid input do not."""


class PreconditionFailure(WreathError):
    """
    A binary or n-ary factorization precondition is violated.

    Attributes:
        condition: Name of the violated condition ("a" or "b")
        report: Check report with the failing identities
    """

    def __init__(
        self,
        condition: str,
        message: str,
        report: Optional["CheckReport"] = None,
    ):
        super().__init__(f"condition ({condition}) violated: {message}")
        self.condition = condition
        self.report = report


class IndexOutOfRange(WreathError, IndexError):
    """A monad index lies outside the object."""


class MismatchWithGeneralFormula(WreathError):
    """An explicit closed formula disagrees with the general construction."""


class NotAGroup(WreathError, ValueError):
    """A multiplication table is not a group table."""


class ParseError(WreathError, ValueError):
    """
    An input file could not be parsed.

    Attributes:
        path: File that failed to parse
        entry: Zero-based entry number within the offending list, if known
    """

    def __init__(self, path: str, message: str, entry: Optional[int] = None):
        where = f"{path}" if entry is None else f"{path} (entry {entry})"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.entry = entry
