"""
Exact scalar fields and the matrix kernel.

Every linear map in weak-wreath is a Matrix over a Field: either the
rationals or a prime field. Storage is sympy's sparse DomainMatrix, so
composition, rank and reduced row echelon form are exact and no floating
point value ever appears.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from weak_wreath.exceptions import NotIdempotent, ShapeMismatch

logger = logging.getLogger(__name__)

# A field element as stored in a DomainMatrix (PythonMPQ, mpq or a residue)
Scalar = Any
ScalarLike = Union[int, Fraction, str, Scalar]
Dod = Dict[int, Dict[int, Scalar]]


@lru_cache(maxsize=None)
def _domain(characteristic: int) -> Any:
    """Return the sympy domain for a characteristic (0 means rationals)."""
    if characteristic == 0:
        return QQ
    return GF(characteristic)


@dataclass(frozen=True)
class Field:
    """
    Descriptor of an exact field.

    Attributes:
        characteristic: 0 for the rationals, otherwise a prime p for GF(p)
    """

    characteristic: int = 0

    def __post_init__(self) -> None:
        """Validate the characteristic."""
        if self.characteristic < 0:
            raise ValueError(f"Invalid characteristic {self.characteristic}")
        if self.characteristic and not isprime(self.characteristic):
            raise ValueError(
                f"Invalid field 'prime:{self.characteristic}'. "
                f"The characteristic must be prime."
            )

    @classmethod
    def parse(cls, text: str) -> "Field":
        """
        Parse a field descriptor.

        Accepts "rational" (or "QQ") and "prime:p".

        Raises:
            ValueError: If the descriptor is not recognised
        """
        value = text.strip()
        if value.lower() in ("rational", "rationals", "qq"):
            return cls(0)
        if value.lower().startswith("prime:"):
            try:
                p = int(value.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"Invalid field '{text}'. Expected prime:<p>")
            return cls(p)
        raise ValueError(
            f"Invalid field '{text}'. Valid options: rational, prime:<p>"
        )

    @property
    def domain(self) -> Any:
        """The sympy domain (QQ or GF(p))."""
        return _domain(self.characteristic)

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    def __call__(self, value: ScalarLike) -> Scalar:
        """
        Convert a value into a field element.

        Integers, Fractions, strings "a" or "a/b", and elements already in
        the domain are accepted.

        Raises:
            ValueError: On malformed strings or a zero denominator
        """
        if isinstance(value, bool):
            raise ValueError(f"Invalid scalar {value!r}")
        if isinstance(value, int):
            return self.domain(value)
        if isinstance(value, Fraction):
            return self._ratio(value.numerator, value.denominator)
        if isinstance(value, str):
            text = value.strip()
            try:
                if "/" in text:
                    num, den = text.split("/", 1)
                    return self._ratio(int(num), int(den))
                return self.domain(int(text))
            except ValueError:
                raise ValueError(
                    f"Invalid scalar '{value}'. Expected an integer or a/b"
                )
        return self.domain.convert(value)

    def _ratio(self, num: int, den: int) -> Scalar:
        if den == 0:
            raise ValueError(f"Invalid scalar {num}/{den}: zero denominator")
        if self.characteristic == 0:
            return QQ(num, den)
        denominator = self.domain(den)
        if not denominator:
            raise ValueError(
                f"Invalid scalar {num}/{den}: denominator vanishes in {self}"
            )
        return self.domain(num) / denominator

    def to_python(self, value: Scalar) -> Union[int, Fraction]:
        """Convert a field element to an int or Fraction."""
        if self.characteristic == 0:
            num, den = int(QQ.numer(value)), int(QQ.denom(value))
            return num if den == 1 else Fraction(num, den)
        return int(self.domain.to_int(value)) % self.characteristic

    def format(self, value: Scalar) -> str:
        """Render a field element as "a" or "a/b"."""
        return str(self.to_python(value))

    def __str__(self) -> str:
        if self.characteristic == 0:
            return "rational"
        return f"prime:{self.characteristic}"


RATIONAL = Field(0)


class Matrix:
    """
    An immutable matrix over an exact field.

    The entries live in a sparse DomainMatrix; only nonzero entries are
    stored. Arithmetic operators return new matrices.
    """

    __slots__ = ("_rep", "field")

    def __init__(self, rep: DomainMatrix, field: Field) -> None:
        self._rep = rep.to_sparse()
        self.field = field

    # construction

    @classmethod
    def from_dod(cls, dod: Dod, shape: Tuple[int, int], field: Field) -> "Matrix":
        """Build from a dict of row dicts of nonzero domain elements."""
        return cls(DomainMatrix(dod, shape, field.domain), field)

    @classmethod
    def from_entries(
        cls,
        entries: Union[
            Mapping[Tuple[int, int], ScalarLike], Iterable[Tuple[int, int, ScalarLike]]
        ],
        shape: Tuple[int, int],
        field: Field = RATIONAL,
    ) -> "Matrix":
        """
        Build from sparse entries.

        Args:
            entries: Mapping (row, col) -> value, or iterable of (row, col, value)
            shape: (rows, cols)
            field: Target field

        Raises:
            ShapeMismatch: If an index lies outside the shape
        """
        rows, cols = shape
        items: Iterable[Tuple[int, int, ScalarLike]]
        if isinstance(entries, Mapping):
            items = ((i, j, v) for (i, j), v in entries.items())
        else:
            items = entries
        dod: Dod = {}
        for i, j, value in items:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeMismatch(f"Entry ({i}, {j}) outside a {rows}x{cols} matrix")
            element = field(value)
            row = dod.setdefault(i, {})
            total = row.get(j, field.zero) + element
            if total:
                row[j] = total
            else:
                row.pop(j, None)
        return cls.from_dod({i: r for i, r in dod.items() if r}, shape, field)

    @classmethod
    def zeros(cls, shape: Tuple[int, int], field: Field = RATIONAL) -> "Matrix":
        return cls.from_dod({}, shape, field)

    @classmethod
    def identity(cls, n: int, field: Field = RATIONAL) -> "Matrix":
        one = field.one
        return cls.from_dod({i: {i: one} for i in range(n)}, (n, n), field)

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[ScalarLike]], field: Field = RATIONAL
    ) -> "Matrix":
        """Build from a dense list of rows."""
        height = len(rows)
        width = len(rows[0]) if rows else 0
        if any(len(row) != width for row in rows):
            raise ShapeMismatch("Rows have different lengths")
        entries = [
            (i, j, value)
            for i, row in enumerate(rows)
            for j, value in enumerate(row)
        ]
        return cls.from_entries(entries, (height, width), field)

    @classmethod
    def from_permutation(
        cls, images: Sequence[int], field: Field = RATIONAL
    ) -> "Matrix":
        """Permutation matrix sending basis column j to row images[j]."""
        n = len(images)
        one = field.one
        dod: Dod = {}
        for j, i in enumerate(images):
            dod.setdefault(i, {})[j] = one
        return cls.from_dod(dod, (n, n), field)

    # inspection

    @property
    def shape(self) -> Tuple[int, int]:
        rows, cols = self._rep.shape
        return (rows, cols)

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def dod(self) -> Dod:
        """Read-only view of the nonzero entries as {row: {col: value}}."""
        rep: Dod = self._rep.rep
        return rep

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self.dod.values())

    def entry(self, i: int, j: int) -> Scalar:
        return self.dod.get(i, {}).get(j, self.field.zero)

    def column(self, j: int) -> Dict[int, Scalar]:
        """Nonzero entries of column j as {row: value}."""
        return {i: row[j] for i, row in self.dod.items() if j in row}

    def items(self) -> List[Tuple[Tuple[int, int], Union[int, Fraction]]]:
        """Nonzero entries sorted by (row, col), as Python numbers."""
        to_python = self.field.to_python
        return [
            ((i, j), to_python(value))
            for i in sorted(self.dod)
            for j, value in sorted(self.dod[i].items())
        ]

    def to_rows(self) -> List[List[Union[int, Fraction]]]:
        """Dense rows as Python numbers. Meant for small matrices."""
        rows = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.items():
            rows[i][j] = value  # type: ignore[call-overload]
        return rows  # type: ignore[return-value]

    # arithmetic

    def _check_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError(f"Field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        return Matrix(self._rep.matmul(other._rep), self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"Cannot add {self.shape} and {other.shape}")
        return Matrix(self._rep + other._rep, self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"Cannot subtract {other.shape} from {self.shape}")
        return Matrix(self._rep - other._rep, self.field)

    def scale(self, factor: ScalarLike) -> "Matrix":
        c = self.field(factor)
        if not c:
            return Matrix.zeros(self.shape, self.field)
        dod = {i: {j: c * v for j, v in row.items()} for i, row in self.dod.items()}
        return Matrix.from_dod(dod, self.shape, self.field)

    def transpose(self) -> "Matrix":
        return Matrix(self._rep.transpose(), self.field)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; self's index is the more significant one."""
        self._check_field(other)
        r2, c2 = other.shape
        dod: Dod = {}
        other_dod = other.dod
        for i1, row1 in self.dod.items():
            for i2, row2 in other_dod.items():
                dod[i1 * r2 + i2] = {
                    j1 * c2 + j2: a * b
                    for j1, a in row1.items()
                    for j2, b in row2.items()
                }
        return Matrix.from_dod(dod, (self.rows * r2, self.cols * c2), self.field)

    def columns(self, indices: Sequence[int]) -> "Matrix":
        """Submatrix made of the given columns, in the given order."""
        position = {j: k for k, j in enumerate(indices)}
        dod: Dod = {}
        for i, row in self.dod.items():
            picked = {position[j]: v for j, v in row.items() if j in position}
            if picked:
                dod[i] = picked
        return Matrix.from_dod(dod, (self.rows, len(indices)), self.field)

    def top_rows(self, count: int) -> "Matrix":
        dod = {i: dict(row) for i, row in self.dod.items() if i < count}
        return Matrix.from_dod(dod, (count, self.cols), self.field)

    # comparison

    def first_difference(self, other: "Matrix") -> Optional[Tuple[int, int]]:
        """
        Locate the first entry where two matrices differ.

        Entries are ordered by column, then row.

        Returns:
            (row, col) of the first differing entry, or None if equal
        """
        diff = (self - other).dod
        best: Optional[Tuple[int, int]] = None
        for i, row in diff.items():
            for j, value in row.items():
                if value and (best is None or (j, i) < (best[1], best[0])):
                    best = (i, j)
        return best

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape or self.field != other.field:
            return False
        return self.first_difference(other) is None

    def is_zero(self) -> bool:
        return not any(any(row.values()) for row in self.dod.values())

    def is_idempotent(self) -> bool:
        return self.rows == self.cols and (self @ self) == self

    # elimination

    def rank(self) -> int:
        rank: int = self._rep.rank()
        return rank

    def rref(self) -> Tuple["Matrix", Tuple[int, ...]]:
        """Reduced row echelon form and pivot columns."""
        reduced, pivots = self._rep.rref()
        return Matrix(reduced, self.field), tuple(pivots)

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz}, field={self.field})"


def rank(m: Matrix) -> int:
    """Rank of a matrix over its field, by exact elimination."""
    return m.rank()


def split_idempotent(e: Matrix) -> Tuple[Matrix, Matrix]:
    """
    Split an idempotent matrix through its image.

    The image basis is the set of pivot columns of e; pi is made of the
    nonzero rows of the reduced row echelon form of e. Then pi.iota is the
    identity of size rank(e) and iota.pi = e.

    Args:
        e: Square matrix with e.e = e

    Returns:
        (iota, pi)

    Raises:
        ShapeMismatch: If e is not square
        NotIdempotent: If e.e != e
    """
    if e.rows != e.cols:
        raise ShapeMismatch(f"Cannot split a non-square {e.rows}x{e.cols} matrix")
    square = e @ e
    witness = square.first_difference(e)
    if witness is not None:
        raise NotIdempotent(f"e.e differs from e at entry {witness}")
    reduced, pivots = e.rref()
    iota = e.columns(pivots)
    pi = reduced.top_rows(len(pivots))
    logger.debug(f"Split idempotent of size {e.rows} through rank {len(pivots)}")
    return iota, pi
