"""
Tensor-shaped linear maps and the algebra layer built on them.

A Space is an ordered list of factor dimensions; its basis is indexed
row-major, the leftmost factor being the most significant. A LinMap is a
Matrix between two spaces. Algebras, coalgebras and demimonads are
packages of such maps, and the checkers below verify their axioms and
report the first basis element on which an axiom fails.

Composition follows the usual right-to-left order: compose(f, g) is f.g.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Callable, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from weak_wreath.exactlinalg import (
    RATIONAL,
    Field,
    Matrix,
    ScalarLike,
    split_idempotent,
)
from weak_wreath.exceptions import DemimonadAxiomFailure, ShapeMismatch
from weak_wreath.models import CheckReport

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class Space:
    """
    A tensor product of vector spaces, described by its factor dimensions.

    The empty shape is the base field.
    """

    shape: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "shape", tuple(int(d) for d in self.shape))
        if any(d < 1 for d in self.shape):
            raise ShapeMismatch(
                f"Invalid space shape {self.shape}: factors must be >= 1"
            )

    @property
    def dim(self) -> int:
        return math.prod(self.shape)

    @property
    def arity(self) -> int:
        return len(self.shape)

    def tensor(self, *others: "Space") -> "Space":
        shape = self.shape
        for other in others:
            shape = shape + other.shape
        return Space(shape)

    def index(self, multi: Sequence[int]) -> int:
        """Flat row-major index of a multi-index."""
        if len(multi) != len(self.shape):
            raise ShapeMismatch(f"Multi-index {tuple(multi)} does not fit {self}")
        flat = 0
        for i, d in zip(multi, self.shape):
            flat = flat * d + i
        return flat

    def multi_index(self, flat: int) -> MultiIndex:
        digits = []
        for d in reversed(self.shape):
            flat, digit = divmod(flat, d)
            digits.append(digit)
        return tuple(reversed(digits))

    def basis(self) -> Iterator[MultiIndex]:
        return itertools.product(*(range(d) for d in self.shape))

    def __str__(self) -> str:
        if not self.shape:
            return "F"
        return "x".join(str(d) for d in self.shape)


BASE = Space(())


def tensor_spaces(spaces: Sequence[Space]) -> Space:
    return BASE.tensor(*spaces)


@dataclass(frozen=True, eq=False)
class LinMap:
    """
    A linear map between two spaces.

    The matrix has codomain.dim rows and domain.dim columns. Equality is
    matrix equality; factor shapes are metadata.
    """

    domain: Space
    codomain: Space
    matrix: Matrix

    def __post_init__(self) -> None:
        expected = (self.codomain.dim, self.domain.dim)
        if self.matrix.shape != expected:
            raise ShapeMismatch(
                f"Matrix of shape {self.matrix.shape} cannot map "
                f"{self.domain} -> {self.codomain}"
            )

    @property
    def field(self) -> Field:
        return self.matrix.field

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return self.matrix == other.matrix

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return compose(self, other)

    def __add__(self, other: "LinMap") -> "LinMap":
        return LinMap(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: "LinMap") -> "LinMap":
        return LinMap(self.domain, self.codomain, self.matrix - other.matrix)

    def scale(self, factor: ScalarLike) -> "LinMap":
        return LinMap(self.domain, self.codomain, self.matrix.scale(factor))

    def transpose(self) -> "LinMap":
        return LinMap(self.codomain, self.domain, self.matrix.transpose())

    def relabel(self, domain: Space, codomain: Space) -> "LinMap":
        """Same matrix, new factor shapes of equal total dimension."""
        return LinMap(domain, codomain, self.matrix)

    def first_difference(
        self, other: "LinMap"
    ) -> Optional[Tuple[MultiIndex, MultiIndex]]:
        """
        First basis element on which two maps differ.

        Returns:
            (domain multi-index, codomain multi-index), or None if equal

        Raises:
            ShapeMismatch: If the maps have different dimensions
        """
        if self.matrix.shape != other.matrix.shape:
            raise ShapeMismatch(
                f"Cannot compare {self.domain} -> {self.codomain} "
                f"with {other.domain} -> {other.codomain}"
            )
        position = self.matrix.first_difference(other.matrix)
        if position is None:
            return None
        row, col = position
        return self.domain.multi_index(col), self.codomain.multi_index(row)

    def is_idempotent(self) -> bool:
        return self.matrix.is_idempotent()

    def rank(self) -> int:
        return self.matrix.rank()

    def image_of(self, multi: Sequence[int]) -> Dict[MultiIndex, ScalarLike]:
        """Image of one basis element, as {codomain multi-index: value}."""
        column = self.matrix.column(self.domain.index(multi))
        to_python = self.field.to_python
        return {
            self.codomain.multi_index(i): to_python(v)
            for i, v in sorted(column.items())
        }

    def __repr__(self) -> str:
        return f"LinMap({self.domain} -> {self.codomain}, nnz={self.matrix.nnz})"


def identity(space: Space, field: Field = RATIONAL) -> LinMap:
    return LinMap(space, space, Matrix.identity(space.dim, field))


def zero_map(domain: Space, codomain: Space, field: Field = RATIONAL) -> LinMap:
    return LinMap(domain, codomain, Matrix.zeros((codomain.dim, domain.dim), field))


def compose(*maps: LinMap) -> LinMap:
    """
    Compose maps right to left: compose(f, g, h) = f.g.h.

    Raises:
        ShapeMismatch: If consecutive maps are not composable
    """
    if not maps:
        raise ValueError("compose() needs at least one map")

    def _pair(f: LinMap, g: LinMap) -> LinMap:
        if g.codomain.dim != f.domain.dim:
            raise ShapeMismatch(
                f"Cannot compose {f.domain} -> {f.codomain} after "
                f"{g.domain} -> {g.codomain}"
            )
        return LinMap(g.domain, f.codomain, f.matrix @ g.matrix)

    return reduce(_pair, maps)


def tensor(*maps: LinMap) -> LinMap:
    """Tensor product; the first map acts on the leftmost factors."""
    if not maps:
        raise ValueError("tensor() needs at least one map")

    def _pair(f: LinMap, g: LinMap) -> LinMap:
        return LinMap(
            f.domain.tensor(g.domain),
            f.codomain.tensor(g.codomain),
            f.matrix.kron(g.matrix),
        )

    return reduce(_pair, maps)


def whisker(left: Space, f: LinMap, right: Space = BASE) -> LinMap:
    """left (x) f (x) right, with identities on the outer factors."""
    field = f.field
    parts = []
    if left.shape:
        parts.append(identity(left, field))
    parts.append(f)
    if right.shape:
        parts.append(identity(right, field))
    return tensor(*parts)


def permutation(
    spaces: Sequence[Space], order: Sequence[int], field: Field = RATIONAL
) -> LinMap:
    """
    Rearrange tensor factors.

    The map sends x_0 (x) ... (x) x_{m-1} to x_{order[0]} (x) ... (x)
    x_{order[m-1]}.
    """
    if sorted(order) != list(range(len(spaces))):
        raise ShapeMismatch(
            f"{tuple(order)} is not a permutation of {len(spaces)} factors"
        )
    domain = tensor_spaces(spaces)
    codomain = tensor_spaces([spaces[k] for k in order])
    dims = [s.dim for s in spaces]
    target_dims = [dims[k] for k in order]
    images = []
    for block in itertools.product(*(range(d) for d in dims)):
        flat = 0
        for k, d in zip(order, target_dims):
            flat = flat * d + block[k]
        images.append(flat)
    return LinMap(domain, codomain, Matrix.from_permutation(images, field))


def flip(a: Space, b: Space, field: Field = RATIONAL) -> LinMap:
    """The symmetry a (x) b -> b (x) a."""
    return permutation([a, b], [1, 0], field)


def from_rule(
    domain: Space,
    codomain: Space,
    rule: Callable[[MultiIndex], Mapping[MultiIndex, ScalarLike]],
    field: Field = RATIONAL,
) -> LinMap:
    """Build a map from the images of the domain basis elements."""
    entries = []
    for multi in domain.basis():
        col = domain.index(multi)
        for target, value in rule(multi).items():
            entries.append((codomain.index(target), col, value))
    matrix = Matrix.from_entries(entries, (codomain.dim, domain.dim), field)
    return LinMap(domain, codomain, matrix)


@dataclass(frozen=True, eq=False)
class Demimonad:
    """
    A multiplication and unit on a space whose unit laws hold up to the
    idempotent e = mul.(id (x) unit).

    Attributes:
        space: Carrier t
        mul: t (x) t -> t
        unit: F -> t
        name: Label used in reports
    """

    space: Space
    mul: LinMap
    unit: LinMap
    name: str = ""

    def __post_init__(self) -> None:
        d = self.space.dim
        if self.mul.matrix.shape != (d, d * d):
            raise ShapeMismatch(
                f"Multiplication of {self.label} must map {d * d} -> {d}"
            )
        if self.unit.matrix.shape != (d, 1):
            raise ShapeMismatch(f"Unit of {self.label} must map 1 -> {d}")

    @property
    def label(self) -> str:
        return self.name or f"demimonad[{self.space}]"

    @property
    def field(self) -> Field:
        return self.mul.field

    @cached_property
    def identity(self) -> LinMap:
        return identity(self.space, self.field)

    @cached_property
    def idempotent(self) -> LinMap:
        """e = mul.(t (x) unit)."""
        return compose(self.mul, tensor(self.identity, self.unit))

    def is_strict(self) -> bool:
        """True if the idempotent is the identity, i.e. this is an algebra."""
        return self.idempotent == self.identity

    def same_structure(self, other: "Demimonad") -> bool:
        """Literal equality of the structure matrices."""
        return (
            self.space.dim == other.space.dim
            and self.mul == other.mul
            and self.unit == other.unit
        )


@dataclass(frozen=True, eq=False)
class Algebra(Demimonad):
    """A unital associative algebra given by structure constants."""


@dataclass(frozen=True, eq=False)
class Coalgebra:
    """
    A coalgebra given by structure constants.

    Attributes:
        space: Carrier
        comul: space -> space (x) space
        counit: space -> F
    """

    space: Space
    comul: LinMap
    counit: LinMap
    name: str = ""

    def __post_init__(self) -> None:
        d = self.space.dim
        if self.comul.matrix.shape != (d * d, d):
            raise ShapeMismatch(f"Comultiplication must map {d} -> {d * d}")
        if self.counit.matrix.shape != (1, d):
            raise ShapeMismatch(f"Counit must map {d} -> 1")

    @property
    def label(self) -> str:
        return self.name or f"coalgebra[{self.space}]"

    @property
    def field(self) -> Field:
        return self.comul.field


def check_algebra(a: Demimonad) -> CheckReport:
    """Verify associativity and both unit laws."""
    report = CheckReport(subject=f"algebra {a.label}")
    t = a.identity
    report.record(
        "associativity",
        compose(a.mul, tensor(a.mul, t)),
        compose(a.mul, tensor(t, a.mul)),
    )
    report.record("left_unit", compose(a.mul, tensor(a.unit, t)), t)
    report.record("right_unit", compose(a.mul, tensor(t, a.unit)), t)
    return report


def check_coalgebra(c: Coalgebra) -> CheckReport:
    """Verify coassociativity and both counit laws."""
    report = CheckReport(subject=f"coalgebra {c.label}")
    h = identity(c.space, c.field)
    report.record(
        "coassociativity",
        compose(tensor(c.comul, h), c.comul),
        compose(tensor(h, c.comul), c.comul),
    )
    report.record("left_counit", compose(tensor(c.counit, h), c.comul), h)
    report.record("right_counit", compose(tensor(h, c.counit), c.comul), h)
    return report


def check_demimonad(d: Demimonad) -> CheckReport:
    """
    Verify the demimonad axioms.

    These are associativity, mul.(unit (x) t) = mul.(t (x) unit),
    mul.(unit (x) unit) = unit, mul.(mul (x) t).(unit (x) t (x) t) = mul,
    and idempotency of e.
    """
    report = CheckReport(subject=f"demimonad {d.label}")
    t = d.identity
    report.record(
        "associativity",
        compose(d.mul, tensor(d.mul, t)),
        compose(d.mul, tensor(t, d.mul)),
    )
    report.record(
        "unit_symmetry",
        compose(d.mul, tensor(d.unit, t)),
        compose(d.mul, tensor(t, d.unit)),
    )
    report.record("unit_square", compose(d.mul, tensor(d.unit, d.unit)), d.unit)
    report.record(
        "unit_absorption",
        compose(d.mul, tensor(d.mul, t), tensor(d.unit, t, t)),
        d.mul,
    )
    e = d.idempotent
    report.record("idempotent", compose(e, e), e)
    report.flags["strict"] = e == t
    return report


def split_demimonad(
    d: Demimonad, verify: bool = True
) -> Tuple[Algebra, LinMap, LinMap]:
    """
    Split a demimonad through the image of its idempotent.

    Args:
        d: Demimonad to split
        verify: Run check_demimonad first

    Returns:
        (algebra, iota, pi) with pi.iota = id and iota.pi = e

    Raises:
        DemimonadAxiomFailure: If d is not a demimonad or e vanishes
    """
    if verify:
        report = check_demimonad(d)
        if not report.passed:
            raise DemimonadAxiomFailure(
                f"{d.label} is not a demimonad: {report.failures[0]}", report
            )
    e = d.idempotent
    iota_matrix, pi_matrix = split_idempotent(e.matrix)
    r = iota_matrix.cols
    if r == 0:
        raise DemimonadAxiomFailure(f"The idempotent of {d.label} vanishes")
    image = Space((r,))
    iota = LinMap(image, d.space, iota_matrix)
    pi = LinMap(d.space, image, pi_matrix)
    alg = Algebra(
        space=image,
        mul=compose(pi, d.mul, tensor(iota, iota)),
        unit=compose(pi, d.unit),
        name=f"split({d.label})",
    )
    logger.debug(
        f"Split {d.label} to an algebra of dimension {r}",
        extra={"dimension": r},
    )
    return alg, iota, pi


def trivial_algebra(field: Field = RATIONAL) -> Algebra:
    """The base field as a one-dimensional algebra."""
    one = Matrix.identity(1, field)
    return Algebra(
        space=BASE,
        mul=LinMap(BASE, BASE, one),
        unit=LinMap(BASE, BASE, one),
        name="F",
    )


def algebra_from_constants(
    dim: int,
    mul: Mapping[Tuple[int, int, int], ScalarLike],
    unit: Mapping[int, ScalarLike],
    field: Field = RATIONAL,
    name: str = "",
    shape: Union[Tuple[int, ...], None] = None,
) -> Algebra:
    """
    Build an algebra from structure constants.

    Args:
        dim: Dimension
        mul: (i, j, k) -> c meaning e_i e_j contains c e_k
        unit: k -> c meaning the unit contains c e_k
        field: Scalar field
        name: Label
        shape: Optional factor shape with product dim
    """
    space = Space(shape if shape is not None else (dim,))
    if space.dim != dim:
        raise ShapeMismatch(f"Shape {space.shape} does not have dimension {dim}")
    square = space.tensor(space)
    mul_matrix = Matrix.from_entries(
        [(k, i * dim + j, c) for (i, j, k), c in mul.items()], (dim, dim * dim), field
    )
    unit_matrix = Matrix.from_entries(
        [(k, 0, c) for k, c in unit.items()], (dim, 1), field
    )
    return Algebra(
        space=space,
        mul=LinMap(square, space, mul_matrix),
        unit=LinMap(BASE, space, unit_matrix),
        name=name,
    )


def coalgebra_from_constants(
    dim: int,
    comul: Mapping[Tuple[int, int, int], ScalarLike],
    counit: Mapping[int, ScalarLike],
    field: Field = RATIONAL,
    name: str = "",
    shape: Union[Tuple[int, ...], None] = None,
) -> Coalgebra:
    """
    Build a coalgebra from structure constants.

    Args:
        comul: (i, j, k) -> c meaning Delta(e_i) contains c e_j (x) e_k
        counit: i -> c meaning epsilon(e_i) = c
    """
    space = Space(shape if shape is not None else (dim,))
    if space.dim != dim:
        raise ShapeMismatch(f"Shape {space.shape} does not have dimension {dim}")
    comul_matrix = Matrix.from_entries(
        [(j * dim + k, i, c) for (i, j, k), c in comul.items()], (dim * dim, dim), field
    )
    counit_matrix = Matrix.from_entries(
        [(0, i, c) for i, c in counit.items()], (1, dim), field
    )
    return Coalgebra(
        space=space,
        comul=LinMap(space, space.tensor(space), comul_matrix),
        counit=LinMap(space, BASE, counit_matrix),
        name=name,
    )
