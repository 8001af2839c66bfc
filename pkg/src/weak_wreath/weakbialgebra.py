"""
Weak bialgebras, their duals, and the canonical laws between them.

A weak bialgebra H carries an algebra and a coalgebra structure on one
space, with a multiplicative comultiplication but weakened unit and
counit compatibilities. The dual Ĥ is taken in the dual basis, so every
structure map of Ĥ is a literal transpose and the evaluation pairing
Ĥ (x) H -> F is the identity matrix reshaped.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Sequence, Tuple

from weak_wreath.exactlinalg import RATIONAL, Field, Matrix
from weak_wreath.exceptions import AxiomFailure, NotAGroup
from weak_wreath.finvect import (
    BASE,
    Algebra,
    Coalgebra,
    LinMap,
    Space,
    check_algebra,
    check_coalgebra,
    compose,
    flip,
    identity,
    tensor,
)
from weak_wreath.models import CheckReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeakBialgebra:
    """
    A weak bialgebra given by its four structure maps.

    Attributes:
        space: Carrier H
        mul: H (x) H -> H
        unit: F -> H
        comul: H -> H (x) H
        counit: H -> F
        name: Label used in reports
    """

    space: Space
    mul: LinMap
    unit: LinMap
    comul: LinMap
    counit: LinMap
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or f"bialgebra[{self.space}]"

    @property
    def field(self) -> Field:
        return self.mul.field

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def algebra(self) -> Algebra:
        return Algebra(self.space, self.mul, self.unit, name=self.label)

    @cached_property
    def coalgebra(self) -> Coalgebra:
        return Coalgebra(self.space, self.comul, self.counit, name=self.label)

    @cached_property
    def identity(self) -> LinMap:
        return identity(self.space, self.field)


@dataclass(frozen=True, eq=False)
class Pairing:
    """Evaluation map Ĥ (x) H -> F."""

    ev: LinMap

    def reshaped(self) -> Matrix:
        """The pairing as a dim x dim matrix M[i][j] = ev(e^i (x) e_j)."""
        d = math.isqrt(self.ev.domain.dim)
        entries = [
            (col // d, col % d, value)
            for col, value in self.ev.matrix.dod.get(0, {}).items()
        ]
        return Matrix.from_entries(entries, (d, d), self.ev.field)

    def is_nondegenerate(self) -> bool:
        matrix = self.reshaped()
        return matrix.rank() == matrix.rows


def check_weak_bialgebra(h: WeakBialgebra) -> CheckReport:
    """
    Verify the weak bialgebra axioms entrywise.

    The report includes the algebra and coalgebra axioms, the
    multiplicativity of the comultiplication, both weak unit and both weak
    counit identities, and the two strictness flags.
    """
    report = CheckReport(subject=f"weak bialgebra {h.label}")
    report.extend(check_algebra(h.algebra), prefix="algebra")
    report.extend(check_coalgebra(h.coalgebra), prefix="coalgebra")

    H = h.identity
    sigma = flip(h.space, h.space, h.field)
    mul, unit, comul, counit = h.mul, h.unit, h.comul, h.counit

    report.record(
        "multiplicativity",
        compose(comul, mul),
        compose(tensor(mul, mul), tensor(H, sigma, H), tensor(comul, comul)),
    )

    double_unit = compose(tensor(comul, H), comul, unit)
    units = tensor(comul, comul) @ tensor(unit, unit)
    report.record(
        "weak_unit_left",
        double_unit,
        compose(tensor(H, mul, H), units),
    )
    report.record(
        "weak_unit_right",
        double_unit,
        compose(tensor(H, mul, H), tensor(H, sigma, H), units),
    )

    triple_counit = compose(counit, mul, tensor(mul, H))
    counits = tensor(counit, counit) @ tensor(mul, mul)
    report.record(
        "weak_counit_left",
        triple_counit,
        compose(counits, tensor(H, comul, H)),
    )
    report.record(
        "weak_counit_right",
        triple_counit,
        compose(counits, tensor(H, sigma, H), tensor(H, comul, H)),
    )

    report.flags["strict_unit"] = compose(comul, unit) == tensor(unit, unit)
    report.flags["strict_counit"] = compose(counit, mul) == tensor(counit, counit)
    report.flags["strict"] = (
        report.flags["strict_unit"] and report.flags["strict_counit"]
    )
    report.values["dimension"] = h.dim
    logger.debug(
        f"Checked weak bialgebra {h.label}: {report}",
        extra={"dimension": h.dim, "strict": report.flags["strict"]},
    )
    return report


def evaluation(space: Space, field: Field = RATIONAL) -> Pairing:
    """Dual-basis evaluation Ĥ (x) H -> F."""
    d = space.dim
    matrix = Matrix.from_entries(
        [(0, i * d + i, 1) for i in range(d)], (1, d * d), field
    )
    return Pairing(LinMap(space.tensor(space), BASE, matrix))


def dual(h: WeakBialgebra, validate: bool = True) -> Tuple[WeakBialgebra, Pairing]:
    """
    The dual weak bialgebra and its evaluation pairing.

    The product of Ĥ is the transpose of the coproduct of H, its unit the
    transpose of the counit, and so on.

    Args:
        h: Weak bialgebra
        validate: Check h and the result, raising on failure

    Raises:
        AxiomFailure: If h or its dual fails the axioms
    """
    if validate:
        report = check_weak_bialgebra(h)
        if not report.passed:
            raise AxiomFailure(
                f"{h.label} is not a weak bialgebra: {report.failures[0]}", report
            )
    space = h.space
    hhat = WeakBialgebra(
        space=space,
        mul=h.comul.transpose(),
        unit=h.counit.transpose(),
        comul=h.mul.transpose(),
        counit=h.unit.transpose(),
        name=f"dual({h.label})",
    )
    if validate:
        report = check_weak_bialgebra(hhat)
        if not report.passed:
            raise AxiomFailure(
                f"{hhat.label} is not a weak bialgebra: {report.failures[0]}", report
            )
    return hhat, evaluation(space, h.field)


def check_dual_pair(h: WeakBialgebra, hhat: WeakBialgebra, ev: Pairing) -> CheckReport:
    """Verify the four diagrams defining Ĥ through the pairing."""
    report = CheckReport(subject=f"dual pair {hhat.label} / {h.label}")
    H, Hh = h.identity, hhat.identity
    e = ev.ev
    report.record(
        "product_of_arguments",
        compose(e, tensor(Hh, h.mul), tensor(Hh, flip(h.space, h.space, h.field))),
        compose(e, tensor(Hh, e, H), tensor(hhat.comul, H, H)),
    )
    report.record("unit_argument", compose(e, tensor(Hh, h.unit)), hhat.counit)
    report.record(
        "product_of_functionals",
        compose(e, tensor(hhat.mul, H)),
        compose(
            e,
            tensor(Hh, e, H),
            tensor(Hh, Hh, h.comul),
            tensor(flip(hhat.space, hhat.space, h.field), H),
        ),
    )
    report.record("unit_functional", compose(e, tensor(hhat.unit, H)), h.counit)
    report.record_result(
        "nondegenerate", ev.is_nondegenerate(), "pairing matrix is singular"
    )
    return report


def double_dual_map(h: WeakBialgebra, ev: Pairing) -> LinMap:
    """
    Canonical map H -> Ĥ^ sending x to evaluation at x.

    In the basis of Ĥ^ dual to the basis of Ĥ, column j is the list of
    pairings ev(e^i (x) e_j).
    """
    return LinMap(h.space, h.space, ev.reshaped())


def check_double_dual(h: WeakBialgebra) -> CheckReport:
    """Verify that the canonical map H -> Ĥ^ intertwines all structure maps."""
    hhat, ev = dual(h, validate=False)
    hh, _ = dual(hhat, validate=False)
    j = double_dual_map(h, ev)
    report = CheckReport(subject=f"double dual of {h.label}")
    report.record("mul", compose(j, h.mul), compose(hh.mul, tensor(j, j)))
    report.record("unit", compose(j, h.unit), hh.unit)
    report.record("comul", compose(tensor(j, j), h.comul), compose(hh.comul, j))
    report.record("counit", h.counit, compose(hh.counit, j))
    report.record_result("invertible", j.rank() == h.dim, "canonical map is singular")
    return report


def eps_bar_s(h: WeakBialgebra) -> LinMap:
    """The idempotent (H (x) ε).(H (x) μ).(Δ (x) H).(η (x) H) on H."""
    H = h.identity
    return compose(
        tensor(H, h.counit),
        tensor(H, h.mul),
        tensor(h.comul, H),
        tensor(h.unit, H),
    )


def check_source_counit(h: WeakBialgebra) -> CheckReport:
    """Idempotency of ε̄ₛ and the two identities relating it to μ and Δ."""
    report = CheckReport(subject=f"source counit of {h.label}")
    H = h.identity
    bar = eps_bar_s(h)
    report.record("idempotent", compose(bar, bar), bar)
    report.record(
        "counit_side",
        compose(tensor(H, h.counit), tensor(H, h.mul), tensor(h.comul, H)),
        compose(h.mul, tensor(H, bar)),
    )
    report.record(
        "unit_side",
        compose(tensor(H, h.mul), tensor(h.comul, H), tensor(h.unit, H)),
        compose(tensor(bar, H), h.comul),
    )
    report.flags["is_unit_counit"] = bar == compose(h.unit, h.counit)
    return report


def left_action_xi(h: WeakBialgebra, hhat: WeakBialgebra, ev: Pairing) -> LinMap:
    """ξ = (Ĥ (x) ev).(Δ̂ (x) H): Ĥ (x) H -> Ĥ."""
    return compose(tensor(hhat.identity, ev.ev), tensor(hhat.comul, h.identity))


def right_action_zeta(h: WeakBialgebra, hhat: WeakBialgebra, ev: Pairing) -> LinMap:
    """ζ = (ev (x) H).(Ĥ (x) Δ): Ĥ (x) H -> H."""
    return compose(tensor(ev.ev, h.identity), tensor(hhat.identity, h.comul))


def check_action_laws(
    h: WeakBialgebra, hhat: WeakBialgebra, ev: Pairing
) -> CheckReport:
    """Associativity and unitality of the actions ξ and ζ."""
    report = CheckReport(subject=f"actions of {hhat.label} / {h.label}")
    H, Hh = h.identity, hhat.identity
    xi = left_action_xi(h, hhat, ev)
    zeta = right_action_zeta(h, hhat, ev)
    report.record(
        "xi_associative",
        compose(xi, tensor(xi, H)),
        compose(xi, tensor(Hh, h.mul), tensor(Hh, flip(h.space, h.space, h.field))),
    )
    report.record("xi_unital", compose(xi, tensor(Hh, h.unit)), Hh)
    report.record(
        "zeta_associative",
        compose(zeta, tensor(Hh, zeta)),
        compose(
            zeta,
            tensor(hhat.mul, H),
            tensor(flip(hhat.space, hhat.space, h.field), H),
        ),
    )
    report.record("zeta_unital", compose(zeta, tensor(hhat.unit, H)), H)
    return report


def canonical_lambda(h: WeakBialgebra, hhat: WeakBialgebra, ev: Pairing) -> LinMap:
    """λ = (Ĥ (x) ev (x) H).(Δ̂ (x) Δ).σ: H (x) Ĥ -> Ĥ (x) H."""
    return compose(
        tensor(hhat.identity, ev.ev, h.identity),
        tensor(hhat.comul, h.comul),
        flip(h.space, hhat.space, h.field),
    )


def canonical_lambda_hat(h: WeakBialgebra, hhat: WeakBialgebra, ev: Pairing) -> LinMap:
    """
    λ̂: Ĥ (x) H -> H (x) Ĥ.

    λ̂ = (H (x) ev (x) Ĥ).(H (x) σ (x) Ĥ).(Δ (x) Δ̂).σ
    """
    H, Hh = h.identity, hhat.identity
    return compose(
        tensor(H, ev.ev, Hh),
        tensor(H, flip(h.space, hhat.space, h.field), Hh),
        tensor(h.comul, hhat.comul),
        flip(hhat.space, h.space, h.field),
    )


def lambda_via_actions(
    h: WeakBialgebra, hhat: WeakBialgebra, ev: Pairing
) -> Tuple[LinMap, LinMap]:
    """λ rebuilt as (ξ (x) H).(Ĥ (x) Δ).σ and as (Ĥ (x) ζ).(Δ̂ (x) H).σ."""
    H, Hh = h.identity, hhat.identity
    sigma = flip(h.space, hhat.space, h.field)
    xi = left_action_xi(h, hhat, ev)
    zeta = right_action_zeta(h, hhat, ev)
    via_xi = compose(tensor(xi, H), tensor(Hh, h.comul), sigma)
    via_zeta = compose(tensor(Hh, zeta), tensor(hhat.comul, H), sigma)
    return via_xi, via_zeta


# example generators


def _validate_group_table(table: Sequence[Sequence[int]]) -> int:
    """Return the index of the identity element, or raise NotAGroup."""
    order = len(table)
    if order == 0:
        raise NotAGroup("Empty multiplication table")
    if any(len(row) != order for row in table):
        raise NotAGroup("Multiplication table is not square")
    if any(not (0 <= x < order) for row in table for x in row):
        raise NotAGroup("Multiplication table has entries outside the group")
    for a, b, c in itertools.product(range(order), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAGroup(f"Not associative at ({a}, {b}, {c})")
    units = [
        e
        for e in range(order)
        if all(table[e][x] == x == table[x][e] for x in range(order))
    ]
    if not units:
        raise NotAGroup("No identity element")
    e = units[0]
    for a in range(order):
        if e not in table[a]:
            raise NotAGroup(f"Element {a} has no inverse")
    return e


def group_algebra(
    table: Sequence[Sequence[int]], field: Field = RATIONAL, name: str = ""
) -> WeakBialgebra:
    """
    The group algebra F[G] with Δg = g (x) g and ε(g) = 1.

    Args:
        table: table[a][b] is the index of the product ab

    Raises:
        NotAGroup: If the table is not a group table
    """
    e = _validate_group_table(table)
    order = len(table)
    space = Space((order,))
    square = space.tensor(space)
    mul = Matrix.from_entries(
        [(table[a][b], a * order + b, 1) for a in range(order) for b in range(order)],
        (order, order * order),
        field,
    )
    comul = Matrix.from_entries(
        [(g * order + g, g, 1) for g in range(order)], (order * order, order), field
    )
    counit = Matrix.from_entries([(0, g, 1) for g in range(order)], (1, order), field)
    return WeakBialgebra(
        space=space,
        mul=LinMap(square, space, mul),
        unit=LinMap(BASE, space, Matrix.from_entries([(e, 0, 1)], (order, 1), field)),
        comul=LinMap(space, square, comul),
        counit=LinMap(space, BASE, counit),
        name=name or f"F[G{order}]",
    )


def cyclic_group_table(k: int) -> List[List[int]]:
    return [[(a + b) % k for b in range(k)] for a in range(k)]


def symmetric_group_table(m: int) -> List[List[int]]:
    """Table of the symmetric group on m letters; (ab)(x) = a(b(x))."""
    elements = list(itertools.permutations(range(m)))
    index = {p: i for i, p in enumerate(elements)}
    return [
        [index[tuple(a[b[x]] for x in range(m))] for b in elements] for a in elements
    ]


def pair_groupoid_algebra(k: int, field: Field = RATIONAL) -> WeakBialgebra:
    """
    The k x k matrix algebra with Δe_ij = e_ij (x) e_ij and ε(e_ij) = 1.

    Basis element e_ij has index i*k + j.
    """
    if k < 1:
        raise ValueError(f"Invalid pair groupoid size {k}. Must be at least 1")
    d = k * k
    space = Space((d,))
    square = space.tensor(space)
    mul = Matrix.from_entries(
        [
            (i * k + l, (i * k + j) * d + (j * k + l), 1)
            for i in range(k)
            for j in range(k)
            for l in range(k)
        ],
        (d, d * d),
        field,
    )
    unit = Matrix.from_entries([(i * k + i, 0, 1) for i in range(k)], (d, 1), field)
    comul = Matrix.from_entries(
        [(x * d + x, x, 1) for x in range(d)], (d * d, d), field
    )
    counit = Matrix.from_entries([(0, x, 1) for x in range(d)], (1, d), field)
    return WeakBialgebra(
        space=space,
        mul=LinMap(square, space, mul),
        unit=LinMap(BASE, space, unit),
        comul=LinMap(space, square, comul),
        counit=LinMap(space, BASE, counit),
        name=f"M{k}",
    )


_BUILTINS: Dict[str, Callable[[Field], WeakBialgebra]] = {
    "trivial": lambda f: group_algebra(cyclic_group_table(1), f, name="F"),
    "z2": lambda f: group_algebra(cyclic_group_table(2), f, name="F[Z2]"),
    "z3": lambda f: group_algebra(cyclic_group_table(3), f, name="F[Z3]"),
    "s3": lambda f: group_algebra(symmetric_group_table(3), f, name="F[S3]"),
    "m1": lambda f: pair_groupoid_algebra(1, f),
    "m2": lambda f: pair_groupoid_algebra(2, f),
    "m3": lambda f: pair_groupoid_algebra(3, f),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_bialgebra(name: str, field: Field = RATIONAL) -> WeakBialgebra:
    """
    Look up an example weak bialgebra by name.

    Raises:
        ValueError: If the name is unknown
    """
    try:
        factory = _BUILTINS[name.lower()]
    except KeyError:
        raise ValueError(
            f"Invalid bialgebra '{name}'. Valid options: {', '.join(BUILTIN_NAMES)}"
        )
    return factory(field)
