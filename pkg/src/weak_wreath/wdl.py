"""
Weak distributive laws between two demimonads.

A law λ: t (x) s -> s (x) t satisfies the multiplication diagrams exactly
and the unit diagrams up to the idempotent λ̄ on s (x) t. This module
checks the axioms, builds λ̄ and the weak wreath product, handles 1-cells
between laws and their images under the wreath construction, and
recovers a law from a factorization of a demimonad.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

from weak_wreath.exactlinalg import Field
from weak_wreath.exceptions import (
    InvalidLaw,
    InvalidOneCell,
    PathsDisagree,
    PreconditionFailure,
    ShapeMismatch,
)
from weak_wreath.finvect import (
    BASE,
    Demimonad,
    LinMap,
    Space,
    compose,
    flip,
    identity,
    tensor,
)
from weak_wreath.models import CheckReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeakDistributiveLaw:
    """
    A law λ: t (x) s -> s (x) t.

    Attributes:
        t: Demimonad on the left of the domain
        s: Demimonad on the left of the codomain
        law: The 2-cell λ
        name: Label used in reports
    """

    t: Demimonad
    s: Demimonad
    law: LinMap
    name: str = ""

    def __post_init__(self) -> None:
        _check_law_shape(self.t, self.s, self.law)

    @property
    def label(self) -> str:
        t, s = self.t.label, self.s.label
        return self.name or f"{t}{s}->{s}{t}"

    @property
    def field(self) -> Field:
        return self.law.field

    @cached_property
    def bar(self) -> LinMap:
        """λ̄, with both constructions required to agree."""
        return lambda_bar(self)


def _check_law_shape(t: Demimonad, s: Demimonad, law: LinMap) -> None:
    expected = (s.space.dim * t.space.dim, t.space.dim * s.space.dim)
    if law.matrix.shape != expected:
        raise ShapeMismatch(
            f"A law {t.label}{s.label} -> {s.label}{t.label} must be a "
            f"{expected[0]}x{expected[1]} matrix, got {law.matrix.shape}"
        )


def _as_law(t: Demimonad, s: Demimonad, law: LinMap) -> LinMap:
    """λ with its domain and codomain relabeled to t (x) s and s (x) t."""
    return law.relabel(t.space.tensor(s.space), s.space.tensor(t.space))


def lambda_bar_paths(w: WeakDistributiveLaw) -> Tuple[LinMap, LinMap]:
    """
    The two composites s (x) t -> s (x) t whose common value is λ̄.

    Returns:
        (left, right) where left inserts the unit of t on the left and
        right inserts the unit of s on the right
    """
    T, S = w.t.identity, w.s.identity
    lam = _as_law(w.t, w.s, w.law)
    left = compose(
        tensor(S, w.t.mul),
        tensor(lam, T),
        tensor(w.t.unit, S, T),
    )
    right = compose(
        tensor(w.s.mul, T),
        tensor(S, lam),
        tensor(S, T, w.s.unit),
    )
    return left, right


def lambda_bar(w: WeakDistributiveLaw, path: str = "both") -> LinMap:
    """
    The idempotent λ̄ on s (x) t.

    Args:
        w: The law
        path: "left" or "right" to use a single construction, "both" to
            compute both and require them to agree

    Raises:
        PathsDisagree: If path is "both" and the constructions differ
    """
    left, right = lambda_bar_paths(w)
    if path == "left":
        return left
    if path == "right":
        return right
    if path != "both":
        raise ValueError(f"Invalid path '{path}'. Valid options: both, left, right")
    difference = left.first_difference(right)
    if difference is not None:
        raise PathsDisagree(
            f"The two constructions of the idempotent of {w.label} differ "
            f"on input {difference[0]} at output {difference[1]}"
        )
    return left


def check_wdl(t: Demimonad, s: Demimonad, law: LinMap) -> CheckReport:
    """
    Verify that λ: t (x) s -> s (x) t is a weak distributive law.

    Checks the two multiplication diagrams, the two weak unit diagrams,
    agreement of the two constructions of λ̄, its idempotency, and the
    normalization λ.(t̄ (x) s̄) = λ = (s̄ (x) t̄).λ.

    Raises:
        ShapeMismatch: If λ does not map t (x) s to s (x) t
    """
    _check_law_shape(t, s, law)
    w = WeakDistributiveLaw(t, s, law)
    report = CheckReport(subject=f"weak distributive law {w.label}")
    T, S = t.identity, s.identity
    lam = _as_law(t, s, law)

    report.record(
        "mult_t",
        compose(lam, tensor(t.mul, S)),
        compose(tensor(S, t.mul), tensor(lam, T), tensor(T, lam)),
    )
    report.record(
        "mult_s",
        compose(lam, tensor(T, s.mul)),
        compose(tensor(s.mul, T), tensor(S, lam), tensor(lam, S)),
    )
    left, right = lambda_bar_paths(w)
    report.record(
        "unit_t",
        compose(lam, tensor(t.unit, S)),
        compose(right, tensor(S, t.unit)),
    )
    report.record(
        "unit_s",
        compose(lam, tensor(T, s.unit)),
        compose(left, tensor(s.unit, T)),
    )
    paths_agree = report.record("bar_paths", left, right)
    report.record("bar_idempotent", compose(left, left), left)
    report.record(
        "normalization_domain",
        compose(lam, tensor(t.idempotent, s.idempotent)),
        lam,
    )
    report.record(
        "normalization_codomain",
        compose(tensor(s.idempotent, t.idempotent), lam),
        lam,
    )

    if paths_agree:
        rank = left.rank()
        report.values["rank_lambda_bar"] = rank
        report.flags["strict"] = left == identity(left.domain, law.field)
        report.flags["degenerate"] = rank == 0
    return report


def check_wdl_identities(w: WeakDistributiveLaw) -> CheckReport:
    """
    Identities every weak distributive law satisfies.

    These are λ̄.λ = λ, absorption of λ̄ by the product of s (x) t, the two
    λ̄-bimodule squares and the two squares relating λ to μ through a
    single inserted unit.
    """
    report = CheckReport(subject=f"derived identities of {w.label}")
    t, s = w.t, w.s
    T, S = t.identity, s.identity
    lam = _as_law(t, s, w.law)
    bar = w.bar
    mumu = tensor(s.mul, t.mul)

    report.record("bar_absorbs_law", compose(bar, lam), lam)
    report.record(
        "bar_under_product",
        compose(mumu, tensor(S, bar, T)),
        compose(bar, mumu),
    )
    left_action = compose(tensor(s.mul, T), tensor(S, lam))
    report.record("left_bimodule", compose(left_action, tensor(bar, S)), left_action)
    right_action = compose(tensor(S, t.mul), tensor(lam, T))
    report.record("right_bimodule", compose(right_action, tensor(T, bar)), right_action)
    report.record(
        "star_t",
        compose(right_action, tensor(T, s.unit, T)),
        compose(lam, tensor(T, s.unit), t.mul),
    )
    report.record(
        "star_s",
        compose(left_action, tensor(S, t.unit, S)),
        compose(lam, tensor(t.unit, S), s.mul),
    )
    return report


@dataclass(frozen=True, eq=False)
class MonadMorphism:
    """
    A 1-cell between demimonads.

    The structure map runs from the target side to the source side:
    ξ: t' (x) v -> v (x) t for source (A, t) and target (A', t').

    Attributes:
        source: Demimonad t
        target: Demimonad t'
        carrier: Space of the 1-cell v (BASE for a trivial 1-cell part)
        structure: ξ
    """

    source: Demimonad
    target: Demimonad
    carrier: Space
    structure: LinMap

    def __post_init__(self) -> None:
        v = self.carrier.dim
        expected = (v * self.source.space.dim, self.target.space.dim * v)
        if self.structure.matrix.shape != expected:
            raise ShapeMismatch(
                f"Monad morphism {self.target.label} -> {self.source.label} "
                f"needs a {expected[0]}x{expected[1]} structure map, "
                f"got {self.structure.matrix.shape}"
            )

    @property
    def label(self) -> str:
        return f"{self.source.label} => {self.target.label}"

    @cached_property
    def xi(self) -> LinMap:
        """ξ with domain t' (x) v and codomain v (x) t."""
        return self.structure.relabel(
            self.target.space.tensor(self.carrier),
            self.carrier.tensor(self.source.space),
        )


def check_monad_morphism(m: MonadMorphism) -> CheckReport:
    """Multiplication and unit laws of ξ, and its normalization."""
    report = CheckReport(subject=f"monad morphism {m.label}")
    V = identity(m.carrier, m.structure.field)
    T = m.source.identity
    T2 = m.target.identity
    xi = m.xi
    report.record(
        "mult",
        compose(xi, tensor(m.target.mul, V)),
        compose(tensor(V, m.source.mul), tensor(xi, T), tensor(T2, xi)),
    )
    report.record(
        "unit",
        compose(xi, tensor(m.target.unit, V)),
        tensor(V, m.source.unit),
    )
    report.record(
        "normalization_source",
        compose(tensor(V, m.source.idempotent), xi),
        xi,
    )
    report.record(
        "normalization_target",
        compose(xi, tensor(m.target.idempotent, V)),
        xi,
    )
    return report


def compose_monad_morphisms(
    outer: MonadMorphism, inner: MonadMorphism
) -> MonadMorphism:
    """
    outer after inner.

    inner runs from (A, t) to (A', t') and outer from (A', t') to
    (A'', t''); the composite has carrier v' (x) v and structure
    (v' (x) ξ).(ξ' (x) v).
    """
    if outer.source.space.dim != inner.target.space.dim:
        raise ShapeMismatch(
            f"Cannot compose {outer.label} after {inner.label}: middle monads differ"
        )
    field = inner.structure.field
    V = identity(inner.carrier, field)
    V2 = identity(outer.carrier, field)
    structure = compose(tensor(V2, inner.xi), tensor(outer.xi, V))
    return MonadMorphism(
        source=inner.source,
        target=outer.target,
        carrier=outer.carrier.tensor(inner.carrier),
        structure=structure,
    )


def weak_wreath(
    w: WeakDistributiveLaw, validate: bool = True
) -> Tuple[Demimonad, MonadMorphism, MonadMorphism]:
    """
    The weak wreath product on s (x) t and its projections onto t and s.

    Args:
        w: The law
        validate: Run check_wdl first

    Returns:
        (d, proj_t, proj_s); d has μ = (μ (x) μ).(s (x) λ (x) t) and
        η = λ.(η (x) η), and the projections have structure maps
        λ.(t (x) η) and λ.(η (x) s)

    Raises:
        InvalidLaw: If validation fails
    """
    if validate:
        report = check_wdl(w.t, w.s, w.law)
        if not report.passed:
            raise InvalidLaw(
                f"{w.label} is not a weak distributive law: {report.failures[0]}",
                report,
            )
    t, s = w.t, w.s
    T, S = t.identity, s.identity
    lam = _as_law(t, s, w.law)
    space = s.space.tensor(t.space)
    d = Demimonad(
        space=space,
        mul=compose(tensor(s.mul, t.mul), tensor(S, lam, T)),
        unit=compose(lam, tensor(t.unit, s.unit)),
        name=f"{s.label}#{t.label}",
    )
    proj_t = MonadMorphism(
        source=d,
        target=t,
        carrier=BASE,
        structure=compose(lam, tensor(T, s.unit)),
    )
    proj_s = MonadMorphism(
        source=d,
        target=s,
        carrier=BASE,
        structure=compose(lam, tensor(t.unit, S)),
    )
    logger.debug(
        f"Built weak wreath {d.label} on {space}",
        extra={"dimension": space.dim},
    )
    return d, proj_t, proj_s


@dataclass(frozen=True, eq=False)
class WdlOneCell:
    """
    A 1-cell between weak distributive laws.

    Attributes:
        source: Law λ: ts -> st
        target: Law λ': t's' -> s't'
        carrier: Space v
        xi_t: t' (x) v -> v (x) t
        xi_s: s' (x) v -> v (x) s
    """

    source: WeakDistributiveLaw
    target: WeakDistributiveLaw
    carrier: Space
    xi_t: LinMap
    xi_s: LinMap

    @cached_property
    def t_part(self) -> MonadMorphism:
        return MonadMorphism(self.source.t, self.target.t, self.carrier, self.xi_t)

    @cached_property
    def s_part(self) -> MonadMorphism:
        return MonadMorphism(self.source.s, self.target.s, self.carrier, self.xi_s)


def check_wdl_one_cell(c: WdlOneCell) -> CheckReport:
    """Both monad morphism laws and compatibility with the two laws."""
    report = CheckReport(subject=f"1-cell {c.source.label} => {c.target.label}")
    report.extend(check_monad_morphism(c.t_part), prefix="xi_t")
    report.extend(check_monad_morphism(c.s_part), prefix="xi_s")

    w, w2 = c.source, c.target
    V = identity(c.carrier, w.field)
    T, S = w.t.identity, w.s.identity
    T2, S2 = w2.t.identity, w2.s.identity
    xi_t, xi_s = c.t_part.xi, c.s_part.xi
    lam = _as_law(w.t, w.s, w.law)
    lam2 = _as_law(w2.t, w2.s, w2.law)
    report.record(
        "law_compatibility",
        compose(tensor(V, lam), tensor(xi_t, S), tensor(T2, xi_s)),
        compose(
            tensor(V, w.bar),
            tensor(xi_s, T),
            tensor(S2, xi_t),
            tensor(lam2, V),
        ),
    )
    return report


def wreath_one_cell(c: WdlOneCell, validate: bool = True) -> MonadMorphism:
    """
    The image of a 1-cell under the weak wreath construction.

    The structure map is (v (x) λ̄).(ζ (x) t).(s' (x) ξ).

    Raises:
        InvalidOneCell: If validation fails
    """
    if validate:
        report = check_wdl_one_cell(c)
        if not report.passed:
            raise InvalidOneCell(f"Not a 1-cell: {report.failures[0]}", report)
    w, w2 = c.source, c.target
    V = identity(c.carrier, w.field)
    structure = compose(
        tensor(V, w.bar),
        tensor(c.s_part.xi, w.t.identity),
        tensor(w2.s.identity, c.t_part.xi),
    )
    source, _, _ = weak_wreath(w, validate=False)
    target, _, _ = weak_wreath(w2, validate=False)
    return MonadMorphism(source, target, c.carrier, structure)


def compose_one_cells(outer: WdlOneCell, inner: WdlOneCell) -> WdlOneCell:
    """outer after inner, with carrier v' (x) v."""
    t_part = compose_monad_morphisms(outer.t_part, inner.t_part)
    s_part = compose_monad_morphisms(outer.s_part, inner.s_part)
    return WdlOneCell(
        source=inner.source,
        target=outer.target,
        carrier=t_part.carrier,
        xi_t=t_part.structure,
        xi_s=s_part.structure,
    )


def identity_one_cell(w: WeakDistributiveLaw) -> WdlOneCell:
    """The identity 1-cell: trivial carrier, structure maps t̄ and s̄."""
    return WdlOneCell(
        source=w,
        target=w,
        carrier=BASE,
        xi_t=w.t.idempotent,
        xi_s=w.s.idempotent,
    )


def flip_one_cell(w: WeakDistributiveLaw, carrier: Space) -> WdlOneCell:
    """The endo-1-cell on w with carrier v and structure maps σ.(t̄ (x) v)."""
    field = w.field
    V = identity(carrier, field)
    return WdlOneCell(
        source=w,
        target=w,
        carrier=carrier,
        xi_t=compose(flip(w.t.space, carrier, field), tensor(w.t.idempotent, V)),
        xi_s=compose(flip(w.s.space, carrier, field), tensor(w.s.idempotent, V)),
    )


def _check_factorization_conditions(
    r: Demimonad,
    t: Demimonad,
    s: Demimonad,
    alpha: LinMap,
    beta: LinMap,
    iota: LinMap,
) -> Tuple[CheckReport, CheckReport]:
    """Reports for condition (a) and condition (b)."""
    alpha_m = MonadMorphism(source=r, target=t, carrier=BASE, structure=alpha)
    beta_m = MonadMorphism(source=r, target=s, carrier=BASE, structure=beta)
    report_a = CheckReport(subject=f"factorization of {r.label}: monad morphisms")
    report_a.extend(check_monad_morphism(alpha_m), prefix="alpha")
    report_a.extend(check_monad_morphism(beta_m), prefix="beta")

    R, T, S = r.identity, t.identity, s.identity
    alpha_map = alpha_m.xi.relabel(t.space, r.space)
    beta_map = beta_m.xi.relabel(s.space, r.space)
    iota_map = iota.relabel(r.space, s.space.tensor(t.space))
    pi = compose(r.mul, tensor(beta_map, alpha_map))

    report_b = CheckReport(subject=f"factorization of {r.label}: bimodule section")
    report_b.record("section", compose(pi, iota_map), r.idempotent)
    report_b.record(
        "left_action",
        compose(iota_map, r.mul, tensor(beta_map, R)),
        compose(tensor(s.mul, T), tensor(S, iota_map)),
    )
    report_b.record(
        "right_action",
        compose(iota_map, r.mul, tensor(R, alpha_map)),
        compose(tensor(S, t.mul), tensor(iota_map, T)),
    )
    return report_a, report_b


def check_binary_factorization(
    r: Demimonad,
    t: Demimonad,
    s: Demimonad,
    alpha: LinMap,
    beta: LinMap,
    iota: LinMap,
) -> CheckReport:
    """
    Verify that (α, β, ι) factorizes r, and that the recovered law rebuilds r.

    Conditions (a) and (b) are reported under the prefixes "a" and "b";
    when both hold the report also covers λ̄ = ι.π and the isomorphism
    between r and the weak wreath product of the recovered law.
    """
    report_a, report_b = _check_factorization_conditions(r, t, s, alpha, beta, iota)
    report = CheckReport(subject=f"binary factorization of {r.label}")
    report.extend(report_a, prefix="a")
    report.extend(report_b, prefix="b")
    if not report.passed:
        return report

    alpha_map = alpha.relabel(t.space, r.space)
    beta_map = beta.relabel(s.space, r.space)
    iota_map = iota.relabel(r.space, s.space.tensor(t.space))
    pi = compose(r.mul, tensor(beta_map, alpha_map))
    w = WeakDistributiveLaw(t, s, compose(iota_map, r.mul, tensor(alpha_map, beta_map)))
    wdl_report = check_wdl(t, s, w.law)
    report.extend(wdl_report, prefix="law")
    if not wdl_report.passed:
        return report

    d, _, _ = weak_wreath(w, validate=False)
    report.record("bar_is_iota_pi", w.bar, compose(iota_map, pi))
    report.record("pi_mul", compose(pi, d.mul), compose(r.mul, tensor(pi, pi)))
    report.record(
        "iota_mul",
        compose(iota_map, r.mul),
        compose(d.mul, tensor(iota_map, iota_map)),
    )
    report.record("pi_unit", compose(pi, d.unit), r.unit)
    report.record("iota_unit", compose(iota_map, r.unit), d.unit)

    if r.is_strict() and compose(iota_map, pi) != identity(d.space, r.field):
        logger.warning(
            f"{r.label} is strict but its section does not split onto s (x) t",
            extra={"check": "strict_mismatch", "status": "warn"},
        )
        report.flags["strict_mismatch"] = True
    return report


def binary_factorize(
    r: Demimonad,
    t: Demimonad,
    s: Demimonad,
    alpha: LinMap,
    beta: LinMap,
    iota: LinMap,
) -> WeakDistributiveLaw:
    """
    Recover the weak distributive law λ = ι.μ.(α (x) β) from a factorization.

    Args:
        r: Demimonad to factorize
        t, s: The factors
        alpha: Structure map t -> r of a monad morphism r => t
        beta: Structure map s -> r of a monad morphism r => s
        iota: Bimodule section r -> s (x) t of π = μ.(β (x) α)

    Raises:
        PreconditionFailure: If condition (a) or (b) is violated
        InvalidLaw: If the recovered law fails its axioms
    """
    report = check_binary_factorization(r, t, s, alpha, beta, iota)
    for condition in ("a", "b"):
        if report.failed(condition):
            failure = next(
                f for f in report.failures if f.check.startswith(f"{condition}.")
            )
            raise PreconditionFailure(condition, str(failure), report)
    if not report.passed:
        raise InvalidLaw(
            f"Recovered law does not factorize {r.label}: {report.failures[0]}",
            report,
        )

    alpha_map = alpha.relabel(t.space, r.space)
    beta_map = beta.relabel(s.space, r.space)
    iota_map = iota.relabel(r.space, s.space.tensor(t.space))
    return WeakDistributiveLaw(
        t,
        s,
        compose(iota_map, r.mul, tensor(alpha_map, beta_map)),
        name=f"factor({r.label})",
    )

