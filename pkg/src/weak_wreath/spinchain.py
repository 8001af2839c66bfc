"""
Spin chains built from a finite dimensional weak bialgebra.

Sites 0..n alternate between H and its dual Ĥ. Neighbouring sites are
related by the canonical laws λ and λ̂, distant ones by the symmetry. The
observable algebra on the interval is the iterated weak wreath product of
the chain, split along its idempotent.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

from weak_wreath.exceptions import (
    AxiomFailure,
    IndexOutOfRange,
    MismatchWithGeneralFormula,
)
from weak_wreath.finvect import (
    BASE,
    Algebra,
    LinMap,
    check_algebra,
    compose,
    split_demimonad,
    tensor,
)
from weak_wreath.wdl import MonadMorphism, lambda_bar
from weak_wreath.wdln import (
    WdlNObject,
    iterated_idempotent,
    iterated_wreath,
    normalized_flip,
    restrict,
    validate_object,
)
from weak_wreath.weakbialgebra import (
    Pairing,
    WeakBialgebra,
    canonical_lambda,
    canonical_lambda_hat,
    dual,
)

logger = logging.getLogger(__name__)

CONVENTIONS = ("H-even", "dual-even")


@dataclass(frozen=True, eq=False)
class SpinChainSpec:
    """
    A chain on sites 0..n.

    Attributes:
        h: The weak bialgebra
        n: Index of the last site
        convention: "H-even" puts H on even sites, "dual-even" on odd ones
    """

    h: WeakBialgebra
    n: int
    convention: str = "H-even"

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Invalid chain length n={self.n}. Must be non-negative")
        if self.convention not in CONVENTIONS:
            raise ValueError(
                f"Invalid convention '{self.convention}'. "
                f"Valid options: {', '.join(CONVENTIONS)}"
            )

    def site_is_h(self, i: int) -> bool:
        even = i % 2 == 0
        return even if self.convention == "H-even" else not even

    @cached_property
    def dual_pair(self) -> Tuple[WeakBialgebra, Pairing]:
        return dual(self.h)

    @cached_property
    def laws(self) -> Tuple[LinMap, LinMap]:
        """(λ: H (x) Ĥ -> Ĥ (x) H, λ̂: Ĥ (x) H -> H (x) Ĥ)."""
        hhat, ev = self.dual_pair
        return (
            canonical_lambda(self.h, hhat, ev),
            canonical_lambda_hat(self.h, hhat, ev),
        )

    def with_n(self, n: int) -> "SpinChainSpec":
        return SpinChainSpec(self.h, n, self.convention)

    @property
    def label(self) -> str:
        return f"{self.h.label}:{self.convention}:n={self.n}"


def build_spin_chain(spec: SpinChainSpec, validate: bool = True) -> WdlNObject:
    """
    The chain object: H and Ĥ alternating, λ or λ̂ on neighbours, σ elsewhere.

    Raises:
        AxiomFailure: If the bialgebra or the resulting object is invalid
    """
    hhat, _ = spec.dual_pair
    lam, lam_hat = spec.laws
    monads: List[Algebra] = [
        spec.h.algebra if spec.site_is_h(i) else hhat.algebra for i in range(spec.n + 1)
    ]
    laws: Dict[Tuple[int, int], LinMap] = {}
    for i in range(spec.n + 1):
        for j in range(i + 1, spec.n + 1):
            if j == i + 1:
                laws[(i, j)] = lam_hat if spec.site_is_h(i) else lam
            else:
                laws[(i, j)] = normalized_flip(monads[i], monads[j])
    o = WdlNObject(tuple(monads), laws, name=f"chain({spec.label})")
    if validate:
        report = validate_object(o)
        if not report.passed:
            raise AxiomFailure(
                f"Chain {spec.label} is not a valid object: {report.failures[0]}",
                report,
            )
    return o


def _layer(o: WdlNObject, starts: List[int], bars: Dict[int, LinMap]) -> LinMap:
    """λ̄ blocks on the pairs (p, p + 1) for p in starts, identities elsewhere."""
    parts = []
    p = 0
    while p <= o.n:
        if p in starts and p + 1 <= o.n:
            parts.append(bars[p])
            p += 2
        else:
            parts.append(o.monads[p].identity)
            p += 1
    return tensor(*parts)


def explicit_idempotent(spec: SpinChainSpec, path: str = "both") -> LinMap:
    """
    The closed formula for the chain idempotent.

    The λ̄ blocks on the pairs starting at even sites are applied first,
    then those on the pairs starting at odd sites.

    Args:
        spec: The chain
        path: Construction of each λ̄ block, passed to lambda_bar
    """
    o = build_spin_chain(spec, validate=False)
    if spec.n == 0:
        return o.monads[0].idempotent
    bars = {i: lambda_bar(o.law(i, i + 1), path=path) for i in range(spec.n)}
    even = _layer(o, list(range(0, spec.n, 2)), bars)
    odd = _layer(o, list(range(1, spec.n, 2)), bars)
    return compose(odd, even).relabel(o.space(), o.space())


def explicit_chain_idempotent(spec: SpinChainSpec) -> LinMap:
    """
    The closed formula, checked against the general iterated idempotent.

    Raises:
        MismatchWithGeneralFormula: If the two disagree
    """
    explicit = explicit_idempotent(spec)
    general = iterated_idempotent(build_spin_chain(spec, validate=False))
    difference = explicit.first_difference(general)
    if difference is not None:
        raise MismatchWithGeneralFormula(
            f"Closed formula for {spec.label} differs from the iterated idempotent "
            f"on input {difference[0]} at output {difference[1]}"
        )
    return explicit


def oracle_dimension(spec: SpinChainSpec) -> int:
    """Rank of the closed formula built from single-path λ̄ blocks."""
    rank = explicit_idempotent(spec, path="left").rank()
    logger.debug(
        f"Oracle dimension of {spec.label} is {rank}",
        extra={"dimension": rank},
    )
    return rank


def observable_algebra(spec: SpinChainSpec) -> Tuple[Algebra, int]:
    """
    The algebra of observables on sites 0..n, with its dimension.

    Raises:
        AxiomFailure: If the split algebra fails the algebra axioms
    """
    o = build_spin_chain(spec, validate=False)
    w = iterated_wreath(o)
    alg, _, _ = split_demimonad(w, verify=False)
    report = check_algebra(alg)
    if not report.passed:
        raise AxiomFailure(
            f"Observable algebra of {spec.label} is not an algebra: "
            f"{report.failures[0]}",
            report,
        )
    dim = alg.space.dim
    logger.debug(
        f"Observable algebra of {spec.label} has dimension {dim}",
        extra={"dimension": dim},
    )
    return alg, dim


def locality_embedding(spec: SpinChainSpec, m: int) -> MonadMorphism:
    """
    The monad morphism from the chain on sites 0..m into the chain on 0..n.

    Its structure map inserts the units of sites m+1..n and applies λ̄_{0..n}.

    Raises:
        IndexOutOfRange: Unless 0 <= m < n
    """
    if not (0 <= m < spec.n):
        raise IndexOutOfRange(f"Cannot embed sites 0..{m} into 0..{spec.n}")
    o = build_spin_chain(spec, validate=False)
    whole = iterated_wreath(o)
    part = iterated_wreath(restrict(o, range(m + 1)))
    insertion = tensor(
        o.ident(range(m + 1)), *(o.monads[i].unit for i in range(m + 1, spec.n + 1))
    )
    structure = compose(iterated_idempotent(o), insertion)
    return MonadMorphism(source=whole, target=part, carrier=BASE, structure=structure)
