"""
Families of demimonads related pairwise by weak distributive laws.

An object holds monads s_0, ..., s_n and laws λ_ij: s_j (x) s_i -> s_i (x) s_j
for i < j, subject to the Yang-Baxter relation on every triple. The
functors C_k fuse two neighbouring monads into their weak wreath product;
any order of fusing them all gives the same demimonad on
s_0 (x) ... (x) s_n, the iterated weak wreath product. The monad cube and
the n-ary factorization checks live here too.
"""

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from weak_wreath.exactlinalg import Field
from weak_wreath.exceptions import (
    IndexOutOfRange,
    InvalidOneCell,
    PathsDisagree,
    ShapeMismatch,
)
from weak_wreath.finvect import (
    BASE,
    Demimonad,
    LinMap,
    Space,
    check_demimonad,
    compose,
    flip,
    identity,
    tensor,
    tensor_spaces,
    trivial_algebra,
)
from weak_wreath.models import CheckReport
from weak_wreath.wdl import (
    MonadMorphism,
    WeakDistributiveLaw,
    WdlOneCell,
    check_monad_morphism,
    check_wdl,
    check_wdl_one_cell,
    compose_monad_morphisms,
    weak_wreath,
)

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class WdlNObject:
    """
    Monads s_0, ..., s_n with a law λ_ij for every pair i < j.

    Attributes:
        monads: The demimonads, all over one field
        laws: (i, j) -> λ_ij: s_j (x) s_i -> s_i (x) s_j
        name: Label used in reports
    """

    monads: Tuple[Demimonad, ...]
    laws: Mapping[Tuple[int, int], LinMap]
    name: str = ""
    _cache: Dict[Tuple[int, int], WeakDistributiveLaw] = field(
        default_factory=dict, init=False, repr=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "monads", tuple(self.monads))
        if not self.monads:
            raise ShapeMismatch("An object needs at least one monad")
        fields = {m.field for m in self.monads}
        if len(fields) > 1:
            names = ", ".join(sorted(map(str, fields)))
            raise ShapeMismatch(f"Monads are over different fields: {names}")
        count = len(self.monads)
        for i, j in itertools.combinations(range(count), 2):
            if (i, j) not in self.laws:
                raise ShapeMismatch(f"Missing law for the pair ({i}, {j})")
        for i, j in self.laws:
            if not (0 <= i < j < count):
                raise IndexOutOfRange(f"Law index ({i}, {j}) outside 0..{count - 1}")

    @property
    def n(self) -> int:
        return len(self.monads) - 1

    @property
    def field(self) -> Field:
        return self.monads[0].field

    @property
    def label(self) -> str:
        return self.name or f"object[{self.n + 1} monads]"

    def law(self, i: int, j: int) -> WeakDistributiveLaw:
        """λ_ij as a law with t = s_j and s = s_i."""
        if (i, j) not in self._cache:
            if (i, j) not in self.laws:
                raise IndexOutOfRange(f"No law for the pair ({i}, {j}) in {self.label}")
            self._cache[(i, j)] = WeakDistributiveLaw(
                t=self.monads[j],
                s=self.monads[i],
                law=self.laws[(i, j)],
                name=f"λ[{i},{j}]",
            )
        return self._cache[(i, j)]

    def lam(self, i: int, j: int) -> LinMap:
        """λ_ij with domain s_j (x) s_i and codomain s_i (x) s_j."""
        si, sj = self.monads[i].space, self.monads[j].space
        return self.laws[(i, j)].relabel(sj.tensor(si), si.tensor(sj))

    def bar(self, i: int, j: int) -> LinMap:
        """λ̄_ij on s_i (x) s_j."""
        return self.law(i, j).bar

    def space(self, indices: Optional[Sequence[int]] = None) -> Space:
        """Tensor product of the carriers of the given monads (all by default)."""
        if indices is None:
            indices = range(len(self.monads))
        return tensor_spaces([self.monads[i].space for i in indices])

    def ident(self, indices: Sequence[int]) -> LinMap:
        return identity(self.space(indices), self.field)


def normalized_flip(s_i: Demimonad, s_j: Demimonad) -> LinMap:
    """The symmetry s_j (x) s_i -> s_i (x) s_j, normalized by the idempotents."""
    return compose(
        flip(s_j.space, s_i.space, s_i.field),
        tensor(s_j.idempotent, s_i.idempotent),
    )


def make_object(
    monads: Sequence[Demimonad],
    laws: Optional[Mapping[Tuple[int, int], LinMap]] = None,
    name: str = "",
) -> WdlNObject:
    """Build an object, using symmetries for the pairs without a law."""
    filled: Dict[Tuple[int, int], LinMap] = dict(laws or {})
    for i, j in itertools.combinations(range(len(monads)), 2):
        if (i, j) not in filled:
            filled[(i, j)] = normalized_flip(monads[i], monads[j])
    return WdlNObject(tuple(monads), filled, name)


def restrict(o: WdlNObject, indices: Sequence[int]) -> WdlNObject:
    """The sub-object on the given monads, renumbered from 0."""
    chosen = sorted(set(indices))
    if not chosen:
        raise IndexOutOfRange("Cannot restrict to an empty set of monads")
    for i in chosen:
        if not (0 <= i <= o.n):
            raise IndexOutOfRange(f"Monad index {i} outside 0..{o.n}")
    laws = {
        (a, b): o.laws[(chosen[a], chosen[b])]
        for a, b in itertools.combinations(range(len(chosen)), 2)
    }
    label = ",".join(str(i) for i in chosen)
    return WdlNObject(
        tuple(o.monads[i] for i in chosen), laws, name=f"{o.label}[{label}]"
    )


def yang_baxter_paths(o: WdlNObject, i: int, j: int, k: int) -> Tuple[LinMap, LinMap]:
    """The two hexagon paths s_k (x) s_j (x) s_i -> s_i (x) s_j (x) s_k."""
    S = {x: o.monads[x].identity for x in (i, j, k)}
    first = compose(
        tensor(o.lam(i, j), S[k]),
        tensor(S[j], o.lam(i, k)),
        tensor(o.lam(j, k), S[i]),
    )
    second = compose(
        tensor(S[i], o.lam(j, k)),
        tensor(o.lam(i, k), S[j]),
        tensor(S[k], o.lam(i, j)),
    )
    return first, second


def validate_object(o: WdlNObject) -> CheckReport:
    """Every pairwise law and every Yang-Baxter hexagon."""
    report = CheckReport(subject=f"object {o.label}")
    for i, j in itertools.combinations(range(o.n + 1), 2):
        w = o.law(i, j)
        report.extend(check_wdl(w.t, w.s, w.law), prefix=f"law[{i},{j}]")
    for i, j, k in itertools.combinations(range(o.n + 1), 3):
        first, second = yang_baxter_paths(o, i, j, k)
        report.record(f"yang_baxter[{i},{j},{k}]", first, second)
    return report


def _out_of_order(word: Sequence[int], strategy: str) -> Optional[int]:
    positions = [p for p in range(len(word) - 1) if word[p] > word[p + 1]]
    if not positions:
        return None
    return positions[0] if strategy == "leftmost" else positions[-1]


def shuffle(o: WdlNObject, word: Sequence[int], strategy: str = "leftmost") -> LinMap:
    """
    The composite of laws sorting s_{w0} (x) s_{w1} (x) ... into ascending order.

    Adjacent factors s_b (x) s_a with a < b are swapped by λ_ab; equal
    indices are never swapped.

    Args:
        o: The object
        word: Monad indices of the domain factors
        strategy: "leftmost" or "rightmost" out-of-order pair first
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(
            f"Invalid strategy '{strategy}'. Valid options: leftmost, rightmost"
        )
    current = list(word)
    result = o.ident(current)
    while True:
        p = _out_of_order(current, strategy)
        if p is None:
            return result
        b, a = current[p], current[p + 1]
        step = tensor(o.ident(current[:p]), o.lam(a, b), o.ident(current[p + 2 :]))
        result = compose(step, result)
        current[p], current[p + 1] = a, b


def _require_three(o: WdlNObject) -> None:
    if o.n != 2:
        raise ShapeMismatch(f"Expected exactly three monads, {o.label} has {o.n + 1}")


def right_arrow(o: WdlNObject, p: int, q: int) -> LinMap:
    """→λ_{0pq} on s_0 (x) s_p (x) s_q, for {p, q} = {1, 2}."""
    _require_three(o)
    S0, Sp, Sq = (o.monads[x].identity for x in (0, p, q))
    s0 = o.monads[0]
    return compose(
        tensor(s0.mul, Sp, Sq),
        tensor(S0, o.lam(0, p), Sq),
        tensor(S0, Sp, o.lam(0, q)),
        tensor(S0, Sp, Sq, s0.unit),
    )


def left_arrow(o: WdlNObject, k: int, l: int) -> LinMap:
    """←λ_{kl2} on s_k (x) s_l (x) s_2, for {k, l} = {0, 1}."""
    _require_three(o)
    Sk, Sl, S2 = (o.monads[x].identity for x in (k, l, 2))
    s2 = o.monads[2]
    return compose(
        tensor(Sk, Sl, s2.mul),
        tensor(Sk, o.lam(l, 2), S2),
        tensor(o.lam(k, 2), Sl, S2),
        tensor(s2.unit, Sk, Sl, S2),
    )


def arrow_idempotents(o: WdlNObject) -> Tuple[LinMap, LinMap]:
    """(→λ_012, ←λ_012) for an object with three monads."""
    return right_arrow(o, 1, 2), left_arrow(o, 0, 1)


def check_arrow_idempotents(o: WdlNObject) -> CheckReport:
    """Idempotency, normalization and intertwining of both arrows, and λ̄_012."""
    _require_three(o)
    report = CheckReport(subject=f"arrow idempotents of {o.label}")
    S0, S1, S2 = (m.identity for m in o.monads)
    right, left = arrow_idempotents(o)
    bar01 = tensor(o.bar(0, 1), S2)
    bar12 = tensor(S0, o.bar(1, 2))

    report.record("right_idempotent", compose(right, right), right)
    report.record("left_idempotent", compose(left, left), left)

    report.record("right_normalized_before", compose(right, bar01), right)
    report.record("right_normalized_after", compose(bar01, right), right)
    report.record(
        "right_intertwines",
        compose(right, tensor(S0, o.lam(1, 2))),
        compose(tensor(S0, o.lam(1, 2)), right_arrow(o, 2, 1)),
    )
    for p, q in ((1, 2), (2, 1)):
        Sq = o.monads[q].identity
        Sp = o.monads[p].identity
        report.record(
            f"right_bar[{p},{q}]",
            compose(right_arrow(o, p, q), tensor(o.lam(0, p), Sq)),
            compose(tensor(o.lam(0, p), Sq), tensor(Sp, o.bar(0, q))),
        )

    report.record("left_normalized_before", compose(left, bar12), left)
    report.record("left_normalized_after", compose(bar12, left), left)
    report.record(
        "left_intertwines",
        compose(left, tensor(o.lam(0, 1), S2)),
        compose(tensor(o.lam(0, 1), S2), left_arrow(o, 1, 0)),
    )
    for k, l in ((0, 1), (1, 0)):
        Sk = o.monads[k].identity
        Sl = o.monads[l].identity
        report.record(
            f"left_bar[{k},{l}]",
            compose(left_arrow(o, k, l), tensor(Sk, o.lam(l, 2))),
            compose(tensor(Sk, o.lam(l, 2)), tensor(o.bar(k, 2), Sl)),
        )

    total = compose(left, right)
    report.record("bar012_left_then_bar01", compose(left, bar01), total)
    report.record("bar012_right_then_bar12", compose(right, bar12), total)
    report.record("bar012_commute", compose(right, left), total)
    report.record("bar012_iterated", iterated_idempotent(o), total)
    return report


def _left_arrow_general(o: WdlNObject, m: int) -> LinMap:
    """←λ_{0..m}: insert η_m on the left, shuffle it home, multiply."""
    head = list(range(m))
    sm = o.monads[m]
    return compose(
        tensor(o.ident(head), sm.mul),
        shuffle(o, [m] + list(range(m + 1))),
        tensor(sm.unit, o.ident(range(m + 1))),
    )


def iterated_idempotent(o: WdlNObject) -> LinMap:
    """
    The idempotent λ̄_{0..n} on s_0 (x) ... (x) s_n.

    For n = 0 this is the idempotent of s_0; otherwise λ̄_01 is extended
    one monad at a time by the left arrows ←λ_{0..m}.
    """
    n = o.n
    if n == 0:
        return o.monads[0].idempotent
    e = tensor(o.bar(0, 1), o.ident(range(2, n + 1)))
    for m in range(2, n + 1):
        e = compose(tensor(_left_arrow_general(o, m), o.ident(range(m + 1, n + 1))), e)
    return e.relabel(o.space(), o.space())


def iterated_wreath(o: WdlNObject) -> Demimonad:
    """
    The iterated weak wreath product on s_0 (x) ... (x) s_n.

    μ = λ̄.(μ_0 (x) ... (x) μ_n).shuffle and
    η = λ̄.shuffle.(η_n (x) ... (x) η_0), with λ̄ = λ̄_{0..n}.
    """
    n = o.n
    if n == 0:
        return o.monads[0]
    indices = list(range(n + 1))
    bar = iterated_idempotent(o)
    muls = tensor(*(m.mul for m in o.monads))
    units = tensor(*(o.monads[i].unit for i in reversed(indices)))
    space = o.space()
    mul = compose(bar, muls, shuffle(o, indices + indices)).relabel(
        space.tensor(space), space
    )
    unit = compose(bar, shuffle(o, list(reversed(indices))), units).relabel(BASE, space)
    d = Demimonad(space=space, mul=mul, unit=unit, name=f"W({o.label})")
    logger.debug(
        f"Built iterated wreath of {o.label} on {space}",
        extra={"dimension": space.dim},
    )
    return d


def composite_law(o: WdlNObject) -> WeakDistributiveLaw:
    """
    The law between the iterated wreath of s_0..s_{n-1} and s_n.

    λ = shuffle.(s_n (x) λ̄_{0..n-1}); the equal form λ̄_{0..n}.shuffle is
    checked as well.

    Raises:
        PathsDisagree: If the two forms differ
        ValueError: If the object has a single monad
    """
    n = o.n
    if n < 1:
        raise ValueError("composite_law needs at least two monads")
    head = restrict(o, range(n))
    word = [n] + list(range(n))
    moved = shuffle(o, word)
    Sn = o.monads[n].identity
    law = compose(moved, tensor(Sn, iterated_idempotent(head)))
    alternate = compose(iterated_idempotent(o), moved)
    difference = law.first_difference(alternate)
    if difference is not None:
        raise PathsDisagree(
            f"The two forms of the composite law of {o.label} differ on input "
            f"{difference[0]} at output {difference[1]}"
        )
    return WeakDistributiveLaw(
        t=o.monads[n],
        s=iterated_wreath(head),
        law=law,
        name=f"λ[0..{n - 1},{n}]",
    )


def functor_Ck(o: WdlNObject, k: int) -> WdlNObject:
    """
    Fuse s_{k-1} and s_k into their weak wreath product.

    Raises:
        IndexOutOfRange: Unless 1 <= k <= n
    """
    n = o.n
    if not (1 <= k <= n):
        raise IndexOutOfRange(f"C_{k} is not defined on {o.label}; need 1 <= k <= {n}")
    fused, _, _ = weak_wreath(o.law(k - 1, k), validate=False)
    bar = o.bar(k - 1, k)

    def old(new: int) -> int:
        return new if new < k - 1 else new + 1

    monads: List[Demimonad] = []
    for new in range(n):
        monads.append(fused if new == k - 1 else o.monads[old(new)])

    laws: Dict[Tuple[int, int], LinMap] = {}
    for a, b in itertools.combinations(range(n), 2):
        if a == k - 1:
            j = old(b)
            Sj = o.monads[j].identity
            laws[(a, b)] = compose(
                tensor(o.monads[k - 1].identity, o.lam(k, j)),
                tensor(o.lam(k - 1, j), o.monads[k].identity),
                tensor(Sj, bar),
            )
        elif b == k - 1:
            i = old(a)
            Si = o.monads[i].identity
            laws[(a, b)] = compose(
                tensor(o.lam(i, k - 1), o.monads[k].identity),
                tensor(o.monads[k - 1].identity, o.lam(i, k)),
                tensor(bar, Si),
            )
        else:
            laws[(a, b)] = o.laws[(old(a), old(b))]
    logger.debug(f"Applied C_{k} to {o.label}", extra={"dimension": fused.space.dim})
    return WdlNObject(tuple(monads), laws, name=f"C{k}({o.label})")


def functor_orders(n: int) -> Iterator[Tuple[int, ...]]:
    """Every index sequence (k_1, ..., k_n) with 1 <= k_i <= i."""
    return itertools.product(*(range(1, i + 1) for i in range(1, n + 1)))


def apply_functors(o: WdlNObject, order: Sequence[int]) -> Demimonad:
    """
    The demimonad C_{k_1}...C_{k_n}(o); C_{k_n} is applied first.

    Raises:
        IndexOutOfRange: If the sequence has the wrong length or k_i > i
    """
    if len(order) != o.n:
        raise IndexOutOfRange(
            f"Expected {o.n} indices for {o.label}, got {len(order)}"
        )
    current = o
    for k in reversed(order):
        current = functor_Ck(current, k)
    return current.monads[0]


def _sample_orders(n: int, count: int, seed: int) -> List[Tuple[int, ...]]:
    rng = random.Random(seed)
    chosen = set()
    attempts = 0
    while len(chosen) < count and attempts < count * 20:
        chosen.add(tuple(rng.randint(1, i) for i in range(1, n + 1)))
        attempts += 1
    return sorted(chosen)


def check_associativity(
    o: WdlNObject,
    workers: int = 1,
    max_full_enumeration: int = 4,
    sample_orders: int = 24,
    seed: int = 0,
    orders: Optional[Sequence[Sequence[int]]] = None,
) -> CheckReport:
    """
    Compare every composite of the functors C_k with the iterated wreath.

    All n! sequences are enumerated when n <= max_full_enumeration;
    otherwise sample_orders sequences are drawn with the given seed.

    Args:
        o: The object
        workers: Threads used to build composites; results do not depend on it
        orders: Explicit sequences (k_1, ..., k_n) to check instead
    """
    n = o.n
    report = CheckReport(subject=f"associativity of {o.label}")
    if orders is not None:
        sequences = [tuple(seq) for seq in orders]
    elif n <= max_full_enumeration:
        sequences = list(functor_orders(n))
    else:
        sequences = _sample_orders(n, sample_orders, seed)
        report.flags["sampled"] = True

    expected = iterated_wreath(o)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda seq: apply_functors(o, seq), sequences))
    else:
        memo: Dict[Tuple[int, ...], WdlNObject] = {(): o}
        results = []
        for seq in sequences:
            if len(seq) != n:
                raise IndexOutOfRange(f"Expected {n} indices, got {len(seq)}")
            applied = tuple(reversed(seq))
            for depth in range(1, n + 1):
                prefix = applied[:depth]
                if prefix not in memo:
                    memo[prefix] = functor_Ck(memo[applied[: depth - 1]], prefix[-1])
            results.append(memo[applied].monads[0])

    for seq, d in zip(sequences, results):
        tag = "C" + ",".join(str(k) for k in seq) if seq else "C"
        report.record(f"{tag}.mul", d.mul, expected.mul)
        report.record(f"{tag}.unit", d.unit, expected.unit)
    report.values["composites"] = len(sequences)
    report.values["identical"] = report.passed
    return report


# 1-cells


@dataclass(frozen=True, eq=False)
class WdlNOneCell:
    """
    A 1-cell between objects with the same number of monads.

    Attributes:
        source: Object (s_i, λ_ij)
        target: Object (s'_i, λ'_ij)
        carrier: Space v
        xis: ξ_i: s'_i (x) v -> v (x) s_i
    """

    source: WdlNObject
    target: WdlNObject
    carrier: Space
    xis: Tuple[LinMap, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "xis", tuple(self.xis))
        if not (len(self.xis) == len(self.source.monads) == len(self.target.monads)):
            raise ShapeMismatch("A 1-cell needs one structure map per monad")

    def morphism(self, i: int) -> MonadMorphism:
        return MonadMorphism(
            self.source.monads[i], self.target.monads[i], self.carrier, self.xis[i]
        )

    def pair(self, i: int, j: int) -> WdlOneCell:
        """The 1-cell between λ_ij and λ'_ij."""
        return WdlOneCell(
            source=self.source.law(i, j),
            target=self.target.law(i, j),
            carrier=self.carrier,
            xi_t=self.xis[j],
            xi_s=self.xis[i],
        )


def check_wdln_one_cell(c: WdlNOneCell) -> CheckReport:
    """Every structure map, and every pair against its laws."""
    report = CheckReport(subject=f"1-cell {c.source.label} => {c.target.label}")
    for i in range(len(c.xis)):
        report.extend(check_monad_morphism(c.morphism(i)), prefix=f"xi[{i}]")
    for i, j in itertools.combinations(range(len(c.xis)), 2):
        report.extend(check_wdl_one_cell(c.pair(i, j)), prefix=f"pair[{i},{j}]")
    return report


def restrict_one_cell(c: WdlNOneCell, indices: Sequence[int]) -> WdlNOneCell:
    chosen = sorted(set(indices))
    return WdlNOneCell(
        source=restrict(c.source, chosen),
        target=restrict(c.target, chosen),
        carrier=c.carrier,
        xis=tuple(c.xis[i] for i in chosen),
    )


def functor_Ck_one_cell(c: WdlNOneCell, k: int, validate: bool = False) -> WdlNOneCell:
    """
    Fuse ξ_{k-1} and ξ_k into (v (x) λ̄).(ξ_{k-1} (x) s_k).(s'_{k-1} (x) ξ_k).

    Raises:
        InvalidOneCell: If validate is set and c fails its checks
        IndexOutOfRange: Unless 1 <= k <= n
    """
    if validate:
        report = check_wdln_one_cell(c)
        if not report.passed:
            raise InvalidOneCell(f"Not a 1-cell: {report.failures[0]}", report)
    source = functor_Ck(c.source, k)
    target = functor_Ck(c.target, k)
    V = identity(c.carrier, c.source.field)
    before = c.morphism(k - 1).xi
    after = c.morphism(k).xi
    fused = compose(
        tensor(V, c.source.bar(k - 1, k)),
        tensor(before, c.source.monads[k].identity),
        tensor(c.target.monads[k - 1].identity, after),
    )
    xis = list(c.xis[: k - 1]) + [fused] + list(c.xis[k + 1 :])
    return WdlNOneCell(source, target, c.carrier, tuple(xis))


def iterated_wreath_one_cell(c: WdlNOneCell) -> MonadMorphism:
    """The monad morphism between iterated wreaths obtained by fusing every ξ_i."""
    current = c
    while len(current.xis) > 1:
        current = functor_Ck_one_cell(current, 1)
    return MonadMorphism(
        source=iterated_wreath(c.source),
        target=iterated_wreath(c.target),
        carrier=c.carrier,
        structure=current.xis[0],
    )


# three-monad identities


def fused_pair_laws(o: WdlNObject) -> Dict[str, Tuple[LinMap, LinMap]]:
    """
    Both forms of the laws s_2 over s_0 s_1 and s_1 s_2 over s_0.

    Returns:
        {"01,2": (form with →λ, form with λ̄_01),
         "0,12": (form with ←λ, form with λ̄_12)}
    """
    _require_three(o)
    S0, S1, S2 = (m.identity for m in o.monads)
    right, left = arrow_idempotents(o)
    swept_right = compose(tensor(S0, o.lam(1, 2)), tensor(o.lam(0, 2), S1))
    swept_left = compose(tensor(o.lam(0, 1), S2), tensor(S1, o.lam(0, 2)))
    return {
        "01,2": (
            compose(right, swept_right),
            compose(swept_right, tensor(S2, o.bar(0, 1))),
        ),
        "0,12": (
            compose(left, swept_left),
            compose(swept_left, tensor(o.bar(1, 2), S0)),
        ),
    }


def _fused_wreaths(o: WdlNObject) -> Tuple[Demimonad, Demimonad]:
    """Wreaths from C_1 then C_1, and from C_2 then C_1, on s_0 s_1 s_2."""
    forms = fused_pair_laws(o)
    w01, _, _ = weak_wreath(o.law(0, 1), validate=False)
    w12, _, _ = weak_wreath(o.law(1, 2), validate=False)
    left_law = WeakDistributiveLaw(o.monads[2], w01, forms["01,2"][1])
    right_law = WeakDistributiveLaw(w12, o.monads[0], forms["0,12"][1])
    first, _, _ = weak_wreath(left_law, validate=False)
    second, _, _ = weak_wreath(right_law, validate=False)
    return first, second


def check_fused_pair_laws(o: WdlNObject) -> CheckReport:
    """Both forms of each fused law agree, are laws, and induce equal wreaths."""
    report = CheckReport(subject=f"fused laws of {o.label}")
    forms = fused_pair_laws(o)
    for key, (one, two) in forms.items():
        report.record(f"forms[{key}]", one, two)
    w01, _, _ = weak_wreath(o.law(0, 1), validate=False)
    w12, _, _ = weak_wreath(o.law(1, 2), validate=False)
    report.extend(check_wdl(o.monads[2], w01, forms["01,2"][1]), prefix="law[01,2]")
    report.extend(check_wdl(w12, o.monads[0], forms["0,12"][1]), prefix="law[0,12]")
    first, second = _fused_wreaths(o)
    report.record("induced_mul", first.mul, second.mul)
    report.record("induced_unit", first.unit, second.unit)
    return report


def check_converse_yang_baxter(o: WdlNObject) -> CheckReport:
    """
    If both fusing orders give laws inducing equal wreaths, the triple obeys
    the Yang-Baxter relation.
    """
    _require_three(o)
    report = CheckReport(subject=f"converse Yang-Baxter for {o.label}")
    w01, _, _ = weak_wreath(o.law(0, 1), validate=False)
    w12, _, _ = weak_wreath(o.law(1, 2), validate=False)
    forms = fused_pair_laws(o)
    premise = (
        check_wdl(o.monads[2], w01, forms["01,2"][1]).passed
        and check_wdl(w12, o.monads[0], forms["0,12"][1]).passed
    )
    if premise:
        first, second = _fused_wreaths(o)
        premise = first.same_structure(second)
    report.flags["premise"] = premise
    if premise:
        one, two = yang_baxter_paths(o, 0, 1, 2)
        report.record("yang_baxter", one, two)
    return report


# monad cube


def _subsets(count: int) -> List[Subset]:
    return [
        combo
        for size in range(count + 1)
        for combo in itertools.combinations(range(count), size)
    ]


def _add(p: Subset, i: int) -> Subset:
    return tuple(sorted(p + (i,)))


@dataclass(frozen=True, eq=False)
class MonadCube:
    """
    The iterated wreaths of all sub-objects and the unit-inserting edges.

    Attributes:
        obj: The object
        vertices: p -> iterated wreath of the monads in p (p = () is the field)
        idempotents: p -> λ̄_p
        edges: (p, i) -> monad morphism s_{p+i} => s_p
    """

    obj: WdlNObject
    vertices: Dict[Subset, Demimonad]
    idempotents: Dict[Subset, LinMap]
    edges: Dict[Tuple[Subset, int], MonadMorphism]

    @property
    def top(self) -> Subset:
        return tuple(range(self.obj.n + 1))

    def faces(self) -> List[Tuple[Subset, int, int]]:
        count = self.obj.n + 1
        return [
            (p, i, j)
            for p in _subsets(count)
            for i, j in itertools.combinations(
                [x for x in range(count) if x not in p], 2
            )
        ]

    def space(self, p: Subset) -> Space:
        return self.vertices[p].space


def build_cube(o: WdlNObject) -> MonadCube:
    """
    Vertices s_p for every subset p, with edges λ̄_{p+i}.(unit of s_i inserted).
    """
    count = o.n + 1
    field_ = o.field
    vertices: Dict[Subset, Demimonad] = {}
    idempotents: Dict[Subset, LinMap] = {}
    for p in _subsets(count):
        if not p:
            vertices[p] = trivial_algebra(field_)
            idempotents[p] = identity(BASE, field_)
            continue
        sub = restrict(o, p)
        vertices[p] = iterated_wreath(sub)
        idempotents[p] = iterated_idempotent(sub)

    edges: Dict[Tuple[Subset, int], MonadMorphism] = {}
    for p in _subsets(count):
        for i in range(count):
            if i in p:
                continue
            q = _add(p, i)
            pos = q.index(i)
            insertion = tensor(
                o.ident(q[:pos]), o.monads[i].unit, o.ident(q[pos + 1 :])
            )
            structure = compose(idempotents[q], insertion)
            edges[(p, i)] = MonadMorphism(
                source=vertices[q],
                target=vertices[p],
                carrier=BASE,
                structure=structure,
            )
    logger.debug(
        f"Built monad cube of {o.label}",
        extra={"dimension": vertices[tuple(range(count))].space.dim},
    )
    return MonadCube(o, vertices, idempotents, edges)


def verify_cube(cube: MonadCube, max_vertex_dim: int = 64) -> CheckReport:
    """
    Check vertices, edges and faces of the cube.

    Vertices larger than max_vertex_dim skip the demimonad check. They are
    counted in skipped_vertices and clear the "complete" flag.
    """
    report = CheckReport(subject=f"monad cube of {cube.obj.label}")
    skipped = 0
    for p, vertex in cube.vertices.items():
        if vertex.space.dim > max_vertex_dim:
            skipped += 1
            continue
        report.extend(check_demimonad(vertex), prefix=f"vertex{list(p)}")
    passing = 0
    for (p, i), edge in cube.edges.items():
        edge_report = check_monad_morphism(edge)
        report.extend(edge_report, prefix=f"edge{list(p)}+{i}")
        if edge_report.passed:
            passing += 1
    commuting = 0
    faces = cube.faces()
    for p, i, j in faces:
        via_j = compose_monad_morphisms(cube.edges[(p, j)], cube.edges[(_add(p, j), i)])
        via_i = compose_monad_morphisms(cube.edges[(p, i)], cube.edges[(_add(p, i), j)])
        if report.record(f"face{list(p)}+{i}+{j}", via_j.structure, via_i.structure):
            commuting += 1
    report.values["vertices"] = len(cube.vertices)
    report.values["edges"] = len(cube.edges)
    report.values["edges_passing"] = passing
    report.values["faces"] = len(faces)
    report.values["faces_commuting"] = commuting
    report.values["skipped_vertices"] = skipped
    report.flags["complete"] = skipped == 0
    return report


def path_composite(cube: MonadCube, p: Subset, q: Subset) -> LinMap:
    """Structure map s_p -> s_q of the edge path adding q - p in ascending order."""
    if not set(p) <= set(q):
        raise IndexOutOfRange(f"{list(p)} is not contained in {list(q)}")
    current = tuple(p)
    result = identity(cube.space(current), cube.obj.field)
    for i in sorted(set(q) - set(p)):
        result = compose(cube.edges[(current, i)].structure, result)
        current = _add(current, i)
    return result


def twisted(cube: MonadCube, x: Subset, y: Subset) -> LinMap:
    """μ_{x+y}.(path x -> x+y (x) path y -> x+y): s_x (x) s_y -> s_{x+y}."""
    union = tuple(sorted(set(x) | set(y)))
    return compose(
        cube.vertices[union].mul,
        tensor(path_composite(cube, x, union), path_composite(cube, y, union)),
    )


def projection(cube: MonadCube, p: Subset, q: Subset) -> LinMap:
    """π_pq: s_p (x) s_q -> s_{p+q}."""
    return twisted(cube, p, q)


def ordered_pairs(count: int) -> List[Tuple[Subset, Subset]]:
    """Nonempty disjoint (p, q) with every index of p below every index of q."""
    nonempty = [s for s in _subsets(count) if s]
    return [(p, q) for p in nonempty for q in nonempty if max(p) < min(q)]


@dataclass(frozen=True, eq=False)
class FactorizationData:
    """
    A monad cube with sections ι_pq: s_{p+q} -> s_p (x) s_q.

    Attributes:
        cube: The monad cube
        sections: (p, q) -> ι_pq
        target: Optional demimonad the top vertex should be isomorphic to
        to_target: Witness s_top -> target
        from_target: Witness target -> s_top
    """

    cube: MonadCube
    sections: Dict[Tuple[Subset, Subset], LinMap]
    target: Optional[Demimonad] = None
    to_target: Optional[LinMap] = None
    from_target: Optional[LinMap] = None

    def section(self, p: Subset, q: Subset) -> LinMap:
        cube = self.cube
        return self.sections[(p, q)].relabel(
            cube.space(_union(p, q)), cube.space(p).tensor(cube.space(q))
        )


def _union(p: Subset, q: Subset) -> Subset:
    return tuple(sorted(set(p) | set(q)))


def canonical_factorization_data(cube: MonadCube) -> FactorizationData:
    """Sections ι_pq = λ̄_{p+q}, read as maps into s_p (x) s_q."""
    sections = {
        (p, q): cube.idempotents[_union(p, q)]
        for p, q in ordered_pairs(cube.obj.n + 1)
    }
    return FactorizationData(cube, sections)


def nary_factorization_check(f: FactorizationData) -> CheckReport:
    """
    Conditions (a), (b) and (c) of the factorization of the top vertex.

    (a) the empty vertex is the base field and the top vertex is the
    iterated wreath (or isomorphic to the given target); (b) each ι_pq is
    a section of π_pq and a bimodule map; (c) the sections are
    coassociative and compatible with the twisted products.
    """
    cube = f.cube
    o = cube.obj
    count = o.n + 1
    field_ = o.field
    report = CheckReport(subject=f"factorization of {o.label}")

    def I(p: Subset) -> LinMap:
        return identity(cube.space(p), field_)

    empty = cube.vertices[()]
    one = identity(BASE, field_)
    report.record("a.empty_mul", empty.mul, one)
    report.record("a.empty_unit", empty.unit, one)
    top = cube.vertices[cube.top]
    expected = iterated_wreath(o)
    report.record("a.top_mul", top.mul, expected.mul)
    report.record("a.top_unit", top.unit, expected.unit)
    if f.target is not None and f.to_target is not None and f.from_target is not None:
        r, phi, psi = f.target, f.to_target, f.from_target
        report.record(
            "a.to_mul", compose(phi, top.mul), compose(r.mul, tensor(phi, phi))
        )
        report.record("a.to_unit", compose(phi, top.unit), r.unit)
        report.record(
            "a.from_mul", compose(psi, r.mul), compose(top.mul, tensor(psi, psi))
        )
        report.record("a.from_unit", compose(psi, r.unit), top.unit)
        report.record("a.round_trip_top", compose(psi, phi), top.idempotent)
        report.record("a.round_trip_target", compose(phi, psi), r.idempotent)

    pairs = ordered_pairs(count)
    for p, q in pairs:
        pq = _union(p, q)
        iota = f.section(p, q)
        tag = f"b[{list(p)},{list(q)}]"
        mul_pq = cube.vertices[pq].mul
        report.record(
            f"{tag}.section",
            compose(projection(cube, p, q), iota),
            cube.vertices[pq].idempotent,
        )
        report.record(
            f"{tag}.left_action",
            compose(iota, mul_pq, tensor(path_composite(cube, p, pq), I(pq))),
            compose(tensor(cube.vertices[p].mul, I(q)), tensor(I(p), iota)),
        )
        report.record(
            f"{tag}.right_action",
            compose(iota, mul_pq, tensor(I(pq), path_composite(cube, q, pq))),
            compose(tensor(I(p), cube.vertices[q].mul), tensor(iota, I(q))),
        )

    nonempty = [s for s in _subsets(count) if s]
    for p, q, r in itertools.product(nonempty, repeat=3):
        if not (max(p) < min(q) and max(q) < min(r)):
            continue
        pq, qr, pr = _union(p, q), _union(q, r), _union(p, r)
        tag = f"c[{list(p)},{list(q)},{list(r)}]"
        report.record(
            f"{tag}.coassociative",
            compose(tensor(I(p), f.section(q, r)), f.section(p, qr)),
            compose(tensor(f.section(p, q), I(r)), f.section(pq, r)),
        )
        report.record(
            f"{tag}.twist_left",
            compose(
                tensor(I(p), f.section(q, r)),
                f.section(p, qr),
                twisted(cube, qr, p),
            ),
            compose(
                tensor(f.section(p, q), I(r)),
                tensor(twisted(cube, q, p), I(r)),
                tensor(I(q), f.section(p, r)),
                tensor(I(q), twisted(cube, r, p)),
                tensor(f.section(q, r), I(p)),
            ),
        )
        report.record(
            f"{tag}.twist_right",
            compose(
                tensor(f.section(p, q), I(r)),
                f.section(pq, r),
                twisted(cube, r, pq),
            ),
            compose(
                tensor(I(p), f.section(q, r)),
                tensor(I(p), twisted(cube, r, q)),
                tensor(f.section(p, r), I(q)),
                tensor(twisted(cube, r, p), I(q)),
                tensor(I(r), f.section(p, q)),
            ),
        )
    report.values["pairs"] = len(pairs)
    return report


def laws_from_factorization(f: FactorizationData) -> Dict[Tuple[int, int], LinMap]:
    """λ_ij = ι_{i,j}.twisted(j, i) for every pair of single monads."""
    count = f.cube.obj.n + 1
    return {
        (i, j): compose(f.section((i,), (j,)), twisted(f.cube, (j,), (i,)))
        for i, j in itertools.combinations(range(count), 2)
    }


def cube_one_cell(c: WdlNOneCell) -> Dict[Subset, MonadMorphism]:
    """ζ_p: the fused 1-cell on every vertex; ζ_() is the identity on v."""
    count = len(c.xis)
    field_ = c.source.field
    result: Dict[Subset, MonadMorphism] = {}
    for p in _subsets(count):
        if not p:
            result[p] = MonadMorphism(
                trivial_algebra(field_),
                trivial_algebra(field_),
                c.carrier,
                identity(c.carrier, field_),
            )
        else:
            result[p] = iterated_wreath_one_cell(restrict_one_cell(c, p))
    return result


def check_cube_one_cell(c: WdlNOneCell) -> CheckReport:
    """Squares between the two cubes, and rebuilding ζ_ij from ζ_i and ζ_j."""
    report = CheckReport(subject=f"cube 1-cell {c.source.label} => {c.target.label}")
    source = build_cube(c.source)
    target = build_cube(c.target)
    zetas = cube_one_cell(c)
    V = identity(c.carrier, c.source.field)
    for (p, i), edge in source.edges.items():
        q = _add(p, i)
        report.record(
            f"square{list(p)}+{i}",
            compose(zetas[q].xi, tensor(target.edges[(p, i)].xi, V)),
            compose(tensor(V, edge.xi), zetas[p].xi),
        )
    for i, j in itertools.combinations(range(len(c.xis)), 2):
        rebuilt = compose(
            tensor(V, c.source.bar(i, j)),
            tensor(zetas[(i,)].xi, c.source.monads[j].identity),
            tensor(c.target.monads[i].identity, zetas[(j,)].xi),
        )
        report.record(f"rebuild[{i},{j}]", zetas[(i, j)].xi, rebuilt)
    return report
