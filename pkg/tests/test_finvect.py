"""Tests for spaces, linear maps, and the demimonad, algebra and coalgebra checkers."""

from typing import Tuple

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weak_wreath.exactlinalg import Matrix
from weak_wreath.exceptions import DemimonadAxiomFailure, ShapeMismatch
from weak_wreath.finvect import (
    BASE,
    Algebra,
    Demimonad,
    LinMap,
    Space,
    algebra_from_constants,
    check_algebra,
    check_coalgebra,
    check_demimonad,
    coalgebra_from_constants,
    compose,
    flip,
    from_rule,
    identity,
    permutation,
    split_demimonad,
    tensor,
    trivial_algebra,
    whisker,
)
from weak_wreath.weakbialgebra import WeakBialgebra


@st.composite
def linmaps(draw: st.DrawFn, dims: Tuple[int, int]) -> LinMap:
    """Maps F^dims[0] -> F^dims[1] with small integer entries."""
    rows, cols = dims[1], dims[0]
    size = rows * cols
    values = draw(st.lists(st.integers(-2, 2), min_size=size, max_size=size))
    matrix = Matrix.from_entries(
        [(k // cols, k % cols, v) for k, v in enumerate(values)], (rows, cols)
    )
    return LinMap(Space((cols,)), Space((rows,)), matrix)


small_dims = st.integers(1, 3)


def collapse_demimonad() -> Algebra:
    """A non-strict demimonad on F^2: x.y = phi(x) phi(y) a with phi = 1 on a and b."""
    return algebra_from_constants(
        2,
        {(i, j, 0): 1 for i in range(2) for j in range(2)},
        {0: 1},
        name="collapse",
    )


class TestSpace:
    """Tests for tensor-product spaces."""

    def test_index_round_trip(self) -> None:
        """Test flat and multi-indices of a three-factor space."""
        space = Space((2, 3, 2))

        assert space.dim == 12
        assert space.index((1, 2, 0)) == 10
        assert space.multi_index(10) == (1, 2, 0)
        assert [space.index(m) for m in space.basis()] == list(range(12))

    def test_base_field(self) -> None:
        """Test the empty tensor product."""
        assert BASE.dim == 1
        assert str(BASE) == "F"
        assert Space((2,)).tensor(BASE) == Space((2,))

    def test_invalid_factor(self) -> None:
        """Test that zero-dimensional factors are rejected."""
        with pytest.raises(ShapeMismatch):
            Space((2, 0))

    def test_wrong_multi_index_length(self) -> None:
        """Test that a multi-index must match the arity."""
        with pytest.raises(ShapeMismatch):
            Space((2, 2)).index((1,))


class TestLinMap:
    """Tests for composition, tensor products and permutations."""

    def test_shape_checked(self) -> None:
        """Test that the matrix must match domain and codomain."""
        with pytest.raises(ShapeMismatch):
            LinMap(Space((2,)), Space((3,)), Matrix.identity(2))

    def test_compose_mismatch(self) -> None:
        """Test that non-composable maps are rejected."""
        f = identity(Space((2,)))
        g = identity(Space((3,)))
        with pytest.raises(ShapeMismatch) as exc:
            compose(f, g)
        assert "Cannot compose" in str(exc.value)

    def test_compose_needs_a_map(self) -> None:
        """Test that compose() with no arguments is an error."""
        with pytest.raises(ValueError):
            compose()

    def test_whisker(self) -> None:
        """Test that whiskering is tensoring with identities."""
        f = flip(Space((2,)), Space((3,)))
        a, b = Space((2,)), Space((1,))

        assert whisker(a, f, b) == tensor(identity(a), f, identity(b))
        assert whisker(BASE, f) == f

    def test_permutation_moves_factors(self) -> None:
        """Test the image of a basis element under a cyclic permutation."""
        spaces = [Space((2,)), Space((3,)), Space((2,))]
        p = permutation(spaces, [2, 0, 1])

        assert p.codomain == Space((2, 2, 3))
        assert p.image_of((1, 2, 0)) == {(0, 1, 2): 1}

    def test_permutation_inverse(self) -> None:
        """Test that a permutation followed by its inverse is the identity."""
        spaces = [Space((2,)), Space((3,)), Space((2,))]
        order = [1, 2, 0]
        inverse = [order.index(k) for k in range(3)]
        forward = permutation(spaces, order)
        back = permutation([spaces[k] for k in order], inverse)

        assert compose(back, forward) == identity(Space((2, 3, 2)))

    def test_not_a_permutation(self) -> None:
        """Test that a repeated factor index is rejected."""
        with pytest.raises(ShapeMismatch):
            permutation([Space((2,)), Space((2,))], [0, 0])

    def test_from_rule_matches_structure_constants(self, z2: WeakBialgebra) -> None:
        """Test building the Z2 product from its rule on basis elements."""
        mul = from_rule(
            z2.space.tensor(z2.space),
            z2.space,
            lambda m: {((m[0] + m[1]) % 2,): 1},
        )

        assert mul == z2.mul

    @settings(max_examples=30, deadline=None)
    @given(dims=st.tuples(*(small_dims for _ in range(6))), data=st.data())
    def test_interchange_law(
        self, dims: Tuple[int, ...], data: st.DataObject
    ) -> None:
        """Test (f (x) g).(h (x) k) = (f.h) (x) (g.k)."""
        a, b, c, d, e, f_dim = dims
        h = data.draw(linmaps((a, b)))
        f = data.draw(linmaps((b, c)))
        k = data.draw(linmaps((d, e)))
        g = data.draw(linmaps((e, f_dim)))

        left = compose(tensor(f, g), tensor(h, k))
        assert left == tensor(compose(f, h), compose(g, k))

    @settings(max_examples=30, deadline=None)
    @given(dims=st.tuples(*(small_dims for _ in range(4))), data=st.data())
    def test_flip_naturality(self, dims: Tuple[int, ...], data: st.DataObject) -> None:
        """Test sigma.(f (x) g) = (g (x) f).sigma."""
        a, b, c, d = dims
        f = data.draw(linmaps((a, b)))
        g = data.draw(linmaps((c, d)))

        left = compose(flip(f.codomain, g.codomain), tensor(f, g))
        right = compose(tensor(g, f), flip(f.domain, g.domain))
        assert left == right


class TestAlgebraCheckers:
    """Tests for the algebra and coalgebra checkers."""

    def test_group_algebra_passes(self, z2: WeakBialgebra) -> None:
        """Test that F[Z2] is an algebra and a coalgebra."""
        assert check_algebra(z2.algebra).passed
        assert check_coalgebra(z2.coalgebra).passed

    def test_trivial_algebra(self) -> None:
        """Test the base field as an algebra."""
        report = check_algebra(trivial_algebra())

        assert report.passed
        assert report.checks == ["associativity", "left_unit", "right_unit"]

    def test_missing_unit_reports_witness(self) -> None:
        """Test that the first failing unit law names the basis element."""
        report = check_algebra(collapse_demimonad())

        assert not report.passed
        failure = report.failures[0]
        assert failure.check == "left_unit"
        assert failure.witness == (1,)
        assert failure.row == (0,)

    def test_bad_counit(self) -> None:
        """Test a comultiplication whose counit misses a basis element."""
        c = coalgebra_from_constants(2, {(0, 0, 0): 1, (1, 1, 1): 1}, {0: 1})
        report = check_coalgebra(c)

        assert not report.failed("coassociativity")
        assert report.failed("left_counit")
        assert report.failed("right_counit")


class TestDemimonad:
    """Tests for demimonads and their splitting."""

    def test_structure_shapes(self) -> None:
        """Test that the product must map t (x) t -> t."""
        space = Space((2,))
        with pytest.raises(ShapeMismatch):
            Demimonad(space, identity(space), LinMap(BASE, space, Matrix.zeros((2, 1))))

    def test_algebra_is_strict(self, z2: WeakBialgebra) -> None:
        """Test that an algebra is a strict demimonad."""
        report = check_demimonad(z2.algebra)

        assert report.passed
        assert report.flags["strict"] is True
        assert z2.algebra.is_strict()

    def test_non_strict_demimonad(self) -> None:
        """Test a demimonad whose idempotent is a proper projection."""
        d = collapse_demimonad()
        report = check_demimonad(d)

        assert report.passed
        assert report.flags["strict"] is False
        assert d.idempotent.rank() == 1

    def test_split_demimonad(self) -> None:
        """Test that splitting gives an algebra on the image of e."""
        d = collapse_demimonad()
        alg, iota, pi = split_demimonad(d)

        assert alg.space.dim == 1
        assert check_algebra(alg).passed
        assert compose(pi, iota) == identity(alg.space)
        assert compose(iota, pi) == d.idempotent

    def test_split_rejects_non_demimonad(self) -> None:
        """Test that a failing unit square prevents splitting."""
        d = algebra_from_constants(1, {(0, 0, 0): 2}, {0: 1})
        with pytest.raises(DemimonadAxiomFailure) as exc:
            split_demimonad(d)
        assert "is not a demimonad" in str(exc.value)
        assert exc.value.report is not None
        assert exc.value.report.failed("unit_square")

    def test_split_zero_demimonad(self) -> None:
        """Test that a vanishing idempotent cannot be split."""
        d = algebra_from_constants(1, {}, {})
        with pytest.raises(DemimonadAxiomFailure) as exc:
            split_demimonad(d)
        assert "vanishes" in str(exc.value)

    def test_same_structure(self, z2: WeakBialgebra) -> None:
        """Test literal comparison of structure maps."""
        copy = Demimonad(z2.space, z2.mul, z2.unit, name="copy")

        assert copy.same_structure(z2.algebra)
        assert not copy.same_structure(collapse_demimonad())
