"""Tests for weak distributive laws, weak wreath products and their 1-cells."""

import dataclasses

import pytest

from weak_wreath.exceptions import (
    DemimonadAxiomFailure,
    InvalidLaw,
    InvalidOneCell,
    PathsDisagree,
    PreconditionFailure,
    ShapeMismatch,
)
from weak_wreath.finvect import (
    BASE,
    Algebra,
    Space,
    check_demimonad,
    from_rule,
    identity,
    split_demimonad,
    zero_map,
)
from weak_wreath.wdl import (
    MonadMorphism,
    WeakDistributiveLaw,
    binary_factorize,
    check_binary_factorization,
    check_monad_morphism,
    check_wdl,
    check_wdl_identities,
    check_wdl_one_cell,
    compose_monad_morphisms,
    compose_one_cells,
    flip_one_cell,
    identity_one_cell,
    lambda_bar,
    lambda_bar_paths,
    weak_wreath,
    wreath_one_cell,
)
from weak_wreath.wdln import WdlNObject
from weak_wreath.weakbialgebra import (
    BUILTIN_NAMES,
    builtin_bialgebra,
    canonical_lambda,
    canonical_lambda_hat,
    dual,
)


class TestCheckWdl:
    """Tests for the weak distributive law checker."""

    def test_flip_is_strict_law(self, flip_law: WeakDistributiveLaw) -> None:
        """Test the symmetry on F[Z2] (x) F[Z2]."""
        report = check_wdl(flip_law.t, flip_law.s, flip_law.law)

        assert report.passed
        assert report.values["rank_lambda_bar"] == 4
        assert report.flags["strict"] is True
        assert report.flags["degenerate"] is False

    def test_zero_law_is_degenerate(self, flip_law: WeakDistributiveLaw) -> None:
        """Test that the zero map satisfies every diagram."""
        zero = zero_map(flip_law.law.domain, flip_law.law.codomain)
        report = check_wdl(flip_law.t, flip_law.s, zero)

        assert report.passed
        assert report.values["rank_lambda_bar"] == 0
        assert report.flags["degenerate"] is True
        assert report.flags["strict"] is False

    def test_scaled_flip_fails_multiplication(
        self, flip_law: WeakDistributiveLaw
    ) -> None:
        """Test that twice the symmetry is rejected at the first diagram."""
        report = check_wdl(flip_law.t, flip_law.s, flip_law.law.scale(2))

        assert not report.passed
        assert report.failures[0].check == "mult_t"
        assert report.failed("mult_s")
        assert report.failure("mult_t") is not None

    def test_wrong_shape(self, flip_law: WeakDistributiveLaw) -> None:
        """Test that the law must map t (x) s -> s (x) t."""
        with pytest.raises(ShapeMismatch):
            check_wdl(flip_law.t, flip_law.s, identity(Space((2,))))

    def test_spin_chain_law(self, m2_chain_1: WdlNObject) -> None:
        """Test the law between M2 and its dual."""
        w = m2_chain_1.law(0, 1)
        report = check_wdl(w.t, w.s, w.law)

        assert report.passed
        assert report.values["rank_lambda_bar"] == 8
        assert report.flags["strict"] is False


class TestLambdaBar:
    """Tests for the idempotent of a law."""

    def test_paths_agree(self, m2_chain_1: WdlNObject) -> None:
        """Test that both constructions give the same idempotent."""
        w = m2_chain_1.law(0, 1)
        left, right = lambda_bar_paths(w)

        assert left == right
        assert lambda_bar(w, "left") == lambda_bar(w, "right") == w.bar
        assert w.bar.is_idempotent()

    def test_invalid_path(self, flip_law: WeakDistributiveLaw) -> None:
        """Test an unknown construction name."""
        with pytest.raises(ValueError) as exc:
            lambda_bar(flip_law, "middle")
        assert "Valid options" in str(exc.value)

    def test_paths_disagree(self, z2_algebra: Algebra) -> None:
        """Test a map whose two unit insertions give different idempotents."""
        # x (x) y -> 1 (x) xy
        absorbing = from_rule(
            Space((2, 2)),
            Space((2, 2)),
            lambda m: {(0, (m[0] + m[1]) % 2): 1},
        )
        w = WeakDistributiveLaw(z2_algebra, z2_algebra, absorbing)

        with pytest.raises(PathsDisagree) as exc:
            lambda_bar(w)
        assert "differ" in str(exc.value)
        assert check_wdl(w.t, w.s, w.law).failed("bar_paths")


class TestDerivedIdentities:
    """Tests for identities every law satisfies."""

    def test_spin_chain_law_identities(self, m2_chain_1: WdlNObject) -> None:
        """Test the derived identities on a non-strict law."""
        report = check_wdl_identities(m2_chain_1.law(0, 1))

        assert report.passed
        assert report.checks == [
            "bar_absorbs_law",
            "bar_under_product",
            "left_bimodule",
            "right_bimodule",
            "star_t",
            "star_s",
        ]


class TestWeakWreath:
    """Tests for the weak wreath product and its projections."""

    def test_flip_wreath_is_tensor_algebra(
        self, flip_law: WeakDistributiveLaw
    ) -> None:
        """Test that a strict law gives a strict demimonad."""
        d, proj_t, proj_s = weak_wreath(flip_law)

        assert d.space.dim == 4
        report = check_demimonad(d)
        assert report.passed
        assert report.flags["strict"] is True
        assert check_monad_morphism(proj_t).passed
        assert check_monad_morphism(proj_s).passed

    def test_weak_wreath_dimension(self, m2_chain_1: WdlNObject) -> None:
        """Test the split weak wreath product of M2 and its dual."""
        d, proj_t, proj_s = weak_wreath(m2_chain_1.law(0, 1))

        report = check_demimonad(d)
        assert report.passed
        assert report.flags["strict"] is False
        alg, _, _ = split_demimonad(d)
        assert alg.space.dim == 8
        assert proj_t.target is m2_chain_1.law(0, 1).t
        assert check_monad_morphism(proj_s).passed

    def test_invalid_law_rejected(self, flip_law: WeakDistributiveLaw) -> None:
        """Test that validation refuses a broken law."""
        broken = WeakDistributiveLaw(flip_law.t, flip_law.s, flip_law.law.scale(2))
        with pytest.raises(InvalidLaw) as exc:
            weak_wreath(broken)
        assert "mult_t" in str(exc.value)
        assert exc.value.report is not None

    def test_zero_law_cannot_be_split(self, flip_law: WeakDistributiveLaw) -> None:
        """Test the degenerate law: its wreath exists but its idempotent vanishes."""
        zero = WeakDistributiveLaw(
            flip_law.t,
            flip_law.s,
            zero_map(flip_law.law.domain, flip_law.law.codomain),
        )
        d, _, _ = weak_wreath(zero)

        with pytest.raises(DemimonadAxiomFailure) as exc:
            split_demimonad(d)
        assert "vanishes" in str(exc.value)


class TestMonadMorphisms:
    """Tests for monad morphisms and their composition."""

    def test_structure_shape(self, flip_law: WeakDistributiveLaw) -> None:
        """Test that the structure map shape is validated."""
        with pytest.raises(ShapeMismatch) as exc:
            MonadMorphism(flip_law.t, flip_law.s, Space((3,)), identity(Space((2,))))
        assert "structure map" in str(exc.value)

    def test_identity_morphism(self, flip_law: WeakDistributiveLaw) -> None:
        """Test the trivial 1-cell on a demimonad."""
        m = MonadMorphism(flip_law.t, flip_law.t, BASE, flip_law.t.idempotent)

        assert check_monad_morphism(m).passed

    def test_composite_of_projections(self, m2_chain_1: WdlNObject) -> None:
        """Test composing a projection with an identity morphism."""
        w = m2_chain_1.law(0, 1)
        _, proj_t, _ = weak_wreath(w)
        ident = MonadMorphism(w.t, w.t, BASE, w.t.idempotent)
        composite = compose_monad_morphisms(ident, proj_t)

        assert composite.source is proj_t.source
        assert composite.target is w.t
        assert check_monad_morphism(composite).passed
        assert composite.structure == proj_t.structure

    def test_failing_unit(self, flip_law: WeakDistributiveLaw) -> None:
        """Test that a zero structure map fails the unit law."""
        m = MonadMorphism(
            flip_law.t, flip_law.t, BASE, zero_map(Space((2,)), Space((2,)))
        )
        report = check_monad_morphism(m)

        assert not report.passed
        assert report.failed("unit")
        assert not report.failed("mult")


class TestOneCells:
    """Tests for 1-cells between laws."""

    def test_identity_one_cell(self, m2_chain_1: WdlNObject) -> None:
        """Test the identity 1-cell on a law."""
        cell = identity_one_cell(m2_chain_1.law(0, 1))

        assert check_wdl_one_cell(cell).passed

    def test_flip_one_cell(self, m2_chain_1: WdlNObject) -> None:
        """Test a 1-cell with a two-dimensional carrier."""
        cell = flip_one_cell(m2_chain_1.law(0, 1), Space((2,)))
        report = check_wdl_one_cell(cell)

        assert report.passed
        assert "law_compatibility" in report.checks
        assert "xi_t.mult" in report.checks

    def test_wreath_one_cell(self, m2_chain_1: WdlNObject) -> None:
        """Test that a 1-cell induces a monad morphism of wreaths."""
        cell = flip_one_cell(m2_chain_1.law(0, 1), Space((2,)))
        morphism = wreath_one_cell(cell)

        assert morphism.carrier == Space((2,))
        assert check_monad_morphism(morphism).passed

    def test_compose_one_cells(self, flip_law: WeakDistributiveLaw) -> None:
        """Test that composite carriers are tensor products."""
        outer = flip_one_cell(flip_law, Space((3,)))
        inner = flip_one_cell(flip_law, Space((2,)))
        composite = compose_one_cells(outer, inner)

        assert composite.carrier == Space((3, 2))
        assert check_wdl_one_cell(composite).passed

    def test_broken_one_cell_rejected(self, flip_law: WeakDistributiveLaw) -> None:
        """Test that wreath_one_cell validates its input."""
        cell = flip_one_cell(flip_law, Space((2,)))
        broken = dataclasses.replace(cell, xi_t=cell.xi_t.scale(2))

        with pytest.raises(InvalidOneCell):
            wreath_one_cell(broken)


class TestBinaryFactorization:
    """Tests for recovering a law from a factorization of its wreath."""

    @pytest.mark.parametrize("which", ["flip", "chain"])
    def test_round_trip(
        self,
        which: str,
        flip_law: WeakDistributiveLaw,
        m2_chain_1: WdlNObject,
    ) -> None:
        """Test that factorizing the weak wreath product recovers the law."""
        w = flip_law if which == "flip" else m2_chain_1.law(0, 1)
        d, proj_t, proj_s = weak_wreath(w)
        report = check_binary_factorization(
            d, w.t, w.s, proj_t.structure, proj_s.structure, w.bar
        )

        assert report.passed
        assert "bar_is_iota_pi" in report.checks
        recovered = binary_factorize(
            d, w.t, w.s, proj_t.structure, proj_s.structure, w.bar
        )
        assert recovered.law == w.law

    @pytest.mark.parametrize("which", ["lambda", "lambda_hat"])
    @pytest.mark.parametrize(
        "name",
        [
            pytest.param(name, marks=pytest.mark.slow) if name == "m3" else name
            for name in BUILTIN_NAMES
        ],
    )
    def test_round_trip_canonical_laws(self, name: str, which: str) -> None:
        """Test the round trip for both canonical laws of every builtin."""
        h = builtin_bialgebra(name)
        hhat, ev = dual(h)
        if which == "lambda":
            w = WeakDistributiveLaw(
                h.algebra, hhat.algebra, canonical_lambda(h, hhat, ev)
            )
        else:
            w = WeakDistributiveLaw(
                hhat.algebra, h.algebra, canonical_lambda_hat(h, hhat, ev)
            )
        d, proj_t, proj_s = weak_wreath(w)
        recovered = binary_factorize(
            d, w.t, w.s, proj_t.structure, proj_s.structure, w.bar
        )

        assert recovered.law == w.law

    def test_bad_section(self, m2_chain_1: WdlNObject) -> None:
        """Test that a zero section violates condition (b)."""
        w = m2_chain_1.law(0, 1)
        d, proj_t, proj_s = weak_wreath(w)
        zero = zero_map(d.space, d.space)

        with pytest.raises(PreconditionFailure) as exc:
            binary_factorize(d, w.t, w.s, proj_t.structure, proj_s.structure, zero)
        assert exc.value.condition == "b"
        assert "condition (b)" in str(exc.value)

    def test_bad_morphism(self, m2_chain_1: WdlNObject) -> None:
        """Test that a zero projection violates condition (a)."""
        w = m2_chain_1.law(0, 1)
        d, _, proj_s = weak_wreath(w)
        zero = zero_map(w.t.space, d.space)

        with pytest.raises(PreconditionFailure) as exc:
            binary_factorize(d, w.t, w.s, zero, proj_s.structure, w.bar)
        assert exc.value.condition == "a"
        assert exc.value.report is not None
        assert exc.value.report.failed("a.alpha")
