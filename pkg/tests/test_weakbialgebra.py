"""Tests for weak bialgebras, duals, actions and the canonical laws."""

import dataclasses

import pytest

from weak_wreath.exactlinalg import Field
from weak_wreath.exceptions import NotAGroup
from weak_wreath.finvect import compose
from weak_wreath.wdl import check_wdl
from weak_wreath.weakbialgebra import (
    BUILTIN_NAMES,
    WeakBialgebra,
    builtin_bialgebra,
    canonical_lambda,
    canonical_lambda_hat,
    check_action_laws,
    check_double_dual,
    check_dual_pair,
    check_source_counit,
    check_weak_bialgebra,
    cyclic_group_table,
    dual,
    eps_bar_s,
    group_algebra,
    lambda_via_actions,
    pair_groupoid_algebra,
)


class TestWeakBialgebraAxioms:
    """Tests for the weak bialgebra checker."""

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_builtins_pass(self, name: str) -> None:
        """Test that every packaged example is a weak bialgebra."""
        report = check_weak_bialgebra(builtin_bialgebra(name))

        assert report.passed, [str(f) for f in report.failures]

    def test_group_algebra_is_strict(self, z2: WeakBialgebra) -> None:
        """Test that a group algebra is an ordinary bialgebra."""
        report = check_weak_bialgebra(z2)

        assert report.flags["strict_unit"] is True
        assert report.flags["strict_counit"] is True
        assert report.flags["strict"] is True
        assert report.values["dimension"] == 2

    def test_pair_groupoid_is_weak(self, m2: WeakBialgebra) -> None:
        """Test that the comultiplication of M2 does not preserve the unit."""
        report = check_weak_bialgebra(m2)

        assert report.passed
        assert report.flags["strict_unit"] is False
        assert report.flags["strict_counit"] is False
        assert report.flags["strict"] is False
        assert report.values["dimension"] == 4

    @pytest.mark.parametrize(
        "structure, factor, check",
        [
            ("counit", 0, "coalgebra.left_counit"),
            ("counit", 2, "coalgebra.left_counit"),
            ("comul", 2, "coalgebra.left_counit"),
            ("mul", 2, "algebra.left_unit"),
            ("unit", 2, "algebra.left_unit"),
        ],
    )
    def test_mutations_fail_with_witness(
        self, z2: WeakBialgebra, structure: str, factor: int, check: str
    ) -> None:
        """Test that a scaled or zeroed structure map is caught and located."""
        scaled = getattr(z2, structure).scale(factor)
        mutated = dataclasses.replace(z2, **{structure: scaled})
        report = check_weak_bialgebra(mutated)

        assert not report.passed
        failure = report.failure(check)
        assert failure is not None
        assert failure.witness == (0,)
        assert "differs on input (0,)" in str(failure)

    def test_check_names_are_prefixed(self, z2: WeakBialgebra) -> None:
        """Test that the algebra and coalgebra axioms appear under prefixes."""
        checks = check_weak_bialgebra(z2).checks

        assert "algebra.associativity" in checks
        assert "coalgebra.coassociativity" in checks
        assert "multiplicativity" in checks
        assert "weak_counit_right" in checks

    def test_prime_field(self) -> None:
        """Test that M2 over GF(3) is also a weak bialgebra."""
        m2 = builtin_bialgebra("m2", Field(3))

        assert m2.field == Field(3)
        assert check_weak_bialgebra(m2).passed


class TestDual:
    """Tests for the dual weak bialgebra and its pairing."""

    def test_dual_pair(self, m2: WeakBialgebra) -> None:
        """Test the four pairing diagrams and non-degeneracy."""
        hhat, ev = dual(m2)
        report = check_dual_pair(m2, hhat, ev)

        assert report.passed
        assert ev.is_nondegenerate()
        assert check_weak_bialgebra(hhat).passed

    def test_double_dual(self, m2: WeakBialgebra) -> None:
        """Test that H -> H^^ is an isomorphism of weak bialgebras."""
        report = check_double_dual(m2)

        assert report.passed
        assert report.checks == ["mul", "unit", "comul", "counit", "invertible"]

    def test_dual_structure_is_transposed(self, z2: WeakBialgebra) -> None:
        """Test that the dual product is the transposed coproduct."""
        hhat, _ = dual(z2)

        assert hhat.mul.matrix == z2.comul.matrix.transpose()
        assert hhat.counit.matrix == z2.unit.matrix.transpose()


class TestSourceCounit:
    """Tests for the source counital map."""

    def test_pair_groupoid_source(self, m2: WeakBialgebra) -> None:
        """Test that e_ij is sent to e_ii."""
        bar = eps_bar_s(m2)

        assert bar.image_of((0,)) == {(0,): 1}
        assert bar.image_of((1,)) == {(0,): 1}
        assert bar.image_of((2,)) == {(3,): 1}
        assert bar.image_of((3,)) == {(3,): 1}

    def test_source_counit_identities(self, m2: WeakBialgebra) -> None:
        """Test idempotency and the two identities with mu and Delta."""
        report = check_source_counit(m2)

        assert report.passed
        assert report.flags["is_unit_counit"] is False

    def test_group_algebra_source_is_unit_counit(self, z2: WeakBialgebra) -> None:
        """Test that the source map of a bialgebra is unit after counit."""
        report = check_source_counit(z2)

        assert report.passed
        assert report.flags["is_unit_counit"] is True


class TestActionsAndLaws:
    """Tests for the actions of the dual and the canonical laws."""

    def test_action_laws(self, m2: WeakBialgebra) -> None:
        """Test that xi and zeta are associative and unital actions."""
        hhat, ev = dual(m2)

        assert check_action_laws(m2, hhat, ev).passed

    def test_lambda_via_actions(self, m2: WeakBialgebra) -> None:
        """Test both rebuilt forms of the canonical law."""
        hhat, ev = dual(m2)
        lam = canonical_lambda(m2, hhat, ev)
        via_xi, via_zeta = lambda_via_actions(m2, hhat, ev)

        assert via_xi == lam
        assert via_zeta == lam

    def test_canonical_laws_are_weak_distributive(self, m2: WeakBialgebra) -> None:
        """Test both canonical laws on H and its dual."""
        hhat, ev = dual(m2)
        lam = canonical_lambda(m2, hhat, ev)
        lam_hat = canonical_lambda_hat(m2, hhat, ev)

        assert check_wdl(m2.algebra, hhat.algebra, lam).passed
        report = check_wdl(hhat.algebra, m2.algebra, lam_hat)
        assert report.passed
        assert report.values["rank_lambda_bar"] == 8
        assert report.flags["strict"] is False

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_bar_is_identity_iff_strict(self, name: str) -> None:
        """Test that both canonical laws are strict exactly for strict H."""
        h = builtin_bialgebra(name)
        strict = check_weak_bialgebra(h).flags["strict_unit"]
        hhat, ev = dual(h)
        lam = check_wdl(h.algebra, hhat.algebra, canonical_lambda(h, hhat, ev))
        lam_hat = check_wdl(
            hhat.algebra, h.algebra, canonical_lambda_hat(h, hhat, ev)
        )

        assert lam.passed and lam_hat.passed
        assert lam.flags["strict"] == strict
        assert lam_hat.flags["strict"] == strict
        assert strict == (name not in ("m2", "m3"))

    def test_hopf_law_is_strict(self, z2: WeakBialgebra) -> None:
        """Test that the canonical law of a Hopf algebra has trivial bar."""
        hhat, ev = dual(z2)
        lam_hat = canonical_lambda_hat(z2, hhat, ev)
        report = check_wdl(hhat.algebra, z2.algebra, lam_hat)

        assert report.passed
        assert report.flags["strict"] is True
        assert report.values["rank_lambda_bar"] == 4


class TestGenerators:
    """Tests for group algebras, pair groupoids and the builtin table."""

    def test_cyclic_group(self) -> None:
        """Test F[Z3]."""
        h = group_algebra(cyclic_group_table(3))

        assert h.dim == 3
        assert h.unit.image_of(()) == {(0,): 1}
        assert compose(h.counit, h.unit).image_of(()) == {(): 1}

    def test_not_square(self) -> None:
        """Test a table that is not square."""
        with pytest.raises(NotAGroup) as exc:
            group_algebra([[0, 1]])
        assert "not square" in str(exc.value)

    def test_entries_outside_group(self) -> None:
        """Test a table naming elements that do not exist."""
        with pytest.raises(NotAGroup) as exc:
            group_algebra([[0, 5], [5, 0]])
        assert "outside the group" in str(exc.value)

    def test_no_identity(self) -> None:
        """Test an associative table without an identity."""
        with pytest.raises(NotAGroup) as exc:
            group_algebra([[0, 1], [0, 1]])
        assert "No identity" in str(exc.value)

    def test_no_inverse(self) -> None:
        """Test a monoid that is not a group."""
        with pytest.raises(NotAGroup) as exc:
            group_algebra([[0, 1], [1, 1]])
        assert "no inverse" in str(exc.value)

    def test_not_a_group_is_a_value_error(self) -> None:
        """Test that callers catching ValueError also catch NotAGroup."""
        with pytest.raises(ValueError):
            group_algebra([])

    def test_pair_groupoid_size(self) -> None:
        """Test the dimension and validation of pair groupoid algebras."""
        assert pair_groupoid_algebra(3).dim == 9
        with pytest.raises(ValueError) as exc:
            pair_groupoid_algebra(0)
        assert "at least 1" in str(exc.value)

    def test_builtin_lookup(self) -> None:
        """Test case-insensitive lookup and unknown names."""
        assert builtin_bialgebra("M2").label == "M2"
        assert builtin_bialgebra("s3").dim == 6
        with pytest.raises(ValueError) as exc:
            builtin_bialgebra("z7")
        assert "Valid options" in str(exc.value)
