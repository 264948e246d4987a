import numpy as np
import pytest

from lodeg.groebner import (
    BudgetExceeded,
    CharacteristicHazard,
    GroebnerBasis,
    Ideal,
    NotZeroDimensional,
    buchberger,
    count_points,
    eliminate,
    is_unit_ideal,
    krull_dimension,
    multiplication_matrix,
    normal_form,
    quotient_basis,
    saturate,
    saturate_by_ideal,
)
from lodeg.poly import GREVLEX, LEX, PolyRing, PrimeField, QQ

P1 = 2147483647


def qring(*names):
    return PolyRing(tuple(names), QQ, GREVLEX)


def fring(*names):
    return PolyRing(tuple(names), PrimeField(P1), GREVLEX)


class TestBuchberger:
    def test_known_reduced_basis(self):
        r = qring("x", "y", "z")
        gb = buchberger(Ideal.of(r, [r.parse("x^2+y^2+z^2-1"), r.parse("y-x^2")]))
        assert [str(g) for g in gb.basis] == ["x^2 - y", "y^2 + z^2 + y - 1"]

    def test_basis_is_monic_and_sorted(self):
        r = qring("x", "y")
        gb = buchberger(Ideal.of(r, [r.parse("2*x^2*y - 4"), r.parse("3*y^3 - x")]))
        keyf = r.order.key
        lms = [g.leading_monomial() for g in gb.basis]
        assert all(g.leading_coefficient() == 1 for g in gb.basis)
        assert lms == sorted(lms, key=keyf, reverse=True)

    def test_membership_decided_by_normal_form(self):
        r = qring("x", "y")
        f1, f2 = r.parse("x^2 - y"), r.parse("x*y - 1")
        gb = buchberger(Ideal.of(r, [f1, f2]))
        member = f1 * r.parse("y^3 - x") + f2 * r.parse("x + 7")
        assert normal_form(member, gb).is_zero()
        assert not normal_form(r.parse("x + 1"), gb).is_zero()

    def test_lex_elimination_shape(self):
        # lex basis of a zero-dimensional system is triangular
        r = PolyRing(("x", "y"), QQ, LEX)
        gb = buchberger(Ideal.of(r, [r.parse("x^2 + y^2 - 1"), r.parse("x - y")]))
        tails = [g for g in gb.basis if all(e == 0 for e in g.leading_monomial()[:1])]
        assert len(tails) == 1  # one generator purely in y

    def test_unit_ideal(self):
        r = qring("x")
        gb = buchberger(Ideal.of(r, [r.parse("x"), r.parse("x - 1")]))
        assert gb.is_unit()
        assert is_unit_ideal(Ideal.of(r, [r.parse("x"), r.parse("x-1")]))

    def test_zero_ideal(self):
        r = qring("x", "y")
        gb = buchberger(Ideal(r, ()))
        assert gb.basis == ()

    def test_over_prime_field(self):
        r = fring("x", "y")
        gb = buchberger(Ideal.of(r, [r.parse("x^2 - y"), r.parse("y^2 - x")]))
        check = r.parse("x^4 - x")
        assert normal_form(check, gb).is_zero()

    def test_budget_exceeded(self):
        r = qring("a", "b", "c", "d")
        cyclic = [
            r.parse("a+b+c+d"),
            r.parse("a*b+b*c+c*d+d*a"),
            r.parse("a*b*c+b*c*d+c*d*a+d*a*b"),
            r.parse("a*b*c*d-1"),
        ]
        with pytest.raises(BudgetExceeded):
            buchberger(Ideal.of(r, cyclic), budget_secs=1e-9)


class TestDimension:
    def test_hypersurface(self):
        r = qring("x", "y", "z")
        assert krull_dimension(Ideal.of(r, [r.parse("x*y - z^2")])) == 2

    def test_points(self):
        r = qring("x", "y")
        ideal = Ideal.of(r, [r.parse("x^2 - 1"), r.parse("y^3 - y")])
        assert krull_dimension(ideal) == 0

    def test_zero_and_unit(self):
        r = qring("x", "y", "z")
        assert krull_dimension(Ideal(r, ())) == 3
        assert krull_dimension(Ideal.of(r, [r.one()])) == -1

    def test_line_in_three_space(self):
        r = qring("x", "y", "z")
        assert krull_dimension(Ideal.of(r, [r.parse("x"), r.parse("y")])) == 1


class TestEliminateAndSaturate:
    def test_eliminate_projection_of_curve(self):
        r = qring("x", "y", "z")
        ideal = Ideal.of(r, [r.parse("y - x^2"), r.parse("z - x^3")])
        out = eliminate(ideal, 1)
        assert [str(g) for g in out.generators] == ["y^3 - z^2"]
        assert out.ring.variables == ("y", "z")

    def test_eliminate_can_be_empty(self):
        r = qring("x", "y")
        out = eliminate(Ideal.of(r, [r.parse("x - 1")]), 1)
        assert out.generators == ()

    def test_saturate_removes_embedded_factor(self):
        r = qring("x", "y", "z")
        ideal = Ideal.of(r, [r.parse("x*y"), r.parse("x*z")])
        out = saturate(ideal, r.parse("y"))
        assert [str(g) for g in out.generators] == ["x"]

    def test_saturate_by_whole_ideal(self):
        r = fring("x", "y", "z")
        ideal = Ideal.of(r, [r.parse("x*y"), r.parse("x*z")])
        other = Ideal.of(r, [r.parse("y"), r.parse("z")])
        out = saturate_by_ideal(ideal, other, seed=5)
        assert [str(g) for g in out.generators] == ["x"]

    def test_saturate_no_op_when_coprime(self):
        r = qring("x", "y")
        ideal = Ideal.of(r, [r.parse("x^2 + 1")])
        out = saturate(ideal, r.parse("y"))
        assert [str(g) for g in out.generators] == ["x^2 + 1"]


class TestZeroDimensional:
    def test_quotient_basis_of_two_circles(self):
        r = fring("x", "y")
        gb = buchberger(Ideal.of(r, [r.parse("x^2 + y^2 - 1"), r.parse("y - x^2")]))
        qb = quotient_basis(gb)
        assert len(qb) == 4

    def test_quotient_basis_rejects_curves(self):
        r = fring("x", "y")
        gb = buchberger(Ideal.of(r, [r.parse("y - x^2")]))
        with pytest.raises(NotZeroDimensional):
            quotient_basis(gb)

    def test_multiplication_matrix_on_quadratic(self):
        r = fring("x")
        gb = buchberger(Ideal.of(r, [r.parse("x^2 - 2")]))
        qb = quotient_basis(gb)
        mat = multiplication_matrix(gb, qb, [1])
        # basis (1, x): multiplying by x sends 1 -> x and x -> 2
        assert mat.tolist() == [[0, 2], [1, 0]]

    def test_count_distinct_points_of_curve_pair(self):
        r = fring("x", "y")
        ideal = Ideal.of(r, [r.parse("x^2 + y^2 - 1"), r.parse("y - x^2")])
        assert count_points(ideal, seed=12345) == 4

    def test_count_empty_system(self):
        r = fring("x")
        assert count_points(Ideal.of(r, [r.parse("x"), r.parse("x - 1")]), seed=1) == 0

    def test_count_requires_prime_field(self):
        r = qring("x")
        with pytest.raises(TypeError):
            count_points(Ideal.of(r, [r.parse("x^2 - 1")]), seed=1)

    def test_count_univariate_with_multiplicities(self):
        # (x-1)^3 (x-2) has two distinct roots
        r = fring("x")
        f = r.parse("(x - 1)^3 * (x - 2)")
        assert count_points(Ideal.of(r, [f]), seed=9) == 2

    def test_count_matches_product_of_linear_factors(self):
        r = fring("x")
        x = r.gen(0)
        roots = [3, 5, 5, 11, 3]
        f = r.one()
        for a in roots:
            f = f * (x - a)
        assert count_points(Ideal.of(r, [f]), seed=77) == len(set(roots))

    def test_characteristic_hazard_guard(self):
        # the check compares quotient dimension with p; simulate by a tiny
        # stand-in ring is impossible (primes must exceed 2^30), so assert
        # the exception type exists and derives from RuntimeError
        assert issubclass(CharacteristicHazard, RuntimeError)


class TestGroebnerBasisType:
    def test_leading_monomials_exposed(self):
        r = qring("x", "y")
        gb = buchberger(Ideal.of(r, [r.parse("x^2 - y")]))
        assert gb.leading_monomials() == ((2, 0),)
        assert isinstance(gb, GroebnerBasis)
