from fractions import Fraction

import pytest

from lodeg.conormal import (
    DegenerateSlice,
    InvalidVariety,
    MultiplierSystem,
    VarietySpec,
    affine_conormal_ideal,
    build_trail,
    multiplier_slack_forms,
    multiplier_system,
    projective_conormal_ideal,
    restrict_base,
    slice_variety,
)
from lodeg.groebner import Ideal, buchberger, krull_dimension, normal_form
from lodeg.poly import GREVLEX, QQ, PolyRing
from lodeg.randomness import DEFAULT_PRIMES, SeedStream


class TestVarietySpec:
    def test_define_from_strings(self, sphere):
        assert sphere.n == 3
        assert sphere.dimension == 2
        assert sphere.codimension == 1
        assert not sphere.is_homogeneous()

    def test_define_from_polynomials(self):
        ring = PolyRing(("x", "y"), QQ, GREVLEX)
        spec = VarietySpec.define(("x", "y"), [ring.parse("x*y - 1")])
        assert spec.dimension == 1

    def test_rejects_zero_generator(self):
        with pytest.raises(InvalidVariety):
            VarietySpec.define(("x",), ["0"])

    def test_rejects_empty_generators(self):
        with pytest.raises(InvalidVariety):
            VarietySpec.define(("x", "y"), [])

    def test_rejects_unit_ideal(self):
        with pytest.raises(InvalidVariety, match="unit ideal"):
            VarietySpec.define(("x",), ["x", "x - 1"])

    def test_homogeneous_detection(self, quadric_cone):
        assert quadric_cone.is_homogeneous()

    def test_reduce_mod(self, sphere):
        ideal = sphere.reduce_mod(DEFAULT_PRIMES[0])
        assert ideal.ring.field_.p == DEFAULT_PRIMES[0]
        assert len(ideal.generators) == 1

    def test_degree_forms(self, space_curve):
        assert space_curve.degree_forms() == [2, 2]


class TestTrail:
    def test_pivot_is_last_nonzero_coefficient(self):
        ring = PolyRing(("x", "y", "z"), QQ, GREVLEX)
        trail = build_trail(ring, [((Fraction(1), Fraction(2), Fraction(3)), Fraction(6))])
        step = trail.steps[0]
        assert step.pivot_name == "z"
        # x + 2y + 3z = 6 solves to z = 2 - x/3 - 2y/3.
        assert str(step.replacement) == "-1/3*x - 2/3*y + 2"

    def test_push_objective(self):
        ring = PolyRing(("x", "y", "z"), QQ, GREVLEX)
        trail = build_trail(ring, [((Fraction(1), Fraction(2), Fraction(3)), Fraction(6))])
        coeffs, const = trail.push_objective([0, 0, 1])
        assert coeffs == [Fraction(-1, 3), Fraction(-2, 3)]
        assert const == Fraction(2)

    def test_apply_rejects_foreign_ring(self):
        ring = PolyRing(("x", "y"), QQ, GREVLEX)
        other = PolyRing(("a", "b"), QQ, GREVLEX)
        trail = build_trail(ring, [((Fraction(1), Fraction(1)), Fraction(0))])
        with pytest.raises(ValueError):
            trail.apply(other.parse("a"))

    def test_restrict_to_keeps_trailing_variables(self):
        ring = PolyRing(("x1", "x2", "lam0"), QQ, GREVLEX)
        trail = build_trail(ring, [((Fraction(1), Fraction(1)), Fraction(0))], restrict_to=2)
        assert trail.steps[0].pivot_name == "x2"
        assert trail.final_ring.variables == ("x1", "lam0")


class TestSlicing:
    def test_single_section_drops_dimension(self, sphere):
        sliced = slice_variety(sphere, 1, seed=5)
        assert sliced.spec.dimension == 1
        assert sliced.spec.n == 2
        assert len(sliced.trail.steps) == 1

    def test_zero_sections_is_identity(self, sphere):
        sliced = slice_variety(sphere, 0, seed=5)
        assert sliced.spec is sphere
        assert sliced.trail.steps == ()

    def test_too_many_sections(self, sphere):
        with pytest.raises(ValueError):
            slice_variety(sphere, 3, seed=5)

    def test_same_seed_same_slice(self, sphere):
        a = slice_variety(sphere, 1, seed=9)
        b = slice_variety(sphere, 1, seed=9)
        assert a.forms == b.forms
        assert a.spec.generators == b.spec.generators

    def test_explicit_forms_in_source_width(self, sphere):
        forms = [
            ((Fraction(0), Fraction(0), Fraction(1)), Fraction(0)),
            ((Fraction(0), Fraction(1), Fraction(0)), Fraction(1)),
        ]
        sliced = slice_variety(sphere, 2, seed=0, forms=forms)
        assert sliced.spec.dimension == 0
        # x3 = 0 then x2 = 1 leaves x1^2 - 99.
        assert str(sliced.spec.generators[0]) == "x1^2 - 99"

    def test_inconsistent_explicit_form(self):
        plane = VarietySpec.define(("x1", "x2", "x3"), ["x3"])
        with pytest.raises(DegenerateSlice):
            slice_variety(
                plane,
                1,
                seed=0,
                forms=[((Fraction(0), Fraction(0), Fraction(1)), Fraction(5))],
            )


class TestMultiplierSystem:
    def test_hypersurface_covector(self, sphere):
        system = multiplier_system(sphere, DEFAULT_PRIMES[0])
        assert isinstance(system, MultiplierSystem)
        assert system.base_count == 3
        assert system.multiplier_count == 1
        assert system.excess == 0
        assert system.ring.variables == ("x1", "x2", "x3", "lam0")
        assert system.covector[0] == system.ring.parse("2*x1*lam0")
        assert system.covector[2] == system.ring.parse("2*x3*lam0")

    def test_excess_counts_redundant_generators(self):
        cubic = VarietySpec.define(
            ("x", "y", "z"),
            ["y - x^2", "z - x*y", "x*z - y^2"],
        )
        assert cubic.codimension == 2
        system = multiplier_system(cubic, DEFAULT_PRIMES[0])
        assert system.multiplier_count == 3
        assert system.excess == 1
        slack = multiplier_slack_forms(system, SeedStream(1))
        assert len(slack) == 1
        base_zero = (0,) * system.base_count
        assert all(m[: system.base_count] == base_zero for m, _ in slack[0].terms)

    def test_restrict_base(self, sphere):
        system = multiplier_system(sphere, DEFAULT_PRIMES[0])
        restricted = restrict_base(system, [((1, 1, 1), 0)])
        assert restricted.base_count == 2
        assert restricted.ring.nvars == 3
        assert len(restricted.covector) == 3

    def test_restrict_base_width_check(self, sphere):
        system = multiplier_system(sphere, DEFAULT_PRIMES[0])
        with pytest.raises(ValueError):
            restrict_base(system, [((1, 1), 0)])


class TestConormalIdeals:
    def test_affine_sphere(self, sphere):
        cono = affine_conormal_ideal(sphere)
        assert cono.kind == "affine"
        assert cono.base_count == 3
        assert cono.ring.nvars == 6
        assert cono.prime == DEFAULT_PRIMES[0]
        # The dual direction is parallel to the gradient, so the 2x2
        # cross terms between the point and the dual must vanish.
        gb = buchberger(Ideal.of(cono.ring, list(cono.generators)))
        cross = cono.ring.parse("x1*u1 - x2*u0")
        assert normal_form(cross, gb).is_zero()

    def test_methods_agree(self, sphere):
        by_minors = affine_conormal_ideal(sphere, method="minors")
        by_mult = affine_conormal_ideal(sphere, method="multiplier")
        gb_a = buchberger(Ideal.of(by_minors.ring, list(by_minors.generators)))
        gb_b = buchberger(Ideal.of(by_mult.ring, list(by_mult.generators)))
        assert sorted(map(str, gb_a.basis)) == sorted(map(str, gb_b.basis))

    def test_unknown_method(self, sphere):
        with pytest.raises(ValueError):
            affine_conormal_ideal(sphere, method="sorcery")

    def test_projective_sphere(self, sphere):
        cono = projective_conormal_ideal(sphere)
        assert cono.kind == "projective"
        assert cono.base_count == 4
        assert cono.ring.nvars == 8
        assert krull_dimension(Ideal.of(cono.ring, list(cono.generators))) == 4
        for g in cono.generators:
            bidegrees = {(sum(m[:4]), sum(m[4:])) for m, _ in g.terms}
            assert len(bidegrees) == 1
