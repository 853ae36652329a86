import random
from fractions import Fraction

import pytest

from torusdyn import (
    BudgetExceededError,
    DegenerateFixedLocusError,
    IntegerMatrix,
    LatticeEndomorphism,
    SimpleFactorSpec,
    TorsionPoint,
    brute_force_count,
    compare_exact,
    count_fixed,
    eigenvalue_magnitude_check,
    enumerate_fixed,
    factor_product_formula,
    growth_table,
    lefschetz_number,
    periodic_subvariety_count,
    power,
)
from torusdyn.scenarios import (
    bielliptic_scenario,
    diagonal_subvariety_scenario,
    gaussian_cm_scenario,
    multiplication_scenario,
    sum_difference_scenario,
)

from oracles import random_nonsingular

GAUSSIAN = LatticeEndomorphism(IntegerMatrix.from_rows([[1, -1], [1, 1]]))
HALF = Fraction(1, 2)


def mult(m, g=1):
    return LatticeEndomorphism.multiplication_by(m, g)


class TestCountFixed:
    @pytest.mark.parametrize("m", (2, 3, 4))
    @pytest.mark.parametrize("g", (1, 2))
    @pytest.mark.parametrize("l", (1, 2, 3))
    def test_torsion_law(self, m, g, l):
        assert count_fixed(mult(m, g), l) == (m**l - 1) ** (2 * g)

    def test_gaussian_l2(self):
        # |(1+i)^2 - 1|^2 = |2i - 1|^2 = 5; brute oracle over the 1/5 grid agrees
        assert count_fixed(GAUSSIAN, 2) == 5

    def test_identity_degenerate(self):
        with pytest.raises(DegenerateFixedLocusError):
            count_fixed(LatticeEndomorphism.identity(1), 1)

    def test_translation_invariance(self):
        rng = random.Random(3)
        for _ in range(15):
            matrix = random_nonsingular(rng, 2)
            plain = LatticeEndomorphism(matrix)
            shifted = LatticeEndomorphism(
                matrix, (Fraction(rng.randint(0, 5), 6), Fraction(rng.randint(0, 5), 6))
            )
            for l in (1, 2, 3):
                try:
                    expected = count_fixed(plain, l)
                except DegenerateFixedLocusError:
                    continue
                assert count_fixed(shifted, l) == expected


class TestEnumerateFixed:
    def test_mult_2_l1_only_origin(self):
        points = enumerate_fixed(mult(2), 1)
        assert points == [TorsionPoint.reduce([0, 0])]

    def test_mult_3_l1_two_torsion(self):
        points = enumerate_fixed(mult(3), 1)
        expected = sorted(
            (
                TorsionPoint((Fraction(a, 2), Fraction(b, 2)))
                for a in (0, 1)
                for b in (0, 1)
            ),
            key=lambda p: p.coordinates,
        )
        assert points == expected

    def test_translated_map_single_point(self):
        f = LatticeEndomorphism(IntegerMatrix.scalar(2, 2), (HALF, Fraction(0)))
        assert enumerate_fixed(f, 1) == [TorsionPoint((HALF, Fraction(0)))]

    def test_points_are_fixed_distinct_and_counted(self):
        cases = [
            (GAUSSIAN, 3),
            (mult(3), 2),
            (LatticeEndomorphism(IntegerMatrix.from_rows([[2, 1], [1, 1]])), 2),
            (
                LatticeEndomorphism(
                    IntegerMatrix.from_rows([[2, 1], [0, 3]]),
                    (Fraction(1, 3), HALF),
                ),
                1,
            ),
        ]
        for f, l in cases:
            points = enumerate_fixed(f, l)
            assert len(points) == count_fixed(f, l)
            assert len({p.coordinates for p in points}) == len(points)
            fl = power(f, l)
            for p in points:
                assert fl.value_at(p.coordinates) == p.coordinates

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateFixedLocusError):
            enumerate_fixed(LatticeEndomorphism.identity(2), 3)


class TestBruteForce:
    def test_mult_2_l2(self):
        assert brute_force_count(mult(2), 2) == 9

    def test_gaussian_l1(self):
        # grid has a single point (D = 1), the origin
        assert brute_force_count(GAUSSIAN, 1) == 1

    def test_budget_refusal(self):
        with pytest.raises(BudgetExceededError):
            brute_force_count(mult(2, 2), 4, budget=1000)

    def test_agrees_with_determinant_count(self):
        rng = random.Random(9)
        checked = 0
        while checked < 12:
            f = LatticeEndomorphism(random_nonsingular(rng, 2, -3, 3))
            try:
                expected = count_fixed(f, 2)
            except DegenerateFixedLocusError:
                continue
            if expected > 4000:
                continue
            assert brute_force_count(f, 2, budget=10**6) == expected
            checked += 1

    def test_translated_grid_refinement(self):
        # the solution x = (2/3, 0) lies outside the kernel grid (D = 1),
        # so the scan must refine by the translation denominator
        f = LatticeEndomorphism(
            IntegerMatrix.scalar(2, 2), (Fraction(1, 3), Fraction(0))
        )
        assert brute_force_count(f, 1) == count_fixed(f, 1) == 1


class TestGrowthTable:
    def test_mult_2_ratios(self):
        rows = growth_table(mult(2), 4, 1, 5)
        for row in rows:
            assert row.ratio == Fraction((2**row.l - 1) ** 2, 4**row.l)
        assert rows[1].ratio == Fraction(9, 16)

    def test_gaussian_first_row(self):
        rows = growth_table(GAUSSIAN, 2, 1, 3)
        assert rows[0].ratio == Fraction(1, 2)
        assert rows[0].asymptote == 2

    def test_asymptote_at_l1(self):
        rows = growth_table(mult(3, 2), 9, 2, 1)
        assert rows[0].asymptote == 9**2

    def test_degenerate_row_propagates_with_context(self):
        # eigenvalue 1 makes every iterate degenerate
        f = LatticeEndomorphism(IntegerMatrix.diagonal([1, 2]))
        with pytest.raises(DegenerateFixedLocusError, match="M\\^1"):
            growth_table(f, 2, 1, 3)

    def test_ratio_bound_on_builtins(self):
        # |ratio - 1| <= 2^(2 - l/2) checked exactly: 2^l (ratio-1)^2 <= 16
        scenarios = [
            (multiplication_scenario(2), 4),
            (gaussian_cm_scenario(), 2),
            (sum_difference_scenario(), 2),
            (multiplication_scenario(3, 2), 9),
            (bielliptic_scenario(), 9),
        ]
        for scenario, q in scenarios:
            rows = growth_table(scenario.endomorphism, q, scenario.torus.g, 12)
            for row in rows:
                if row.l >= 4:
                    assert 2**row.l * (row.ratio - 1) ** 2 <= 16


class TestFactorFormula:
    def test_single_factor_values(self):
        assert factor_product_formula([SimpleFactorSpec(g=1, q=2)], 3) == 7
        assert factor_product_formula([SimpleFactorSpec(g=2, q=3)], 1) == 4

    def test_multiplicity(self):
        one = factor_product_formula([SimpleFactorSpec(g=1, q=9, multiplicity=2)], 1)
        two = factor_product_formula(
            [SimpleFactorSpec(g=1, q=9), SimpleFactorSpec(g=1, q=9)], 1
        )
        assert one == two == 64

    def test_zero_dimension_unrepresentable(self):
        with pytest.raises(ValueError):
            SimpleFactorSpec(g=0, q=2)


class TestCompareExact:
    def test_mult_2_rows(self):
        report = compare_exact(mult(2), [SimpleFactorSpec(g=1, q=4)], 2)
        first, second = report.rows
        assert (first.exact_count, first.formula_value, first.difference) == (1, 3, -2)
        assert (second.exact_count, second.formula_value, second.difference) == (
            9,
            15,
            -6,
        )

    def test_gaussian_agrees_at_l1(self):
        report = compare_exact(GAUSSIAN, [SimpleFactorSpec(g=1, q=2)], 1)
        row = report.rows[0]
        assert (row.exact_count, row.formula_value, row.difference) == (1, 1, 0)

    def test_degenerate_rows_flagged(self):
        f = LatticeEndomorphism(IntegerMatrix.diagonal([1, 1, 1, 1, 4, 4]))
        report = compare_exact(f, [SimpleFactorSpec(g=1, q=16)], 2)
        assert all(row.degenerate for row in report.rows)
        assert all(row.exact_count is None for row in report.rows)

    def test_deterministic(self):
        a = compare_exact(mult(2), [SimpleFactorSpec(g=1, q=4)], 5)
        b = compare_exact(mult(2), [SimpleFactorSpec(g=1, q=4)], 5)
        assert a == b


class TestLefschetz:
    def test_mult_2(self):
        assert lefschetz_number(mult(2), 1) == 1

    def test_mult_3(self):
        assert lefschetz_number(mult(3), 1) == 4

    def test_zero_map(self):
        assert lefschetz_number(LatticeEndomorphism(IntegerMatrix.zero(2, 2))) == 1

    def test_absolute_value_matches_count(self):
        rng = random.Random(21)
        for _ in range(20):
            f = LatticeEndomorphism(random_nonsingular(rng, 4))
            for l in (1, 2):
                try:
                    expected = count_fixed(f, l)
                except DegenerateFixedLocusError:
                    continue
                assert abs(lefschetz_number(f, l)) == expected


class TestEigenvalueMagnitude:
    def test_multiplication_maps(self):
        for m in (2, 3, 4):
            check = eigenvalue_magnitude_check(mult(m), m * m)
            assert check.passed
            assert check.max_residual <= 1e-9

    def test_gaussian_roots(self):
        # roots of x^2 - 2x + 2 are 1 +- i with |root|^2 = 2
        check = eigenvalue_magnitude_check(GAUSSIAN, 2)
        assert check.passed
        assert sorted(round(z.real, 6) for z in check.roots) == [1.0, 1.0]

    def test_sumdiff_roots(self):
        # charpoly is (x^2 - 2)^2; roots +-sqrt(2) with |root|^2 = 2
        scenario = sum_difference_scenario()
        check = eigenvalue_magnitude_check(scenario.endomorphism, 2)
        assert check.passed
        assert check.max_residual <= 1e-9

    def test_failure_reported(self):
        f = LatticeEndomorphism(IntegerMatrix.diagonal([2, 3]))
        check = eigenvalue_magnitude_check(f, 4)
        assert not check.passed
        assert check.max_residual >= 1.0


class TestPeriodicSubvariety:
    def test_diagonal_restriction_counts(self):
        scenario = diagonal_subvariety_scenario()
        sub = scenario.subvariety
        for l in (1, 2, 3, 4):
            count = periodic_subvariety_count(
                scenario.endomorphism, sub.basis, sub.translate, sub.period, l
            )
            assert count == (2**l - 1) ** 2

    def test_coordinate_factor(self):
        f = LatticeEndomorphism(IntegerMatrix.diagonal([2, 2, 3, 3]))
        basis = IntegerMatrix.from_rows([[1, 0], [0, 1], [0, 0], [0, 0]])
        count = periodic_subvariety_count(
            f, basis, TorsionPoint.reduce([0, 0, 0, 0]), 1, 1
        )
        assert count == 1

    def test_nonperiodic_translate_rejected(self):
        f = mult(2, 2)
        basis = IntegerMatrix.from_rows([[1, 0], [0, 1], [1, 0], [0, 1]])
        bad = TorsionPoint.reduce([Fraction(1, 5), 0, Fraction(1, 5), 0])
        with pytest.raises(ValueError, match="periodic"):
            periodic_subvariety_count(f, basis, bad, 1, 1)

    def test_periodic_translate_accepted(self):
        # on the diagonal, 1/3-torsion is fixed by [4] = [2]^2 up to lattice
        f = mult(2, 2)
        basis = IntegerMatrix.from_rows([[1, 0], [0, 1], [1, 0], [0, 1]])
        q = TorsionPoint.reduce([Fraction(1, 3), 0, Fraction(1, 3), 0])
        # [2]^2 maps 1/3 to 4/3 = 1/3 mod 1
        count = periodic_subvariety_count(f, basis, q, 2, 1)
        assert count == (4 - 1) ** 2

    def test_triple_path_agreement_on_restriction(self):
        scenario = diagonal_subvariety_scenario()
        sub = scenario.subvariety
        from torusdyn import restrict_to_sublattice

        restricted = restrict_to_sublattice(scenario.endomorphism, sub.basis)
        for l in (1, 2, 3):
            a = count_fixed(restricted, l)
            b = len(enumerate_fixed(restricted, l))
            c = brute_force_count(restricted, l)
            assert a == b == c
