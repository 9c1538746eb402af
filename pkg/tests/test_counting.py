"""Counting operators, rewrite identities, base case, character sums.

count_progressions is validated against an in-file pure-integer oracle
(two nested loops, explicit membership tests, no numpy) -- exhaustively
over every subset of F_5 and on seeded random sets at larger primes.
The rewrite identities are exact algebraic facts, so both sides must
agree to near machine precision on random inputs.
"""

import warnings

import numpy as np
import pytest

from ffprog.errors import (ArityMismatch, CharacteristicWarning,
                           DegenerateCombination, DependentSystem,
                           ElementOutOfField, EmptyInput, FieldMismatch,
                           IndexOutOfRange, InvalidRange, TwistedSystem)
from ffprog.field import make_field
from ffprog.functions import (character_function, dense_function, indicator,
                              random_one_bounded)
from ffprog.counting import (BaseCaseReport, LambdaResult, WeilSum,
                             additive_monomial_sums, base_case_report,
                             count_progressions, lambda_average,
                             main_term_error, poly_index_table,
                             twist_rewrite_check, weil_sum)
from ffprog.polys import int_poly, parse_poly, progression_system, reduce_and_eval
from ffprog.rng import SplitMix64


# -- oracle ------------------------------------------------------------------

def oracle_count(poly_coeffs, p, A, y_rule="all"):
    """Integer count of progressions {x + P_i(y)} inside A, from scratch."""
    A = {a % p for a in A}
    total = 0
    ys = range(1, p) if y_rule == "nonzero" else range(p)
    for y in ys:
        shifts = [sum(c * y ** i for i, c in enumerate(cs)) % p
                  for cs in poly_coeffs]
        for x in A:
            if all((x + s) % p in A for s in shifts):
                total += 1
    return total


SYSTEMS = {
    "single": ["y"],
    "ap3": ["y", "2y"],
    "quadratic": ["y", "y^2"],
}


# -- count_progressions -----------------------------------------------------------

@pytest.mark.parametrize("name", sorted(SYSTEMS))
@pytest.mark.parametrize("y_rule", ["all", "nonzero"])
def test_count_exhaustive_subsets_of_f5(name, y_rule):
    p = 5
    field = make_field(p)
    sys = progression_system(SYSTEMS[name])
    coeffs = [q.coeffs for q in sys.P]
    for mask in range(1 << p):
        A = {i for i in range(p) if mask >> i & 1}
        got = count_progressions(sys, A, y_rule, field=field)
        assert got == oracle_count(coeffs, p, A, y_rule)


def test_count_random_sets_medium_prime():
    p = 31
    field = make_field(p)
    rng = SplitMix64(7070)
    for name in sorted(SYSTEMS):
        sys = progression_system(SYSTEMS[name])
        coeffs = [q.coeffs for q in sys.P]
        for _ in range(10):
            A = set(rng.subset(p, 0.4))
            for y_rule in ("all", "nonzero"):
                assert count_progressions(sys, A, y_rule, field=field) == \
                    oracle_count(coeffs, p, A, y_rule)


def test_count_frozen_values():
    F7 = make_field(7)
    sys = progression_system(["y", "y^2"])
    assert count_progressions(sys, {1, 2, 4}, "all", field=F7) == 5
    ap = progression_system(["y", "2y"])
    assert count_progressions(ap, {0, 1, 3}, "nonzero", field=make_field(5)) == 2
    assert count_progressions(ap, {0, 1, 3, 5}, "all", field=make_field(11)) == 6


def test_count_extension_field_hand_case():
    # F_4, system {y}, A = {0, 1}: y = 0 and y = 1 each give both x's,
    # the two shifts involving t give none
    F4 = make_field(2, 2)
    A = [F4.element([0, 0]), F4.element([1, 0])]
    sys = progression_system(["y"])
    assert count_progressions(sys, A, "all") == 4
    assert count_progressions(sys, A, "nonzero") == 2


def test_count_field_inference_and_errors():
    F7 = make_field(7)
    sys = progression_system(["y"])
    A = [F7.element(1), F7.element(2)]
    assert count_progressions(sys, A, "all") == \
        count_progressions(sys, {1, 2}, "all", field=F7)
    with pytest.raises(EmptyInput):
        count_progressions(sys, {1, 2}, "all")  # bare ints: no field to infer
    with pytest.raises(InvalidRange):
        count_progressions(sys, A, "some")
    with pytest.raises(TwistedSystem):
        count_progressions(progression_system(["y"], ["y^2"]), A, "all")
    with pytest.raises(ElementOutOfField):
        count_progressions(sys, [make_field(5).element(1)], "all", field=F7)


def test_count_emits_no_warnings_even_when_dependent():
    field = make_field(7)
    sys = progression_system(["y", "2y"])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        count_progressions(sys, {0, 1, 3}, "all", field=field)


# -- lambda_average ----------------------------------------------------------------

def test_lambda_matches_scaled_count_on_indicators():
    field = make_field(11)
    rng = SplitMix64(515)
    for name in sorted(SYSTEMS):
        sys = progression_system(SYSTEMS[name])
        A = set(rng.subset(11, 0.5))
        f = indicator(field, A)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CharacteristicWarning)
            val = lambda_average(sys, [f] * (sys.m1 + 1))
        count = count_progressions(sys, A, "all", field=field)
        assert abs(val * 11 * 11 - count) < 1e-8
        assert abs(val.imag) < 1e-12


def test_lambda_twisted_matches_direct_sum():
    # direct evaluation of E_{x,y} f0(x) f1(x+y) psi(y^2) with explicit loops
    field = make_field(7)
    chi = field.character_matrix()
    rng = SplitMix64(616)
    f0 = random_one_bounded(field, rng)
    f1 = random_one_bounded(field, rng)
    sys = progression_system(["y"], ["y^2"])
    got = lambda_average(sys, [f0, f1], [character_function(field, 3)])
    direct = 0j
    for x in range(7):
        for y in range(7):
            direct += (f0.values[x] * f1.values[(x + y) % 7]
                       * chi[3, y * y % 7])
    assert abs(got - direct / 49) < 1e-12


def test_lambda_arity_and_field_errors():
    field = make_field(7)
    f = indicator(field, {1})
    sys = progression_system(["y", "y^2"])
    with pytest.raises(ArityMismatch):
        lambda_average(sys, [f, f])  # needs m1 + 1 = 3
    twisted = progression_system(["y"], ["y^2"])
    with pytest.raises(ArityMismatch):
        lambda_average(twisted, [f, f])  # missing the twist function
    with pytest.raises(ArityMismatch):
        lambda_average(sys, [f, f, [1] * 7])  # raw arrays are rejected
    with pytest.raises(FieldMismatch):
        lambda_average(sys, [f, f, indicator(make_field(5), {1})])


def test_lambda_warns_dependent_and_low_characteristic():
    f7 = indicator(make_field(7), {0, 1, 3})
    with pytest.warns(CharacteristicWarning, match="dependent"):
        lambda_average(progression_system(["y", "2y"]), [f7] * 3)
    # {2y, 3y^2} certifies at threshold 4, so F_3 is below it
    f3 = indicator(make_field(3), {0, 1})
    with pytest.warns(CharacteristicWarning, match="threshold"):
        lambda_average(progression_system(["2y", "3y^2"]), [f3] * 3)
    # independent and above threshold: silence
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lambda_average(progression_system(["2y", "3y^2"]), [f7] * 3)


# -- main term ----------------------------------------------------------------------

def test_main_term_error_split_is_exact():
    field = make_field(13)
    rng = SplitMix64(99)
    sys = progression_system(["y", "y^2"])
    for _ in range(5):
        A = set(rng.subset(13, 0.5))
        res = main_term_error(sys, A, field=field)
        assert isinstance(res, LambdaResult)
        assert res.value == res.main_term + res.error  # exact by construction
        alpha = len(A) / 13
        assert abs(res.main_term - alpha ** 3) < 1e-15
        count = count_progressions(sys, A, "all", field=field)
        assert abs(res.scaled_count - count) < 1e-7
        assert abs(res.scaled_error - (count - 169 * alpha ** 3)) < 1e-7
        assert res.q == 13
    with pytest.raises(TwistedSystem):
        main_term_error(progression_system(["y"], ["y^2"]), {1}, field=field)


# -- rewrite identities ----------------------------------------------------------------

def rewrite_case(seed):
    rng = SplitMix64(seed)
    field = make_field((5, 7, 11)[seed % 3])
    P = [parse_poly("y"), parse_poly("y^2")]
    Q = [parse_poly("y^3")] if seed % 2 else [parse_poly("y^3"), parse_poly("y^4")]
    sys = progression_system(P, Q)
    F = [random_one_bounded(field, rng) for _ in range(3)]
    Psi = [1 + rng.randrange(field.q - 1) for _ in Q]
    return sys, F, Psi


@pytest.mark.parametrize("k,mode", [(0, None), (0, "absorb"), (2, "absorb"),
                                    (1, "shift"), (2, "shift"), (1, None),
                                    (2, None)])
def test_rewrite_identities_exact(k, mode):
    for seed in range(6):
        sys, F, Psi = rewrite_case(seed)
        chk = twist_rewrite_check(sys, F, Psi, k, mode=mode)
        assert chk.abs_diff < 1e-10
        assert chk.k == k
        assert chk.mode == ("absorb" if (mode == "absorb" or k == 0) else "shift")


def test_rewrite_mode_validation():
    sys, F, Psi = rewrite_case(0)
    with pytest.raises(IndexOutOfRange):
        twist_rewrite_check(sys, F, Psi, 3)  # k > m1
    with pytest.raises(IndexOutOfRange):
        twist_rewrite_check(sys, F, Psi, 1, mode="absorb")  # inner k
    with pytest.raises(IndexOutOfRange):
        twist_rewrite_check(sys, F, Psi, 0, mode="shift")
    with pytest.raises(InvalidRange):
        twist_rewrite_check(sys, F, Psi, 1, mode="twirl")
    with pytest.raises(ArityMismatch):
        twist_rewrite_check(sys, F[:2], Psi, 0)
    with pytest.raises(ArityMismatch):
        twist_rewrite_check(sys, F, Psi + [1], 0)


# -- base case -------------------------------------------------------------------------

def test_base_case_untwisted_is_exact_product():
    field = make_field(11)
    rng = SplitMix64(4242)
    f0 = random_one_bounded(field, rng)
    f1 = random_one_bounded(field, rng)
    rep = base_case_report(parse_poly("y"), [], [f0, f1], [])
    assert rep.trivial_twist
    assert abs(rep.error) < 1e-12  # averaging over y decouples x entirely
    assert abs(rep.value - rep.main_term) < 1e-12
    assert rep.q == 11


def test_base_case_trivial_characters_count_as_untwisted():
    field = make_field(7)
    f = indicator(field, {0, 2, 3})
    rep = base_case_report(parse_poly("y"), [parse_poly("y^2")], [f, f], [0])
    assert rep.trivial_twist
    assert abs(rep.main_term - f.mean() ** 2) < 1e-12


def test_base_case_nontrivial_twist_has_zero_main_term():
    field = make_field(101)
    rng = SplitMix64(11)
    f0 = random_one_bounded(field, rng)
    f1 = random_one_bounded(field, rng)
    rep = base_case_report(parse_poly("y"), [parse_poly("y^2")],
                           [f0, f1], [5])
    assert not rep.trivial_twist
    assert rep.main_term == 0
    assert rep.sqrt_q_error == pytest.approx(abs(rep.error) * 101 ** 0.5)
    # square-root cancellation with a modest constant on random input
    assert rep.sqrt_q_error < 5.0


def test_base_case_errors_and_warning():
    field = make_field(7)
    f = indicator(field, {1, 2})
    with pytest.raises(DependentSystem):
        base_case_report(parse_poly("y"), [parse_poly("2y")], [f, f], [1])
    with pytest.raises(ArityMismatch):
        base_case_report(parse_poly("y"), [], [f, f, f], [])
    with pytest.raises(ArityMismatch):
        base_case_report(parse_poly("y"), [parse_poly("y^2")], [f, f], [])
    f3 = indicator(make_field(3), {1})
    with pytest.warns(CharacteristicWarning):
        base_case_report(parse_poly("2y"), [parse_poly("3y^2")], [f3, f3], [1])


# -- Weil sums --------------------------------------------------------------------------

def test_gauss_sum_sits_exactly_on_the_bound():
    field = make_field(7)
    for a in range(1, 7):
        ws = weil_sum(field, [parse_poly("y^2")], [a])
        assert abs(ws.value) == pytest.approx(0.3779644730092272, abs=1e-13)
        assert ws.bound == pytest.approx(1 / 7 ** 0.5)
        assert ws.within_bound  # |S| = bound exactly; tolerance matters
        assert ws.degree == 2 and not ws.trivial


def test_weil_sum_matches_direct_character_sum():
    field = make_field(13)
    chi = field.character_matrix()
    rng = SplitMix64(31)
    polys = [parse_poly("y"), parse_poly("y^3")]
    for _ in range(10):
        a1, a2 = rng.randrange(13), rng.randrange(13)
        if a1 == 0 and a2 == 0:
            continue
        direct = np.mean([chi[a1, y % 13] * chi[a2, y ** 3 % 13]
                          for y in range(13)])
        ws = weil_sum(field, polys, [a1, a2])
        assert abs(ws.value - direct) < 1e-12


def test_weil_sum_extension_field():
    F9 = make_field(3, 2)
    t = F9.element([0, 1])
    ws = weil_sum(F9, [parse_poly("y^2")], [t])
    assert ws.degree == 2
    assert ws.bound == pytest.approx(1 / 3)
    assert ws.within_bound
    # oracle: direct sum of psi_t(y^2) over the nine elements
    chi = F9.character_matrix()
    direct = np.mean([chi[t.index, (y * y).index] for y in F9.elements()])
    assert abs(ws.value - direct) < 1e-12


def test_weil_sum_trivial_and_degenerate():
    field = make_field(5)
    ws = weil_sum(field, [parse_poly("y")], [0])
    assert ws.trivial and ws.value == 1 and ws.bound is None
    with pytest.raises(DegenerateCombination):
        weil_sum(field, [parse_poly("y"), parse_poly("2y")], [1, 2])
    with pytest.raises(EmptyInput):
        weil_sum(field, [], [])
    with pytest.raises(ArityMismatch):
        weil_sum(field, [parse_poly("y")], [1, 2])
    with pytest.raises(FieldMismatch):
        weil_sum(field, [parse_poly("y")], [make_field(7).element(1)])


def test_weil_sum_degree_at_least_p_still_evaluates():
    # y^3 = y on F_3, so the "cubic" sum is a linear one: full cancellation
    field = make_field(3)
    ws = weil_sum(field, [parse_poly("y^3")], [1])
    assert abs(ws.value) < 1e-12
    assert ws.within_bound


def test_additive_monomial_sums_match_weil_sum():
    for p, d in ((7, 2), (11, 3), (13, 4)):
        field = make_field(p)
        sums = additive_monomial_sums(p, d)
        assert sums[0] == pytest.approx(1.0)
        poly = int_poly([0] * d + [1])
        for a in range(1, p):
            assert sums[a] == pytest.approx(weil_sum(field, [poly], [a]).value,
                                            abs=1e-12)
    with pytest.raises(InvalidRange):
        additive_monomial_sums(7, 0)


# -- index tables -------------------------------------------------------------------------

def test_poly_index_table_matches_eval():
    poly = parse_poly("2y^3 + y")
    for field in (make_field(7), make_field(3, 2)):
        tbl = poly_index_table(poly, field)
        for y in field.elements():
            assert tbl[y.index] == reduce_and_eval(poly, field, y).index
