"""Integer polynomials, parsing, and independence certification.

The independence machinery is checked against an in-file rational-rank
oracle (Gauss-Jordan over Fraction), so a certificate/witness answer is
never trusted on its own; witnesses are also verified exactly against
the defining relation sum(w_i P_i) = 0.
"""

from fractions import Fraction

import pytest

from ffprog.errors import (DependentSystem, EmptyInput, FieldMismatch,
                           NonzeroConstantTerm, PolySyntaxError,
                           ZeroPolynomial)
from ffprog.field import make_field
from ffprog.polys import (DependenceWitness, IndependenceCertificate, IntPoly,
                          characteristic_threshold, degree_sequence,
                          independence_certificate, int_poly, parse_poly,
                          progression_system, reduce_and_eval, render_poly)
from ffprog.rng import SplitMix64


# -- oracle ------------------------------------------------------------------

def rational_rank(cols):
    """Rank of the integer matrix whose columns are the given lists."""
    if not cols:
        return 0
    rows = len(cols[0])
    a = [[Fraction(cols[j][i]) for j in range(len(cols))] for i in range(rows)]
    rank = 0
    for c in range(len(cols)):
        pivot = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        pv = a[rank][c]
        a[rank] = [x / pv for x in a[rank]]
        for r in range(rows):
            if r != rank and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def columns(polys):
    d = max(p.degree for p in polys)
    return [[p.coefficient(i) for i in range(d + 1)] for p in polys]


def random_poly(rng, max_degree=5, max_coeff=6):
    degree = 1 + rng.randrange(max_degree)
    coeffs = [rng.randrange(2 * max_coeff + 1) - max_coeff for _ in range(degree + 1)]
    return int_poly(coeffs)


# -- IntPoly basics ------------------------------------------------------------

def test_int_poly_normalizes_trailing_zeros():
    assert int_poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert int_poly([0, 0, 0]).coeffs == ()
    assert int_poly([]).is_zero
    assert int_poly([0]).degree == -1
    assert int_poly([0, 0, 7]).degree == 2


def test_int_poly_arithmetic():
    p = int_poly([1, 2, 3])
    q = int_poly([0, -2, -3])
    assert (p + q).coeffs == (1,)
    assert (p - p).is_zero
    assert (-p).coeffs == (-1, -2, -3)
    assert (2 * p).coeffs == (2, 4, 6)
    assert (0 * p).is_zero
    assert p.constant_term == 1
    assert p.leading_coefficient == 3
    assert p.coefficient(10) == 0
    with pytest.raises(ZeroPolynomial):
        _ = int_poly([]).leading_coefficient


# -- parsing and rendering -----------------------------------------------------

@pytest.mark.parametrize("text,coeffs", [
    ("y", (0, 1)),
    ("2y", (0, 2)),
    ("y^2", (0, 0, 1)),
    ("y^2+3y", (0, 3, 1)),
    ("y^5", (0, 0, 0, 0, 0, 1)),
    ("-y", (0, -1)),
    ("3", (3,)),
    ("0", ()),
    ("y - y", ()),
    ("2y^3 - y + 7", (7, -1, 0, 2)),
    (" - 5 y ^ 3 + y ", (0, 1, 0, -5)),
    ("y + y", (0, 2)),
    ("1y^2", (0, 0, 1)),
])
def test_parse_poly_cases(text, coeffs):
    assert parse_poly(text).coeffs == coeffs


@pytest.mark.parametrize("poly,text", [
    (int_poly([0, 1]), "y"),
    (int_poly([0, 2]), "2y"),
    (int_poly([0, 0, 1]), "y^2"),
    (int_poly([0, 3, 1]), "y^2 + 3y"),
    (int_poly([7, -1, 0, 2]), "2y^3 - y + 7"),
    (int_poly([0, -1]), "-y"),
    (int_poly([]), "0"),
    (int_poly([-4]), "-4"),
])
def test_render_poly_cases(poly, text):
    assert render_poly(poly) == text
    assert str(poly) == text


def test_parse_render_round_trip_battery():
    rng = SplitMix64(90125)
    for _ in range(300):
        p = random_poly(rng, max_degree=7, max_coeff=9)
        assert parse_poly(render_poly(p)) == p


@pytest.mark.parametrize("bad,position", [
    ("y^", 2),       # exponent missing entirely
    ("y^0", 3),      # exponent token consumed, then rejected
    ("y^-1", 3),     # sign consumed where an integer was required
    ("+", 1),
    ("y + * y", 4),
    ("2y 3y", 4),    # second term begins without a separator
    ("y**2", 1),     # '*' is not a token; position not advanced
    ("x", 0),
])
def test_parse_poly_syntax_errors_carry_position(bad, position):
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly(bad)
    assert exc.value.position == position


# -- degree sequences ----------------------------------------------------------

def test_degree_sequence_distinct_leading_terms():
    polys = [parse_poly(t) for t in ("y", "2y", "y^2", "y^2+3y", "y^5")]
    seq = degree_sequence(polys)
    # two distinct degree-1 leading terms, y^2 counted once (3y is lower
    # order), one quintic
    assert seq.counts == ((1, 2), (2, 1), (5, 1))
    assert [seq.count(d) for d in range(1, 6)] == [2, 1, 0, 0, 1]
    assert seq.max_degree == 5


def test_degree_sequence_merges_equal_leading_terms():
    seq = degree_sequence([parse_poly("y^2"), parse_poly("y^2 + y")])
    assert seq.counts == ((2, 1),)
    seq = degree_sequence([parse_poly("3y^2"), parse_poly("4y^2")])
    assert seq.counts == ((2, 2),)


def test_degree_sequence_errors():
    with pytest.raises(EmptyInput):
        degree_sequence([])
    with pytest.raises(ZeroPolynomial):
        degree_sequence([int_poly([0, 1]), int_poly([])])


# -- independence certificates ---------------------------------------------------

def test_certificate_frozen_examples():
    cert = independence_certificate([parse_poly("2y"), parse_poly("3y^2")])
    assert isinstance(cert, IndependenceCertificate)
    assert cert.rows == (1, 2)
    assert cert.determinant == 6
    assert characteristic_threshold(cert) == 4  # 1 + largest prime factor 3

    cert = independence_certificate(
        [parse_poly("2y"), parse_poly("3y^2"), parse_poly("5y^3")])
    assert cert.determinant == 30
    assert characteristic_threshold(cert) == 6

    cert = independence_certificate([parse_poly("y")])
    assert cert.determinant == 1
    assert characteristic_threshold(cert) == 2  # |det| = 1 floor case


def test_dependence_witness_frozen_example():
    wit = independence_certificate([parse_poly("y"), parse_poly("2y")])
    assert isinstance(wit, DependenceWitness)
    assert wit.coefficients == (2, -1)


def test_witness_is_primitive_and_sign_normalized():
    wit = independence_certificate([parse_poly("4y"), parse_poly("6y")])
    # kernel of (4, 6) is spanned by (3, -2); primitive, first entry positive
    assert wit.coefficients == (3, -2)


def test_certificate_witness_battery_against_rank_oracle():
    rng = SplitMix64(424242)
    seen_cert = seen_wit = 0
    for trial in range(200):
        m = 1 + rng.randrange(4)
        polys = [random_poly(rng) for _ in range(m)]
        if trial % 3 == 0 and m >= 2:
            # plant a dependence: last poly = integer combination of others
            mix = [rng.randrange(5) - 2 for _ in polys[:-1]]
            planted = int_poly([])
            for c, p in zip(mix, polys[:-1]):
                planted = planted + c * p
            if planted.is_zero:
                planted = polys[0]
            polys[-1] = planted
        cols = columns(polys)
        rank = rational_rank(cols)
        result = independence_certificate(polys)
        if rank == m:
            seen_cert += 1
            assert isinstance(result, IndependenceCertificate)
            minor = [[cols[j][i] for j in range(m)] for i in result.rows]
            assert rational_rank(minor) == m  # certified minor is invertible
            assert result.determinant != 0
        else:
            seen_wit += 1
            assert isinstance(result, DependenceWitness)
            w = result.coefficients
            assert any(w)
            combo = int_poly([])
            for c, p in zip(w, polys):
                combo = combo + c * p
            assert combo.is_zero  # witness kills the system exactly
    assert seen_cert > 30 and seen_wit > 30


def test_more_polys_than_dimensions_is_dependent():
    wit = independence_certificate([parse_poly("y"), parse_poly("2y"),
                                    parse_poly("3y")])
    assert isinstance(wit, DependenceWitness)


def test_characteristic_threshold_inputs():
    sys_ind = progression_system(["2y", "3y^2"])
    assert characteristic_threshold(sys_ind) == 4
    sys_dep = progression_system(["y", "2y"])
    assert characteristic_threshold(sys_dep) == 0
    with pytest.raises(DependentSystem):
        characteristic_threshold(DependenceWitness((2, -1)))


# -- progression systems ----------------------------------------------------------

def test_progression_system_basic():
    sys = progression_system(["y", "y^2"], ["y^3"])
    assert sys.m1 == 2 and sys.m2 == 1
    assert sys.is_independent
    assert sys.threshold == 2  # dets of y/y^2/y^3 minors are 1
    assert sys.all_polys == sys.P + sys.Q
    assert str(sys) == "[y, y^2; y^3]"
    assert str(progression_system(["y", "2y"])) == "[y, 2y]"


def test_progression_system_accepts_mixed_input_forms():
    sys = progression_system([int_poly([0, 1]), "2y", [0, 0, 3]])
    assert [p.coeffs for p in sys.P] == [(0, 1), (0, 2), (0, 0, 3)]


def test_progression_system_dependent_is_allowed():
    sys = progression_system(["y", "2y"])  # arithmetic progression
    assert not sys.is_independent
    assert sys.threshold == 0
    assert sys.certificate is None
    assert sys.dependence.coefficients == (2, -1)


def test_progression_system_validation_errors():
    with pytest.raises(EmptyInput):
        progression_system([])
    with pytest.raises(ZeroPolynomial):
        progression_system(["y", "0"])
    with pytest.raises(NonzeroConstantTerm):
        progression_system(["y^2+1"])
    with pytest.raises(DependentSystem):
        progression_system(["y", "y"])  # duplicates within P
    with pytest.raises(DependentSystem):
        progression_system(["y", "y^2"], ["y"])  # duplicate across P and Q


# -- reduction and evaluation ------------------------------------------------------

def test_reduce_and_eval_prime_field_matches_int_oracle():
    F = make_field(7)
    rng = SplitMix64(777)
    for _ in range(100):
        p = random_poly(rng, max_degree=6, max_coeff=20)
        y = rng.randrange(7)
        expect = sum(c * y ** i for i, c in enumerate(p.coeffs)) % 7
        assert reduce_and_eval(p, F, F.element(y)) == F.element(expect)


def test_reduce_and_eval_extension_field_matches_power_sum():
    F = make_field(3, 2)
    rng = SplitMix64(99)
    for _ in range(60):
        p = random_poly(rng, max_degree=5, max_coeff=8)
        y = F.element_at(rng.randrange(F.q))
        direct = F.zero
        for i, c in enumerate(p.coeffs):
            direct = direct + F.element(c) * y ** i
        assert reduce_and_eval(p, F, y) == direct


def test_reduce_and_eval_zero_cases():
    F = make_field(5)
    assert reduce_and_eval(int_poly([]), F, F.element(3)) == F.zero
    assert reduce_and_eval(parse_poly("5y"), F, F.element(2)) == F.zero
    with pytest.raises(FieldMismatch):
        reduce_and_eval(parse_poly("y"), F, make_field(7).element(1))
