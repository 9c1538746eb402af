"""Exact-rational bookkeeping for the U^s -> U^1 descent.

A descent from level s runs through levels ell = s, s-1, .., 2, applying at
each level a decomposition with exponent budget (d1, d2, d3, d4).  The
dyadic schedule used throughout, for parameters 0 < beta <= 1 and
0 < gamma <= 1, is

    d1(ell) = 2^(1 - 2 s ell) * gamma * beta
    d2(ell) = 2^(2 ell - 4 s^2) * gamma * beta^2
    d3(ell) = 2 * d2(ell)
    d4(ell) = d1(ell) / 2,

so d2 < d3 and d4 < d1 hold identically, every delta is a dyadic rational
multiple of gamma * beta or gamma * beta^2, and everything is carried as
an exact Fraction -- floats enter only when a bound is finally evaluated
at a concrete q.

The per-level error recursion tracks a triple b = (b1, b2, b3): b1 the
dual-norm budget already spent, b2 the exponent through which the final
U^1 quantity will be raised, b3 the additive error accumulated so far.
Starting from b1 = 1, b2 = beta at level s, one step to level ell-1 reads

    b1' = 2 q^(d1(ell)),     b2' = 2^(1 - ell),
    b3' = q^((1 - b2) d3 - b2 d4) * b1  +  q^(-d2)
          + q^(d1) * (c2' / q^(gamma'))^(2^(2 - 2 ell))  +  q^(d3) * b3,

with (c2', gamma') the constants from the level's counting estimate.  All
implied multiplicative constants are set to 1 and the results flagged
accordingly: trajectories are for observing exponent behaviour, not for
certifying literal constants.

exponent_negativity proves, in exact arithmetic, that the five families of
exponents that must be negative for the descent to gain anything really
are negative, each against its safety ceiling (a strictly negative
quantity it must stay below):

  1.  -beta + sum_{i=0}^{s-2} d3(s-i)                    <  -beta (1 - 2^-10)
  2.  (1-beta) d3(s) - beta d4(s) + sum_{i=1}^{s-2} d3(s-i)
                                                 <  -gamma beta^2 2^(-2s^2) (1 - 2^-3)
  3.  for j = 1..s-2:
        d1(s-j+1) + (1 - 2^(1-(s-j+1))) d3(s-j) - 2^(1-(s-j+1)) d4(s-j)
          + sum_{i=j+1}^{s-2} d3(s-i)            <  -gamma beta 2^(-2s^2)
  4.  for j = 0..s-2:
        -d2(s-j) + sum_{i=j+1}^{s-2} d3(s-i)     <  -(1/3) gamma beta^2 2^(4-4s^2)
  5.  for j = 0..s-2:
        d1(s-j) - gamma 2^(2-2(s-j)) + sum_{i=j+1}^{s-2} d3(s-i)
                                                 <  -gamma 2^(2-2s) (1 - 2^-4)

budget_condition evaluates the admissibility inequality
q^(d2-d3) + q^(d4-d1) <= 1/2 that a level's budget must satisfy at a given
field size before its decomposition exists at all.

Errors raised here: InvalidRange, InvalidInit, IndexOutOfRange.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .errors import IndexOutOfRange, InvalidInit, InvalidRange


def _pow2(e: int) -> Fraction:
    """Exact 2^e for any integer e."""
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << (-e))


def _as_fraction(x, name: str) -> Fraction:
    try:
        f = Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InvalidRange(f"{name} must be an exact rational, got {x!r}") from exc
    return f


@dataclass(frozen=True)
class ScheduleParams:
    """A complete dyadic delta-schedule for one descent."""

    s: int
    beta: Fraction
    gamma: Fraction

    def delta(self, which: int, ell: int) -> Fraction:
        """delta_which at level ell, exact."""
        if which not in (1, 2, 3, 4):
            raise IndexOutOfRange(f"delta index must be 1..4, got {which}")
        if not 2 <= ell <= self.s:
            raise IndexOutOfRange(
                f"level must lie in [2, {self.s}], got {ell}")
        s, b, g = self.s, self.beta, self.gamma
        if which == 1:
            return _pow2(1 - 2 * s * ell) * g * b
        if which == 2:
            return _pow2(2 * ell - 4 * s * s) * g * b * b
        if which == 3:
            return _pow2(1 + 2 * ell - 4 * s * s) * g * b * b
        return _pow2(-2 * s * ell) * g * b

    def level_deltas(self, ell: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(self.delta(i, ell) for i in (1, 2, 3, 4))


def delta_schedule(s: int, beta, gamma) -> ScheduleParams:
    """Build the schedule, validating ranges and the built-in inequalities."""
    if not isinstance(s, int) or s < 2:
        raise InvalidRange(f"descent needs integer s >= 2, got {s!r}")
    beta = _as_fraction(beta, "beta")
    gamma = _as_fraction(gamma, "gamma")
    if not 0 < beta <= 1:
        raise InvalidRange(f"beta must lie in (0, 1], got {beta}")
    if not 0 < gamma <= 1:
        raise InvalidRange(f"gamma must lie in (0, 1], got {gamma}")
    params = ScheduleParams(s, beta, gamma)
    for ell in range(2, s + 1):
        d1, d2, d3, d4 = params.level_deltas(ell)
        assert 0 < d2 < d3 and 0 < d4 < d1, "dyadic schedule invariant"
    return params


@dataclass(frozen=True)
class BudgetCheck:
    """Value and verdict of q^(d2-d3) + q^(d4-d1) <= 1/2."""

    lhs: float
    ok: bool
    q: float


def budget_condition(deltas, q) -> BudgetCheck:
    """Evaluate the admissibility inequality for one level's deltas at q."""
    d1, d2, d3, d4 = (Fraction(d) for d in deltas)
    q = float(q)
    if q <= 1:
        raise InvalidRange(f"q must exceed 1, got {q}")
    lhs = q ** float(d2 - d3) + q ** float(d4 - d1)
    return BudgetCheck(lhs, lhs <= 0.5, q)


# --------------------------------------------------------------------------
# the bound recursion
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundState:
    """The (b1, b2, b3) triple at one level of the descent."""

    ell: int
    b1: float
    b2: Fraction
    b3: float


@dataclass(frozen=True)
class BoundRecursion:
    """Full descent trajectory with the resulting U^1-level bound."""

    states: tuple[BoundState, ...]
    final_coeff: float          # 2 q^(d1(2)): multiplies min ||f||^(1/2)
    u1_exponent: Fraction       # always 1/2: the final b2
    b3_final: float
    constants_dropped: bool     # implied constants were all set to 1


def initial_state(params: ScheduleParams) -> BoundState:
    """The level-s initialization b1 = 1, b2 = beta, b3 = 0."""
    return BoundState(params.s, 1.0, params.beta, 0.0)


def bound_recursion(params: ScheduleParams, b_init: BoundState, q,
                    gamma_prime=None, c2_prime: float = 1.0) -> BoundRecursion:
    """Run the descent from level s down to level 1 at a concrete q.

    gamma_prime is the exponent of the counting estimate used at each
    level (None means infinity: that term vanishes); c2_prime its
    constant.  Implied constants are 1 throughout, and the result is
    flagged constants_dropped.
    """
    if b_init.ell != params.s:
        raise InvalidInit(f"recursion starts at level s = {params.s}, "
                          f"got {b_init.ell}")
    if b_init.b1 != 1.0 or Fraction(b_init.b2) != params.beta or b_init.b3 != 0.0:
        raise InvalidInit("initial state must be (b1, b2, b3) = (1, beta, 0)")
    q = float(q)
    if q <= 1:
        raise InvalidRange(f"q must exceed 1, got {q}")
    gp = inf if gamma_prime is None else float(gamma_prime)

    states = [b_init]
    b1, b2, b3 = b_init.b1, Fraction(b_init.b2), b_init.b3
    for ell in range(params.s, 1, -1):
        d1, d2, d3, d4 = params.level_deltas(ell)
        counting_term = 0.0 if gp == inf else \
            q ** float(d1) * (c2_prime / q ** gp) ** (2.0 ** (2 - 2 * ell))
        b3_new = (
            q ** float((1 - b2) * d3 - b2 * d4) * b1
            + q ** float(-d2)
            + counting_term
            + q ** float(d3) * b3
        )
        b1 = 2.0 * q ** float(d1)
        b2 = _pow2(1 - ell)
        b3 = b3_new
        states.append(BoundState(ell - 1, b1, b2, b3))
    return BoundRecursion(tuple(states), b1, b2, b3, True)


# --------------------------------------------------------------------------
# exponent negativity
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentCheck:
    """One exponent against its (strictly negative) safety ceiling."""

    family: int
    j: int
    exponent: Fraction
    ceiling: Fraction
    ok: bool


@dataclass(frozen=True)
class NegativityReport:
    """All five exponent families for one schedule."""

    s: int
    beta: Fraction
    gamma: Fraction
    checks: tuple[ExponentCheck, ...]

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def family(self, index: int) -> tuple[ExponentCheck, ...]:
        return tuple(c for c in self.checks if c.family == index)


def exponent_negativity(params: ScheduleParams) -> NegativityReport:
    """Prove (exactly) the five negative-exponent families of the descent."""
    s, beta, gamma = params.s, params.beta, params.gamma
    d = params.delta

    def tail(j: int) -> Fraction:
        """sum_{i=j+1}^{s-2} d3(s-i); empty when j >= s-2."""
        return sum((d(3, s - i) for i in range(j + 1, s - 1)), Fraction(0))

    checks: list[ExponentCheck] = []

    def add(family: int, j: int, exponent: Fraction, ceiling: Fraction):
        checks.append(ExponentCheck(family, j, exponent, ceiling,
                                    exponent < ceiling < 0))

    # 1. total U^1 exponent: the d3 losses must not eat the initial -beta
    e1 = -beta + sum((d(3, s - i) for i in range(0, s - 1)), Fraction(0))
    add(1, 0, e1, -beta * (1 - _pow2(-10)))

    # 2. the level-s cross term stays negative
    e2 = (1 - beta) * d(3, s) - beta * d(4, s) + tail(0)
    add(2, 0, e2, -gamma * beta * beta * _pow2(-2 * s * s) * (1 - _pow2(-3)))

    # 3. dual-budget carryover at intermediate levels
    for j in range(1, s - 1):
        ell = s - j + 1
        b2 = _pow2(1 - ell)
        e3 = d(1, ell) + (1 - b2) * d(3, s - j) - b2 * d(4, s - j) + tail(j)
        add(3, j, e3, -gamma * beta * _pow2(-2 * s * s))

    # 4. the q^(-d2) terms keep their negativity through later losses
    for j in range(0, s - 1):
        e4 = -d(2, s - j) + tail(j)
        add(4, j, e4, -gamma * beta * beta * _pow2(4 - 4 * s * s) / 3)

    # 5. counting-estimate terms: d1 never cancels the gamma' gain
    for j in range(0, s - 1):
        ell = s - j
        e5 = d(1, ell) - gamma * _pow2(2 - 2 * ell) + tail(j)
        add(5, j, e5, -gamma * _pow2(2 - 2 * s) * (1 - _pow2(-4)))

    return NegativityReport(s, beta, gamma, tuple(checks))


# --------------------------------------------------------------------------
# the single-step worked constraints
# --------------------------------------------------------------------------

def u2_step_constraints(d1, d2, d3, d4) -> dict[str, bool]:
    """The five constraints for one U^2 -> U^1 step with budget (d1..d4).

    These are the conditions under which a single decomposition step, fed a
    spectral gap of strength q^(-1/4) and re-entering the average with
    exponent 1/4, strictly improves the trivial bound.
    """
    d1, d2, d3, d4 = (Fraction(x) for x in (d1, d2, d3, d4))
    quarter = Fraction(1, 4)
    return {
        "d2_below_d3": d2 < d3,
        "d4_below_d1": d4 < d1,
        "d1_below_quarter": d1 < quarter,
        "spectral_tradeoff": Fraction(3, 4) * d3 < d4 / 4,
        "d3_below_quarter": d3 < quarter,
    }
