"""Gowers uniformity norms U^s, their Fourier route at s = 2, and the
Cauchy--Schwarz reduction for averaged two-variable functions.

The raw 2^s-th power of the U^s norm of f: F_q -> C is

    ||f||_{U^s}^{2^s} = E_{x, h_1..h_s} Delta_{h_1} ... Delta_{h_s} f(x),

with Delta_h f(x) = f(x+h) conj(f(x)).  The naive evaluator recurses on the
shift prefix: at depth s-1 the remaining double average factors exactly as
E_{x,h} Delta_h g(x) = |E g|^2, which keeps the work at O(q^(s-1) * q^2)
scalar operations and makes every intermediate average real and
nonnegative by construction.  A budget guard (default 10^9 operations,
measured as q^(s+1)) raises BudgetExceeded rather than letting a call
run away.

At s = 2 an independent route exists through the character basis:

    ||f||_{U^2}^4 = sum_a |fhat(a)|^4,

and the two routes are kept separate on purpose -- their agreement is one
of the package's standing cross-checks.  The dual-norm helper returns
sum_a |fhat(a)|, a certified upper bound for ||.||_{U^2}^* via
|<f, g>| <= sum |fhat| * max |ghat| <= sum |fhat| * ||g||_{U^2}; the exact
dual norm is deliberately not computed.

For F(x) = E_y f_1(x, y) ... f_m(x, y) with 1-bounded f_i, one application
of Cauchy--Schwarz per differencing step gives

    ||F||_{U^s}^{2^(2s-2)} <= E_{h_1..h_{s-2}} ||F_{h_1..h_{s-2}}||_{U^2}^4,

where F_{h...}(x) = E_y prod_i Delta^{(1)}_{h...} f_i(x, y) differences each
factor in the first variable.  check_cs_inequality evaluates both sides; at
s = 2 the two sides are the same expression and agree exactly.

Errors raised here: BudgetExceeded, NotOneBounded, InvalidRange.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, FieldMismatch, InvalidRange, NotOneBounded
from .field import FieldSpec
from .functions import (
    DenseFunction,
    TwoVarFunction,
    delta_first_var,
    fourier_transform,
)

DEFAULT_BUDGET = 10 ** 9
_NEG_TOL = 1e-9


@dataclass(frozen=True)
class GowersNormValue:
    """A U^s evaluation: the norm and the raw 2^s-th power it came from."""

    s: int
    value: float
    raw_power: float

    def __post_init__(self):
        if self.raw_power < -_NEG_TOL:
            raise InvalidRange(
                f"raw U^{self.s} power {self.raw_power} below -{_NEG_TOL}")


def _shift_rows(field: FieldSpec, values: np.ndarray) -> np.ndarray:
    """Matrix M with M[h] = (x -> values[x + h]); needs the addition table."""
    if field.k == 1:
        idx = np.arange(field.q)
        return values[(idx[:, None] + idx[None, :]) % field.q]
    return values[field.add_index_table()]


def _raw_power(field: FieldSpec, values: np.ndarray, s: int) -> float:
    if s == 1:
        m = values.mean()
        # E_{x,h} f(x+h) conj f(x) factors exactly into |E f|^2
        return float(m.real * m.real + m.imag * m.imag)
    if s == 2:
        diff = _shift_rows(field, values) * np.conj(values)[None, :]
        means = diff.mean(axis=1)
        return float((means.real ** 2 + means.imag ** 2).mean())
    diff = _shift_rows(field, values) * np.conj(values)[None, :]
    return float(np.mean([_raw_power(field, diff[h], s - 1)
                          for h in range(field.q)]))


def gowers_norm(f: DenseFunction, s: int, budget: int = DEFAULT_BUDGET) -> GowersNormValue:
    """Naive U^s norm by direct averaging of iterated derivatives."""
    if s < 1:
        raise InvalidRange(f"U^s needs s >= 1, got {s}")
    if f.field.q ** (s + 1) > budget:
        raise BudgetExceeded(
            f"q^(s+1) = {f.field.q ** (s + 1)} exceeds budget {budget}")
    raw = _raw_power(f.field, f.values, s)
    raw = max(raw, 0.0)
    return GowersNormValue(s, raw ** (1.0 / (1 << s)), raw)


def gowers_u2_via_fourier(f: DenseFunction) -> GowersNormValue:
    """||f||_{U^2}^4 = sum_a |fhat(a)|^4 -- the independent spectral route."""
    c = np.abs(fourier_transform(f).coeffs)
    raw = float(np.sum(c ** 4))
    return GowersNormValue(2, raw ** 0.25, raw)


def u2_dual_upper_bound(f: DenseFunction) -> float:
    """sum_a |fhat(a)|: certified upper bound on the U^2 dual norm of f."""
    return float(np.sum(np.abs(fourier_transform(f).coeffs)))


# --------------------------------------------------------------------------
# Cauchy--Schwarz reduction
# --------------------------------------------------------------------------

def _check_one_bounded(fs) -> None:
    for i, f in enumerate(fs):
        if f.max_abs() > 1.0 + 1e-12:
            raise NotOneBounded(
                f"factor {i} has sup {f.max_abs():.6f} > 1")


def cs_project(fs, hs) -> DenseFunction:
    """F_{h...}(x) = E_y prod_i Delta^{(1)}_{h...} f_i(x, y)."""
    fs = list(fs)
    if not fs:
        raise InvalidRange("cs_project needs at least one factor")
    field = fs[0].field
    for f in fs:
        if f.field != field:
            raise FieldMismatch("factors on different fields")
    _check_one_bounded(fs)
    prod = np.ones((field.q, field.q), dtype=np.complex128)
    for f in fs:
        prod = prod * delta_first_var(f, hs).values
    return DenseFunction(field, prod.mean(axis=1))


@dataclass(frozen=True)
class CsCheck:
    """Both sides of the reduction at level s, and whether it held."""

    s: int
    lhs: float
    rhs: float
    holds: bool
    projections: int


def check_cs_inequality(fs, s: int, budget: int = DEFAULT_BUDGET) -> CsCheck:
    """Evaluate ||F||_{U^s}^{2^(2s-2)} <= E_h ||F_h||_{U^2}^4 numerically.

    fs are 1-bounded TwoVarFunctions; s >= 2.  At s = 2 both sides are the
    identical expression and the comparison is exact.
    """
    fs = list(fs)
    if not fs:
        raise InvalidRange("check_cs_inequality needs at least one factor")
    if s < 2:
        raise InvalidRange(f"reduction defined for s >= 2, got {s}")
    field = fs[0].field
    q = field.q
    est_ops = (len(fs) + 1) * q ** s
    if est_ops > budget:
        raise BudgetExceeded(f"estimated {est_ops} operations exceed {budget}")
    _check_one_bounded(fs)

    F = cs_project(fs, [])
    lhs = gowers_norm(F, s, budget).raw_power ** (1 << (s - 2))

    def rhs_sum(hs_prefix: list[int], depth: int) -> float:
        if depth == s - 2:
            return gowers_norm(cs_project(fs, hs_prefix), 2, budget).raw_power
        return float(np.mean([rhs_sum(hs_prefix + [h], depth + 1)
                              for h in range(q)]))

    rhs = rhs_sum([], 0)
    return CsCheck(s, lhs, rhs, lhs <= rhs + 1e-9, q ** (s - 2))
