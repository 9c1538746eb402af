"""Counting averages for polynomial progressions, their algebraic rewrites,
the two-function base-case estimate, and complete character sums.

The central object is the multilinear average over F_q x F_q

    Lambda(f_0, .., f_{m1}; g_1, .., g_{m2})
        = E_{x,y} f_0(x) prod_i f_i(x + P_i(y)) prod_j g_j(Q_j(y)),

attached to a validated system (P; Q).  With every f_i = 1_A and no twist,
q^2 * Lambda counts the pairs (x, y) whose whole progression {x, x+P_i(y)}
lies in A; the exhaustive integer path lives in count_progressions,
deliberately separate from the float kernel so each audits the other.  The
expected main term for an untwisted average of indicators is
(|A|/q)^(m1+1), i.e. counts of order |A|^(m1+1) / q^(m1-1).

Exact identities connect twisted and plain averages; twist_rewrite_check
evaluates both sides of each.  Writing psi for additive characters, the
splitting psi(u + v) = psi(u) psi(v) gives the absorption identities:

* k = 0:   Lambda_P^Q(F; Psi)
             = Lambda_{P+Q}(f_0 prod_j conj(psi_j), f_1, .., f_{m1}, psi_1, ..),
  the psi_j entering as ordinary functions in the slots shifted by Q_j;
* k = m1:  the same with the twist pushed to the other end:
             f_{m1} -> f_{m1} prod_j conj(psi_j) and Q_j -> Q_j + P_{m1};
* 1 <= k <= m1 (shift): substituting x -> x - P_k(y) turns the average
  into one over [-P_k] + [P_i - P_k : i != k], with f_k promoted to the
  untranslated slot and f_0 demoted to the slot shifted by -P_k.

The base case of the whole reduction scheme is a single shift polynomial
against a twist tuple: for independent [P_1] + Qs the average equals
1_{Psi trivial} * (E f_0)(E f_1) up to O(q^(-1/2)), and base_case_report
returns the exact error alongside |error| * sqrt(q) so the constant in
that estimate can be observed directly.

The error mechanism behind the square root is the complete additive
character sum: for a combined polynomial sum_j a_j Q_j(y) of degree
1 <= d < p,

    | E_y psi(sum_j a_j Q_j(y)) | <= (d - 1) / sqrt(q),

which weil_sum evaluates and checks (a degree-1 combination averages to
zero exactly; a combination collapsing to a nonzero constant raises
DegenerateCombination rather than returning a vacuous bound).

Errors raised here: ArityMismatch, FieldMismatch, TwistedSystem,
IndexOutOfRange, DegenerateCombination, ElementOutOfField, EmptyInput,
InvalidRange.  Counting with a characteristic below the system threshold
warns (CharacteristicWarning) but still computes exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityMismatch,
    CharacteristicWarning,
    DegenerateCombination,
    DependentSystem,
    ElementOutOfField,
    EmptyInput,
    FieldMismatch,
    IndexOutOfRange,
    InvalidRange,
    TwistedSystem,
)
from .field import FieldElement, FieldSpec
from .functions import DenseFunction, character_function, indicator
from .polys import (
    DependenceWitness,
    IntPoly,
    ProgressionSystem,
    characteristic_threshold,
    independence_certificate,
    reduce_and_eval,
)

_WEIL_TOL = 1e-12


# --------------------------------------------------------------------------
# evaluation tables
# --------------------------------------------------------------------------

def poly_index_table(poly: IntPoly, field: FieldSpec) -> np.ndarray:
    """Index of P(y) for every y in enumeration order (int64)."""
    q = field.q
    if field.k == 1:
        acc = np.zeros(q, dtype=np.int64)
        y = np.arange(q, dtype=np.int64)
        for c in reversed(poly.coeffs):
            acc = (acc * y + c) % field.p
        return acc
    return np.array(
        [reduce_and_eval(poly, field, e).index for e in field.elements()],
        dtype=np.int64,
    )


def _shifted(field: FieldSpec, values: np.ndarray, shift_idx: int) -> np.ndarray:
    """x -> values[x + e], where e is the element at shift_idx."""
    if field.k == 1:
        return np.roll(values, -shift_idx)
    return values[field.add_index_table()[shift_idx]]


def _lambda_raw(field: FieldSpec, P, F_values, Q, G_values) -> complex:
    """The double average on trusted inputs: no validation, no warnings.

    P, Q: lists of IntPoly; F_values: m1+1 dense arrays (f_0 first);
    G_values: m2 dense arrays.  Deterministic y-ascending summation.
    """
    q = field.q
    p_tables = [poly_index_table(p, field) for p in P]
    q_tables = [poly_index_table(s, field) for s in Q]
    f0 = F_values[0]
    acc = 0.0 + 0.0j
    for yi in range(q):
        prod = f0
        for tbl, fv in zip(p_tables, F_values[1:]):
            prod = prod * _shifted(field, fv, int(tbl[yi]))
        term = prod.sum()
        for tbl, gv in zip(q_tables, G_values):
            term = term * gv[int(tbl[yi])]
        acc += term
    return complex(acc / (q * q))


# --------------------------------------------------------------------------
# the counting operator
# --------------------------------------------------------------------------

def _validate_functions(field: FieldSpec, fs, label: str) -> list[np.ndarray]:
    out = []
    for f in fs:
        if not isinstance(f, DenseFunction):
            raise ArityMismatch(f"{label} entries must be dense functions")
        if f.field != field:
            raise FieldMismatch(f"{label} entry on a different field")
        out.append(f.values)
    return out


def _warn_characteristic(system: ProgressionSystem, field: FieldSpec) -> None:
    if not system.is_independent:
        warnings.warn(
            "system is linearly dependent; square-root progression "
            "estimates do not apply (counting stays exact)",
            CharacteristicWarning,
            stacklevel=3,
        )
    elif field.p < system.threshold:
        warnings.warn(
            f"characteristic {field.p} below system threshold "
            f"{system.threshold}; estimates may degenerate",
            CharacteristicWarning,
            stacklevel=3,
        )


def lambda_average(system: ProgressionSystem, F, G=()) -> complex:
    """Lambda(F; G): the multilinear progression average over F_q x F_q."""
    F, G = list(F), list(G)
    if len(F) != system.m1 + 1:
        raise ArityMismatch(f"need {system.m1 + 1} shift functions, got {len(F)}")
    if len(G) != system.m2:
        raise ArityMismatch(f"need {system.m2} twist functions, got {len(G)}")
    field = F[0].field
    fv = _validate_functions(field, F, "F")
    gv = _validate_functions(field, G, "G")
    _warn_characteristic(system, field)
    return _lambda_raw(field, list(system.P), fv, list(system.Q), gv)


def _resolve_field(A, field: FieldSpec | None) -> FieldSpec:
    if field is not None:
        return field
    for item in A:
        if isinstance(item, FieldElement):
            return item.field
    raise EmptyInput("cannot infer the field from A; pass field=...")


def _indicator_vector(field: FieldSpec, A, dtype) -> np.ndarray:
    ind = np.zeros(field.q, dtype=dtype)
    for item in A:
        if isinstance(item, FieldElement):
            if item.field != field:
                raise ElementOutOfField(f"{item} not in {field}")
            ind[item.index] = 1
        else:
            ind[field.element(item).index] = 1
    return ind


def count_progressions(system: ProgressionSystem, A, y_rule: str = "all",
                       field: FieldSpec | None = None) -> int:
    """Exact integer count of pairs (x, y) with the whole progression in A.

    y_rule 'all' counts every y (matching q^2 * Lambda on indicators);
    'nonzero' drops y = 0, the convention for nondegenerate configurations.
    The field is inferred from A when it contains field elements.
    """
    if system.m2:
        raise TwistedSystem("integer counting is for untwisted systems")
    if y_rule not in ("all", "nonzero"):
        raise InvalidRange(f"y_rule must be 'all' or 'nonzero', got {y_rule!r}")
    field = _resolve_field(A, field)
    ind = _indicator_vector(field, A, np.int64)
    tables = [poly_index_table(p, field) for p in system.P]
    total = 0
    start = 1 if y_rule == "nonzero" else 0
    for yi in range(start, field.q):
        prod = ind
        for tbl in tables:
            prod = prod * _shifted(field, ind, int(tbl[yi]))
        total += int(prod.sum())
    return total


@dataclass(frozen=True)
class LambdaResult:
    """An average split as value = main_term + error (exactly)."""

    value: complex
    main_term: complex
    error: complex
    q: int
    system: ProgressionSystem

    @property
    def scaled_count(self) -> complex:
        """q^2 * value: the raw pair count for indicator inputs."""
        return self.q * self.q * self.value

    @property
    def scaled_error(self) -> complex:
        """q^2 * error: distance of the raw count from its main term."""
        return self.q * self.q * self.error


def main_term_error(system: ProgressionSystem, A,
                    field: FieldSpec | None = None) -> LambdaResult:
    """Split the indicator average into (|A|/q)^(m1+1) plus remainder."""
    if system.m2:
        raise TwistedSystem("main term defined for untwisted systems")
    field = _resolve_field(A, field)
    f = indicator(field, A)
    value = lambda_average(system, [f] * (system.m1 + 1))
    alpha = float(f.values.real.sum()) / field.q
    main = complex(alpha ** (system.m1 + 1))
    return LambdaResult(value, main, value - main, field.q, system)


# --------------------------------------------------------------------------
# rewrite identities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteCheck:
    """Both sides of an exact identity and their absolute difference."""

    lhs: complex
    rhs: complex
    mode: str
    k: int

    @property
    def abs_diff(self) -> float:
        return abs(self.lhs - self.rhs)


def twist_rewrite_check(system: ProgressionSystem, F, Psi, k: int,
                        mode: str | None = None) -> RewriteCheck:
    """Evaluate a twisted average and its rewritten form, both exactly.

    Psi lists the twist character labels (field elements or enumeration
    indices; length m2).  k = 0 absorbs the twists next to f_0; k = m1
    with mode='absorb' pushes them onto f_{m1} (translating each Q_j by
    P_{m1}); 1 <= k <= m1 with mode='shift' (the default for k >= 1)
    performs the bare substitution x -> x - P_k(y).
    """
    F = list(F)
    if len(F) != system.m1 + 1:
        raise ArityMismatch(f"need {system.m1 + 1} shift functions, got {len(F)}")
    Psi = list(Psi)
    if len(Psi) != system.m2:
        raise ArityMismatch(f"need {system.m2} twist characters, got {len(Psi)}")
    if not 0 <= k <= system.m1:
        raise IndexOutOfRange(f"k must lie in [0, {system.m1}], got {k}")
    if mode is None:
        mode = "absorb" if k == 0 else "shift"
    if mode not in ("absorb", "shift"):
        raise InvalidRange(f"mode must be 'absorb' or 'shift', got {mode!r}")
    if mode == "absorb" and k not in (0, system.m1):
        raise IndexOutOfRange("absorb mode needs k = 0 or k = m1")
    if mode == "shift" and k == 0:
        raise IndexOutOfRange("shift mode needs 1 <= k <= m1")

    field = F[0].field
    fv = _validate_functions(field, F, "F")
    cv = [character_function(field, a).values for a in Psi]
    _warn_characteristic(system, field)

    P, Q = list(system.P), list(system.Q)
    lhs = _lambda_raw(field, P, fv, Q, cv)

    if mode == "absorb" and k == 0:
        new_f0 = fv[0]
        for c in cv:
            new_f0 = new_f0 * np.conj(c)
        rhs = _lambda_raw(field, P + Q, [new_f0] + fv[1:] + cv, [], [])
    elif mode == "absorb":
        new_fm = fv[-1]
        for c in cv:
            new_fm = new_fm * np.conj(c)
        shifted_Q = [qp + P[-1] for qp in Q]
        rhs = _lambda_raw(field, P + shifted_Q, fv[:-1] + [new_fm] + cv, [], [])
    else:
        rhs = _shift_identity_rhs(field, P, fv, Q, cv, k)
    return RewriteCheck(lhs, complex(rhs), mode, k)


def _shift_identity_rhs(field, P, F_values, Q, G_values, k: int) -> complex:
    """Average after substituting x -> x - P_k(y) (k is 1-indexed)."""
    pk = P[k - 1]
    new_P = [-pk] + [P[i] - pk for i in range(len(P)) if i != k - 1]
    rest = [F_values[i + 1] for i in range(len(P)) if i != k - 1]
    return _lambda_raw(field, new_P, [F_values[k], F_values[0]] + rest,
                       Q, G_values)


# --------------------------------------------------------------------------
# base case
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BaseCaseReport:
    """Exact two-function twisted average against its predicted main term."""

    value: complex
    main_term: complex
    error: complex
    sqrt_q_error: float
    trivial_twist: bool
    q: int


def base_case_report(P1: IntPoly, Qs, F, Psi) -> BaseCaseReport:
    """E_{x,y} f_0(x) f_1(x + P_1(y)) prod_j psi_j(Q_j(y)) vs its main term.

    Requires [P_1] + Qs independent (DependentSystem otherwise).  The main
    term is (E f_0)(E f_1) when every twist is trivial and 0 otherwise; the
    report carries |error| * sqrt(q), the observable constant in the
    O(q^(-1/2)) estimate.
    """
    F = list(F)
    if len(F) != 2:
        raise ArityMismatch(f"base case takes exactly two functions, got {len(F)}")
    Qs = list(Qs)
    Psi = list(Psi)
    if len(Psi) != len(Qs):
        raise ArityMismatch("one character per twist polynomial")
    field = F[0].field
    fv = _validate_functions(field, F, "F")
    cert = independence_certificate([P1] + Qs)
    if isinstance(cert, DependenceWitness):
        raise DependentSystem(f"dependence witness lambda = {cert.coefficients}")
    threshold = characteristic_threshold(cert)
    if field.p < threshold:
        warnings.warn(
            f"characteristic {field.p} below base-case threshold {threshold}",
            CharacteristicWarning,
            stacklevel=2,
        )
    chars = [character_function(field, a).values for a in Psi]
    value = _lambda_raw(field, [P1], fv, Qs, chars)
    trivial = all(_as_char_index(field, a) == 0 for a in Psi)
    main = complex(fv[0].mean() * fv[1].mean()) if trivial else 0j
    error = value - main
    return BaseCaseReport(value, main, error,
                          abs(error) * field.q ** 0.5, trivial, field.q)


def _as_char_index(field: FieldSpec, a) -> int:
    return a.index if isinstance(a, FieldElement) else int(a) % field.q


# --------------------------------------------------------------------------
# complete character sums
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WeilSum:
    """A complete additive character sum with its square-root bound."""

    value: complex
    degree: int
    bound: float | None
    within_bound: bool
    trivial: bool


def weil_sum(field: FieldSpec, polys, coefficients) -> WeilSum:
    """E_y psi(sum_j a_j P_j(y)) against the (d-1)/sqrt(q) bound.

    coefficients are field elements (or enumeration indices); all-zero
    coefficients give the trivial sum 1 with no bound to check.  A nonzero
    combination that collapses to a constant raises DegenerateCombination.
    The bound is meaningful for combined degree d < p; larger d still
    evaluates and is compared against the same formula.
    """
    polys = list(polys)
    if not polys:
        raise EmptyInput("weil_sum needs at least one polynomial")
    coeffs = [a if isinstance(a, FieldElement) else field.element_at(int(a))
              for a in coefficients]
    if len(coeffs) != len(polys):
        raise ArityMismatch("one coefficient per polynomial")
    for a in coeffs:
        if a.field != field:
            raise FieldMismatch("coefficient from a different field")

    # combined polynomial over the field, coefficients in the power basis
    top = max(p.degree for p in polys)
    combined = [field.zero for _ in range(top + 1)]
    for a, poly in zip(coeffs, polys):
        if a.is_zero:
            continue
        for i, c in enumerate(poly.coeffs):
            combined[i] = combined[i] + a * field.element(c)
    while combined and combined[-1].is_zero:
        combined.pop()

    if all(a.is_zero for a in coeffs):
        return WeilSum(1.0 + 0j, 0, None, True, True)
    degree = len(combined) - 1
    if degree < 1:
        raise DegenerateCombination(
            "combination collapsed to a constant; no cancellation to measure")

    omega = field.omega_powers()
    if field.k == 1:
        y = np.arange(field.q, dtype=np.int64)
        acc = np.zeros(field.q, dtype=np.int64)
        for c in reversed(combined):
            acc = (acc * y + c.coeffs[0]) % field.p
        value = complex(omega[acc].mean())
    else:
        trvec = field.trace_vector()
        total = 0j
        for y in field.elements():
            val = field.zero
            for c in reversed(combined):
                val = val * y + c
            total += omega[trvec[val.index]]
        value = complex(total / field.q)
    bound = (degree - 1) / field.q ** 0.5
    return WeilSum(value, degree, bound, abs(value) <= bound + _WEIL_TOL,
                   False)


def additive_monomial_sums(p: int, d: int) -> np.ndarray:
    """E_y e_p(a y^d) for every a in F_p at once (vectorized sweep helper).

    Returns the complex array of normalized sums indexed by a; entry 0 is
    the trivial sum 1.
    """
    if d < 1:
        raise InvalidRange(f"monomial degree must be >= 1, got {d}")
    y = np.arange(p, dtype=np.int64)
    u = np.ones(p, dtype=np.int64)
    for _ in range(d):
        u = (u * y) % p
    counts = np.bincount(u, minlength=p)
    omega = np.exp(2j * np.pi * np.arange(p) / p)
    a = np.arange(p, dtype=np.int64)
    phase = (a[:, None] * np.arange(p)[None, :]) % p
    return (omega[phase] @ counts) / p
