"""Complex-valued functions on F_q and F_q x F_q.

A DenseFunction stores one complex128 value per field element, indexed in
the field's enumeration order; a TwoVarFunction stores a q x q array with
the first variable as the row index.  On top of these live the analytic
primitives everything else uses: normalized Fourier coefficients with
respect to the additive characters,

    fhat(a) = E_x f(x) conj(psi_a(x)),      f(x) = sum_a fhat(a) psi_a(x),

multiplicative differencing Delta_h f(x) = f(x+h) conj(f(x)) (iterated over
a list of shifts, and in the first variable only for two-variable
functions), L^p norms with respect to normalized counting measure, and the
normalized inner product <f, g> = E_x f(x) conj(g(x)).

The Fourier transform is the direct O(q^2) contraction against the cached
character matrix -- exactness and auditability at desk scale are worth more
here than an FFT, and extension fields come for free.  Parseval then reads
sum_a |fhat(a)|^2 = E_x |f(x)|^2 exactly (to rounding).

Errors raised here: ShapeMismatch, FieldMismatch, ElementOutOfField,
InvalidExponent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ElementOutOfField,
    FieldMismatch,
    InvalidExponent,
    ShapeMismatch,
)
from .field import FieldElement, FieldSpec
from .rng import SplitMix64


def _as_index(field: FieldSpec, h) -> int:
    """Coerce a FieldElement (or raw enumeration index) to an index."""
    if isinstance(h, FieldElement):
        if h.field != field:
            raise FieldMismatch("shift from a different field")
        return h.index
    return int(h) % field.q


@dataclass
class DenseFunction:
    """f: F_q -> C as a dense complex vector in enumeration order."""

    field: FieldSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.field.q,):
            raise ShapeMismatch(
                f"expected {self.field.q} values, got shape {v.shape}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    # -- algebra ---------------------------------------------------------

    def conj(self) -> "DenseFunction":
        return DenseFunction(self.field, np.conj(self.values))

    def __add__(self, other: "DenseFunction") -> "DenseFunction":
        self._compat(other)
        return DenseFunction(self.field, self.values + other.values)

    def __sub__(self, other: "DenseFunction") -> "DenseFunction":
        self._compat(other)
        return DenseFunction(self.field, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, DenseFunction):
            self._compat(other)
            return DenseFunction(self.field, self.values * other.values)
        return DenseFunction(self.field, self.values * complex(other))

    __rmul__ = __mul__

    def __neg__(self) -> "DenseFunction":
        return DenseFunction(self.field, -self.values)

    def _compat(self, other: "DenseFunction") -> None:
        if other.field != self.field:
            raise FieldMismatch("functions on different fields")

    # -- structure ---------------------------------------------------------

    def mean(self) -> complex:
        return complex(self.values.mean())

    def shift(self, h) -> "DenseFunction":
        """x -> f(x + h)."""
        idx = _as_index(self.field, h)
        if self.field.k == 1:
            return DenseFunction(self.field, np.roll(self.values, -idx))
        perm = self.field.add_index_table()[idx]
        return DenseFunction(self.field, self.values[perm])

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())


def dense_function(field: FieldSpec, values) -> DenseFunction:
    """Wrap raw values (any complex sequence of length q)."""
    return DenseFunction(field, np.asarray(values, dtype=np.complex128))


def constant_function(field: FieldSpec, c) -> DenseFunction:
    return DenseFunction(field, np.full(field.q, complex(c)))


def indicator(field: FieldSpec, subset) -> DenseFunction:
    """1_A for a collection of field elements (ints embed as constants)."""
    v = np.zeros(field.q, dtype=np.complex128)
    for item in subset:
        if isinstance(item, FieldElement):
            if item.field != field:
                raise ElementOutOfField(f"{item} not in {field}")
            v[item.index] = 1.0
        else:
            v[field.element(item).index] = 1.0
    return DenseFunction(field, v)


def balanced_indicator(field: FieldSpec, subset) -> DenseFunction:
    """1_A - |A|/q, the mean-zero part of an indicator."""
    f = indicator(field, subset)
    return DenseFunction(field, f.values - f.values.mean())


def character_function(field: FieldSpec, a) -> DenseFunction:
    """psi_a as a dense function (a: FieldElement or enumeration index)."""
    idx = _as_index(field, a)
    return DenseFunction(field, field.character_matrix()[idx])


def random_one_bounded(field: FieldSpec, rng) -> DenseFunction:
    """Independent uniform samples from the closed unit disk at every point.

    `rng` is a SplitMix64 instance, or an integer seed for a fresh one.
    """
    if isinstance(rng, int):
        rng = SplitMix64(rng)
    return DenseFunction(
        field, np.array([rng.unit_disk() for _ in range(field.q)]))


# --------------------------------------------------------------------------
# Fourier analysis
# --------------------------------------------------------------------------

@dataclass
class FourierCoefficients:
    """fhat indexed by character (= element) enumeration order."""

    field: FieldSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.field.q,):
            raise ShapeMismatch(
                f"expected {self.field.q} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)


def fourier_transform(f: DenseFunction) -> FourierCoefficients:
    """fhat(a) = E_x f(x) conj(psi_a(x)); direct contraction, no FFT."""
    chi = f.field.character_matrix()
    return FourierCoefficients(f.field, (chi.conj() @ f.values) / f.field.q)


def inverse_fourier(coeffs: FourierCoefficients) -> DenseFunction:
    """f(x) = sum_a fhat(a) psi_a(x)."""
    chi = coeffs.field.character_matrix()
    # chi is symmetric (Tr(ax) = Tr(xa)), so chi.T @ c = chi @ c
    return DenseFunction(coeffs.field, chi @ coeffs.coeffs)


# --------------------------------------------------------------------------
# differencing
# --------------------------------------------------------------------------

def delta_multi(f: DenseFunction, hs) -> DenseFunction:
    """Iterated multiplicative derivative Delta_{h1} ... Delta_{hn} f.

    Delta_h f(x) = f(x+h) conj(f(x)); an empty shift list returns f itself.
    """
    out = f
    for h in hs:
        out = out.shift(h) * out.conj()
    return out


@dataclass
class TwoVarFunction:
    """f: F_q x F_q -> C; rows are the first variable."""

    field: FieldSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        q = self.field.q
        if v.shape != (q, q):
            raise ShapeMismatch(f"expected shape ({q}, {q}), got {v.shape}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())


def two_var_function(field: FieldSpec, values) -> TwoVarFunction:
    return TwoVarFunction(field, np.asarray(values, dtype=np.complex128))


def delta_first_var(F: TwoVarFunction, hs) -> TwoVarFunction:
    """Iterated Delta in the first variable only: rows shift, columns ride."""
    field = F.field
    out = F.values
    for h in hs:
        idx = _as_index(field, h)
        if field.k == 1:
            shifted = np.roll(out, -idx, axis=0)
        else:
            shifted = out[field.add_index_table()[idx]]
        out = shifted * np.conj(out)
    return TwoVarFunction(field, out)


# --------------------------------------------------------------------------
# norms and pairings
# --------------------------------------------------------------------------

def lp_norm(f, p) -> float:
    """L^p norm with normalized counting measure; p = inf gives the sup."""
    absvals = np.abs(f.values)
    if p == float("inf") or p == "inf":
        return float(absvals.max())
    p = float(p)
    if p < 1:
        raise InvalidExponent(f"L^p needs p >= 1 or inf, got {p}")
    return float((absvals ** p).mean() ** (1.0 / p))


def inner(f: DenseFunction, g: DenseFunction) -> complex:
    """<f, g> = E_x f(x) conj(g(x))."""
    if f.field != g.field:
        raise FieldMismatch("inner product across different fields")
    return complex(np.vdot(g.values, f.values) / f.field.q)


def function_to_json(f: DenseFunction) -> dict:
    """Portable JSON form: {"p", "k", "values": [[re, im], ...]}."""
    return {
        "p": f.field.p,
        "k": f.field.k,
        "values": [[float(v.real), float(v.imag)] for v in f.values],
    }


def function_from_json(data: dict, field: FieldSpec | None = None) -> DenseFunction:
    """Inverse of function_to_json; validates against a field if given."""
    from .field import make_field

    if field is None:
        field = make_field(int(data["p"]), int(data.get("k", 1)))
    elif (field.p, field.k) != (int(data["p"]), int(data.get("k", 1))):
        raise FieldMismatch("JSON function belongs to a different field")
    vals = np.array([complex(re, im) for re, im in data["values"]])
    return DenseFunction(field, vals)
