"""Exact arithmetic in GF(p^k) and its additive characters.

Elements are coefficient vectors over F_p in the power basis of
F_p[t]/(modulus); the modulus is a monic irreducible of degree k supplied as
a coefficient tuple (constant term first).  When no modulus is given the
canonical one is used: the monic irreducible whose coefficient vector
(c_0, ..., c_{k-1}) is smallest in lexicographic order.

Enumeration order of the field is lexicographic on coefficient vectors, so
index 0 is always the additive identity, and for prime fields the index of
an element equals its integer value.  The absolute trace is
Tr(a) = a + a^p + ... + a^{p^{k-1}} (an F_p scalar), and the additive
characters are psi_a(x) = exp(2 pi i Tr(a x) / p), indexed by a in
enumeration order; psi_0 is the trivial character.

Everything here is exact integer arithmetic; floating point enters only in
the character values themselves.  Dense numpy lookup tables (coefficient
matrix, trace vector, full addition table, character matrix) are built
lazily and cached on the field object -- they are what the counting and
Fourier kernels index into, and they are only sensible at desk scale
(q at most a few thousand).

Errors raised here: NotPrime, ReducibleModulus, DegreeMismatch,
DivisionByZero, FieldMismatch, InvalidRange.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field as _dc_field
from itertools import product

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    InvalidRange,
    NotPrime,
    ReducibleModulus,
)

_TABLE_LIMIT = 4096  # largest q for which dense q x q tables may be built


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3 * 10^24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# --------------------------------------------------------------------------
# polynomial arithmetic over F_p on plain coefficient lists (constant first),
# used only for modulus validation and the canonical-modulus search
# --------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    """a mod m over F_p; m monic."""
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, c in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * c) % p
        _trim(a)  # leading term cancels (m is monic), so this makes progress
    return a


def _pmul(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _pmod(out, m, p)


def _ppow(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmul(result, base, m, p)
        base = _pmul(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        bm = [(c * inv_lead) % p for c in b]  # make monic for _pmod
        a, b = b, _pmod(a, bm, p)
        a, b = _trim(a), _trim(b)
    return a


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Degree <= 3: reducibility forces a linear factor, so a root check
    suffices.  Higher degree: distinct-degree criterion -- t^(p^k) = t
    mod f, and gcd(t^(p^(k/r)) - t, f) = 1 for every prime r | k.
    """
    k = len(coeffs) - 1
    if k == 1:
        return True
    if k <= 3:
        return all(
            sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p != 0
            for x in range(p)
        )
    m = list(coeffs)
    t = [0, 1]
    frob = _ppow(t, p ** k, m, p)
    if _trim(list(frob)) != t:
        return False
    for r in _prime_factors(k):
        sub = _ppow(t, p ** (k // r), m, p)
        diff = list(sub)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(diff, m, p)) - 1 != 0:
            return False
    return True


def _canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over F_p."""
    if k == 1:
        return (0, 1)
    for tail in product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise ReducibleModulus(f"no irreducible of degree {k} over F_{p}")  # pragma: no cover


# --------------------------------------------------------------------------
# field objects
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """A realized finite field F_{p^k} with its modulus and cached tables."""

    p: int
    k: int
    modulus: tuple[int, ...]
    _cache: dict = _dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.k

    # -- element construction ------------------------------------------------

    def element(self, value) -> "FieldElement":
        """Coerce an int (constant embedding) or coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element from a different field")
            return value
        if isinstance(value, (int, np.integer)):
            coeffs = (int(value) % self.p,) + (0,) * (self.k - 1)
            return FieldElement(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.k:
            raise DegreeMismatch(
                f"coefficient vector of length {len(coeffs)}, expected {self.k}")
        return FieldElement(self, coeffs)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.k)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.k - 1))

    def element_at(self, index: int) -> "FieldElement":
        """Element at the given enumeration position."""
        if not 0 <= index < self.q:
            raise InvalidRange(f"element index {index} outside [0, {self.q})")
        coeffs = []
        for place in range(self.k - 1, -1, -1):
            coeffs.append((index // self.p ** place) % self.p)
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> tuple["FieldElement", ...]:
        if "elements" not in self._cache:
            self._cache["elements"] = tuple(
                FieldElement(self, c) for c in product(range(self.p), repeat=self.k)
            )
        return self._cache["elements"]

    # -- internal reduction --------------------------------------------------

    def _reduce(self, coeffs: list[int]) -> tuple[int, ...]:
        """Reduce a raw coefficient list modulo (modulus, p) to length k."""
        out = _pmod([c % self.p for c in coeffs], list(self.modulus), self.p)
        return tuple(out) + (0,) * (self.k - len(out))

    # -- cached numpy tables ---------------------------------------------------

    def _coeff_matrix(self) -> np.ndarray:
        if "coeff" not in self._cache:
            self._cache["coeff"] = np.array(
                list(product(range(self.p), repeat=self.k)), dtype=np.int64
            )
        return self._cache["coeff"]

    def _place_values(self) -> np.ndarray:
        if "place" not in self._cache:
            self._cache["place"] = np.array(
                [self.p ** (self.k - 1 - i) for i in range(self.k)], dtype=np.int64
            )
        return self._cache["place"]

    def trace_vector(self) -> np.ndarray:
        """Tr(e) for every element e in enumeration order (int64)."""
        if "trace" not in self._cache:
            if self.k == 1:
                vec = np.arange(self.q, dtype=np.int64)
            else:
                vec = np.array([trace(self, e) for e in self.elements()],
                               dtype=np.int64)
            self._cache["trace"] = vec
        return self._cache["trace"]

    def omega_powers(self) -> np.ndarray:
        """exp(2 pi i j / p) for j = 0..p-1."""
        if "omega" not in self._cache:
            self._cache["omega"] = np.exp(
                2j * np.pi * np.arange(self.p) / self.p)
        return self._cache["omega"]

    def add_index_table(self) -> np.ndarray:
        """q x q table: entry (i, j) is the index of e_i + e_j."""
        if "add" not in self._cache:
            if self.q > _TABLE_LIMIT:
                raise InvalidRange(f"addition table capped at q <= {_TABLE_LIMIT}")
            if self.k == 1:
                idx = np.arange(self.q, dtype=np.int64)
                table = (idx[:, None] + idx[None, :]) % self.p
            else:
                c = self._coeff_matrix()
                sums = (c[:, None, :] + c[None, :, :]) % self.p
                table = sums @ self._place_values()
            self._cache["add"] = table
        return self._cache["add"]

    def neg_perm(self) -> np.ndarray:
        """Permutation sending index of x to index of -x."""
        if "neg" not in self._cache:
            if self.k == 1:
                idx = np.arange(self.q, dtype=np.int64)
                self._cache["neg"] = (-idx) % self.p
            else:
                c = self._coeff_matrix()
                self._cache["neg"] = ((-c) % self.p) @ self._place_values()
        return self._cache["neg"]

    def character_matrix(self) -> np.ndarray:
        """q x q complex matrix CHI[a, x] = psi_a(x) = e_p(Tr(a x))."""
        if "chi" not in self._cache:
            if self.q > _TABLE_LIMIT:
                raise InvalidRange(f"character matrix capped at q <= {_TABLE_LIMIT}")
            omega = self.omega_powers()
            if self.k == 1:
                idx = np.arange(self.q, dtype=np.int64)
                self._cache["chi"] = omega[(idx[:, None] * idx[None, :]) % self.p]
            else:
                els = self.elements()
                tr = np.empty((self.q, self.q), dtype=np.int64)
                for i, a in enumerate(els):
                    # Tr(a x) = Tr(x a); fill one row at a time
                    tr[i] = [trace(self, a * x) for x in els]
                self._cache["chi"] = omega[tr]
        return self._cache["chi"]

    def __repr__(self) -> str:  # compact, modulus only when it matters
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}; modulus={self.modulus})"


@dataclass(frozen=True)
class FieldElement:
    """An element of a FieldSpec, stored as a reduced coefficient tuple."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        """Position in the field's enumeration order."""
        p, k = self.field.p, self.field.k
        return sum(c * p ** (k - 1 - i) for i, c in enumerate(self.coeffs))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldMismatch("operands belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple(
            (a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple(
            (a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        raw = [0] * (2 * self.field.k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    raw[i + j] += a * b
        return FieldElement(self.field, self.field._reduce(raw))

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise DivisionByZero("inverse of the additive identity")
        # a^(q-2) = a^(-1); q is desk scale so square-and-multiply is fine
        return self ** (self.field.q - 2)

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def make_field(p: int, k: int = 1, modulus=None) -> FieldSpec:
    """Construct GF(p^k), validating primality and irreducibility.

    With no modulus the canonical (lexicographically smallest monic
    irreducible) one is selected; a supplied modulus must be monic of
    degree k and irreducible over F_p.
    """
    if not isinstance(p, int):
        raise NotPrime(f"characteristic {p!r} is not prime")
    if p >= 1 << 64:
        raise InvalidRange("characteristic must fit in 64 bits")
    if not is_prime(p):
        raise NotPrime(f"characteristic {p!r} is not prime")
    if not isinstance(k, int) or k < 1:
        raise DegreeMismatch(f"extension degree must be a positive integer, got {k!r}")
    if modulus is None:
        mod = _canonical_modulus(p, k)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != k + 1 or mod[-1] != 1:
            raise DegreeMismatch(
                f"modulus must be monic of degree {k}, got {tuple(modulus)!r}")
        if not _is_irreducible(mod, p):
            raise ReducibleModulus(f"{mod} is reducible over F_{p}")
    return FieldSpec(p, k, mod)


def field_arith(op: str, a: FieldElement, b=None) -> FieldElement:
    """Dispatch arithmetic: op in {add, sub, mul, inv, pow}.

    ``inv`` ignores b; ``pow`` takes an integer exponent for b.
    """
    if op == "inv":
        return a.inverse()
    if op == "pow":
        if not isinstance(b, (int, np.integer)):
            raise InvalidRange("pow exponent must be an integer")
        return a ** int(b)
    if not isinstance(b, FieldElement):
        raise FieldMismatch(f"{op} needs two field elements")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InvalidRange(f"unknown operation {op!r}")


def enumerate_elements(field: FieldSpec) -> list[FieldElement]:
    """All elements in canonical (lexicographic coefficient) order."""
    return list(field.elements())


def trace(field: FieldSpec, a: FieldElement) -> int:
    """Absolute trace Tr(a) = a + a^p + ... + a^(p^(k-1)), as an F_p scalar."""
    if a.field != field:
        raise FieldMismatch("trace of an element from a different field")
    acc = a
    frob = a
    for _ in range(field.k - 1):
        frob = frob ** field.p
        acc = acc + frob
    assert all(c == 0 for c in acc.coeffs[1:]), "trace must land in F_p"
    return acc.coeffs[0]


def character_eval(field: FieldSpec, a: FieldElement, x: FieldElement) -> complex:
    """psi_a(x) = exp(2 pi i Tr(a x) / p)."""
    t = trace(field, a * x)
    return cmath.exp(2j * cmath.pi * t / field.p)
