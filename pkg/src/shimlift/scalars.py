"""Exact scalar arithmetic: cyclotomic numbers, quadratic symbols, Bernoulli
polynomials, and partial zeta / Dirichlet L-values at non-positive integers.

Conventions fixed here and relied on everywhere else:

* Rationals are `fractions.Fraction` (always reduced, positive denominator).
* `kronecker(t, d)` is the Kronecker symbol (t/d), extended to d = 2 by
  (t/2) = (2/t) for odd t, (t/2) = 0 for even t, and to d <= 0 in the usual
  way ((t/-1) = sign of t, (t/0) nonzero only for t = +-1).
* Bernoulli numbers use the first convention B_1 = -1/2, so that
  zeta(1-k, a) = -B_k(a)/k holds verbatim for the Hurwitz zeta function.
* `partial_zeta_neg(N, d, k)` is the value at s = 1-k of sum over positive
  n congruent to d mod N of n^(-s), namely -N^(k-1) B_k(d/N) / k.  It is
  defined for every residue 1 <= d <= N, not only units; callers that need
  the coprime-only sums select residues themselves.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:  # pragma: no cover - annotation only
    from .characters import DirichletCharacter

__all__ = [
    "CycScalar",
    "FourthRoot",
    "Scalar",
    "as_exact",
    "bernoulli_number",
    "bernoulli_poly",
    "dirichlet_L_neg",
    "eps_d",
    "exact_add",
    "exact_eq",
    "exact_is_zero",
    "exact_mul",
    "exact_to_complex",
    "kronecker",
    "partial_zeta_neg",
    "quadratic_L_neg",
    "rational_from_str",
    "rational_to_str",
    "scalar_from_json",
    "scalar_to_json",
]

BERNOULLI_BOUND = 64

_TWO_PI = 2.0 * math.pi


def kronecker(t: int, d: int) -> int:
    """Kronecker symbol (t/d).

    Completely multiplicative in d; agrees with the Legendre symbol for odd
    prime d; (t/2) = 0 for even t and otherwise +1 for t = +-1 mod 8, -1 for
    t = +-3 mod 8 (which is the same as (2/t)).  (0/0) is rejected.
    """
    if t == 0 and d == 0:
        raise ValueError("kronecker symbol (0/0) is undefined")
    if d == 0:
        return 1 if t in (1, -1) else 0
    if t % 2 == 0 and d % 2 == 0:
        return 0
    v = 0
    while d % 2 == 0:
        d //= 2
        v += 1
    k = 1
    if v % 2 == 1 and t % 8 not in (1, 7):
        k = -1
    if d < 0:
        d = -d
        if t < 0:
            k = -k
    t %= d
    while t != 0:
        while t % 2 == 0:
            t //= 2
            if d % 8 in (3, 5):
                k = -k
        t, d = d, t
        if t % 4 == 3 and d % 4 == 3:
            k = -k
        t %= d
    return k if d == 1 else 0


class FourthRoot:
    """A fourth root of unity i^e, closed under multiplication."""

    __slots__ = ("exp",)

    def __init__(self, exp: int):
        self.exp = exp % 4

    def __mul__(self, other: "FourthRoot") -> "FourthRoot":
        if not isinstance(other, FourthRoot):
            return NotImplemented
        return FourthRoot(self.exp + other.exp)

    def conjugate(self) -> "FourthRoot":
        return FourthRoot(-self.exp)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FourthRoot) and self.exp == other.exp

    def __hash__(self) -> int:
        return hash(("FourthRoot", self.exp))

    def __complex__(self) -> complex:
        return (1 + 0j, 1j, -1 + 0j, -1j)[self.exp]

    def to_cyc(self) -> "CycScalar":
        return CycScalar.root_of_unity(4, self.exp)

    def as_int(self) -> int:
        """The value as an integer, only for +-1."""
        if self.exp == 0:
            return 1
        if self.exp == 2:
            return -1
        raise ValueError("fourth root %r is not rational" % (self,))

    def __repr__(self) -> str:
        return ("1", "i", "-1", "-i")[self.exp]


def eps_d(d: int) -> FourthRoot:
    """eps_d = 1 for d = 1 mod 4 and i for d = 3 mod 4; rejects even d."""
    if d % 2 == 0:
        raise ValueError("eps_d needs odd d, got %d" % d)
    return FourthRoot(0) if d % 4 == 1 else FourthRoot(1)


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the m-th cyclotomic polynomial.

    Computed by exact division of x^m - 1 by the product of the lower
    cyclotomic polynomials.
    """
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0] = -1
    num[m] = 1
    for d in range(1, m):
        if m % d == 0:
            phi_d = _cyclotomic(d)
            # synthetic division, exact by construction
            deg_q = len(num) - len(phi_d)
            quot = [0] * (deg_q + 1)
            rem = list(num)
            for i in range(deg_q, -1, -1):
                c = rem[i + len(phi_d) - 1]
                quot[i] = c
                if c:
                    for j, pc in enumerate(phi_d):
                        rem[i + j] -= c * pc
            assert not any(rem), "cyclotomic division left a remainder"
            num = quot
    return tuple(num)


class CycScalar:
    """An exact element of the cyclotomic field Q(zeta_m).

    Stored as a Fraction-coefficient polynomial in zeta_m, reduced modulo the
    m-th cyclotomic polynomial, so within a fixed order equal values have
    equal representations.  Arithmetic between different orders promotes both
    operands to the least common multiple.  An element that reduces to a
    rational collapses to order 1.
    """

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: dict):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        merged: dict[int, Fraction] = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c:
                e %= order
                merged[e] = merged.get(e, Fraction(0)) + c
        self.order = order
        self.terms = self._reduce(order, merged)
        if self.order > 1 and all(e == 0 for e in self.terms):
            self.order = 1

    @staticmethod
    def _reduce(order: int, terms: dict) -> dict:
        phi = _cyclotomic(order)
        deg = len(phi) - 1
        if not any(e >= deg for e in terms):
            return {e: c for e, c in terms.items() if c}
        dense = [Fraction(0)] * order
        for e, c in terms.items():
            dense[e] += c
        for e in range(order - 1, deg - 1, -1):
            c = dense[e]
            if c:
                dense[e] = Fraction(0)
                base = e - deg
                for j in range(deg):
                    if phi[j]:
                        dense[base + j] -= c * phi[j]
        return {e: c for e, c in enumerate(dense[:deg]) if c}

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_rational(cls, r) -> "CycScalar":
        return cls(1, {0: Fraction(r)})

    @classmethod
    def root_of_unity(cls, m: int, e: int) -> "CycScalar":
        """zeta_m^e = exp(2 pi i e / m)."""
        return cls(m, {e % m: Fraction(1)})

    @classmethod
    def from_e(cls, x: Fraction) -> "CycScalar":
        """e(x) = exp(2 pi i x) for rational x."""
        x = Fraction(x)
        return cls.root_of_unity(x.denominator, x.numerator % x.denominator)

    # -- structure ------------------------------------------------------

    def _promoted_terms(self, order: int) -> dict:
        assert order % self.order == 0
        q = order // self.order
        return {e * q: c for e, c in self.terms.items()}

    def promote(self, order: int) -> "CycScalar":
        if order == self.order:
            return self
        return CycScalar(order, self._promoted_terms(order))

    def is_rational(self) -> bool:
        return all(e == 0 for e in self.terms)

    def as_rational(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError("%r is not rational" % (self,))
        return self.terms[0]

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = _lcm(self.order, o.order)
        terms = dict(self._promoted_terms(m))
        for e, c in o._promoted_terms(m).items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return CycScalar(m, terms)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = _lcm(self.order, o.order)
        a = self._promoted_terms(m)
        b = o._promoted_terms(m)
        out: dict[int, Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = (e1 + e2) % m
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return CycScalar(m, out)

    __rmul__ = __mul__

    def conjugate(self) -> "CycScalar":
        return CycScalar(self.order, {-e % self.order: c for e, c in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycScalar.from_rational(other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        m = _lcm(self.order, other.order)
        return self._promoted_terms(m) == other._promoted_terms(m)

    def __complex__(self) -> complex:
        z = 0j
        for e, c in self.terms.items():
            ang = _TWO_PI * e / self.order
            z += float(c) * complex(math.cos(ang), math.sin(ang))
        return z

    def __repr__(self) -> str:
        if not self.terms:
            return "Cyc(0)"
        parts = ["%s*z%d^%d" % (c, self.order, e) for e, c in sorted(self.terms.items())]
        return "Cyc(" + " + ".join(parts) + ")"


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


Scalar = Union[Fraction, CycScalar]


def as_exact(x) -> Scalar:
    """Canonical exact scalar: rationals as Fraction, the rest as CycScalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, FourthRoot):
        x = x.to_cyc()
    if isinstance(x, CycScalar):
        return x.as_rational() if x.is_rational() else x
    raise TypeError("not an exact scalar: %r" % (x,))


def exact_add(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return as_exact(_cyc(a) + _cyc(b))


def exact_mul(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return as_exact(_cyc(a) * _cyc(b))


def exact_eq(a, b) -> bool:
    a = as_exact(a)
    b = as_exact(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return _cyc(a) == _cyc(b)


def exact_is_zero(a) -> bool:
    return not as_exact(a)


def exact_to_complex(a) -> complex:
    a = as_exact(a)
    return complex(float(a), 0.0) if isinstance(a, Fraction) else complex(a)


def _cyc(x) -> CycScalar:
    return x if isinstance(x, CycScalar) else CycScalar.from_rational(x)


# -- Bernoulli machinery ------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2, by the defining recurrence
    sum_{j<=m} C(m+1, j) B_j = 0."""
    if k < 0:
        raise ValueError("negative Bernoulli index")
    if k == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(k):
        acc += math.comb(k + 1, j) * bernoulli_number(j)
    return -acc / (k + 1)


def bernoulli_poly(k: int, x, bound: int = BERNOULLI_BOUND) -> Fraction:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j), exact; B_1(0) = -1/2."""
    if not 0 <= k <= bound:
        raise ValueError("Bernoulli degree %d outside [0, %d]" % (k, bound))
    x = Fraction(x)
    acc = Fraction(0)
    xp = Fraction(1)
    # accumulate from the x^0 term upward
    for j in range(k, -1, -1):
        acc += math.comb(k, j) * bernoulli_number(j) * xp
        xp *= x
    return acc


def partial_zeta_neg(N: int, d: int, k: int) -> Fraction:
    """Value at s = 1-k of the partial zeta function over n = d mod N, n > 0.

    Equal to -N^(k-1) B_k(d/N) / k.  Defined for every residue 1 <= d <= N;
    d = N covers the multiples of N (where the value is N^(k-1) zeta(1-k)).
    """
    if N < 1:
        raise ValueError("modulus must be positive")
    if not 1 <= d <= N:
        raise ValueError("residue %d not in 1..%d" % (d, N))
    if k < 1:
        raise ValueError("k must be positive")
    return -(Fraction(N) ** (k - 1)) * bernoulli_poly(k, Fraction(d, N)) / k


def dirichlet_L_neg(chi: "DirichletCharacter", k: int) -> Scalar:
    """L(1-k, chi) for chi as a character of its stated modulus N (not the
    primitive version): the sum of chi(d) partial_zeta_neg(N, d, k) over
    units d mod N."""
    N = chi.modulus
    acc: Scalar = Fraction(0)
    for d in range(1, N + 1):
        v = chi(d)
        if exact_is_zero(v):
            continue
        acc = exact_add(acc, exact_mul(as_exact(v), partial_zeta_neg(N, d, k)))
    return acc


# -- JSON forms ---------------------------------------------------------
#
# Rationals travel as strings "p" or "p/q" (reduced, q > 0); cyclotomic
# values as {"order": m, "terms": [[e, "p/q"], ...]} with terms sorted by
# exponent.  Emission is deterministic so round-trips are byte-stable.


def rational_to_str(r: Fraction) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return "%d/%d" % (r.numerator, r.denominator)


def rational_from_str(s) -> Fraction:
    from .errors import SchemaError

    if not isinstance(s, str):
        raise SchemaError("rational must be a string, got %r" % (s,))
    try:
        if "/" in s:
            p, q = s.split("/", 1)
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError("bad rational %r" % s) from exc


def scalar_to_json(x):
    x = as_exact(x)
    if isinstance(x, Fraction):
        return rational_to_str(x)
    return {
        "order": x.order,
        "terms": [[e, rational_to_str(c)] for e, c in sorted(x.terms.items())],
    }


def scalar_from_json(obj) -> Scalar:
    from .errors import SchemaError

    if isinstance(obj, str):
        return rational_from_str(obj)
    if isinstance(obj, dict):
        order = obj.get("order")
        terms = obj.get("terms")
        if not isinstance(order, int) or order < 1 or not isinstance(terms, list):
            raise SchemaError("cyclotomic scalar needs integer 'order' and list 'terms'")
        parsed = {}
        for item in terms:
            if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], int):
                raise SchemaError("cyclotomic term must be [exponent, rational]")
            e, c = item
            parsed[e] = parsed.get(e, Fraction(0)) + rational_from_str(c)
        return as_exact(CycScalar(order, parsed))
    raise SchemaError("scalar must be a rational string or a cyclotomic object")


def quadratic_L_neg(D: int, k: int) -> Fraction:
    """L(1-k, (D/.)) at modulus |D|, via generalized Bernoulli numbers.

    Integer-weighted inner sums keep this fast enough to sit inside
    coefficient formulas; for fundamental D it is the same value as
    dirichlet_L_neg of the Kronecker character mod |D|.
    """
    if D == 0:
        raise ValueError("discriminant must be nonzero")
    F = abs(D)
    if F == 1:
        return partial_zeta_neg(1, 1, k)
    # B_{k,chi} = F^(k-1) sum_a chi(a) B_k(a/F); expand B_k once and take
    # integer power sums S_j = sum_a chi(a) a^j.
    powsums = [0] * (k + 1)
    for a in range(1, F):
        ch = kronecker(D, a)
        if ch == 0:
            continue
        pw = 1
        for j in range(k + 1):
            powsums[j] += ch * pw
            pw *= a
    bk = Fraction(0)
    for j in range(k + 1):
        coeff = math.comb(k, j) * bernoulli_number(j)  # of x^(k-j)
        bk += coeff * Fraction(powsums[k - j], F ** (k - j))
    bk *= Fraction(F) ** (k - 1)
    return -bk / k
