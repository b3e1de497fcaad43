"""Dirichlet characters as explicit value tables, and the derived characters
the lift bookkeeping needs (the mod-4N extension omega_chi, the quadratic
family chi_t, and the twisted character eta attached to an index and a sign).

Moduli here are desk-sized, so characters are stored as complete tables on
the units; nothing is represented through generators.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Mapping

from .errors import HypothesisError
from .scalars import (
    Scalar,
    as_exact,
    exact_eq,
    exact_is_zero,
    exact_mul,
    kronecker,
)

__all__ = [
    "DirichletCharacter",
    "chi_t",
    "eta_char",
    "make_character",
    "omega_chi",
    "valid_eta",
    "character_to_json",
    "character_from_json",
]


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


class DirichletCharacter:
    """Character modulo N, stored as its value table on units.

    Values are exact scalars (roots of unity); chi(d) is 0 whenever
    gcd(d, N) > 1, so lift formulas may sum over all residues and let the
    character kill the forbidden ones.
    """

    __slots__ = ("modulus", "values", "kind", "kind_param")

    def __init__(self, modulus: int, values: Mapping[int, object], kind: str = "explicit", kind_param: int | None = None):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        table: dict[int, Scalar] = {}
        for d, v in values.items():
            r = d % modulus
            if math.gcd(r, modulus) != 1:
                raise ValueError("value given at non-unit residue %d" % d)
            if r in table:
                raise ValueError("duplicate residue %d" % d)
            table[r] = as_exact(v)
        units = [r for r in range(modulus) if math.gcd(r, modulus) == 1]
        missing = [r for r in units if r not in table]
        if missing:
            raise ValueError("value table misses units %r mod %d" % (missing, modulus))
        if not exact_eq(table[1 % modulus], 1):
            raise ValueError("chi(1) must be 1")
        for a in units:
            if exact_is_zero(table[a]):
                raise ValueError("character value at %d is zero" % a)
            for b in units:
                if not exact_eq(exact_mul(table[a], table[b]), table[a * b % modulus]):
                    raise ValueError(
                        "table is not multiplicative: chi(%d)chi(%d) != chi(%d)" % (a, b, a * b % modulus)
                    )
        self.modulus = modulus
        self.values = table
        self.kind = kind
        self.kind_param = kind_param

    @classmethod
    def trivial(cls, modulus: int) -> "DirichletCharacter":
        values = {r: 1 for r in range(modulus) if math.gcd(r, modulus) == 1}
        return cls(modulus, values, kind="trivial")

    @classmethod
    def from_function(cls, modulus: int, fn: Callable[[int], object], period: int, kind: str = "explicit", kind_param: int | None = None) -> "DirichletCharacter":
        """Build a character mod `modulus` from a function on the integers.

        `period` must be a period of fn on integers coprime to `modulus`.
        Every residue class is sampled across the whole period and must be
        constant; a non-constant class means fn does not descend to the
        requested modulus.
        """
        if period % modulus != 0:
            period = _lcm(period, modulus)
        seen: dict[int, Scalar] = {}
        for h in range(1, period + 1):
            if math.gcd(h, modulus) != 1:
                continue
            v = as_exact(fn(h))
            r = h % modulus
            if r in seen:
                if not exact_eq(seen[r], v):
                    raise ValueError(
                        "function is not defined modulo %d: class %d takes two values" % (modulus, r)
                    )
            else:
                seen[r] = v
        return cls(modulus, seen, kind=kind, kind_param=kind_param)

    @classmethod
    def from_kronecker(cls, t: int, modulus: int) -> "DirichletCharacter":
        """The character d -> kronecker(t, d) at the stated modulus.

        Fails when the modulus is incompatible with the symbol's conductor
        (detected by the class-constancy scan, which also rejects t sharing
        a factor with some unit, where the symbol would vanish).
        """
        if t == 0:
            raise ValueError("kronecker character needs nonzero t")
        period = _lcm(modulus, 8 * abs(t))
        return cls.from_function(modulus, lambda d: kronecker(t, d), period, kind="kronecker", kind_param=t)

    def __call__(self, n: int) -> Scalar:
        r = n % self.modulus
        v = self.values.get(r)
        return v if v is not None else Fraction(0)

    def parity(self) -> int:
        """chi(-1) as an integer, +1 for even and -1 for odd."""
        v = self(-1)
        if exact_eq(v, 1):
            return 1
        if exact_eq(v, -1):
            return -1
        raise AssertionError("chi(-1) is not a sign")

    def is_trivial(self) -> bool:
        return all(exact_eq(v, 1) for v in self.values.values())

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        m = _lcm(self.modulus, other.modulus)
        values = {
            r: exact_mul(self(r), other(r))
            for r in range(m)
            if math.gcd(r, m) == 1
        }
        return DirichletCharacter(m, values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and all(
            exact_eq(self.values[r], other.values[r]) for r in self.values
        )

    def __repr__(self) -> str:
        return "DirichletCharacter(mod %d, %s)" % (self.modulus, self.kind)


def make_character(modulus: int, kind: str, *, t: int | None = None, values: Mapping[int, object] | None = None) -> DirichletCharacter:
    """Uniform constructor used by the CLI: trivial, kronecker, or explicit."""
    if kind == "trivial":
        return DirichletCharacter.trivial(modulus)
    if kind == "kronecker":
        if t is None:
            raise ValueError("kronecker kind needs t")
        return DirichletCharacter.from_kronecker(t, modulus)
    if kind == "explicit":
        if values is None:
            raise ValueError("explicit kind needs a value table")
        return DirichletCharacter(modulus, values)
    raise ValueError("unknown character kind %r" % kind)


def omega_chi(chi: DirichletCharacter) -> DirichletCharacter:
    """The mod-4N extension d -> kronecker(4*chi(-1), d) * chi(d).

    Always an even character; it encodes how chi interacts with the theta
    multiplier when a level-N character rides on a half-integral form.
    """
    xi = chi.parity()
    n4 = 4 * chi.modulus

    def fn(d: int):
        return exact_mul(as_exact(kronecker(4 * xi, d)), chi(d))

    return DirichletCharacter.from_function(n4, fn, _lcm(n4, 16))


def chi_t(t: int) -> DirichletCharacter:
    """The quadratic character d -> kronecker(t, d), at modulus 8 * (odd part of t).

    Even for every positive t.
    """
    if t < 1:
        raise ValueError("t must be positive")
    t2 = t
    while t2 % 2 == 0:
        t2 //= 2
    modulus = 8 * t2
    return DirichletCharacter.from_function(
        modulus, lambda d: kronecker(t, d), _lcm(modulus, 8 * t), kind="kronecker", kind_param=t
    )


def valid_eta(N: int, t: int) -> bool:
    """Whether rescaling by t admits a consistent sign at level N.

    True when 4 | N, 4 | t, or t is odd. The excluded case t = 2 mod 4 with
    4 not dividing N is a genuine obstruction: the symbol kronecker(2, .)
    has conductor 8, which the available modulus N*t cannot absorb.
    """
    return N % 4 == 0 or t % 4 == 0 or t % 2 == 1


def eta_char(chi: DirichletCharacter, t: int, eps: int) -> DirichletCharacter:
    """The twisted character d -> chi(d) * kronecker(eps*t, d) modulo N*t.

    Raises HypothesisError when that function is not defined modulo N*t.
    The two failure modes are t = 2 mod 4 with 4 not dividing N (conductor
    8), and odd t whose sign does not match eps (conductor 4*t), again
    without 4 | N to absorb it.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    if t < 1:
        raise ValueError("t must be positive")
    N = chi.modulus
    nt = N * t

    def fn(d: int):
        return exact_mul(as_exact(kronecker(eps * t, d)), chi(d))

    try:
        return DirichletCharacter.from_function(nt, fn, _lcm(nt, 8 * t))
    except ValueError as exc:
        if t % 4 == 2 and N % 4 != 0:
            raise HypothesisError(
                "eta-conductor-8",
                "d -> kronecker(%d, d) has conductor divisible by 8, not defined mod %d "
                "(t = 2 mod 4 needs 4 | N)" % (eps * t, nt),
                case="vi",
            ) from exc
        if t % 2 == 1 and eps != kronecker(-1, t) and N % 4 != 0:
            raise HypothesisError(
                "eta-sign-mismatch",
                "odd t = %d pairs with the sign %d only; with eps = %d the symbol has "
                "conductor 4t and needs 4 | N" % (t, kronecker(-1, t), eps),
            ) from exc
        raise


def _cyc_json(v: Scalar):
    from .scalars import scalar_to_json

    return scalar_to_json(v)


def character_to_json(chi: DirichletCharacter) -> dict:
    out: dict = {"modulus": chi.modulus, "kind": chi.kind}
    if chi.kind == "kronecker":
        out["t"] = chi.kind_param
    if chi.kind == "explicit":
        out["values"] = [[d, _cyc_json(v)] for d, v in sorted(chi.values.items())]
    return out


def character_from_json(obj) -> DirichletCharacter:
    from .errors import SchemaError
    from .scalars import scalar_from_json

    if not isinstance(obj, dict) or "modulus" not in obj or "kind" not in obj:
        raise SchemaError("character object needs 'modulus' and 'kind'")
    modulus = obj["modulus"]
    kind = obj["kind"]
    if not isinstance(modulus, int) or modulus < 1:
        raise SchemaError("character modulus must be a positive integer")
    try:
        if kind == "trivial":
            return DirichletCharacter.trivial(modulus)
        if kind == "kronecker":
            return DirichletCharacter.from_kronecker(obj.get("t"), modulus) if isinstance(obj.get("t"), int) else _bad_t()
        if kind == "explicit":
            pairs = obj.get("values")
            if not isinstance(pairs, list):
                raise SchemaError("explicit character needs 'values'")
            return DirichletCharacter(modulus, {d: scalar_from_json(v) for d, v in pairs})
    except ValueError as exc:
        raise SchemaError("invalid character: %s" % exc) from exc
    raise SchemaError("unknown character kind %r" % kind)


def _bad_t():
    from .errors import SchemaError

    raise SchemaError("kronecker character needs integer 't'")
