"""Reference expansions used by the tests and the command line.

Everything here is built from scratch: theta functions by enumerating
squares, Eisenstein series by divisor-power sieves, the discriminant and
the j-invariant through the pentagonal number expansion of the Euler
product, and the half-integral weight Eisenstein series from quadratic
L-values.  These are the independent side of every comparison; none of
them go through the lift code.
"""

from __future__ import annotations

from fractions import Fraction

from .qseries import QExp, add, invert_unit, mul, rescale, scale
from .scalars import bernoulli_number, kronecker, quadratic_L_neg

__all__ = [
    "FIXTURES",
    "cohen_eisenstein",
    "delta",
    "eisenstein",
    "euler_function",
    "fixture",
    "fixture_names",
    "j_invariant",
    "plus_product",
    "theta",
    "theta_component",
]


def theta(prec: int) -> QExp:
    """Sum of q^(n^2) over all integers n; weight 1/2, level 4."""
    coeffs = {0: 1}
    n = 1
    while n * n < prec:
        coeffs[n * n] = 2
        n += 1
    return QExp(Fraction(1, 2), 1, coeffs, 0, prec)


def theta_component(j: int, prec: int) -> QExp:
    """The two pieces of theta on the quarter-integral lattice.

    Component 0 collects even n, so its exponents n^2/4 are integers and
    the result has denominator 1.  Component 1 collects odd n and lives on
    exponents with denominator 4; the window is in numerator units.
    Substituting tau -> 4 tau (rescale by 4) and adding recovers theta.
    """
    if j == 0:
        coeffs = {0: 1}
        m = 1
        while m * m < prec:
            coeffs[m * m] = 2
            m += 1
        return QExp(Fraction(1, 2), 1, coeffs, 0, prec)
    if j == 1:
        coeffs = {}
        n = 1
        while n * n < prec:
            coeffs[n * n] = 2
            n += 2
        return QExp(Fraction(1, 2), 4, coeffs, 0, prec)
    raise ValueError("theta has components 0 and 1 only")


def _sigma_sieve(power: int, prec: int, odd_only: bool = False) -> dict[int, int]:
    out = [0] * max(prec, 1)
    for d in range(1, prec, 2 if odd_only else 1):
        dp = d**power
        for n in range(d, prec, 2 * d if odd_only else d):
            out[n] += dp
    return {n: v for n, v in enumerate(out) if v}


_EISENSTEIN_WEIGHTS = (4, 6, 8, 10, 14)


def eisenstein(weight: int, prec: int) -> QExp:
    """Level 1 Eisenstein series E_w = 1 - (2w / B_w) sum sigma_{w-1}(n) q^n
    for w in {4, 6, 8, 10, 14} (the one-dimensional weights)."""
    if weight not in _EISENSTEIN_WEIGHTS:
        raise ValueError("weight must be one of %r" % (_EISENSTEIN_WEIGHTS,))
    c = Fraction(-2 * weight) / bernoulli_number(weight)
    assert c.denominator == 1
    coeffs: dict[int, Fraction] = {n: c * v for n, v in _sigma_sieve(weight - 1, prec).items()}
    coeffs[0] = Fraction(1)
    return QExp(Fraction(weight), 1, coeffs, 0, prec)


def euler_function(prec: int) -> QExp:
    """prod (1 - q^n), by the pentagonal number theorem.  Weight 0 here;
    callers track the eta power's actual weight themselves."""
    coeffs: dict[int, int] = {}
    j = 0
    while True:
        placed = False
        for e in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if e < prec:
                coeffs[e] = (-1) ** j if j else 1
                placed = True
        if not placed and j > 0:
            break
        j += 1
    return QExp(Fraction(0), 1, coeffs, 0, prec)


def _power(f: QExp, e: int) -> QExp:
    out = None
    sq = f
    while e:
        if e & 1:
            out = sq if out is None else mul(out, sq)
        e >>= 1
        if e:
            sq = mul(sq, sq)
    return out


def delta(prec: int) -> QExp:
    """The discriminant from the Eisenstein side: (E4^3 - E6^2) / 1728."""
    e4 = eisenstein(4, prec)
    e6 = eisenstein(6, prec)
    num = add(mul(mul(e4, e4), e4), scale(mul(e6, e6), -1))
    return scale(num, Fraction(1, 1728))


def j_invariant(prec: int) -> QExp:
    """E4^3 / Delta, with Delta through the eta product; window [-1, prec)."""
    span = prec + 1
    phi = euler_function(span)
    eta24 = _power(phi, 24)
    inv = invert_unit(eta24, span)
    e4 = eisenstein(4, span)
    series = mul(_power(e4, 3), inv)
    shifted = {a - 1: c for a, c in series.coeffs.items() if a - 1 < prec}
    return QExp(Fraction(0), 1, shifted, -1, prec)


def _fundamental(m: int) -> tuple[int, int]:
    """Square-free core and square cofactor: m = core * f^2."""
    core, f = 1, 1
    n = m
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                core *= p
            f *= p ** (e // 2)
        p += 1 if p == 2 else 2
    core *= n
    return core, f


def _mu(n: int) -> int:
    m = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            m = -m
        p += 1 if p == 2 else 2
    if n > 1:
        m = -m
    return m


def _sigma(power: int, n: int) -> int:
    total = 1 if n >= 1 else 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            total += d**power
            if d != n // d:
                total += (n // d) ** power
        d += 1
    if n > 1:
        total += n**power
    return total


def _cohen_value(k: int, n: int) -> Fraction:
    if n == 0:
        return quadratic_L_neg(1, 2 * k)
    sign = 1 if k % 2 == 0 else -1
    m = sign * n
    if m % 4 not in (0, 1):
        return Fraction(0)
    core, f = _fundamental(abs(m))
    D0 = core if m > 0 else -core
    if D0 % 4 != 1:
        D0 *= 4
        if f % 2:
            return Fraction(0)
        f //= 2
    total = Fraction(0)
    for d in range(1, f + 1):
        if f % d:
            continue
        md = _mu(d)
        if md == 0:
            continue
        total += md * kronecker(D0, d) * d ** (k - 1) * _sigma(2 * k - 1, f // d)
    return quadratic_L_neg(D0, k) * total


def _odd_sigma1(prec: int) -> QExp:
    return QExp(Fraction(2), 1, _sigma_sieve(1, prec, odd_only=True), 0, prec)


def cohen_eisenstein(k: int, prec: int) -> QExp:
    """The weight k + 1/2 Eisenstein series on level 4 whose coefficients
    are the class number-like values H(k, n).

    For k = 2 and large windows the direct L-value evaluation is replaced
    by the identity H = theta^5 / 120 - theta F / 6 with F the odd-index
    part of sum sigma_1(n) q^n; the two paths are compared in the tests.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    if k == 2 and prec > 2000:
        th = theta(prec)
        th5 = mul(_power(th, 4), th)
        tf = mul(th, _odd_sigma1(prec))
        coeffs: dict[int, Fraction] = {}
        for a in range(prec):
            v = th5.coeff(a) / 120 - tf.coeff(a) / 6
            if v:
                coeffs[a] = v
        return QExp(Fraction(2 * k + 1, 2), 1, coeffs, 0, prec)
    coeffs = {}
    for n in range(prec):
        v = _cohen_value(k, n)
        if v:
            coeffs[n] = v
    return QExp(Fraction(2 * k + 1, 2), 1, coeffs, 0, prec)


def plus_product(weight: int, prec: int) -> QExp:
    """theta(tau) E_w(4 tau), a plus-space form of weight w + 1/2 on
    level 4."""
    e = eisenstein(weight, _cdiv4(prec))
    return mul(theta(prec), rescale(e, 4))


def _cdiv4(a: int) -> int:
    return -((-a) // 4)


def weakly_holomorphic_product(prec: int) -> QExp:
    """cohen_eisenstein(2) times j(4 tau): weight 5/2, level 4, pole of
    order 4 at infinity."""
    h = cohen_eisenstein(2, prec + 4)
    j4 = rescale(j_invariant(_cdiv4(prec)), 4)
    return mul(h, j4)


def zero_form(prec: int) -> QExp:
    return QExp(Fraction(5, 2), 1, {}, 0, prec)


FIXTURES = {
    "theta": (theta, {"weight": Fraction(1, 2), "N": 1, "eps": 1}),
    "theta0": (lambda p: theta_component(0, p), {"weight": Fraction(1, 2)}),
    "theta1": (lambda p: theta_component(1, p), {"weight": Fraction(1, 2)}),
    "e4": (lambda p: eisenstein(4, p), {"weight": Fraction(4)}),
    "e6": (lambda p: eisenstein(6, p), {"weight": Fraction(6)}),
    "e8": (lambda p: eisenstein(8, p), {"weight": Fraction(8)}),
    "e10": (lambda p: eisenstein(10, p), {"weight": Fraction(10)}),
    "e14": (lambda p: eisenstein(14, p), {"weight": Fraction(14)}),
    "delta": (delta, {"weight": Fraction(12)}),
    "j": (j_invariant, {"weight": Fraction(0)}),
    "cohen52": (lambda p: cohen_eisenstein(2, p), {"weight": Fraction(5, 2), "N": 1, "k": 2, "eps": 1}),
    "cohen72": (lambda p: cohen_eisenstein(3, p), {"weight": Fraction(7, 2), "N": 1, "k": 3, "eps": -1}),
    "cohen92": (lambda p: cohen_eisenstein(4, p), {"weight": Fraction(9, 2), "N": 1, "k": 4, "eps": 1}),
    "theta_e4": (lambda p: plus_product(4, p), {"weight": Fraction(9, 2), "N": 1, "k": 4, "eps": 1}),
    "theta_e6": (lambda p: plus_product(6, p), {"weight": Fraction(13, 2), "N": 1, "k": 6, "eps": 1}),
    "hj4": (weakly_holomorphic_product, {"weight": Fraction(5, 2), "N": 1, "k": 2, "eps": 1}),
    "zero": (zero_form, {"weight": Fraction(5, 2), "N": 1, "k": 2, "eps": 1}),
}


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


def fixture(name: str, prec: int) -> QExp:
    try:
        builder, meta = FIXTURES[name]
    except KeyError:
        raise ValueError("unknown fixture %r; have %s" % (name, ", ".join(fixture_names()))) from None
    f = builder(prec)
    f.metadata.setdefault("fixture", name)
    return f


def fixture_defaults(name: str) -> dict:
    try:
        return dict(FIXTURES[name][1])
    except KeyError:
        raise ValueError("unknown fixture %r; have %s" % (name, ", ".join(fixture_names()))) from None
