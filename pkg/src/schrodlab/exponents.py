"""Exact arithmetic for Lebesgue exponents and the scaling-critical indices.

Exponents are kept as ``fractions.Fraction`` whenever the input is rational,
so identities like q*(2, 56/17) = 13/4 hold exactly.  Infinity is the
dedicated singleton ``INF`` rather than a float sentinel; ``1/INF`` is the
exact rational 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class _Infinity:
    """Singleton standing for the exponent value infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, _Infinity) or other == float("inf")

    def __hash__(self):
        return hash(float("inf"))

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __float__(self):
        return float("inf")


INF = _Infinity()

Exponent = Union[Fraction, _Infinity]


def as_exponent(value) -> Exponent:
    """Coerce ints, Fractions, 'a/b' strings, 'inf', or integral floats."""
    if isinstance(value, _Infinity):
        return INF
    if isinstance(value, str):
        s = value.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INF
        return Fraction(s)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value == float("inf"):
            return INF
        return Fraction(value).limit_denominator(10**9)
    raise TypeError(f"cannot interpret {value!r} as an exponent")


def inv(e: Exponent) -> Fraction:
    """1/e, with 1/INF = 0 exactly."""
    e = as_exponent(e)
    if isinstance(e, _Infinity):
        return Fraction(0)
    if e == 0:
        raise ZeroDivisionError("exponent 0 has no reciprocal")
    return Fraction(1) / e


def exponent_float(e: Exponent) -> float:
    return float("inf") if isinstance(e, _Infinity) else float(e)


@dataclass(frozen=True)
class ExponentTriple:
    """A Lebesgue triple (p; q, r) together with the spatial dimension."""

    p: Exponent
    q: Exponent
    r: Exponent
    d: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", as_exponent(self.p))
        object.__setattr__(self, "q", as_exponent(self.q))
        object.__setattr__(self, "r", as_exponent(self.r))
        for name in ("p", "q", "r"):
            e = getattr(self, name)
            if not isinstance(e, _Infinity) and e < 2:
                raise ValueError(f"{name} = {e} must be >= 2")
        if self.d not in (1, 2):
            raise ValueError("dimension must be 1 or 2")

    def label(self):
        return f"(p,q,r)=({self.p},{self.q},{self.r}), d={self.d}"


def alpha_critical(t: ExponentTriple) -> Fraction:
    """Scaling-critical Sobolev index d(1 - 1/p - 1/q) - 2/r."""
    return t.d * (1 - inv(t.p) - inv(t.q)) - 2 * inv(t.r)


def square_function_alpha(p: Exponent, r: Exponent) -> Fraction:
    """The two-dimensional index 2(1 - 2/p) - 2/r used when p = q."""
    return 2 * (1 - 2 * inv(p)) - 2 * inv(r)


def gamma_normalization(t: ExponentTriple, beta: Exponent = 0) -> Fraction:
    """Band normalization exponent d(1 - 1/p - 1/q) - 2/r + 2*beta."""
    b = as_exponent(beta)
    if isinstance(b, _Infinity):
        raise ValueError("beta must be finite")
    return alpha_critical(t) + 2 * b


def tao_exponent(d: int) -> Fraction:
    """The bilinear-range endpoint 2(d+3)/(d+1)."""
    return Fraction(2 * (d + 3), d + 1)


def q_star(d: int, q0) -> Fraction:
    """Critical q produced by interpolating a diagonal restriction bound.

    gamma(d, q0) = (1/q0 - (d+1)/(2(d+3))) / ((d+1)/(2d) - (d+2)/(d q0)),
    and q* = 2(d+3)/(d+1) * (1 - gamma).  Requires 2 < q0 < 2(d+3)/(d+1).
    """
    q0 = as_exponent(q0)
    if isinstance(q0, _Infinity):
        raise ValueError("q0 must be finite")
    hi = tao_exponent(d)
    if not (2 < q0 < hi):
        raise ValueError(f"q0 = {q0} outside the open interval (2, {hi})")
    gamma = (Fraction(1) / q0 - Fraction(d + 1, 2 * (d + 3))) / (
        Fraction(d + 1, 2 * d) - Fraction(d + 2, d) / q0
    )
    return hi * (1 - gamma)


def predicted_exponents_1d(t: ExponentTriple):
    """Predicted (power, log-power) growth of the band-limited operator norm.

    d = 1 only.  Two ordered regimes are admissible:
      r <= p <= q:  (1/q - 1/p, 1/2 - 1/r)   if 1/q + 1/r >= 1/2,
                    (1 - 1/p - 1/q - 2/r, 0) otherwise;
      p < r <= q:   (1/q - 1/r, 0)           if 2/q + 1/r >= 1 - 1/p,
                    (1 - 1/p - 1/q - 2/r, 0) otherwise.
    Boundary equalities are inclusive exactly as written.
    """
    if t.d != 1:
        raise ValueError("prediction is stated for d = 1 only")
    ip, iq, ir = inv(t.p), inv(t.q), inv(t.r)
    # ordering comparisons via reciprocals so INF sorts above any finite value
    r_le_p_le_q = ir >= ip >= iq
    p_lt_r_le_q = ip > ir >= iq
    if r_le_p_le_q:
        if iq + ir >= Fraction(1, 2):
            return iq - ip, Fraction(1, 2) - ir
        return Fraction(1) - ip - iq - 2 * ir, Fraction(0)
    if p_lt_r_le_q:
        if 2 * iq + ir >= 1 - ip:
            return iq - ir, Fraction(0)
        return Fraction(1) - ip - iq - 2 * ir, Fraction(0)
    raise ValueError(f"triple {t.label()} satisfies neither r<=p<=q nor p<r<=q")
