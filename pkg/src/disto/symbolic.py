"""Exact affine expressions in named constants, and rational helpers.

Bounds such as ``168 + C'`` or ``(d - 2)/C`` keep their unknown constants as
symbols.  An expression is a map from monomials to rational coefficients;
the empty monomial is the constant term and ``"1/C"`` stands for 1/C.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class Symbolic:
    terms: tuple = field(default=())  # sorted (monomial, coefficient) pairs

    @classmethod
    def of(cls, mapping: Mapping[str, Fraction]) -> "Symbolic":
        return cls(tuple(sorted((k, _frac(v)) for k, v in mapping.items() if v != 0)))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.terms)

    @property
    def is_numeric(self) -> bool:
        return all(k == "" for k, _ in self.terms)

    @property
    def constant(self) -> Fraction:
        return self.as_dict().get("", Fraction(0))

    def __add__(self, other) -> "Symbolic":
        d = self.as_dict()
        for k, v in _lift(other).terms:
            d[k] = d.get(k, Fraction(0)) + v
        return Symbolic.of(d)

    __radd__ = __add__

    def __sub__(self, other) -> "Symbolic":
        return self + _lift(other) * -1

    def __mul__(self, c) -> "Symbolic":
        if isinstance(c, Symbolic):
            if c.is_numeric:
                c = c.constant
            elif self.is_numeric:
                return c * self.constant
            else:
                raise TypeError("only affine expressions are supported")
        return Symbolic.of({k: v * _frac(c) for k, v in self.terms})

    __rmul__ = __mul__

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for k, v in self.terms:
            if k == "":
                total += v
            elif k.startswith("1/"):
                total += v / _frac(values[k[2:]])
            else:
                total += v * _frac(values[k])
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, v in sorted(self.terms, key=lambda kv: (kv[0] != "", kv[0])):
            if k == "":
                parts.append(fmt(v))
            elif k.startswith("1/"):
                parts.append(f"{fmt(v)}/{k[2:]}")
            elif v == 1:
                parts.append(k)
            else:
                parts.append(f"{fmt(v)}*{k}")
        return " + ".join(parts).replace("+ -", "- ")


def _lift(v) -> Symbolic:
    return v if isinstance(v, Symbolic) else Symbolic.of({"": _frac(v)})


def sym(name: str) -> Symbolic:
    return Symbolic.of({name: 1})


def fmt(q) -> str:
    q = _frac(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def exact(q) -> dict:
    """JSON rendering of an exact rational: the "p/q" string and a float."""
    q = _frac(q)
    return {"exact": fmt(q), "float": float(q)}


def _atanh_log(y: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    # log y = 2 atanh(z), z = (y-1)/(y+1); tail bounded geometrically
    z = (y - 1) / (y + 1)
    z2 = z * z
    s = Fraction(0)
    p = z
    for k in range(terms):
        s += p / (2 * k + 1)
        p *= z2
    tail = abs(p) / (2 * terms + 1) / (1 - z2)
    return 2 * (s - tail), 2 * (s + tail)


def log_interval(x, terms: int = 30) -> tuple[Fraction, Fraction]:
    """Rational enclosure [lo, hi] of the natural log of x > 0."""
    x = _frac(x)
    if x <= 0:
        raise ValueError("log of a non-positive number")
    k = 0
    while x >= 2:
        x /= 2
        k += 1
    while x < 1:
        x *= 2
        k -= 1
    l2lo, l2hi = _atanh_log(Fraction(2), terms)
    ylo, yhi = _atanh_log(x, terms)
    if k >= 0:
        return k * l2lo + ylo, k * l2hi + yhi
    return k * l2hi + ylo, k * l2lo + yhi
