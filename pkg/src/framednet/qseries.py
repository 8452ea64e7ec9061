"""Exact formal q-series on the 1/48 exponent grid.

All exponents are integer multiples of 1/48 and are stored as integer
numerators over the fixed denominator 48.  Coefficients are arbitrary
precision Python ints.  Every series carries a truncation order (also a
numerator over 48): exponents >= order are unknown, exponents < order are
exact.  Orders propagate pessimistically through multiplication so a
retained coefficient is never polluted by discarded terms.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Union

DEN = 48

ExpLike = Union[int, Fraction]


class GridError(ValueError):
    """An exponent left the 1/48 grid."""


def to_num(e: ExpLike) -> int:
    """Convert an exponent (int or Fraction) to its numerator over 48."""
    f = Fraction(e)
    num = f * DEN
    if num.denominator != 1:
        raise GridError(f"exponent {f} is not a multiple of 1/{DEN}")
    return int(num)


class QSeries:
    """Immutable truncated series sum_e c_e q^e with e on the 1/48 grid."""

    __slots__ = ("terms", "order")

    def __init__(self, terms: Mapping[int, int], order: int):
        self.terms = {n: c for n, c in terms.items() if c != 0 and n < order}
        self.order = order

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls({}, order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls({0: 1}, order)

    @classmethod
    def monomial(cls, exponent: ExpLike, coeff: int, order: int) -> "QSeries":
        return cls({to_num(exponent): coeff}, order)

    # -- inspection ---------------------------------------------------

    def lowest(self) -> int:
        """Numerator of the lowest stored exponent; the order if empty."""
        return min(self.terms) if self.terms else self.order

    def coeff(self, exponent: ExpLike) -> int:
        n = to_num(exponent)
        if n >= self.order:
            raise ValueError(f"exponent {Fraction(n, DEN)} beyond order {Fraction(self.order, DEN)}")
        return self.terms.get(n, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.terms.items()))))

    def agrees_with(self, other: "QSeries") -> bool:
        """Termwise equality up to the smaller of the two orders."""
        o = min(self.order, other.order)
        a = {n: c for n, c in self.terms.items() if n < o}
        b = {n: c for n, c in other.terms.items() if n < o}
        return a == b

    def first_difference(self, other: "QSeries"):
        """Lowest exponent numerator where the two disagree, or None."""
        o = min(self.order, other.order)
        diff = [n for n in set(self.terms) | set(other.terms)
                if n < o and self.terms.get(n, 0) != other.terms.get(n, 0)]
        return min(diff) if diff else None

    def __repr__(self) -> str:
        parts = [f"{c}*q^({Fraction(n, DEN)})" for n, c in self.items()[:6]]
        if len(self.terms) > 6:
            parts.append("...")
        body = " + ".join(parts) if parts else "0"
        return f"QSeries({body}; order<{Fraction(self.order, DEN)})"

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        terms = dict(self.terms)
        for n, c in other.terms.items():
            terms[n] = terms.get(n, 0) + c
        return QSeries(terms, order)

    def __neg__(self) -> "QSeries":
        return QSeries({n: -c for n, c in self.terms.items()}, self.order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other: "QSeries") -> "QSeries":
        order = min(self.order + other.lowest(), other.order + self.lowest())
        terms: dict = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in other.terms.items():
                n = n1 + n2
                if n < order:
                    terms[n] = terms.get(n, 0) + c1 * c2
        return QSeries(terms, order)

    def scale(self, c: int) -> "QSeries":
        return QSeries({n: c * v for n, v in self.terms.items()}, self.order)

    def half(self) -> "QSeries":
        """Divide by 2, asserting every coefficient is even."""
        out = {}
        for n, c in self.terms.items():
            if c % 2 != 0:
                raise ValueError(f"odd coefficient {c} at exponent {Fraction(n, DEN)}")
            out[n] = c // 2
        return QSeries(out, self.order)

    def shift(self, exponent: ExpLike) -> "QSeries":
        """Multiply by q^exponent."""
        s = to_num(exponent)
        return QSeries({n + s: c for n, c in self.terms.items()}, self.order + s)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.terms, order)

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            raise ValueError("negative powers are not defined on bare series")
        if k == 0:
            # exact 1: effectively infinite order so it never truncates a product
            return QSeries.one(1 << 62)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "den": DEN,
            "terms": [[n, str(c)] for n, c in self.items()],
            "order_num": self.order,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "QSeries":
        if d.get("den") != DEN:
            raise ValueError(f"unsupported denominator {d.get('den')}")
        return cls({int(n): int(c) for n, c in d["terms"]}, int(d["order_num"]))

    @classmethod
    def from_json(cls, s: str) -> "QSeries":
        return cls.from_json_dict(json.loads(s))


def binom(p: int, k: int) -> int:
    """Binomial coefficient C(p, k) for any integer p and k >= 0."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= p - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    q, r = divmod(num, den)
    assert r == 0
    return q


PRODUCT_KINDS = ("1-q^n", "1+q^n", "1-q^{n-1/2}", "1+q^{n-1/2}")


def product_form(kind: str, power: int, order: ExpLike) -> QSeries:
    """Expand prod_{n>=1} (1 +- q^{e_n})^power exactly below `order`.

    e_n is n for the integer kinds and n - 1/2 for the half-integer ones.
    Factors whose lowest exponent is >= order contribute nothing and are
    omitted.  Negative powers expand each factor by the binomial series.
    """
    if kind not in PRODUCT_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    order_num = to_num(order)
    sign = -1 if kind.startswith("1-") else 1
    half = kind.endswith("{n-1/2}")
    result = QSeries.one(order_num)
    n = 1
    while True:
        e_num = n * DEN - (DEN // 2 if half else 0)
        if e_num >= order_num:
            break
        factor_terms = {0: 1}
        k = 1
        while k * e_num < order_num:
            factor_terms[k * e_num] = binom(power, k) * (sign ** k)
            if power >= 0 and k >= power:
                break
            k += 1
        result = result * QSeries(factor_terms, order_num)
        n += 1
    return QSeries(result.terms, order_num)


def eta_power(k: int, order: ExpLike) -> QSeries:
    """(q^{1/24} prod_{n>=1} (1-q^n))^k, exact below `order`."""
    order_num = to_num(order)
    shift_num = k * (DEN // 24)
    inner = product_form("1-q^n", k, Fraction(order_num - shift_num, DEN))
    return inner.shift(Fraction(shift_num, DEN))


def scale_exponents(a: QSeries, factor: ExpLike) -> QSeries:
    """Substitute q -> q^factor; every scaled exponent must stay on the grid."""
    f = Fraction(factor)
    if f not in (Fraction(1, 2), Fraction(2)):
        raise ValueError(f"unsupported scale factor {f}")
    terms = {}
    for n, c in a.terms.items():
        m = Fraction(n) * f
        if m.denominator != 1:
            raise GridError(f"exponent {Fraction(n, DEN)} leaves the grid under q -> q^{f}")
        terms[int(m)] = c
    order = Fraction(a.order) * f
    if order.denominator != 1:
        # tighten to the nearest representable bound
        order = Fraction(int(order))
    return QSeries(terms, int(order))
