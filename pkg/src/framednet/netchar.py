"""Characters of the building-block nets and of the lattice nets.

Two independent routes to the lattice-net vacuum character are kept side
by side: the sector-sum over the Z4 code (primary) and the lattice theta
series divided by eta^d (oracle).  Cross agreement of the two is part of
the acceptance suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .codes import BinaryCode, Z4Code, validate_binary_code
from .qseries import DEN, QSeries, eta_power, product_form, to_num

HALF = Fraction(1, 2)
SIXTEENTH = Fraction(1, 16)

ISING_WEIGHTS = (Fraction(0), HALF, SIXTEENTH)
U14_WEIGHTS = (Fraction(0), Fraction(1, 8), HALF, Fraction(1, 8))


@dataclass(frozen=True)
class NetCharacter:
    """A specialized character: q-expansion plus central charge."""

    series: QSeries
    central_charge: Fraction

    def leading(self) -> Tuple[Fraction, int]:
        n = self.series.lowest()
        return Fraction(n, DEN), self.series.terms[n]

    def coeff(self, exponent) -> int:
        return self.series.coeff(exponent)


def _char_order_num(lowest: Fraction, steps: int) -> int:
    # keep exponents up to `steps` integer q-steps above the leading term
    return to_num(lowest) + steps * DEN + 1


def ising_char(h, steps: int = 5) -> NetCharacter:
    """Character of the c = 1/2 sector of weight h in {0, 1/2, 1/16}."""
    h = Fraction(h)
    c24 = Fraction(1, 48)
    order = Fraction(_char_order_num(h - c24, steps), DEN)
    if h == SIXTEENTH:
        series = product_form("1+q^n", 1, order - Fraction(1, 24)).shift(Fraction(1, 24))
    elif h in (Fraction(0), HALF):
        plus = product_form("1+q^{n-1/2}", 1, order + c24)
        minus = product_form("1-q^{n-1/2}", 1, order + c24)
        comb = (plus + minus) if h == 0 else (plus - minus)
        series = comb.half().shift(-c24)
    else:
        raise ValueError(f"no Ising sector of weight {h}")
    return NetCharacter(series, Fraction(1, 2))


def u14_sector_char(j: int, steps: int = 5) -> NetCharacter:
    """Character of the rank-one net's sector j in Z4 (c = 1).

    chi_j = eta^{-1} * sum over n = j mod 4 of q^{n^2/8}.
    """
    j %= 4
    c24 = Fraction(1, 24)
    order = Fraction(_char_order_num(U14_WEIGHTS[j] - c24, steps), DEN)
    theta_bound = order + c24
    terms: Dict[int, int] = {}
    bound = int(math.isqrt(int(8 * theta_bound)) + 2)
    for n in range(-bound - 4, bound + 5):
        if n % 4 != j:
            continue
        e = Fraction(n * n, 8)
        if e < theta_bound:
            num = to_num(e)
            terms[num] = terms.get(num, 0) + 1
    theta = QSeries(terms, to_num(theta_bound))
    series = theta * eta_power(-1, order + Fraction(U14_WEIGHTS[j]))
    return NetCharacter(QSeries(series.terms, to_num(order)), Fraction(1))


def ising_branching_mismatch(steps: int = 8) -> Optional[Fraction]:
    """First exponent where a branching identity fails, or None if all hold.

    The identities relate the rank-one sectors to Ising pairs:
    chi^A_0 = chi_0^2 + chi_{1/2}^2, chi^A_2 = 2 chi_0 chi_{1/2},
    chi^A_1 = chi^A_3 = chi_{1/16}^2.
    """
    chi0 = ising_char(0, steps + 1).series
    chih = ising_char(HALF, steps + 1).series
    chis = ising_char(SIXTEENTH, steps + 1).series
    pairs = [
        (u14_sector_char(0, steps).series, chi0 * chi0 + chih * chih),
        (u14_sector_char(2, steps).series, (chi0 * chih).scale(2)),
        (u14_sector_char(1, steps).series, chis * chis),
        (u14_sector_char(3, steps).series, chis * chis),
    ]
    for lhs, rhs in pairs:
        n = lhs.first_difference(rhs)
        if n is not None:
            return Fraction(n, DEN)
    return None


def ising_branching_check(steps: int = 8) -> bool:
    return ising_branching_mismatch(steps) is None


class _U14Powers:
    """Cache of chi_j^k truncated consistently for a profile sum."""

    def __init__(self, steps: int, d: int):
        # each base char carries `steps` q-steps above its own leading term,
        # so any d-fold product keeps `steps` q-steps above the total leading
        self.base = [u14_sector_char(j, steps + 1).series for j in range(4)]
        self.cache: Dict[Tuple[int, int], QSeries] = {}

    def power(self, j: int, k: int) -> QSeries:
        key = (j, k)
        if key not in self.cache:
            self.cache[key] = self.base[j] ** k
        return self.cache[key]


def lattice_net_char(group: Z4Code, steps: int = 5) -> NetCharacter:
    """Vacuum character of the simple current extension by `group` (c = d).

    Summed per complete-weight-profile entry:
    sum over profiles of count * chi_0^{n0} chi_1^{n1} chi_2^{n2} chi_3^{n3}.
    """
    d = group.length
    powers = _U14Powers(steps, d)
    order = _char_order_num(Fraction(-d, 24), steps)
    total = QSeries.zero(order)
    for (n0, n1, n2, n3), count in sorted(group.weight_profile().items()):
        term = powers.power(0, n0) * powers.power(1, n1)
        term = term * powers.power(2, n2)
        term = term * powers.power(3, n3)
        total = total + term.scale(count)
    series = QSeries(total.terms, min(total.order, order))
    _assert_vacuum(series, d)
    return NetCharacter(series, Fraction(d))


def _assert_vacuum(series: QSeries, d: int) -> None:
    low = series.lowest()
    if low != to_num(Fraction(-d, 24)) or series.terms[low] != 1:
        raise AssertionError(f"vacuum normalization failed: leading {series}")
    if any(c < 0 for c in series.terms.values()):
        raise AssertionError("negative coefficient in a vacuum character")


# ---------------------------------------------------------------------------
# theta route


def _coset_sum(residue: Fraction, signed: bool, bound: Fraction) -> QSeries:
    """sum over x in residue + 2Z of (+-1)^{(x-residue)/2} q^{x^2/4}, below bound."""
    terms: Dict[int, int] = {}
    limit = int(math.isqrt(int(bound)) + 3)
    for m in range(-limit, limit + 1):
        x = residue + 2 * m
        e = x * x / 4
        if e < bound:
            num = to_num(e)
            sign = (-1 if m % 2 else 1) if signed else 1
            c = terms.get(num, 0) + sign
            terms[num] = c
    return QSeries(terms, to_num(bound))


def theta_series(code: BinaryCode, variant: str, bound: Fraction) -> QSeries:
    """Theta series sum_v q^{<v,v>/2} of the lattice built from `code`.

    Coordinates factor through the binary weight, so the sum collapses to
    the code's weight enumerator; the mod-4 sum constraint of the second
    construction is picked out by averaging over a sign character.
    """
    d = code.length
    report = validate_binary_code(code)
    wenum = report.weight_enumerator
    if variant == "L":
        f0 = _coset_sum(Fraction(0), False, bound)
        f1 = _coset_sum(Fraction(1), False, bound)
        total = QSeries.zero(to_num(bound))
        for w, count in sorted(wenum.items()):
            total = total + (f0 ** (d - w) * f1 ** w).scale(count)
        return QSeries(total.terms, to_num(bound))
    if variant != "Ltilde":
        raise ValueError(f"variant must be L or Ltilde, got {variant!r}")
    total = QSeries.zero(to_num(bound))
    # unshifted part: sum of the 2Z-parts constrained to 4Z, via sign average
    for signed in (False, True):
        f0 = _coset_sum(Fraction(0), signed, bound)
        f1 = _coset_sum(Fraction(1), signed, bound)
        for w, count in sorted(wenum.items()):
            total = total + (f0 ** (d - w) * f1 ** w).scale(count)
    # shifted part: coordinates offset by 1/2, constraint parity set by d mod 16
    shift_sign = 1 if d % 16 == 0 else -1
    for signed in (False, True):
        g0 = _coset_sum(Fraction(1, 2), signed, bound)
        g1 = _coset_sum(Fraction(3, 2), signed, bound)
        s = shift_sign if signed else 1
        for w, count in sorted(wenum.items()):
            total = total + (g0 ** (d - w) * g1 ** w).scale(count * s)
    return QSeries(total.terms, to_num(bound)).half()


def theta_over_eta(code: BinaryCode, variant: str, steps: int = 5) -> NetCharacter:
    """Independent route to the lattice-net character: Theta_L / eta^d."""
    d = code.length
    bound = Fraction(steps + 1)
    theta = theta_series(code, variant, bound)
    series = theta * eta_power(-d, Fraction(-d, 24) + bound)
    order = _char_order_num(Fraction(-d, 24), steps)
    series = QSeries(series.terms, min(series.order, order))
    _assert_vacuum(series, d)
    return NetCharacter(series, Fraction(d))


# ---------------------------------------------------------------------------
# induction-restriction graph rendering


def emit_branching_graph(d: int) -> str:
    """DOT rendering of the sector census of the order-2 orbifold at rank d.

    Node and edge counts follow the census formulas: 4^(d-1) two-dimensional
    and 4^d one-dimensional sectors below, the 4^d sectors of the extension
    above, 2^(d+1) twisted sectors attached to 2^d soliton nodes.  Incidence
    within each block follows the standard induction-restriction pattern.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    lines = ["digraph branching {", "  rankdir=BT;"]
    if d == 0:
        lines.append("}")
        return "\n".join(lines)
    n_upper = 4 ** d
    n_dim2 = 4 ** (d - 1)
    n_dim1 = 4 ** d
    n_tw = 2 ** (d + 1)
    n_sol = 2 ** d
    for i in range(n_upper):
        lines.append(f'  up{i} [shape=circle, label="A:{i}"];')
    for i in range(n_sol):
        lines.append(f'  sol{i} [shape=diamond, label="S:{i}"];')
    for i in range(n_dim2):
        lines.append(f'  two{i} [shape=box, label="dim2:{i}"];')
    for i in range(n_dim1):
        lines.append(f'  one{i} [shape=box, label="dim1:{i}"];')
    for i in range(n_tw):
        lines.append(f'  tw{i} [shape=box, label="tw:{i}"];')
    # each dim-2 sector induces to a sigma-orbit pair of extension sectors
    for i in range(n_dim2):
        lines.append(f"  two{i} -> up{2 * i};")
        lines.append(f"  two{i} -> up{2 * i + 1};")
    # each dim-1 sector induces to a single extension sector (4 per block)
    for i in range(n_dim1):
        lines.append(f"  one{i} -> up{i % n_upper};")
    # twisted sectors pair up onto common soliton nodes
    for i in range(n_tw):
        lines.append(f"  tw{i} -> sol{i // 2};")
    lines.append("}")
    return "\n".join(lines)


def graph_counts(d: int) -> Dict[str, int]:
    """Node/edge counts of emit_branching_graph, from the census formulas."""
    if d == 0:
        return {"lower": 0, "upper": 0, "soliton": 0, "edges": 0}
    return {
        "lower": 4 ** (d - 1) + 4 ** d + 2 ** (d + 1),
        "upper": 4 ** d,
        "soliton": 2 ** d,
        "edges": 2 * 4 ** (d - 1) + 4 ** d + 2 ** (d + 1),
    }
