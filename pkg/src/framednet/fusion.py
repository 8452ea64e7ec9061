"""Pointed sector systems and their bookkeeping.

A pointed system is a finite abelian group of sector labels together with
a conformal-weight map h: G -> Q mod 1.  This module covers simple
current extension admissibility, mu-index arithmetic, the orbifold
sector census (with exact statistical dimensions in Z[sqrt(2)]), the
order-2 sign involutions on Ising-labelled decompositions, and the
two-step framed-structure data (k, l).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .codes import CodeError, Z4Code

Element = Tuple[int, ...]
HALF = Fraction(1, 2)
SIXTEENTH = Fraction(1, 16)

U14_WEIGHT_TABLE = (Fraction(0), Fraction(1, 8), HALF, Fraction(1, 8))

GROUP_ENUM_LIMIT = 1 << 20
QUOTIENT_LIMIT = 1 << 12


class FusionError(ValueError):
    pass


@dataclass(frozen=True)
class PointedSystem:
    """Finite abelian group of sector labels with a weight map h mod 1.

    `orders` lists the cyclic factor orders; elements are coordinate
    tuples.  `weight` returns h(x) reduced mod 1.  `ambient_length` tags
    Z4-power systems with the underlying coordinate count d.
    """

    orders: Tuple[int, ...]
    weight: Callable[[Element], Fraction]
    ambient_length: Optional[int] = None

    def size(self) -> int:
        return math.prod(self.orders)

    def identity(self) -> Element:
        return (0,) * len(self.orders)

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % o for a, b, o in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % o for a, o in zip(x, self.orders))

    def elements(self) -> Iterable[Element]:
        if self.size() > GROUP_ENUM_LIMIT:
            raise FusionError("system too large to enumerate")
        return product(*(range(o) for o in self.orders))

    def h(self, x: Element) -> Fraction:
        return self.weight(x) % 1


def u14_system() -> PointedSystem:
    """The Z4 sector system of the rank-one net, h = (0, 1/8, 1/2, 1/8)."""
    return PointedSystem((4,), lambda x: U14_WEIGHT_TABLE[x[0] % 4], ambient_length=1)


def z4_power_system(d: int) -> PointedSystem:
    """d-th tensor power: group Z4^d with h(gamma) = sum gamma_i^2 / 8 mod 1."""
    if d < 1:
        raise FusionError("d must be positive")

    def weight(x: Element) -> Fraction:
        return Fraction(sum((a % 4) ** 2 for a in x), 8) % 1

    return PointedSystem((4,) * d, weight, ambient_length=d)


def mu_index(sys: PointedSystem) -> int:
    """Square sum of statistical dimensions; |G| for a pointed system."""
    return sys.size()


def rehren_relation_holds(sys: PointedSystem, x: Element, n: int) -> bool:
    """h(n x) = n^2 h(x) mod 1 (the spin power rule for simple currents)."""
    nx = sys.identity()
    for _ in range(n):
        nx = sys.add(nx, x)
    return sys.h(nx) == (n * n * sys.weight(x)) % 1


# ---------------------------------------------------------------------------
# subgroups and extensions


def _is_z4_power(sys: PointedSystem) -> bool:
    return sys.ambient_length is not None and sys.orders == (4,) * sys.ambient_length


def _subgroup_elements(sys: PointedSystem, gens: Sequence[Element]) -> List[Element]:
    seen = {sys.identity()}
    frontier = [sys.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = sys.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > GROUP_ENUM_LIMIT:
                        raise FusionError("subgroup too large to enumerate")
        frontier = nxt
    return sorted(seen)


def _profile_weight_num(profile_key: Tuple[int, int, int, int]) -> int:
    # h = (n1 + n3)/8 + n2/2; integral iff n1 + n3 + 4 n2 = 0 mod 8
    _, n1, n2, n3 = profile_key
    return (n1 + n3 + 4 * n2) % 8


def integer_weight_subgroup(sys: PointedSystem, H) -> bool:
    """True iff h(x) is an integer for every x in the subgroup H.

    H may be a Z4Code inside a Z4-power system (checked exhaustively via
    the complete weight profile) or an iterable of generator elements.
    """
    if isinstance(H, Z4Code):
        if not _is_z4_power(sys) or H.length != sys.ambient_length:
            raise FusionError("Z4 code does not match the ambient system")
        return all(_profile_weight_num(k) == 0 for k in H.weight_profile())
    elements = _subgroup_elements(sys, [tuple(g) for g in H])
    return all(sys.h(x) == 0 for x in elements)


def _offending_element(sys: PointedSystem, H: Z4Code) -> Optional[Element]:
    for g in H.generators:
        if sys.h(g) != 0:
            return g
    for w in H.codewords():
        if sys.h(w) != 0:
            return w
    return None


def trivial_system() -> PointedSystem:
    return PointedSystem((), lambda x: Fraction(0))


@dataclass(frozen=True)
class ExtensionResult:
    allowed: bool
    mu_before: int
    mu_after: Fraction
    quotient_system: Optional[PointedSystem]
    offending: Optional[Element] = None


# ---------------------------------------------------------------------------
# Z4 linear algebra: dual codes via integer diagonalization


def _diagonalize(rows: List[List[int]], d: int) -> Tuple[List[List[int]], List[List[int]]]:
    """Integer diagonalization A -> U A V by row and column operations.

    Returns (S, V) with S diagonal; V accumulates the column operations,
    so solution sets of A y = 0 (mod anything) are V * solutions of S.
    """
    a = [r[:] for r in rows]
    m = len(a)
    v = [[1 if i == j else 0 for j in range(d)] for i in range(d)]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_col(src, dst, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    t = 0
    while t < min(m, d):
        # find a nonzero pivot of minimal magnitude in the submatrix
        best = None
        for i in range(t, m):
            for j in range(t, d):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            swap_cols(t, j)
        done = True
        for i in range(t + 1, m):
            q = a[i][t] // a[t][t]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if a[i][t]:
                done = False
        for j in range(t + 1, d):
            q = a[t][j] // a[t][t]
            if q:
                add_col(t, j, -q)
            if a[t][j]:
                done = False
        if done:
            t += 1
    return a, v


def z4_dual_code(code: Z4Code) -> Z4Code:
    """Dual under the pairing b(x, y) = sum x_i y_i / 4 mod 1."""
    d = code.length
    rows = [list(g) for g in code.generators]
    s, v = _diagonalize(rows, d)
    gens: List[Element] = []
    for i in range(d):
        pivot = s[i][i] if i < len(s) else 0
        step = 4 // math.gcd(4, abs(pivot))
        if step < 4:
            gens.append(tuple((v[r][i] * step) % 4 for r in range(d)))
    if not gens:
        gens.append((0,) * d)
    return Z4Code(d, gens)


# ---------------------------------------------------------------------------
# abelian structure of small quotients


def _coset_minimum(x: Element, H: Z4Code) -> Element:
    return min(tuple((a + b) % 4 for a, b in zip(x, h)) for h in H.codewords())


def _abelian_basis(elements: List[Element], add, identity) -> List[Tuple[Element, int]]:
    """Cyclic decomposition of a small abelian group given as an element list."""

    def order_of(x):
        n, y = 1, x
        while y != identity:
            y = add(y, x)
            n += 1
        return n

    if len(elements) == 1:
        return []
    x = max(elements, key=order_of)
    n = order_of(x)
    cyclic = []
    y = identity
    for _ in range(n):
        cyclic.append(y)
        y = add(y, x)
    # quotient by <x>: canonical representative is the coset minimum
    reps: Dict[Element, Element] = {}
    for e in elements:
        reps[e] = min(add(e, c) for c in cyclic)
    quots = sorted(set(reps.values()))
    sub = _abelian_basis(
        quots,
        lambda p, q: reps[add(p, q)],
        reps[identity],
    )
    out = [(x, n)]
    for g, o in sub:
        # lift each quotient generator to an element of the same order;
        # one exists because <x> is a direct summand (x has maximal order)
        for c in cyclic:
            cand = add(g, c)
            acc = cand
            for _ in range(o - 1):
                acc = add(acc, cand)
            if acc == identity:
                out.append((cand, o))
                break
        else:
            raise FusionError("no order-preserving lift found")
    return out


def _quotient_system(sys: PointedSystem, H: Z4Code, dual: Z4Code) -> PointedSystem:
    index = len(dual) // len(H)
    if index == 1:
        return trivial_system()
    if len(H) == 1:
        return sys
    if index > QUOTIENT_LIMIT or len(H) > GROUP_ENUM_LIMIT:
        raise FusionError("quotient too large to present explicitly")
    reps = sorted({_coset_minimum(w, H) for w in dual.codewords()})
    if len(reps) != index:
        raise FusionError("coset representative count mismatch")

    def q_add(x, y):
        return _coset_minimum(tuple((a + b) % 4 for a, b in zip(x, y)), H)

    identity = _coset_minimum((0,) * H.length, H)
    basis = _abelian_basis(reps, q_add, identity)
    orders = tuple(o for _, o in basis)
    gens = [g for g, _ in basis]

    def weight(coords: Element) -> Fraction:
        x = (0,) * H.length
        for c, g, o in zip(coords, gens, orders):
            for _ in range(c % o):
                x = tuple((a + b) % 4 for a, b in zip(x, g))
        return sys.h(x)

    return PointedSystem(orders, weight)


def simple_current_extension(sys: PointedSystem, H) -> ExtensionResult:
    """Admissibility and index bookkeeping of the extension of sys by H.

    Allowed iff every element of H has integer weight (spin 1); then the
    mu-index drops by |H|^2 and the surviving sectors form H-perp / H.
    """
    mu_before = mu_index(sys)
    if isinstance(H, Z4Code):
        size = len(H)
        allowed = integer_weight_subgroup(sys, H)
        offending = None if allowed else _offending_element(sys, H)
        quotient = None
        if allowed:
            dual = z4_dual_code(H)
            for g in H.generators:
                if g not in dual:
                    raise FusionError("integer-weight subgroup is not isotropic")
            quotient = _quotient_system(sys, H, dual)
    else:
        elements = _subgroup_elements(sys, [tuple(g) for g in H])
        size = len(elements)
        offending = next((x for x in elements if sys.h(x) != 0), None)
        allowed = offending is None
        quotient = None
        if allowed and size == 1:
            quotient = sys
    mu_after = Fraction(mu_before, size * size)
    return ExtensionResult(allowed, mu_before, mu_after, quotient, offending)


# ---------------------------------------------------------------------------
# fusion group disambiguation (Rehren spin rule on four sectors)


def fusion_group_disambiguation(weights: Sequence) -> str:
    """Group structure on 4 sectors compatible with h(nx) = n^2 h(x) mod 1.

    Returns "Z4", "Z2xZ2", "ambiguous" (both fit), or "inconsistent".
    """
    ws = [Fraction(w) % 1 for w in weights]
    if len(ws) != 4 or Fraction(0) not in ws:
        raise FusionError("need four weights including the vacuum's 0")
    rest = list(ws)
    rest.remove(Fraction(0))
    z4 = any(
        a == c and (4 * a) % 1 == b and (8 * a) % 1 == 0
        for a, b, c in permutations(rest)
    )
    z22 = all((2 * w) % 1 == 0 for w in rest)
    if z4 and z22:
        return "ambiguous"
    if z4:
        return "Z4"
    if z22:
        return "Z2xZ2"
    return "inconsistent"


# ---------------------------------------------------------------------------
# exact arithmetic in Z[sqrt 2] and the orbifold sector census


@dataclass(frozen=True)
class Zroot2:
    """a + b*sqrt(2) with integer a, b."""

    a: int
    b: int

    def __add__(self, other: "Zroot2") -> "Zroot2":
        return Zroot2(self.a + other.a, self.b + other.b)

    def __mul__(self, other: "Zroot2") -> "Zroot2":
        return Zroot2(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def scale(self, n: int) -> "Zroot2":
        return Zroot2(n * self.a, n * self.b)

    def __repr__(self) -> str:
        return f"{self.a}+{self.b}*sqrt2"


def root2_power(k: int) -> Zroot2:
    """sqrt(2)^k as an exact Zroot2 value (k >= 0)."""
    if k % 2 == 0:
        return Zroot2(1 << (k // 2), 0)
    return Zroot2(0, 1 << ((k - 1) // 2))


@dataclass(frozen=True)
class Census:
    d: int
    dim2_count: int
    dim1_count: int
    twisted_count: int
    dim2: Zroot2
    dim1: Zroot2
    twisted_dim: Zroot2
    mu_balance: Zroot2
    balanced: bool

    def total_sectors(self) -> int:
        return self.dim2_count + self.dim1_count + self.twisted_count


def orbifold_census(d: int) -> Census:
    """Sector census of the order-2 orbifold of the rank-d lattice net.

    4^(d-1) sectors of dimension 2, 4^d of dimension 1, 2^(d+1) of
    dimension 2^(d/2); the squared dimensions must sum to 4^(d+1).
    """
    if d < 1:
        raise FusionError("d must be positive")
    dim2 = Zroot2(2, 0)
    dim1 = Zroot2(1, 0)
    twisted = root2_power(d)
    counts = (4 ** (d - 1), 4 ** d, 2 ** (d + 1))
    mu = (
        (dim2 * dim2).scale(counts[0])
        + (dim1 * dim1).scale(counts[1])
        + (twisted * twisted).scale(counts[2])
    )
    return Census(
        d,
        counts[0],
        counts[1],
        counts[2],
        dim2,
        dim1,
        twisted,
        mu,
        mu == Zroot2(4 ** (d + 1), 0),
    )


# ---------------------------------------------------------------------------
# sign involutions and framed structure

Label = Tuple[Fraction, ...]
ISING_LABELS = (Fraction(0), HALF, SIXTEENTH)


@dataclass(frozen=True)
class SignedDecomposition:
    entries: Tuple[Tuple[Label, int, int], ...]  # (label, multiplicity, sign)
    is_identity: bool


def miyamoto_involution(
    decomp: Sequence[Tuple[Label, int]], k: int, variant: str
) -> SignedDecomposition:
    """Sign map on an Ising-labelled decomposition at tensor position k.

    variant "tau" flips labels with 1/16 at position k; "tau_prime" flips
    labels with 1/2 there and requires that no label carries 1/16 at k.
    """
    if variant not in ("tau", "tau_prime"):
        raise FusionError(f"unknown involution variant {variant!r}")
    flip = SIXTEENTH if variant == "tau" else HALF
    entries = []
    for label, mult in decomp:
        if not 0 <= k < len(label):
            raise FusionError("position k out of range")
        if variant == "tau_prime" and label[k] == SIXTEENTH:
            raise FusionError("tau_prime undefined: a label carries 1/16 at k")
        sign = -1 if label[k] == flip else 1
        entries.append((tuple(label), mult, sign))
    return SignedDecomposition(tuple(entries), all(s == 1 for *_, s in entries))


def _f2_rank(rows: Iterable[Tuple[int, ...]]) -> int:
    basis: List[Tuple[int, ...]] = []
    for row in rows:
        r = list(row)
        for b in basis:
            p = b.index(1)
            if r[p]:
                r = [x ^ y for x, y in zip(r, b)]
        if any(r):
            basis.append(tuple(r))
    return len(basis)


@dataclass(frozen=True)
class FramedStructure:
    num_factors: int
    k: int
    l: int
    sign_matrix: Tuple[Tuple[int, ...], ...]


def framed_structure(decomp: Sequence[Tuple[Label, int]]) -> FramedStructure:
    """The two-step extension data (k, l) of an Ising-labelled decomposition.

    k counts the inner labels (no 1/16 entry; each must have multiplicity
    one) as log2 of their number; l is the F2 rank of the matrix of
    1/16-incidence patterns.
    """
    if not decomp:
        raise FusionError("empty decomposition")
    num_factors = len(decomp[0][0])
    vacuum = tuple([Fraction(0)] * num_factors)
    mults = {tuple(label): mult for label, mult in decomp}
    if mults.get(vacuum) != 1:
        raise FusionError("decomposition must contain the all-0 label once")
    inner = 0
    patterns = set()
    for label, mult in decomp:
        if len(label) != num_factors:
            raise FusionError("label lengths differ")
        pattern = tuple(1 if e == SIXTEENTH else 0 for e in label)
        if any(pattern):
            patterns.add(pattern)
        else:
            if mult != 1:
                raise FusionError(f"inner label {label} has multiplicity {mult}")
            inner += 1
    k = inner.bit_length() - 1
    if 1 << k != inner:
        raise FusionError(f"inner label count {inner} is not a power of two")
    matrix = tuple(sorted(patterns))
    return FramedStructure(num_factors, k, _f2_rank(matrix), matrix)


_BRANCH_OPTIONS = {
    0: ((Fraction(0), Fraction(0)), (HALF, HALF)),
    1: ((SIXTEENTH, SIXTEENTH),),
    2: ((Fraction(0), HALF), (HALF, Fraction(0))),
    3: ((SIXTEENTH, SIXTEENTH),),
}

DECOMP_LIMIT = 1 << 22


def ising_decomposition(G: Z4Code) -> List[Tuple[Label, int]]:
    """Decomposition of the lattice net over 2d Ising factors.

    Each Z4 symbol branches per the character identities: 0 -> (0,0) and
    (1/2,1/2); 2 -> (0,1/2) and (1/2,0); 1 and 3 -> (1/16,1/16).
    """
    total = 0
    for key, count in G.weight_profile().items():
        n0, _, n2, _ = key
        total += count << (n0 + n2)
        if total > DECOMP_LIMIT:
            raise FusionError("decomposition too large to expand")
    counts: Dict[Label, int] = {}
    for w in G.codewords():
        for choice in product(*(_BRANCH_OPTIONS[s] for s in w)):
            label = tuple(e for pair in choice for e in pair)
            counts[label] = counts.get(label, 0) + 1
    return sorted(counts.items())
