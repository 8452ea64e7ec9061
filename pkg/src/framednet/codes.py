"""Binary linear codes, the F2 -> Z4 hat map, and the Z4-codes of the
two lattice constructions.

Code files are plain text, one generator per line, symbols 0/1 for binary
codes and 0-3 for Z4 codes, with ``#`` comments.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

Vector = Tuple[int, ...]

ENUM_LIMIT = 1 << 26


class CodeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# binary codes


def _rref_f2(rows: List[List[int]]) -> List[List[int]]:
    """Reduced row echelon form over F2; zero rows dropped."""
    rows = [r[:] for r in rows]
    d = len(rows[0]) if rows else 0
    out: List[List[int]] = []
    pivots: List[int] = []
    for r in rows:
        for piv, b in zip(pivots, out):
            if r[piv]:
                r = [a ^ c for a, c in zip(r, b)]
        if any(r):
            p = r.index(1)
            # clear this column in earlier rows
            out = [[a ^ c for a, c in zip(b, r)] if b[p] else b for b in out]
            out.append(r)
            pivots.append(p)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order]


class BinaryCode:
    """Linear code over F2 given by a generator matrix (stored reduced)."""

    def __init__(self, length: int, generators: Iterable[Sequence[int]]):
        gens = [list(g) for g in generators]
        for g in gens:
            if len(g) != length or any(b not in (0, 1) for b in g):
                raise CodeError(f"bad binary generator of length {len(g)}")
        self.length = length
        self.generators: Tuple[Vector, ...] = tuple(
            tuple(r) for r in _rref_f2(gens)
        )

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def codewords(self) -> Iterator[Vector]:
        if 1 << self.dimension > ENUM_LIMIT:
            raise CodeError("code too large to enumerate")
        for coeffs in product((0, 1), repeat=self.dimension):
            w = [0] * self.length
            for c, g in zip(coeffs, self.generators):
                if c:
                    w = [a ^ b for a, b in zip(w, g)]
            yield tuple(w)

    def __contains__(self, v: Sequence[int]) -> bool:
        r = list(v)
        for g in self.generators:
            p = g.index(1)
            if r[p]:
                r = [a ^ b for a, b in zip(r, g)]
        return not any(r)

    def __len__(self) -> int:
        return 1 << self.dimension

    def __repr__(self) -> str:
        return f"BinaryCode(length={self.length}, dim={self.dimension})"


@dataclass(frozen=True)
class CodeReport:
    doubly_even: bool
    self_dual: bool
    contains_all_ones: bool
    weight_enumerator: Dict[int, int]


def dual_binary_code(code: BinaryCode) -> BinaryCode:
    """The dual code C-perp under the standard bilinear form."""
    d = code.length
    pivots = [g.index(1) for g in code.generators]
    free = [i for i in range(d) if i not in pivots]
    gens = []
    for f in free:
        row = [0] * d
        row[f] = 1
        for p, g in zip(pivots, code.generators):
            row[p] = g[f]
        gens.append(row)
    if not gens:
        gens.append([0] * d)
    return BinaryCode(d, gens)


def _krawtchouk(n: int, j: int, i: int) -> int:
    return sum(
        (-1) ** s * math.comb(i, s) * math.comb(n - i, j - s)
        for s in range(0, min(i, j) + 1)
    )


def _weight_enumerator(code: BinaryCode) -> Dict[int, int]:
    """Weight distribution; via the dual transform when C is too large."""
    if 1 << code.dimension <= ENUM_LIMIT:
        weights: Counter = Counter()
        for w in code.codewords():
            weights[sum(w)] += 1
        return dict(weights)
    dual = dual_binary_code(code)
    if 1 << dual.dimension > ENUM_LIMIT:
        raise CodeError("code and dual both too large to enumerate")
    n = code.length
    b: Counter = Counter()
    for w in dual.codewords():
        b[sum(w)] += 1
    out: Dict[int, int] = {}
    for j in range(n + 1):
        total = sum(count * _krawtchouk(n, j, i) for i, count in b.items())
        a_j, rem = divmod(total, len(dual))
        if rem:
            raise CodeError("dual weight transform did not clear denominators")
        if a_j:
            out[j] = a_j
    return out


def validate_binary_code(code: BinaryCode) -> CodeReport:
    """Checks of the hypotheses placed on the input code.

    The weight enumerator comes from full enumeration when the code is
    small enough and from the dual code's distribution otherwise.
    """
    weights = _weight_enumerator(code)
    doubly_even = all(wt % 4 == 0 for wt in weights)
    self_dual = code.dimension * 2 == code.length and all(
        sum(a * b for a, b in zip(g, h)) % 2 == 0
        for g in code.generators
        for h in code.generators
    )
    all_ones = tuple([1] * code.length) in code
    return CodeReport(doubly_even, self_dual, all_ones, weights)


# ---------------------------------------------------------------------------
# code file format

def parse_code_lines(text: str, alphabet: int) -> List[Vector]:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().replace(" ", "")
        if not line:
            continue
        try:
            row = tuple(int(ch) for ch in line)
        except ValueError as e:
            raise CodeError(f"bad code line {line!r}") from e
        if any(s >= alphabet for s in row):
            raise CodeError(f"symbol out of range in {line!r}")
        rows.append(row)
    if not rows:
        raise CodeError("empty code file")
    if len({len(r) for r in rows}) != 1:
        raise CodeError("generator lengths differ")
    return rows


def binary_code_from_text(text: str) -> BinaryCode:
    rows = parse_code_lines(text, 2)
    return BinaryCode(len(rows[0]), rows)


# Extended Hamming [8,4,4] code.
HAMMING8_TEXT = """\
11110000
00111100
00001111
01010101
"""

# Extended binary Golay [24,12,8] code: cyclic code of length 23 generated by
# x^11+x^10+x^6+x^5+x^4+x^2+1, each row extended by an overall parity bit.
GOLAY24_TEXT = """\
101011100011000000000001
010101110001100000000001
001010111000110000000001
000101011100011000000001
000010101110001100000001
000001010111000110000001
000000101011100011000001
000000010101110001100001
000000001010111000110001
000000000101011100011001
000000000010101110001101
000000000001010111000111
"""

GOLAY24_WEIGHTS = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


@lru_cache(maxsize=None)
def builtin_code(name: str) -> BinaryCode:
    """Load a built-in code and certify it before returning."""
    texts = {"h8": HAMMING8_TEXT, "golay24": GOLAY24_TEXT}
    if name not in texts:
        raise CodeError(f"unknown builtin code {name!r} (have: {sorted(texts)})")
    code = binary_code_from_text(texts[name])
    report = validate_binary_code(code)
    if not (report.doubly_even and report.self_dual and report.contains_all_ones):
        raise CodeError(f"builtin code {name} failed certification: {report}")
    if name == "golay24" and report.weight_enumerator != GOLAY24_WEIGHTS:
        raise CodeError("golay24 weight enumerator mismatch")
    return code


def load_code(spec: str) -> BinaryCode:
    """Resolve ``builtin:<name>`` or a file path to a BinaryCode."""
    if spec.startswith("builtin:"):
        return builtin_code(spec.split(":", 1)[1])
    with open(spec) as fh:
        return binary_code_from_text(fh.read())


# ---------------------------------------------------------------------------
# hat map and Z4 codes


_HAT = {(0, 0): (0, 0), (1, 1): (2, 0), (1, 0): (1, 1), (0, 1): (3, 1)}


def hat_map(bits: Sequence[int]) -> Vector:
    """Componentwise F2^2 -> Z4^2 map 00->00, 11->20, 10->11, 01->31."""
    if len(bits) % 2 != 0:
        raise CodeError("hat map needs an even-length vector")
    out: List[int] = []
    for i in range(0, len(bits), 2):
        out.extend(_HAT[(bits[i], bits[i + 1])])
    return tuple(out)


# Section of the quotient-by-frame map used when building delta codes.  It
# differs from _HAT only at 01, by a (2,2) block, which is invisible modulo
# the full (22)-block code but picks the coset consistent with the glue
# vector normalization when only even (22)-counts are adjoined.
_HAT_SECTION = {(0, 0): (0, 0), (1, 1): (2, 0), (1, 0): (1, 1), (0, 1): (1, 3)}


def _hat_section(bits: Sequence[int]) -> Vector:
    out: List[int] = []
    for i in range(0, len(bits), 2):
        out.extend(_HAT_SECTION[(bits[i], bits[i + 1])])
    return tuple(out)


class Z4Code:
    """Subgroup of Z4^d given by generators.

    Enumeration uses a two-layer binary basis: rows whose mod-2 images are
    independent, plus an F2 basis of the intersection with 2*Z4^d.  Summing
    each basis row with coefficients in {0,1} hits every codeword exactly
    once, so the cardinality is 2^(number of basis rows).
    """

    def __init__(self, length: int, generators: Iterable[Sequence[int]]):
        gens = [tuple(int(s) % 4 for s in g) for g in generators]
        for g in gens:
            if len(g) != length:
                raise CodeError("generator length mismatch")
        self.length = length
        self.generators: Tuple[Vector, ...] = tuple(gens)
        self._basis = self._build_basis()
        self._profile: Dict[Tuple[int, int, int, int], int] | None = None

    # -- basis ---------------------------------------------------------

    def _build_basis(self) -> List[Vector]:
        d = self.length
        unit_rows: List[List[int]] = []   # lifts with independent mod-2 images
        unit_pivots: List[int] = []
        doubled: List[List[int]] = []     # elements of the code inside 2*Z4^d
        for g in self.generators:
            r = list(g)
            for piv, u in zip(unit_pivots, unit_rows):
                if r[piv] % 2:
                    r = [(a - b) % 4 for a, b in zip(r, u)]
            odd = [i for i in range(d) if r[i] % 2]
            if odd:
                unit_rows.append(r)
                unit_pivots.append(odd[0])
            elif any(r):
                doubled.append(r)
        for u in unit_rows:
            doubled.append([(2 * a) % 4 for a in u])
        # F2 reduction of the doubled part (entries in {0,2})
        two_rows: List[List[int]] = []
        two_pivots: List[int] = []
        for t in doubled:
            r = t[:]
            for piv, u in zip(two_pivots, two_rows):
                if r[piv]:
                    r = [(a - b) % 4 for a, b in zip(r, u)]
            nz = [i for i in range(d) if r[i]]
            if nz:
                two_rows.append(r)
                two_pivots.append(nz[0])
        basis = [tuple(r) for r in unit_rows] + [tuple(r) for r in two_rows]
        self._unit_rows = [tuple(r) for r in unit_rows]
        self._unit_pivots = unit_pivots
        self._two_rows = [tuple(r) for r in two_rows]
        self._two_pivots = two_pivots
        return basis

    def __len__(self) -> int:
        return 1 << len(self._basis)

    def __contains__(self, v: Sequence[int]) -> bool:
        r = [int(s) % 4 for s in v]
        if len(r) != self.length:
            return False
        for piv, u in zip(self._unit_pivots, self._unit_rows):
            if r[piv] % 2:
                r = [(a - b) % 4 for a, b in zip(r, u)]
        if any(a % 2 for a in r):
            return False
        for piv, u in zip(self._two_pivots, self._two_rows):
            if r[piv]:
                r = [(a - b) % 4 for a, b in zip(r, u)]
        return not any(r)

    def closed_under_negation(self) -> bool:
        return all(tuple((-s) % 4 for s in g) in self for g in self.generators)

    def codewords(self) -> Iterator[Vector]:
        if len(self) > ENUM_LIMIT:
            raise CodeError("Z4 code too large to enumerate")
        for coeffs in product((0, 1), repeat=len(self._basis)):
            w = [0] * self.length
            for c, g in zip(coeffs, self._basis):
                if c:
                    w = [(a + b) % 4 for a, b in zip(w, g)]
            yield tuple(w)

    # -- complete weight profile ---------------------------------------

    def weight_profile(self) -> Dict[Tuple[int, int, int, int], int]:
        """Counts of codewords by symbol multiplicities (n0, n1, n2, n3)."""
        if self._profile is None:
            self._profile = self._compute_profile()
        return self._profile

    def _compute_profile(self) -> Dict[Tuple[int, int, int, int], int]:
        if len(self) > ENUM_LIMIT:
            raise CodeError("Z4 code too large to profile")
        d = self.length
        m = len(self._basis)
        rows = np.array(self._basis, dtype=np.uint8).reshape(m, d)
        ha = m // 2
        low = _binary_sums(rows[:ha], d)
        high = _binary_sums(rows[ha:], d)
        base = d + 1
        counts = np.zeros(base ** 3, dtype=np.int64)
        chunk = max(1, (1 << 22) // max(1, low.shape[0] * d))
        for i in range(0, high.shape[0], chunk):
            block = (low[None, :, :] + high[i:i + chunk, None, :]) % 4
            n1 = (block == 1).sum(axis=2, dtype=np.int64)
            n2 = (block == 2).sum(axis=2, dtype=np.int64)
            n3 = (block == 3).sum(axis=2, dtype=np.int64)
            keys = (n1 + base * n2 + base * base * n3).ravel()
            counts += np.bincount(keys, minlength=base ** 3)
        profile: Dict[Tuple[int, int, int, int], int] = {}
        for key in np.nonzero(counts)[0]:
            k = int(key)
            n1, k = k % base, k // base
            n2, n3 = k % base, k // base
            profile[(d - n1 - n2 - n3, n1, n2, n3)] = int(counts[key])
        assert sum(profile.values()) == len(self)
        return profile

    def __repr__(self) -> str:
        return f"Z4Code(length={self.length}, size=2^{len(self._basis)})"


def _binary_sums(rows: np.ndarray, d: int) -> np.ndarray:
    """All {0,1}-combinations of the given Z4 rows, as a (2^m, d) array."""
    out = np.zeros((1, d), dtype=np.uint8)
    for r in rows:
        out = np.concatenate([out, (out + r[None, :]) % 4], axis=0)
    return out


def z4_code_from_text(text: str) -> Z4Code:
    rows = parse_code_lines(text, 4)
    return Z4Code(len(rows[0]), rows)


def sigma2_code(n: int, zero_variant: bool = False) -> Z4Code:
    """The code {(00),(22)}^n, or its index-2 even-(22)-count subcode."""
    if n < 1:
        raise CodeError("n must be positive")
    gens = []
    if zero_variant:
        for i in range(n - 1):
            g = [0] * (2 * n)
            g[2 * i] = g[2 * i + 1] = g[2 * i + 2] = g[2 * i + 3] = 2
            gens.append(g)
        if not gens:
            gens.append([0] * (2 * n))
    else:
        for i in range(n):
            g = [0] * (2 * n)
            g[2 * i] = g[2 * i + 1] = 2
            gens.append(g)
    return Z4Code(2 * n, gens)


def glue_vector(d: int) -> Vector:
    """The extra coset representative of the second lattice construction."""
    if d % 8 != 0:
        raise CodeError("length must be a multiple of 8")
    v = [1, 0] * (d // 2)
    if d % 16 == 8:
        v[-2], v[-1] = 3, 2
    return tuple(v)


def delta_code(code: BinaryCode, variant: str) -> Z4Code:
    """Z4-code of the lattice built from `code` (variant "L" or "Ltilde")."""
    if variant not in ("L", "Ltilde"):
        raise CodeError(f"variant must be L or Ltilde, got {variant!r}")
    report = validate_binary_code(code)
    if not report.doubly_even:
        raise CodeError("code is not doubly even")
    if not report.contains_all_ones:
        raise CodeError("code does not contain the all-ones vector")
    d = code.length
    if d % 8 != 0:
        raise CodeError("code length must be a multiple of 8")
    gens: List[Vector] = [_hat_section(g) for g in code.generators]
    if variant == "L":
        sigma = sigma2_code(d // 2, zero_variant=False)
    else:
        sigma = sigma2_code(d // 2, zero_variant=True)
        gens.append(glue_vector(d))
    gens.extend(sigma.generators)
    out = Z4Code(d, gens)
    expected = len(code) << (d // 2)
    if len(out) != expected:
        raise CodeError(f"delta code cardinality {len(out)} != {expected}")
    return out


@lru_cache(maxsize=None)
def builtin_delta(name: str, variant: str) -> Z4Code:
    """Cached delta code of a built-in binary code (profiles are reused)."""
    return delta_code(builtin_code(name), variant)
