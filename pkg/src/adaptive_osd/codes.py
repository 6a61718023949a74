"""Binary linear block codes: narrow-sense BCH construction, extension, file I/O."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path

import numpy as np

from .gf2 import (
    BitMatrix,
    BitVec,
    RankDeficient,
    is_systematic,
    pack_bits,
    parity_check_from_systematic,
    systematic_ge,
)

log = logging.getLogger(__name__)

# bit-coded primitive polynomials, bit i = coefficient of x^i
PRIMITIVE_POLYS = {
    3: 0b1011,       # x^3 + x + 1
    4: 0b10011,      # x^4 + x + 1
    5: 0b100101,     # x^5 + x^2 + 1
    6: 0b1000011,    # x^6 + x + 1
    7: 0b10001001,   # x^7 + x^3 + 1
}


class CodeFileError(ValueError):
    """Malformed generator-matrix file; ``line`` is 1-based."""

    def __init__(self, path, line: int, msg: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {msg}")


class Gf2mField:
    """GF(2^m) with log/antilog tables over a primitive polynomial."""

    def __init__(self, m: int, primitive_poly: int | None = None):
        if primitive_poly is None:
            primitive_poly = PRIMITIVE_POLYS[m]
        if primitive_poly.bit_length() != m + 1:
            raise ValueError(f"polynomial {primitive_poly:#b} does not have degree {m}")
        self.m = m
        self.primitive_poly = primitive_poly
        self.order = (1 << m) - 1
        antilog = [0] * self.order
        log_ = [-1] * (1 << m)
        x = 1
        for i in range(self.order):
            if log_[x] != -1:
                raise ValueError(f"polynomial {primitive_poly:#b} is not primitive")
            antilog[i] = x
            log_[x] = i
            x <<= 1
            if x >> m:
                x ^= primitive_poly
        self.antilog = antilog
        self.log = log_

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog[(self.log[a] + self.log[b]) % self.order]

    def alpha_pow(self, e: int) -> int:
        return self.antilog[e % self.order]

    def cyclotomic_coset(self, s: int) -> list[int]:
        coset, e = [], s % self.order
        while e not in coset:
            coset.append(e)
            e = (2 * e) % self.order
        return coset

    def minimal_poly(self, s: int) -> int:
        """Minimal polynomial of alpha^s, bit-coded."""
        poly = [1]  # coefficients in GF(2^m), index = power of x
        for e in self.cyclotomic_coset(s):
            root = self.alpha_pow(e)
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] ^= c
                nxt[i] ^= self.mul(c, root)
            poly = nxt
        if any(c not in (0, 1) for c in poly):
            raise ArithmeticError("minimal polynomial has non-binary coefficients")
        return sum(c << i for i, c in enumerate(poly))


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, g: int) -> int:
    dg = g.bit_length() - 1
    while a.bit_length() - 1 >= dg:
        a ^= g << (a.bit_length() - 1 - dg)
    return a


def bch_generator_poly(field: Gf2mField, n: int, designed_t: int) -> BitVec:
    """g(x) = lcm of the minimal polynomials of alpha^1 .. alpha^(2t).

    Bit ``i`` of the returned vector is the coefficient of ``x^i``.
    """
    if n != field.order:
        raise ValueError(f"n must be 2^m - 1 = {field.order}, got {n}")
    if designed_t < 1:
        raise ValueError("designed_t must be >= 1")
    g, seen = 1, set()
    for s in range(1, 2 * designed_t + 1):
        rep = min(field.cyclotomic_coset(s))
        if rep in seen:
            continue
        seen.add(rep)
        g = poly_mul(g, field.minimal_poly(s))
    if g.bit_length() - 1 >= n:
        raise ValueError(f"designed_t={designed_t} leaves no information bits (deg g = {g.bit_length() - 1})")
    return BitVec.from_bits([(g >> i) & 1 for i in range(g.bit_length())])


def _poly_int(g: BitVec) -> int:
    return sum(int(b) << i for i, b in enumerate(g.to_array()))


def cyclic_generator_matrix(g: BitVec, n: int) -> BitMatrix:
    """Systematic ``[I_k | P]`` generator of the cyclic code generated by ``g``.

    Vector position ``p`` holds the coefficient of ``x^(n-1-p)``; row ``i``
    is ``x^(n-1-i) + (x^(n-1-i) mod g)``.
    """
    gi = _poly_int(g)
    r = gi.bit_length() - 1
    k = n - r
    rows = np.zeros((k, n), dtype=np.uint8)
    for i in range(k):
        e = n - 1 - i
        c = (1 << e) | poly_mod(1 << e, gi)
        rows[i] = [(c >> (n - 1 - p)) & 1 for p in range(n)]
    return BitMatrix.from_array(rows)


def vector_to_poly(bits: np.ndarray) -> int:
    n = len(bits)
    return sum(int(b) << (n - 1 - p) for p, b in enumerate(bits))


def extend_code(generator: BitMatrix) -> BitMatrix:
    """Append an overall even-parity column, then bring to systematic form."""
    arr = generator.to_array()
    parity = arr.sum(axis=1, keepdims=True) & 1
    ext = BitMatrix.from_array(np.hstack([arr, parity]))
    # an already-systematic input is a fixed point of the elimination
    g_sys, _, _ = systematic_ge(ext)
    return g_sys


@dataclass(frozen=True, eq=False)
class CodeSpec:
    name: str
    n: int
    k: int
    d_h: int
    generator: BitMatrix
    designed_t: int | None = field(default=None)

    def __post_init__(self):
        if self.generator.shape != (self.k, self.n):
            raise ValueError(f"generator shape {self.generator.shape} != ({self.k}, {self.n})")
        if not is_systematic(self.generator):
            raise ValueError("generator must be systematic [I_k | P]")
        if self.d_h < 1:
            raise ValueError("d_h must be >= 1")

    @cached_property
    def parity_check(self) -> BitMatrix:
        return parity_check_from_systematic(self.generator)

    @cached_property
    def generator_array(self) -> np.ndarray:
        return self.generator.to_array()

    def encode(self, info: np.ndarray) -> np.ndarray:
        """Encode 0/1 info bits (..., k) to packed codeword words (..., W)."""
        info = np.asarray(info, dtype=np.uint8)
        bits = (info.astype(np.int64) @ self.generator_array.astype(np.int64)) & 1
        return pack_bits(bits.astype(np.uint8))

    def is_codeword(self, c: BitVec) -> bool:
        h = self.parity_check.to_array().astype(np.int64)
        return not ((h @ c.to_array().astype(np.int64)) & 1).any()

    @cached_property
    def codebook(self) -> np.ndarray:
        """All 2^k codewords as packed words, in lexicographic info-word order."""
        if self.k > 24:
            raise ValueError(f"k={self.k} is too large to enumerate")
        lo_bits = self.k // 2
        hi_bits = self.k - lo_bits
        g = self.generator_array

        def span(rows: np.ndarray, nb: int) -> np.ndarray:
            idx = np.arange(1 << nb, dtype=np.int64)
            # first row of `rows` is the most significant bit of the index
            bits = ((idx[:, None] >> np.arange(nb - 1, -1, -1)) & 1).astype(np.int64)
            return pack_bits(((bits @ rows.astype(np.int64)) & 1).astype(np.uint8))

        hi = span(g[:hi_bits], hi_bits)
        lo = span(g[hi_bits:], lo_bits)
        return (hi[:, None, :] ^ lo[None, :, :]).reshape(-1, hi.shape[1])

    def __repr__(self) -> str:
        return f"CodeSpec({self.name!r}, n={self.n}, k={self.k}, d_h={self.d_h})"


def default_order(spec: CodeSpec) -> int:
    """ceil(d_H/4 - 1), clamped at zero."""
    return max(0, math.ceil(spec.d_h / 4 - 1))


def min_distance(generator: BitMatrix) -> int:
    """Exhaustive minimum nonzero codeword weight (k <= 24)."""
    k, n = generator.shape
    if k > 24:
        raise ValueError(f"k={k} is too large for exhaustive search")
    tmp = CodeSpec("tmp", n, k, 1, generator)
    words = tmp.codebook[1:]
    weights = np.unpackbits(words.view(np.uint8), axis=-1).sum(axis=-1)
    return int(weights.min())


def ebch_code(m: int, t: int, name: str | None = None) -> CodeSpec:
    """Extended narrow-sense BCH code of length 2^m with designed t."""
    field_ = Gf2mField(m)
    n = field_.order
    g = bch_generator_poly(field_, n, t)
    ext = extend_code(cyclic_generator_matrix(g, n))
    k = ext.rows
    return CodeSpec(name or f"ebch-{n + 1}-{k}", n + 1, k, 2 * t + 2, ext, designed_t=t)


# name -> (m, designed t)
EBCH_PARAMS = {
    "ebch-8-4": (3, 1),
    "ebch-16-11": (4, 1),
    "ebch-32-16": (5, 3),
    "ebch-64-24": (6, 7),
    "ebch-64-36": (6, 5),
    "ebch-64-45": (6, 3),
    "ebch-128-106": (7, 3),
}


def save_generator(spec: CodeSpec, path: str | Path) -> None:
    """Write ``n k d_h`` header plus one '0'/'1' line per generator row."""
    lines = [f"{spec.n} {spec.k} {spec.d_h}"]
    lines += ["".join(map(str, row)) for row in spec.generator_array]
    Path(path).write_text("\n".join(lines) + "\n")


def _upper_bound_distance(g: np.ndarray) -> int:
    # minimum weight over sums of at most two rows; an upper bound on d_H
    best = int(g.sum(axis=1).min())
    for a, b in combinations(range(g.shape[0]), 2):
        best = min(best, int((g[a] ^ g[b]).sum()))
    return best


def load_generator(path: str | Path, name: str | None = None) -> CodeSpec:
    """Parse a generator file and return a systematic :class:`CodeSpec`.

    Header ``n k`` with an optional third field ``d_h``.  Without ``d_h`` the
    minimum distance is found exhaustively for k <= 24.  Blank lines and
    lines starting with ``#`` are ignored.
    """
    path = Path(path)
    raw = path.read_text().splitlines()
    body = [(i + 1, ln.strip()) for i, ln in enumerate(raw) if ln.strip() and not ln.lstrip().startswith("#")]
    if not body:
        raise CodeFileError(path, len(raw) or 1, "empty file, expected header 'n k'")
    hline, header = body[0]
    fields = header.split()
    if len(fields) not in (2, 3) or not all(f.isdigit() for f in fields):
        raise CodeFileError(path, hline, f"bad header {header!r}, expected 'n k' or 'n k d_h'")
    n, k = int(fields[0]), int(fields[1])
    d_h = int(fields[2]) if len(fields) == 3 else None
    if not 0 < k <= n:
        raise CodeFileError(path, hline, f"invalid dimensions n={n}, k={k}")
    rows = body[1:]
    if len(rows) < k:
        last = rows[-1][0] if rows else hline
        raise CodeFileError(path, last + 1, f"expected {k} matrix rows, found {len(rows)}")
    if len(rows) > k:
        raise CodeFileError(path, rows[k][0], f"unexpected extra row (only {k} declared)")
    arr = np.zeros((k, n), dtype=np.uint8)
    for r, (lineno, text) in enumerate(rows):
        if len(text) != n or set(text) - {"0", "1"}:
            raise CodeFileError(path, lineno, f"row must be {n} characters of '0'/'1'")
        arr[r] = np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")
    g_sys, pi2, _ = systematic_ge(BitMatrix.from_array(arr))
    if not pi2.is_identity():
        log.info("%s: columns permuted to reach systematic form", path)
    if d_h is None:
        if k <= 24:
            d_h = min_distance(g_sys)
        else:
            d_h = _upper_bound_distance(g_sys.to_array())
            log.warning("%s: k=%d too large for exact d_H; using upper bound %d", path, k, d_h)
    return CodeSpec(name or path.stem, n, k, d_h, g_sys)


@lru_cache(maxsize=None)
def get_code(name: str) -> CodeSpec:
    """Load a bundled code by name, e.g. ``"ebch-64-36"``."""
    ref = resources.files("adaptive_osd") / "data" / f"{name}.txt"
    if not ref.is_file():
        known = ", ".join(sorted(EBCH_PARAMS))
        raise KeyError(f"unknown code {name!r}; bundled: {known}")
    with resources.as_file(ref) as p:
        spec = load_generator(p, name=name)
    if name in EBCH_PARAMS:
        object.__setattr__(spec, "designed_t", EBCH_PARAMS[name][1])
    return spec


__all__ = [
    "CodeFileError",
    "CodeSpec",
    "EBCH_PARAMS",
    "Gf2mField",
    "RankDeficient",
    "bch_generator_poly",
    "cyclic_generator_matrix",
    "default_order",
    "ebch_code",
    "extend_code",
    "get_code",
    "load_generator",
    "min_distance",
    "save_generator",
]
