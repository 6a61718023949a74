"""Bit-packed GF(2) vectors and matrices.

Bits are packed little-endian into ``uint64`` words: bit ``j`` of a vector
lives in word ``j // 64`` at bit position ``j % 64``.  Unused tail bits of
the last word are kept at zero so that word-level equality and XOR are
exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

WORD_BITS = 64
_WORD = np.dtype("<u8")


class RankDeficient(ValueError):
    """Raised when elimination cannot find a pivot for some row."""

    def __init__(self, row: int, rows: int, cols: int):
        self.row = row
        super().__init__(
            f"matrix {rows}x{cols} is rank deficient: no pivot for row {row} "
            f"among the remaining columns"
        )


def n_words(length: int) -> int:
    return max(1, -(-length // WORD_BITS))


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array along its last axis into ``uint64`` words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    length = bits.shape[-1]
    packed = np.packbits(bits, axis=-1, bitorder="little")
    nbytes = n_words(length) * 8
    if packed.shape[-1] != nbytes:
        out = np.zeros(packed.shape[:-1] + (nbytes,), dtype=np.uint8)
        out[..., : packed.shape[-1]] = packed
        packed = out
    return np.ascontiguousarray(packed).view(_WORD)


def unpack_bits(words: np.ndarray, length: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns ``uint8`` 0/1 array."""
    words = np.ascontiguousarray(words, dtype=_WORD)
    return np.unpackbits(words.view(np.uint8), axis=-1, count=length, bitorder="little")


def _tail_mask(length: int) -> np.uint64:
    rem = length % WORD_BITS
    return np.uint64((1 << rem) - 1) if rem else np.uint64(0xFFFFFFFFFFFFFFFF)


class BitVec:
    """Fixed-length GF(2) vector."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        self.length = int(length)
        if words is None:
            words = np.zeros(n_words(self.length), dtype=_WORD)
        else:
            words = np.array(words, dtype=_WORD).reshape(-1)
            if words.size != n_words(self.length):
                raise ValueError(f"{words.size} words cannot hold {self.length} bits")
            words[-1] &= _tail_mask(self.length)
        self.words = words

    @classmethod
    def from_bits(cls, bits: Iterable[int] | np.ndarray) -> BitVec:
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        return cls(arr.size, pack_bits(arr))

    @classmethod
    def from_string(cls, text: str) -> BitVec:
        return cls.from_bits([int(ch) for ch in text.strip()])

    def to_array(self) -> np.ndarray:
        return unpack_bits(self.words, self.length)

    def __str__(self) -> str:
        return "".join(map(str, self.to_array()))

    def __repr__(self) -> str:
        return f"BitVec('{self}')"

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int((self.words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & np.uint64(1))

    def __xor__(self, other: BitVec) -> BitVec:
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitVec(self.length, self.words ^ other.words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def weight(self) -> int:
        return int(np.unpackbits(self.words.view(np.uint8)).sum())

    def any(self) -> bool:
        return bool(self.words.any())


class BitMatrix:
    """Dense GF(2) matrix with bit-packed rows (``data`` is rows x words)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        w = n_words(self.cols)
        if data is None:
            data = np.zeros((self.rows, w), dtype=_WORD)
        else:
            data = np.array(data, dtype=_WORD).reshape(self.rows, w)
            data[:, -1] &= _tail_mask(self.cols)
        self.data = data

    @classmethod
    def from_array(cls, arr: np.ndarray | Sequence[Sequence[int]]) -> BitMatrix:
        arr = np.atleast_2d(np.asarray(arr, dtype=np.uint8))
        return cls(arr.shape[0], arr.shape[1], pack_bits(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec]) -> BitMatrix:
        cols = rows[0].length
        if any(r.length != cols for r in rows):
            raise ValueError("rows differ in length")
        return cls(len(rows), cols, np.stack([r.words for r in rows]))

    @classmethod
    def identity(cls, k: int) -> BitMatrix:
        return cls.from_array(np.eye(k, dtype=np.uint8))

    def to_array(self) -> np.ndarray:
        return unpack_bits(self.data, self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.data[i])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int((self.data[i, j // WORD_BITS] >> np.uint64(j % WORD_BITS)) & np.uint64(1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_array(self.to_array().T)

    def permute_columns(self, perm: Permutation) -> BitMatrix:
        """Column ``i`` of the result is column ``perm.map[i]`` of ``self``."""
        if len(perm) != self.cols:
            raise ValueError("permutation size does not match column count")
        return BitMatrix.from_array(self.to_array()[:, perm.map])

    def rank(self) -> int:
        return _rank(_to_ints(self.data))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)


@dataclass(frozen=True, eq=False)
class Permutation:
    """Position permutation: ``apply(x)[i] == x[map[i]]``."""

    map: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.intp)
        if m.ndim != 1 or not np.array_equal(np.sort(m), np.arange(m.size)):
            raise ValueError("not a bijection on 0..n-1")
        object.__setattr__(self, "map", m)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(np.arange(n))

    def __len__(self) -> int:
        return self.map.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return bool(np.array_equal(self.map, other.map))

    def inverse(self) -> Permutation:
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.map.size)
        return Permutation(inv)

    def then(self, other: Permutation) -> Permutation:
        """Permutation equivalent to applying ``self`` first, then ``other``."""
        return Permutation(self.map[other.map])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.map, np.arange(self.map.size)))

    def apply(self, x):
        if isinstance(x, BitVec):
            return BitVec.from_bits(x.to_array()[self.map])
        return np.asarray(x)[self.map]


def mat_vec_mul(m: BitMatrix, v: BitVec) -> BitVec:
    """Row vector times matrix: ``v @ m`` over GF(2)."""
    if v.length != m.rows:
        raise ValueError(f"vector length {v.length} != matrix rows {m.rows}")
    sel = v.to_array().astype(bool)
    return BitVec(m.cols, np.bitwise_xor.reduce(m.data[sel], axis=0) if sel.any() else None)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    bits = a.to_array().astype(bool)
    out = np.zeros((a.rows, b.data.shape[1]), dtype=_WORD)
    for i in range(a.rows):
        if bits[i].any():
            out[i] = np.bitwise_xor.reduce(b.data[bits[i]], axis=0)
    return BitMatrix(a.rows, b.cols, out)


def _to_ints(data: np.ndarray) -> list[int]:
    return [int.from_bytes(row.tobytes(), "little") for row in np.ascontiguousarray(data, dtype=_WORD)]


def _from_ints(rows: list[int], cols: int) -> np.ndarray:
    nbytes = n_words(cols) * 8
    mask = (1 << cols) - 1
    buf = b"".join((r & mask).to_bytes(nbytes, "little") for r in rows)
    return np.frombuffer(buf, dtype=_WORD).reshape(len(rows), -1).copy()


def _rank(rows: list[int]) -> int:
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def systematic_ge(m: BitMatrix) -> tuple[BitMatrix, Permutation, BitMatrix]:
    """Gauss-Jordan elimination to ``[I_k | P]`` with column-swap fallback.

    For row ``i`` the pivot is searched in columns ``i, i+1, ...``; when the
    first usable column ``j`` differs from ``i``, columns ``i`` and ``j`` are
    swapped.  Returns ``(g_sys, pi2, row_ops)`` with
    ``g_sys == row_ops @ m.permute_columns(pi2)``.
    """
    k, n = m.rows, m.cols
    if k > n:
        raise RankDeficient(n, k, n)
    rows = _to_ints(m.data)
    # row_ops accumulates in bits n..n+k-1 of each row
    rows = [r | (1 << (n + i)) for i, r in enumerate(rows)]
    colmap = list(range(n))

    for i in range(k):
        pivot_row = -1
        col = i
        while col < n:
            bit = 1 << col
            for r in range(i, k):
                if rows[r] & bit:
                    pivot_row = r
                    break
            if pivot_row >= 0:
                break
            col += 1
        if pivot_row < 0:
            raise RankDeficient(i, k, n)
        if col != i:
            swap = (1 << i) | (1 << col)
            for r in range(k):
                if ((rows[r] >> i) ^ (rows[r] >> col)) & 1:
                    rows[r] ^= swap
            colmap[i], colmap[col] = colmap[col], colmap[i]
        if pivot_row != i:
            rows[i], rows[pivot_row] = rows[pivot_row], rows[i]
        piv = rows[i]
        bit = 1 << i
        for r in range(k):
            if r != i and rows[r] & bit:
                rows[r] ^= piv

    g_sys = BitMatrix(k, n, _from_ints(rows, n))
    row_ops = BitMatrix(k, k, _from_ints([r >> n for r in rows], k))
    return g_sys, Permutation(np.array(colmap)), row_ops


def is_systematic(g: BitMatrix) -> bool:
    if g.rows > g.cols:
        return False
    return bool(np.array_equal(g.to_array()[:, : g.rows], np.eye(g.rows, dtype=np.uint8)))


def parity_check_from_systematic(g_sys: BitMatrix) -> BitMatrix:
    """``H = [P^T | I_{n-k}]`` for ``G = [I_k | P]``."""
    if not is_systematic(g_sys):
        raise ValueError("generator is not in systematic form [I_k | P]")
    k, n = g_sys.shape
    p = g_sys.to_array()[:, k:]
    return BitMatrix.from_array(np.hstack([p.T, np.eye(n - k, dtype=np.uint8)]))


def syndrome(h: BitMatrix, words: np.ndarray) -> np.ndarray:
    """Syndromes of packed codewords (..., W) against ``h``; returns 0/1 array."""
    words = np.asarray(words, dtype=_WORD)
    anded = words[..., None, :] & h.data
    bytes_ = np.ascontiguousarray(anded).view(np.uint8)
    return (np.unpackbits(bytes_, axis=-1).sum(axis=-1) & 1).astype(np.uint8)
