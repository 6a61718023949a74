"""Ordered-statistics decoding with adaptive Gaussian-elimination reduction.

Three engines share one reprocessing kernel:

* :func:`standard_osd` sorts by reliability, eliminates to the most
  reliable basis and re-encodes test error patterns (TEPs) in that ordered
  domain.  With ``tau_p=0, tau=1`` it is the original exhaustive OSD.
* :func:`non_ge_osd` skips sorting-driven elimination entirely and
  re-encodes TEPs over the first k received bits with the code's own
  systematic generator.
* :func:`adaptive_decode` decides per frame whether the elimination-free
  pass is worth trying and falls back to :func:`standard_osd` when it
  cannot vouch for its best candidate.

Within a TEP weight class, candidates are produced as one vectorized batch
but are *consumed* in enumeration order, so the incumbent, the per-improvement
success test and early termination behave exactly as a sequential loop.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import numpy as np

from .channel import SoftWord
from .codes import CodeSpec
from .gf2 import BitMatrix, BitVec, Permutation, mat_vec_mul, pack_bits, systematic_ge, unpack_bits
from .reliability import (
    LN2,
    BitErrorProfile,
    ConditionParams,
    condition1,
    log1m_bit_error,
    log1mexp,
)


@dataclass(frozen=True)
class Tep:
    """Test error pattern; ``positions`` are 0-based basis indices, ascending."""

    positions: tuple[int, ...]

    @property
    def weight(self) -> int:
        return len(self.positions)


@dataclass(frozen=True, eq=False)
class OrderedContext:
    pi1: Permutation
    pi2: Permutation
    g_sys: BitMatrix
    y_ord: BitVec
    alpha_ord: np.ndarray

    @property
    def perm(self) -> Permutation:
        """Natural -> ordered domain: ``y_ord == perm.apply(y)``."""
        return self.pi1.then(self.pi2)

    @property
    def mrb(self) -> BitVec:
        return BitVec.from_bits(self.y_ord.to_array()[: self.g_sys.rows])


@dataclass
class DecodeOutcome:
    codeword: BitVec
    whd: float
    teps_reencoded: int = 0
    teps_discarded: int = 0
    ge_performed: bool = False
    condition1_fired: bool = False
    condition2_fired: bool = False
    fallback_to_standard: bool = False
    early_stopped: bool = False
    elapsed_ns: int = 0
    incumbent_history: list[float] = field(default_factory=list)


# ---------------------------------------------------------------------------
# TEP enumeration


@lru_cache(maxsize=64)
def tep_table(k: int, w: int) -> np.ndarray:
    """All weight-``w`` TEPs as a (C(k,w), w) index array in enumeration order.

    Patterns whose largest position is larger (less reliable in the ordered
    domain) come first; ties are resolved on the next-largest position.
    """
    if w == 0:
        return np.zeros((1, 0), dtype=np.intp)
    combos = np.array(list(combinations(range(k - 1, -1, -1), w)), dtype=np.intp).reshape(-1, w)
    table = np.ascontiguousarray(combos[:, ::-1])
    table.setflags(write=False)
    return table


def enumerate_teps(k: int, max_weight: int) -> Iterator[Tep]:
    if not 0 <= max_weight <= k:
        raise ValueError(f"order {max_weight} must lie in [0, {k}]")
    for w in range(max_weight + 1):
        for row in tep_table(k, w):
            yield Tep(tuple(int(i) for i in row))


def n_teps(k: int, m: int) -> int:
    return sum(math.comb(k, i) for i in range(m + 1))


# ---------------------------------------------------------------------------
# primitives


def whd(c: BitVec, y: BitVec, alpha: np.ndarray) -> float:
    """Weighted Hamming distance: sum of ``alpha`` where ``c`` and ``y`` differ."""
    if not c.length == y.length == len(alpha):
        raise ValueError("length mismatch")
    return float(np.asarray(alpha, dtype=np.float64)[(c ^ y).to_array().astype(bool)].sum())


def reencode(source: OrderedContext | tuple[BitVec, BitMatrix], tep: Tep) -> BitVec:
    """``(y_B xor e) G``: ordered domain for a context, natural for ``(y_B, G)``."""
    if isinstance(source, OrderedContext):
        y_b, g = source.mrb, source.g_sys
    else:
        y_b, g = source
    bits = y_b.to_array().copy()
    bits[list(tep.positions)] ^= 1
    return mat_vec_mul(g, BitVec.from_bits(bits))


def preprocess(sw: SoftWord, g: BitMatrix | CodeSpec) -> OrderedContext:
    """Sort by descending reliability (stable) and eliminate to systematic form."""
    g_arr = g.generator_array if isinstance(g, CodeSpec) else g.to_array()
    pi1 = Permutation(np.argsort(-sw.alpha, kind="stable"))
    g_sys, pi2, _ = systematic_ge(BitMatrix.from_array(g_arr[:, pi1.map]))
    perm = pi1.map[pi2.map]
    y_ord = BitVec(sw.n, pack_bits(sw.y.to_array()[perm]))
    return OrderedContext(pi1, pi2, g_sys, y_ord, sw.alpha[perm])


# ---------------------------------------------------------------------------
# reprocessing kernel

_BYTE_BITS = ((np.arange(256)[:, None] >> np.arange(8)) & 1).astype(np.float64)


class _WhdTable:
    """Per-frame byte lookup table: WHD of a packed difference word in 1 gather per byte."""

    def __init__(self, alpha: np.ndarray, n_words: int):
        nbytes = n_words * 8
        a = np.zeros(nbytes * 8)
        a[: alpha.size] = alpha
        self.flat = (a.reshape(nbytes, 8) @ _BYTE_BITS.T).ravel()
        self.offsets = np.arange(nbytes, dtype=np.intp) * 256

    def __call__(self, diff: np.ndarray) -> np.ndarray:
        b = np.ascontiguousarray(diff).view(np.uint8)
        return self.flat[b + self.offsets].sum(axis=1)


@dataclass
class _Search:
    word: np.ndarray | None
    whd: float
    reencoded: int
    discarded: int
    stopped: bool
    history: list[float]


def _stop_log_odds(tau: float) -> float | None:
    # success >= tau  <=>  log-odds of failure <= log((1 - tau) / tau)
    if tau >= 1:
        return None
    if tau <= 0:
        return math.inf
    return math.log((1 - tau) / tau)


def _reprocess(
    rows: np.ndarray,
    y_words: np.ndarray,
    alpha: np.ndarray,
    log1m: np.ndarray,
    n0: float,
    order: int,
    tau: float,
    tau_p: float,
    best_whd: float = math.inf,
) -> _Search:
    """Re-encode TEPs up to ``order`` against systematic ``rows`` in one domain.

    ``alpha``/``log1m``/``y_words`` must be expressed in the same domain as
    ``rows``.  The zero TEP is never discarded.
    """
    k, n = rows.shape[0], alpha.size
    table = _WhdTable(alpha, rows.shape[1])
    y_b = unpack_bits(y_words, k).astype(bool)
    base = np.bitwise_xor.reduce(rows[y_b], axis=0) if y_b.any() else np.zeros_like(y_words)
    log1m_k = float(log1m[:k].sum())
    const = (k - n) * LN2 - float(log1m.sum())
    log_tau_p = math.log(tau_p) if tau_p > 0 else -math.inf
    stop_at = _stop_log_odds(tau)
    scale = 4.0 / n0
    alpha_b = alpha[:k]

    best_word = None
    reencoded = discarded = 0
    history: list[float] = []
    for w in range(order + 1):
        idx = tep_table(k, w)
        kept = None
        if w == 0:
            log_pe = np.array([log1m_k])
            cand = base[None, :]
        else:
            log_pe = log1m_k - scale * alpha_b[idx].sum(axis=1)
            keep = log_pe > log_tau_p
            if not keep.all():
                kept = np.flatnonzero(keep)
                idx, log_pe = idx[keep], log_pe[keep]
                if idx.shape[0] == 0:
                    discarded += keep.size
                    continue
            cand = rows[idx[:, 0]]
            for t in range(1, w):
                cand = cand ^ rows[idx[:, t]]
            cand ^= base
        d = table(cand ^ y_words)
        prev = np.empty_like(d)
        prev[0] = best_whd
        if d.size > 1:
            np.minimum(np.minimum.accumulate(d[:-1]), best_whd, out=prev[1:])
        improved = np.flatnonzero(d < prev)
        if stop_at is not None and improved.size:
            odds = log1mexp(log_pe[improved]) + const + scale * d[improved]
            hit = np.flatnonzero(odds <= stop_at)
            if hit.size:
                j = improved[hit[0]]
                history.extend(d[improved[: hit[0] + 1]].tolist())
                if kept is not None:
                    # only the discards enumerated before the stopping TEP
                    discarded += int(kept[j]) - j
                return _Search(cand[j].copy(), float(d[j]), reencoded + j + 1, discarded, True, history)
        if kept is not None:
            discarded += keep.size - kept.size
        reencoded += d.size
        if improved.size == 0:
            continue
        history.extend(d[improved].tolist())
        j = improved[-1]
        best_word, best_whd = cand[j].copy(), float(d[j])
    return _Search(best_word, best_whd, reencoded, discarded, False, history)


# ---------------------------------------------------------------------------
# decoders


def standard_osd(
    sw: SoftWord,
    spec: CodeSpec,
    params: ConditionParams,
    warm_start: tuple[BitVec, float] | None = None,
) -> DecodeOutcome:
    """Order-m OSD over the most reliable basis.

    TEPs whose success probability is at most ``tau_p`` are skipped, and the
    search stops once a new incumbent's success probability reaches ``tau``.
    A warm-start incumbent competes with every candidate.
    """
    t0 = time.perf_counter_ns()
    ctx = preprocess(sw, spec)
    tau_p = params.resolve_tau_p(sw.n0, spec.k)
    inc_whd = warm_start[1] if warm_start is not None else math.inf
    res = _reprocess(
        ctx.g_sys.data,
        ctx.y_ord.words,
        ctx.alpha_ord,
        log1m_bit_error(ctx.alpha_ord, sw.n0),
        sw.n0,
        params.order_m,
        params.tau,
        tau_p,
        inc_whd,
    )
    if res.word is None:
        codeword, value = warm_start
        history = [inc_whd]
    else:
        bits = np.empty(sw.n, dtype=np.uint8)
        bits[ctx.perm.map] = unpack_bits(res.word, sw.n)
        codeword, value = BitVec(sw.n, pack_bits(bits)), res.whd
        history = ([inc_whd] if warm_start is not None else []) + res.history
    return DecodeOutcome(
        codeword=codeword,
        whd=value,
        teps_reencoded=res.reencoded,
        teps_discarded=res.discarded,
        ge_performed=True,
        early_stopped=res.stopped,
        elapsed_ns=time.perf_counter_ns() - t0,
        incumbent_history=history,
    )


def original_osd(sw: SoftWord, spec: CodeSpec, order: int) -> DecodeOutcome:
    """Exhaustive order-m OSD: nothing discarded, no early stop."""
    return standard_osd(sw, spec, ConditionParams(order, tau=1.0, tau_p=0.0))


def non_ge_osd(
    sw: SoftWord,
    spec: CodeSpec,
    params: ConditionParams,
    profile: BitErrorProfile | None = None,
) -> tuple[DecodeOutcome, bool]:
    """Order-m' reprocessing of the received first k bits with the original G.

    Returns the best candidate found and whether it passed the success test
    (in which case decoding may stop here).
    """
    t0 = time.perf_counter_ns()
    if profile is None:
        profile = BitErrorProfile.from_alpha(sw.alpha, sw.n0, spec.k)
    res = _reprocess(
        spec.generator.data,
        sw.y.words,
        sw.alpha,
        profile.log1m,
        sw.n0,
        params.order_m_prime,
        params.tau,
        params.resolve_tau_p(sw.n0, spec.k),
    )
    out = DecodeOutcome(
        codeword=BitVec(sw.n, res.word),
        whd=res.whd,
        teps_reencoded=res.reencoded,
        teps_discarded=res.discarded,
        condition2_fired=res.stopped,
        elapsed_ns=time.perf_counter_ns() - t0,
        incumbent_history=res.history,
    )
    return out, res.stopped


def adaptive_decode(sw: SoftWord, spec: CodeSpec, params: ConditionParams) -> DecodeOutcome:
    """Skip elimination when the natural-order basis is good enough, else fall back."""
    t0 = time.perf_counter_ns()
    profile = BitErrorProfile.from_alpha(sw.alpha, sw.n0, spec.k)
    if not condition1(profile, params, spec.k):
        out = standard_osd(sw, spec, params)
    else:
        first, accepted = non_ge_osd(sw, spec, params, profile)
        first.condition1_fired = True
        if accepted:
            out = first
        else:
            out = standard_osd(sw, spec, params, warm_start=(first.codeword, first.whd))
            out.condition1_fired = True
            out.fallback_to_standard = True
            out.teps_reencoded += first.teps_reencoded
            out.teps_discarded += first.teps_discarded
            out.incumbent_history = first.incumbent_history + out.incumbent_history[1:]
    out.elapsed_ns = time.perf_counter_ns() - t0
    return out


ML_MAX_K = 24
_ML_CACHE_ELEMS = 1 << 23


@lru_cache(maxsize=4)
def _codebook_bits(spec: CodeSpec) -> np.ndarray | None:
    if (1 << spec.k) * spec.n > _ML_CACHE_ELEMS:
        return None
    return unpack_bits(spec.codebook, spec.n).astype(np.float64)


def _ml_blocks(spec: CodeSpec):
    """Yield (first index, packed words, float bits) blocks of the codebook."""
    bits = _codebook_bits(spec)
    book = spec.codebook
    if bits is not None:
        yield 0, book, bits
        return
    step = max(1, _ML_CACHE_ELEMS // spec.n)
    for a in range(0, book.shape[0], step):
        yield a, book[a : a + step], unpack_bits(book[a : a + step], spec.n).astype(np.float64)


def ml_oracle(sw: SoftWord, spec: CodeSpec) -> BitVec:
    """Exhaustive minimum-WHD codeword; ties go to the lexicographically smallest info word.

    ``WHD(c) = sum_{y=1} alpha + <c, r>``, so the search is one product with
    the codebook.  Candidates within rounding distance of the minimum are
    rescored exactly.
    """
    if spec.k > ML_MAX_K:
        raise ValueError(f"ml_oracle refuses k={spec.k} > {ML_MAX_K}")
    slack = 1e-9 * (float(sw.alpha.sum()) + 1.0)
    best_whd, best_word = math.inf, None
    for _, words, bits in _ml_blocks(spec):
        corr = bits @ sw.r
        near = np.flatnonzero(corr <= corr.min() + slack)
        for i in near:
            c = BitVec(sw.n, words[i])
            d = whd(c, sw.y, sw.alpha)
            if d < best_whd:
                best_whd, best_word = d, c
    return best_word
