"""Reliability-based probabilities used to steer the decoders.

Everything that multiplies many small probabilities is kept in the log
domain.  Per-bit error probabilities use the BPSK/AWGN LLR scaling
``4 * alpha / N0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

LN2 = math.log(2.0)


def q_function(x):
    """Gaussian tail probability Q(x) (scalar or array)."""
    return special.ndtr(-np.asarray(x, dtype=np.float64))


def ordered_bit_error(alpha, n0: float):
    """``1 / (1 + exp(4 alpha / N0))``; saturates to exactly 0 for large alpha."""
    return special.expit(-4.0 * np.asarray(alpha, dtype=np.float64) / n0)


def log1m_bit_error(alpha, n0: float):
    """``log(1 - P)`` for the bit error probability of :func:`ordered_bit_error`."""
    return special.log_expit(4.0 * np.asarray(alpha, dtype=np.float64) / n0)


def log1mexp(x):
    """``log(1 - exp(x))`` for ``x <= 0``, accurate at both ends."""
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.where(x > -LN2, np.log(-np.expm1(x)), np.log1p(-np.exp(x)))


@dataclass(frozen=True, eq=False)
class BitErrorProfile:
    """Per-frame bit error probabilities and their cached log-products.

    ``p_unordered``/``alpha``/``log1m`` are in natural (received) order;
    ``p_ordered`` is sorted by descending reliability.
    """

    alpha: np.ndarray
    n0: float
    k: int
    p_unordered: np.ndarray
    p_ordered: np.ndarray
    log1m: np.ndarray
    p_mrb_mean: float
    p_prime_mean: float
    log1m_prod_all: float
    log1m_prod_k: float

    @classmethod
    def from_alpha(cls, alpha: np.ndarray, n0: float, k: int, order: np.ndarray | None = None) -> BitErrorProfile:
        alpha = np.asarray(alpha, dtype=np.float64)
        if order is None:
            order = np.argsort(-alpha, kind="stable")
        p = ordered_bit_error(alpha, n0)
        log1m = log1m_bit_error(alpha, n0)
        p_ord = p[order]
        return cls(
            alpha=alpha,
            n0=n0,
            k=k,
            p_unordered=p,
            p_ordered=p_ord,
            log1m=log1m,
            p_mrb_mean=float(p_ord[:k].mean()),
            p_prime_mean=float(p[:k].mean()),
            log1m_prod_all=float(log1m.sum()),
            log1m_prod_k=float(log1m[:k].sum()),
        )


@dataclass(frozen=True)
class ConditionParams:
    """Decoder thresholds.

    ``tau_p=None`` means "derive from the channel" via
    :func:`discard_threshold`; ``tau >= 1`` disables early termination.
    """

    order_m: int
    lam: float = 0.05
    tau: float = 0.95
    tau_p: float | None = None

    def __post_init__(self):
        if self.order_m < 0:
            raise ValueError("order_m must be >= 0")
        if not 0 < self.lam <= 1:
            raise ValueError(f"lambda must be in (0, 1], got {self.lam}")
        if not 0 <= self.tau <= 1:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")
        if self.tau_p is not None and self.tau_p < 0:
            raise ValueError("tau_p must be >= 0")

    @property
    def order_m_prime(self) -> int:
        return max(self.order_m - 1, 0)

    def resolve_tau_p(self, n0: float, k: int) -> float:
        if self.tau_p is not None:
            return self.tau_p
        return discard_threshold(n0, k, self.order_m_prime)


@lru_cache(maxsize=None)
def _log_binom(k: int) -> tuple[float, ...]:
    return tuple(math.log(math.comb(k, i)) for i in range(k + 1))


def _logsumexp(terms: list[float]) -> float:
    top = max(terms)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def _log_binom_terms(p: float, k: int, lo: int, hi: int) -> list[float]:
    """``log C(k,i) + i log p + (k-i) log(1-p)`` for ``lo <= i <= hi``."""
    lb = _log_binom(k)
    lp = math.log(p) if p > 0 else -math.inf
    lq = math.log1p(-p) if p < 1 else -math.inf
    # the i == 0 and i == k edges would otherwise produce 0 * -inf
    return [
        lb[i] + (i * lp if i else 0.0) + ((k - i) * lq if i != k else 0.0)
        for i in range(lo, hi + 1)
    ]


def plist_online(p: float, k: int, m: int) -> float:
    """``sum_{i<=m} C(k,i) p^i (1-p)^(k-i)`` evaluated in the log domain.

    Serves both list-coverage estimates: the ordered basis (``p`` the mean
    ordered error probability over the first k) and the natural-order basis.
    """
    if m > k:
        raise ValueError(f"order {m} exceeds k={k}")
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} is not a probability")
    if m == k or p == 0:
        return 1.0
    return min(1.0, math.exp(_logsumexp(_log_binom_terms(p, k, 0, m))))


def log_plist_tail(p: float, k: int, m: int) -> float:
    """``log(1 - plist_online(p, k, m))`` without cancellation."""
    if m >= k or p == 0:
        return -math.inf
    return _logsumexp(_log_binom_terms(p, k, m + 1, k))


def condition1(profile: BitErrorProfile, params: ConditionParams, k: int) -> bool:
    """Natural-order list coverage at order m' is within a factor (1 - lambda)."""
    p_list = plist_online(profile.p_mrb_mean, k, params.order_m)
    p_list_prime = plist_online(profile.p_prime_mean, k, params.order_m_prime)
    return p_list_prime >= (1.0 - params.lam) * p_list


def _reliability_cdf_logs(x: np.ndarray, n0: float) -> tuple[np.ndarray, np.ndarray]:
    """log F(x) and log(1 - F(x)) for |r|, r ~ N(1, n0/2)."""
    s = math.sqrt(n0 / 2)
    a = (x - 1) / s
    b = (-x - 1) / s
    # F = Phi(a) - Phi(b);  1 - F = Q(a) + Q(-b) = Phi(-a) + Phi(b)
    la, lb = special.log_ndtr(a), special.log_ndtr(b)
    log_f = la + log1mexp(np.minimum(lb - la, 0.0))
    log_fbar = np.logaddexp(special.log_ndtr(-a), lb)
    return log_f, log_fbar


def reliability_pdf(x, n0: float):
    """Folded-normal density of one reliability |r| under BPSK/AWGN."""
    x = np.asarray(x, dtype=np.float64)
    c = 1.0 / math.sqrt(math.pi * n0)
    return c * (np.exp(-((x - 1) ** 2) / n0) + np.exp(-((x + 1) ** 2) / n0))


def kth_reliability_log_pdf(x, n0: float, n: int, k: int):
    """log density of the (k+1)-th largest of n i.i.d. reliabilities."""
    x = np.asarray(x, dtype=np.float64)
    log_f, log_fbar = _reliability_cdf_logs(x, n0)
    c = math.log(n) + math.log(math.comb(n - 1, k))
    with np.errstate(divide="ignore", invalid="ignore"):
        lpdf = np.log(reliability_pdf(x, n0))
        return c + lpdf + k * log_fbar + np.where(n - k - 1 > 0, (n - k - 1) * log_f, 0.0)


def basis_error_prob(x, n0: float):
    """Average error probability of a basis bit given the (k+1)-th reliability is x."""
    x = np.asarray(x, dtype=np.float64)
    d = math.sqrt(2 * n0)
    lq_plus = special.log_ndtr(-(2 * x + 2) / d)
    lq_minus = special.log_ndtr(-(2 * x - 2) / d)
    return special.expit(lq_plus - lq_minus)


class IntegrationError(RuntimeError):
    pass


def plist_offline(n0: float, n: int, k: int, m: int, tol: float = 1e-9, tail: bool = False) -> float:
    """List coverage averaged over the distribution of the (k+1)-th reliability.

    With ``tail=True`` returns ``1 - P_list`` integrated directly, to full
    relative precision even when it is far below machine epsilon.
    """
    if not n0 > 0:
        raise ValueError("n0 must be positive")
    if m > k:
        raise ValueError(f"order {m} exceeds k={k}")
    if tail and m == k:
        return 0.0
    s = math.sqrt(n0 / 2)
    upper = 1 + 8 * s
    lo, hi = (m + 1, k) if tail else (0, m)

    def integrand(x: float) -> float:
        lpdf = float(kth_reliability_log_pdf(x, n0, n, k))
        if not math.isfinite(lpdf):
            return 0.0
        p = float(basis_error_prob(x, n0))
        return math.exp(_logsumexp(_log_binom_terms(p, k, lo, hi)) + lpdf)

    # locate the bulk of the order-statistic density so quad does not miss it
    grid = np.linspace(0.0, upper, 4001)
    lp = kth_reliability_log_pdf(grid, n0, n, k)
    mode = float(grid[np.argmax(lp)])
    width = max(s / math.sqrt(n), 1e-4)
    breaks = sorted({min(max(mode + c * width, 1e-12), upper - 1e-12) for c in (-20, -5, -1, 0, 1, 5, 20)})
    total, err_sum = 0.0, 0.0
    edges = [0.0, *breaks, upper]
    eps_abs, eps_rel = (0.0, 1e-10) if tail else (tol / 10, 1e-12)
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        val, err = integrate.quad(integrand, a, b, epsabs=eps_abs, epsrel=eps_rel, limit=400)
        total += val
        err_sum += err
    bound = 1e-6 * total if tail else tol
    if err_sum > bound:
        raise IntegrationError(f"quadrature error estimate {err_sum:.3g} exceeds {bound:.3g}")
    # mass beyond the upper limit is below the Gaussian tail Q(8)
    return min(total, 1.0)


def log_tep_success_prob(tep_positions, profile: BitErrorProfile, n0: float | None = None) -> float:
    """log P(e): ``-(4/N0) * sum(alpha over flips) + sum_{i<k} log(1 - P(i))``."""
    n0 = profile.n0 if n0 is None else n0
    idx = np.asarray(tep_positions, dtype=np.intp)
    return -4.0 / n0 * float(profile.alpha[idx].sum()) + profile.log1m_prod_k


def tep_success_prob(tep_positions, profile: BitErrorProfile, n0: float | None = None) -> float:
    return math.exp(log_tep_success_prob(tep_positions, profile, n0))


def tep_success_prob_product(tep_positions, profile: BitErrorProfile) -> float:
    """Same quantity as :func:`tep_success_prob` as a direct product over the basis."""
    k = profile.k
    flips = np.zeros(k, dtype=bool)
    flips[np.asarray(tep_positions, dtype=np.intp)] = True
    p = profile.p_unordered[:k]
    return float(np.prod(np.where(flips, p, 1.0 - p)))


def log_codeword_odds(whd_total, log_pe, log1m_prod_all: float, n0: float, n: int, k: int):
    """``log((1 - P(e)) 2^(k-n) / (exp(-4 D / N0) prod(1 - P(i))))``; vectorized."""
    return log1mexp(log_pe) + (k - n) * LN2 + 4.0 * np.asarray(whd_total) / n0 - log1m_prod_all


def codeword_success_prob(
    whd_total: float,
    tep_positions,
    profile: BitErrorProfile,
    n0: float | None = None,
    n: int | None = None,
    k: int | None = None,
) -> float:
    """Probability that a candidate with the given WHD and TEP is the sent codeword."""
    n0 = profile.n0 if n0 is None else n0
    n = profile.alpha.size if n is None else n
    k = profile.k if k is None else k
    lo = log_codeword_odds(whd_total, log_tep_success_prob(tep_positions, profile, n0), profile.log1m_prod_all, n0, n, k)
    return float(special.expit(-lo))


def n_teps_nonzero(k: int, m: int) -> int:
    return sum(math.comb(k, i) for i in range(1, m + 1))


def discard_threshold(n0: float, k: int, order_m_prime: int) -> float:
    """``0.002 * sqrt(p' / N_{m'})``; ``N_0`` is taken as 1."""
    n_m = n_teps_nonzero(k, order_m_prime) or 1
    p_raw = float(q_function(math.sqrt(2.0 / n0)))
    return 0.002 * math.sqrt(p_raw / n_m)
