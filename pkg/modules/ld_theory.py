"""
Large Deviations Module for t-Improper Colouring

Contains the Bernoulli rate function, exact and bounded binomial lower tails,
the mixed-binomial tail, the dense and sparse threshold functions and the
first-moment estimates for the number of t-dependent k-sets of G(n,p).

All probabilities are carried as natural logarithms.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaln, logsumexp, xlog1py, xlogy
from scipy.stats import binom

from modules.errors import CapExceededError, ValidationError

logger = logging.getLogger(__name__)

# ln of (2 pi)^(-1/2) e^(-1/6), the constant of the binomial lower tail bound
LOG_DELTA = -0.5 * math.log(2.0 * math.pi) - 1.0 / 6.0
DELTA = math.exp(LOG_DELTA)

EXACT_COMB_MAX_N = 64
MIXED_EXACT_CAP = 64

ROOT_XTOL = 1e-12
ROOT_MAXITER = 200
_MAX_DOUBLINGS = 200


@dataclass(frozen=True)
class TheoryParams:
    """Edge probability p with q = 1 - p and b = 1/(1 - p)."""

    p: float
    q: float
    b: float

    @classmethod
    def from_p(cls, p):
        p = float(p)
        if not 0.0 < p < 1.0:
            raise ValidationError(f"p must lie in the open interval (0, 1), got {p}")
        q = 1.0 - p
        return cls(p=p, q=q, b=1.0 / q)

    @property
    def ln_b(self):
        return -math.log1p(-self.p)


def as_params(params):
    """Accept TheoryParams or a bare probability."""
    if isinstance(params, TheoryParams):
        return params
    return TheoryParams.from_p(params)


class TailKind(str, Enum):
    EXACT = "exact"
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class TailBound:
    """
    A probability bound held in log-space

    trivial marks an upper bound of 1 returned outside the regime where the
    inequality applies; note says why.
    """

    log_value: float
    kind: TailKind
    trivial: bool = False
    note: str = ""

    def __post_init__(self):
        if math.isnan(self.log_value):
            raise ValidationError("tail bound is NaN")
        # summation round-off can land a hair above 0
        if self.log_value > 0.0:
            object.__setattr__(self, "log_value", 0.0)

    @property
    def value(self):
        return math.exp(self.log_value)

    def __lt__(self, other):
        return self.log_value < other.log_value

    def __le__(self, other):
        return self.log_value <= other.log_value

    def __gt__(self, other):
        return self.log_value > other.log_value

    def __ge__(self, other):
        return self.log_value >= other.log_value


def _trivial_upper(note, level=logging.DEBUG):
    logger.log(level, "trivial tail bound: %s", note)
    return TailBound(0.0, TailKind.UPPER, trivial=True, note=note)


def lambda_star(x, params):
    """
    Fenchel-Legendre transform of the Bernoulli(p) log moment generating function

    Parameters:
    x: real
    params: TheoryParams or p

    Returns:
    float: x ln(x/p) + (1-x) ln((1-x)/q) on [0, 1], +inf elsewhere
    """
    params = as_params(params)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        return math.inf
    if x == params.p:
        return 0.0
    value = float(xlogy(x, x / params.p) + xlogy(1.0 - x, (1.0 - x) / params.q))
    return max(value, 0.0)


def lambda_star_prime(x, params):
    """Derivative ln(x q / (p (1 - x))) on the open interval (0, 1)."""
    params = as_params(params)
    if not 0.0 < x < 1.0:
        raise ValidationError(f"derivative is defined on (0, 1) only, got {x}")
    return math.log(x * params.q / (params.p * (1.0 - x)))


def log_binom_coeff(n, k):
    """ln C(n, k); exact integer arithmetic for n <= 64, log-gamma above."""
    if k < 0 or k > n:
        return -math.inf
    if n <= EXACT_COMB_MAX_N:
        return math.log(math.comb(n, k))
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def _log_binom_coeffs(n, js):
    if n <= EXACT_COMB_MAX_N:
        return np.array([math.log(math.comb(n, int(j))) for j in js])
    return gammaln(n + 1) - gammaln(js + 1) - gammaln(n - js + 1)


def _check_count(n, name="n"):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValidationError(f"{name} must be a non-negative integer, got {n!r}")
    return int(n)


def _check_probability(p):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    return p


def binom_logpmf(n, p, j):
    """ln Pr(Bin(n, p) = j), well defined at p in {0, 1}."""
    n = _check_count(n)
    p = _check_probability(p)
    if j < 0 or j > n:
        return -math.inf
    return float(log_binom_coeff(n, j) + xlogy(j, p) + xlog1py(n - j, -p))


def binom_tail_exact(n, p, k):
    """
    Exact lower tail Pr(Bin(n, p) <= floor(k))

    Parameters:
    n: number of trials
    p: success probability in [0, 1]
    k: real threshold

    Returns:
    TailBound: kind exact, summed with log-sum-exp
    """
    n = _check_count(n)
    p = _check_probability(p)
    top = math.floor(k)
    if top < 0:
        return TailBound(-math.inf, TailKind.EXACT)
    if top >= n:
        return TailBound(0.0, TailKind.EXACT)
    js = np.arange(top + 1)
    terms = _log_binom_coeffs(n, js) + xlogy(js, p) + xlog1py(n - js, -p)
    return TailBound(float(logsumexp(terms)), TailKind.EXACT)


def bindev_upper(n, p, k):
    """
    Upper bound Pr(Bin(n, p) <= k) <= exp(-n Lambda*(k/n)), k <= np

    For k > np the trivial bound 1 is returned, flagged, so sweeps over k need
    not branch on the regime. Non-integral k is allowed.

    Parameters:
    n: number of trials
    p: probability in (0, 1)
    k: real threshold

    Returns:
    TailBound: kind upper
    """
    n = _check_count(n)
    params = as_params(p)
    if k < 0:
        return TailBound(-math.inf, TailKind.UPPER, note="k < 0: empty event")
    if n == 0:
        return TailBound(0.0, TailKind.UPPER)
    if k > n * params.p:
        return _trivial_upper(f"k = {k} exceeds np = {n * params.p}")
    return TailBound(-n * lambda_star(k / n, params), TailKind.UPPER)


def bindev_lower(n, p, k):
    """
    Lower bound delta max(k^-1/2, (n-k)^-1/2) exp(-n Lambda*(k/n))

    Parameters:
    n: number of trials
    p: probability in (0, 1)
    k: positive integer with k <= np

    Returns:
    TailBound: kind lower
    """
    n = _check_count(n)
    params = as_params(p)
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValidationError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    if k > n * params.p:
        raise ValidationError(f"k = {k} exceeds np = {n * params.p}")
    log_value = (
        LOG_DELTA
        + max(-0.5 * math.log(k), -0.5 * math.log(n - k))
        - n * lambda_star(k / n, params)
    )
    return TailBound(log_value, TailKind.LOWER)


def avgdeg_tail_upper(k, p, t):
    """
    Pr(average degree of G(k,p) <= t) <= exp(-C(k,2) Lambda*(t/(k-1)))

    The average-degree event is the edge-count event Bin(C(k,2), p) <= kt/2.
    Outside t <= p(k-1), k >= 2 the flagged trivial bound is returned. At t = 0
    the value is the exact probability q^C(k,2) of an independent k-set.

    Parameters:
    k: set size
    p: probability in (0, 1)
    t: degree budget

    Returns:
    TailBound: kind upper
    """
    params = as_params(p)
    if k < 2 or t < 0 or t > params.p * (k - 1):
        return _trivial_upper(f"need k >= 2 and 0 <= t <= p(k-1); got k={k}, t={t}", logging.WARNING)
    return TailBound(-math.comb(k, 2) * lambda_star(t / (k - 1), params), TailKind.UPPER)


def avgdeg_tail_lower(k, p, t):
    """
    Explicit lower bound on Pr(average degree of G(k,p) <= t)

    The binomial lower bound applied to Bin(C(k,2), p) at the edge budget
    e = floor(kt/2): ln delta - (1/2) ln e - C(k,2) Lambda*(e/C(k,2)).

    Parameters:
    k: set size >= 2
    p: probability in (0, 1)
    t: degree budget with 1 <= t <= p(k-1) and floor(kt/2) >= 1

    Returns:
    TailBound: kind lower
    """
    params = as_params(p)
    if k < 2 or t < 1 or t > params.p * (k - 1):
        raise ValidationError(f"need k >= 2 and 1 <= t <= p(k-1); got k={k}, t={t}, p={params.p}")
    budget = math.floor(k * t / 2)
    if budget < 1:
        raise ValidationError(f"edge budget floor(kt/2) must be >= 1, got {budget}")
    pairs = math.comb(k, 2)
    log_value = LOG_DELTA - 0.5 * math.log(budget) - pairs * lambda_star(budget / pairs, params)
    return TailBound(log_value, TailKind.LOWER)


def mixedbin_tail_exact(n1, n2, p, x):
    """
    Exact Pr(X + Y <= (n1 + 2 n2) x) for X ~ Bin(n1, p), Y/2 ~ Bin(n2, p)

    Parameters:
    n1, n2: trial counts with n1 + n2 <= 64
    p: probability in [0, 1]
    x: real

    Returns:
    TailBound: kind exact, by convolving the two pmfs
    """
    n1 = _check_count(n1, "n1")
    n2 = _check_count(n2, "n2")
    p = _check_probability(p)
    if n1 + n2 > MIXED_EXACT_CAP:
        raise CapExceededError(f"n1 + n2 = {n1 + n2} exceeds the exact convolution cap {MIXED_EXACT_CAP}")
    span = n1 + 2 * n2
    scaled = span * x
    # only rounding noise such as 0.29 * 100 = 28.999999999999996 is snapped
    nearest = round(scaled)
    top = nearest if math.isclose(scaled, nearest, rel_tol=1e-12, abs_tol=1e-12) else math.floor(scaled)
    if top < 0:
        return TailBound(-math.inf, TailKind.EXACT)
    if top >= span:
        return TailBound(0.0, TailKind.EXACT)
    pmf_x = binom.pmf(np.arange(n1 + 1), n1, p)
    pmf_y = np.zeros(2 * n2 + 1)
    pmf_y[::2] = binom.pmf(np.arange(n2 + 1), n2, p)
    mass = float(np.convolve(pmf_x, pmf_y)[: top + 1].sum())
    return TailBound(math.log(mass) if mass > 0.0 else -math.inf, TailKind.EXACT)


def mixedbin_upper(n1, n2, p, x):
    """
    Pr(X + Y <= (n1 + 2 n2) x) <= exp(-(1/2)(n1 + 2 n2) Lambda*(x)), 0 <= x <= p

    Returns:
    TailBound: kind upper
    """
    n1 = _check_count(n1, "n1")
    n2 = _check_count(n2, "n2")
    params = as_params(p)
    if not 0.0 <= x <= params.p:
        raise ValidationError(f"x must lie in [0, p] = [0, {params.p}], got {x}")
    return TailBound(-0.5 * (n1 + 2 * n2) * lambda_star(x, params), TailKind.UPPER)


def kappa_p_residual(kappa, tau, params):
    """f(kappa) = (kappa/2) Lambda*(tau/kappa) - 1."""
    params = as_params(params)
    return 0.5 * kappa * lambda_star(tau / kappa, params) - 1.0


def kappa_sparse_residual(kappa, tau):
    """g(kappa) = (1/2)(kappa - tau - tau ln(kappa/tau)) - 1, with 0 ln 0 = 0."""
    log_term = tau * math.log(kappa / tau) if tau > 0 else 0.0
    return 0.5 * (kappa - tau - log_term) - 1.0


def _bisect_root(residual, lo, hi_start):
    hi = hi_start
    for _ in range(_MAX_DOUBLINGS):
        if residual(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise RuntimeError(f"no sign change found up to {hi}")
    return float(bisect(residual, lo, hi, xtol=ROOT_XTOL, maxiter=ROOT_MAXITER, disp=False))


def kappa_p(tau, params):
    """
    Dense threshold: the unique kappa > tau/p with (kappa/2) Lambda*(tau/kappa) = 1

    Parameters:
    tau: real >= 0
    params: TheoryParams or p

    Returns:
    float: kappa_p(tau); 2/ln b at tau = 0
    """
    params = as_params(params)
    if tau < 0:
        raise ValidationError(f"tau must be non-negative, got {tau}")
    if tau == 0:
        return 2.0 / params.ln_b
    lo = tau / params.p * (1.0 + 1e-12)
    hi = max(tau / params.p + 1.0, 4.0 / params.ln_b)
    return _bisect_root(lambda kappa: kappa_p_residual(kappa, tau, params), lo, hi)


def kappa_sparse(tau):
    """
    Sparse threshold: the unique kappa > tau with (1/2)(kappa - tau - tau ln(kappa/tau)) = 1

    Parameters:
    tau: real >= 0

    Returns:
    float: kappa(tau); 2 at tau = 0
    """
    if tau < 0:
        raise ValidationError(f"tau must be non-negative, got {tau}")
    if tau == 0:
        return 2.0
    lo = tau * (1.0 + 1e-12)
    hi = max(tau + 1.0, 4.0)
    return _bisect_root(lambda kappa: kappa_sparse_residual(kappa, tau), lo, hi)


def sparse_avgdeg_tail_upper(k, p, t):
    """
    Chernoff bound exp(-C(k,2) p (u ln u + 1 - u)), u = t/(p(k-1))

    Parameters:
    k: set size >= 2
    p: probability in (0, 1)
    t: degree budget with 0 < t <= p(k-1)

    Returns:
    TailBound: kind upper
    """
    params = as_params(p)
    if k < 2 or not 0 < t <= params.p * (k - 1):
        raise ValidationError(f"need k >= 2 and 0 < t <= p(k-1); got k={k}, t={t}, p={params.p}")
    u = t / (params.p * (k - 1))
    exponent = math.comb(k, 2) * params.p * (u * math.log(u) + 1.0 - u)
    return TailBound(-max(exponent, 0.0), TailKind.UPPER)


@dataclass(frozen=True)
class DependentSetCountEstimate:
    """
    Log-estimates of the expected number of t-dependent k-sets in G(n,p)

    For t >= 1 the lower estimate bounds the average-degree event only, so it
    is an average-degree proxy rather than a proven lower bound; proxy says so.
    """

    log_upper: float
    log_lower: float
    n: int
    k: int
    t: int
    p: float
    asymptotic_exponent: float
    proxy: bool


def expected_dependent_sets_log(n, k, t, params):
    """
    Estimate ln E|S_{n,t,k}|

    Parameters:
    n: vertex count
    k: set size, 2 <= k <= n
    t: degree budget, 0 <= t <= p(k-1)
    params: TheoryParams or p

    Returns:
    DependentSetCountEstimate
    """
    params = as_params(params)
    if not 2 <= k <= n:
        raise ValidationError(f"need 2 <= k <= n; got k={k}, n={n}")
    if t < 0 or t > params.p * (k - 1):
        raise ValidationError(f"need 0 <= t <= p(k-1); got t={t}, p(k-1)={params.p * (k - 1)}")
    log_sets = log_binom_coeff(n, k)
    log_upper = log_sets + avgdeg_tail_upper(k, params, t).log_value
    if t == 0:
        # an independent k-set: q^C(k,2) exactly
        log_lower, proxy = log_upper, False
    else:
        log_lower, proxy = log_sets + avgdeg_tail_lower(k, params, t).log_value, True
    if n >= 3:
        ln_n = math.log(n)
        kappa, tau = k / ln_n, t / ln_n
        asymptotic = k * ln_n * (1.0 - 0.5 * kappa * lambda_star(tau / kappa, params))
    else:
        asymptotic = math.nan
    return DependentSetCountEstimate(
        log_upper=log_upper,
        log_lower=min(log_lower, log_upper),
        n=n,
        k=k,
        t=t,
        p=params.p,
        asymptotic_exponent=asymptotic,
        proxy=proxy,
    )


def _check_eps(eps):
    if not 0.0 < eps <= 1.0:
        raise ValidationError(f"eps must lie in (0, 1], got {eps}")
    return math.log(eps)


def first_moment_threshold_k(n, p, t, eps):
    """
    Smallest k with t <= p(k-1) and ln C(n,k) - C(k,2) Lambda*(t/(k-1)) <= ln eps

    By Markov's inequality Pr(alpha^t(G(n,p)) >= k) <= eps for the returned k.

    Parameters:
    n: vertex count
    p: probability in (0, 1)
    t: degree budget >= 0
    eps: failure budget in (0, 1]

    Returns:
    int or None: k*, or None when no k <= n qualifies
    """
    params = as_params(p)
    log_eps = _check_eps(eps)
    if t < 0:
        raise ValidationError(f"t must be non-negative, got {t}")
    for k in range(2, n + 1):
        if t > params.p * (k - 1):
            continue
        if log_binom_coeff(n, k) + avgdeg_tail_upper(k, params, t).log_value <= log_eps:
            return k
    logger.debug("no first-moment certificate for n=%d, p=%g, t=%d, eps=%g", n, params.p, t, eps)
    return None


def sparse_first_moment_threshold_k(n, p, t, eps):
    """
    Sparse-regime analogue of first_moment_threshold_k using the Chernoff bound

    Returns:
    int or None: smallest certified k, or None
    """
    params = as_params(p)
    log_eps = _check_eps(eps)
    if t < 0:
        raise ValidationError(f"t must be non-negative, got {t}")
    for k in range(2, n + 1):
        if t > params.p * (k - 1):
            continue
        if t == 0:
            log_tail = math.comb(k, 2) * math.log(params.q)
        else:
            log_tail = sparse_avgdeg_tail_upper(k, params, t).log_value
        if log_binom_coeff(n, k) + log_tail <= log_eps:
            return k
    return None


def sparse_chi_lower_scale(n, p, t):
    """
    Sparse lower scale d / (kappa(tau) ln d), d = np, tau = t / ln d

    Parameters:
    n: vertex count
    p: probability in (0, 1)
    t: degree budget >= 0

    Returns:
    float
    """
    params = as_params(p)
    d = n * params.p
    if d <= 1.0:
        raise ValidationError(f"expected degree np must exceed 1, got {d}")
    ln_d = math.log(d)
    return d / (kappa_sparse(t / ln_d) * ln_d)
