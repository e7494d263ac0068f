"""One-way ANOVA and one-sample t-test on top of a self-contained
regularized incomplete beta function (continued fraction, ~1e-13)."""

from __future__ import annotations

import math
from dataclasses import dataclass


class DegenerateVarianceError(ValueError):
    pass


class ZeroVarianceError(ValueError):
    pass


def _log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    MAXIT, EPS, FPMIN = 300, 1e-15, 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise ArithmeticError("incomplete beta did not converge")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for x in [0, 1], a, b > 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(x, a, b) / a
    return 1.0 - math.exp(b * math.log1p(-x) + a * math.log(x) - _log_beta(b, a)) * _beta_cf(
        1.0 - x, b, a
    ) / b


def t_two_tailed_p(t: float, df: float) -> float:
    x = df / (df + t * t)
    return regularized_incomplete_beta(x, df / 2.0, 0.5)


def t_critical(df: float, alpha: float = 0.05) -> float:
    """Two-tailed critical value: |t| with P(|T| > t) = alpha."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    lo, hi = 0.0, 1.0
    while t_two_tailed_p(hi, df) > alpha:
        hi *= 2.0
        if hi > 1e9:
            raise ArithmeticError("t critical search diverged")
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if t_two_tailed_p(mid, df) > alpha:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def f_sf(f: float, df1: int, df2: int) -> float:
    """Survival function of the F distribution: P(F > f)."""
    if f <= 0:
        return 1.0
    x = df2 / (df2 + df1 * f)
    return regularized_incomplete_beta(x, df2 / 2.0, df1 / 2.0)


@dataclass(frozen=True)
class AnovaResult:
    f_statistic: float
    p_value: float
    df_between: int
    df_within: int


def one_way_anova(groups) -> AnovaResult:
    """F = MS_between / MS_within over k groups."""
    groups = [list(map(float, g)) for g in groups]
    if len(groups) < 2:
        raise ValueError("need at least two groups")
    if any(len(g) < 2 for g in groups):
        raise ValueError("every group needs at least two samples")
    k = len(groups)
    n_total = sum(len(g) for g in groups)
    grand = sum(sum(g) for g in groups) / n_total
    ss_between = sum(len(g) * (sum(g) / len(g) - grand) ** 2 for g in groups)
    ss_within = sum(sum((x - sum(g) / len(g)) ** 2 for x in g) for g in groups)
    df_between = k - 1
    df_within = n_total - k
    if all(len(set(g)) == 1 for g in groups):
        raise DegenerateVarianceError("all samples identical within groups; F undefined")
    f = (ss_between / df_between) / (ss_within / df_within)
    return AnovaResult(
        f_statistic=f,
        p_value=f_sf(f, df_between, df_within),
        df_between=df_between,
        df_within=df_within,
    )


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    df: int
    critical_value: float
    reject_null: bool
    p_value: float
    mean: float


def one_sample_t_test(samples, mu0: float, alpha: float = 0.05) -> TTestResult:
    samples = list(map(float, samples))
    n = len(samples)
    if n < 2:
        raise ValueError("need at least two samples")
    if len(set(samples)) == 1:
        raise ZeroVarianceError("sample variance is zero; t undefined")
    mean = sum(samples) / n
    variance = sum((x - mean) ** 2 for x in samples) / (n - 1)
    t = (mean - mu0) / math.sqrt(variance / n)
    df = n - 1
    critical = t_critical(df, alpha)
    return TTestResult(
        t_statistic=t,
        df=df,
        critical_value=critical,
        reject_null=abs(t) > critical,
        p_value=t_two_tailed_p(t, df),
        mean=mean,
    )
