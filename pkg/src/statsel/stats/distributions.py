"""Special functions and the CDFs built on them.

Only :mod:`math` is used here: ``lgamma`` for the log-gamma prefactors and
``erfc`` for the normal distribution.  The incomplete beta and gamma
functions are evaluated with modified Lentz continued fractions (and a
power series for the gamma function below its transition point).

Every tail function computes the *small* side directly, so upper-tail
p-values keep their relative accuracy far into the tail instead of being
obtained as ``1 - cdf``.
"""
import math
from dataclasses import dataclass

from ..errors import DomainError

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


def _beta_cf(a, b, x):
    """Continued fraction for I_x(a, b) (valid for x < (a+1)/(a+b+2))."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise DomainError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def _ibeta_pair(a, b, x, y):
    """Return (I_x(a,b), 1 - I_x(a,b)) with ``y == 1 - x`` supplied exactly by the caller."""
    if x <= 0.0:
        return 0.0, 1.0
    if y <= 0.0:
        return 1.0, 0.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log(y))
    if x < (a + 1.0) / (a + b + 2.0):
        lower = math.exp(log_front) * _beta_cf(a, b, x) / a
        return lower, 1.0 - lower
    upper = math.exp(log_front) * _beta_cf(b, a, y) / b
    return 1.0 - upper, upper


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    if not (a > 0 and b > 0):
        raise DomainError(f"reg_inc_beta needs a > 0 and b > 0, got a={a}, b={b}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"reg_inc_beta needs 0 <= x <= 1, got x={x}")
    return _ibeta_pair(a, b, x, 1.0 - x)[0]


def _gamma_pair(s, x):
    """Return (P(s,x), Q(s,x))."""
    if x == 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    log_front = -x + s * math.log(x) - math.lgamma(s)
    if x < s + 1.0:
        # series: P = e^{-x} x^s / Gamma(s+1) * sum x^n / ((s+1)...(s+n))
        ap = s
        term = 1.0 / s
        total = term
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                lower = total * math.exp(log_front)
                return lower, 1.0 - lower
        raise DomainError(f"incomplete gamma series did not converge (s={s}, x={x})")
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            upper = math.exp(log_front) * h
            return 1.0 - upper, upper
    raise DomainError(f"incomplete gamma continued fraction did not converge (s={s}, x={x})")


def reg_inc_gamma(s, x):
    """Lower regularized incomplete gamma function P(s, x)."""
    if not s > 0:
        raise DomainError(f"reg_inc_gamma needs s > 0, got {s}")
    if not x >= 0:
        raise DomainError(f"reg_inc_gamma needs x >= 0, got {x}")
    return _gamma_pair(s, x)[0]


def reg_inc_gamma_upper(s, x):
    """Upper regularized incomplete gamma function Q(s, x) = 1 - P(s, x)."""
    if not s > 0:
        raise DomainError(f"reg_inc_gamma needs s > 0, got {s}")
    if not x >= 0:
        raise DomainError(f"reg_inc_gamma needs x >= 0, got {x}")
    return _gamma_pair(s, x)[1]


# -- standard normal ---------------------------------------------------------

_SQRT2 = math.sqrt(2.0)


def normal_cdf(z):
    if math.isnan(z):
        raise DomainError("normal_cdf of NaN")
    return 0.5 * math.erfc(-z / _SQRT2)


def normal_sf(z):
    if math.isnan(z):
        raise DomainError("normal_sf of NaN")
    return 0.5 * math.erfc(z / _SQRT2)


# -- Student t -------------------------------------------------------------------

def _check_dof(*dofs):
    for d in dofs:
        if not d > 0:
            raise DomainError(f"degrees of freedom must be positive, got {d}")


def _t_tail(t, df):
    """P(T > |t|)."""
    if math.isinf(t):
        return 0.0
    t2 = t * t
    # x = df/(df+t^2), 1-x = t^2/(df+t^2); both formed without cancellation
    return 0.5 * _ibeta_pair(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2))[0]


def t_cdf(t, df):
    _check_dof(df)
    if math.isnan(t):
        raise DomainError("t_cdf of NaN")
    tail = _t_tail(t, df)
    return tail if t < 0 else 1.0 - tail


def t_sf(t, df):
    _check_dof(df)
    if math.isnan(t):
        raise DomainError("t_sf of NaN")
    tail = _t_tail(t, df)
    return 1.0 - tail if t < 0 else tail


# -- F ---------------------------------------------------------------------------

def _f_pair(f, d1, d2):
    if f <= 0.0:
        return 0.0, 1.0
    if math.isinf(f):
        return 1.0, 0.0
    num = d1 * f
    den = num + d2
    return _ibeta_pair(0.5 * d1, 0.5 * d2, num / den, d2 / den)


def f_cdf(f, d1, d2):
    _check_dof(d1, d2)
    if math.isnan(f):
        raise DomainError("f_cdf of NaN")
    return _f_pair(f, d1, d2)[0]


def f_sf(f, d1, d2):
    _check_dof(d1, d2)
    if math.isnan(f):
        raise DomainError("f_sf of NaN")
    return _f_pair(f, d1, d2)[1]


# -- chi-square ------------------------------------------------------------------

def chi2_cdf(x, k):
    _check_dof(k)
    if math.isnan(x):
        raise DomainError("chi2_cdf of NaN")
    if x <= 0.0:
        return 0.0
    return _gamma_pair(0.5 * k, 0.5 * x)[0]


def chi2_sf(x, k):
    _check_dof(k)
    if math.isnan(x):
        raise DomainError("chi2_sf of NaN")
    if x <= 0.0:
        return 1.0
    return _gamma_pair(0.5 * k, 0.5 * x)[1]


@dataclass(frozen=True)
class DistributionQuery:
    """A CDF evaluation request: ``family`` is one of normal, t, f, chi2."""

    family: str
    point: float
    dof: tuple = ()

    def cdf(self):
        fn = _CDFS.get(self.family)
        if fn is None:
            raise DomainError(f"unknown distribution family: {self.family}")
        return fn(self.point, *self.dof)

    def sf(self):
        fn = _SFS.get(self.family)
        if fn is None:
            raise DomainError(f"unknown distribution family: {self.family}")
        return fn(self.point, *self.dof)


_CDFS = {"normal": normal_cdf, "t": t_cdf, "f": f_cdf, "chi2": chi2_cdf}
_SFS = {"normal": normal_sf, "t": t_sf, "f": f_sf, "chi2": chi2_sf}
