"""Seasonal ARIMA estimated by conditional sum of squares.

The series is differenced ``d`` times and seasonally ``D`` times (lag 12),
then the ARMA coefficients (plus a drift/intercept when applicable) are
found by Nelder-Mead minimization of the sum of squared one-step residuals,
conditioning on the first observations and zero pre-sample shocks. Forecasts
come from recursive substitution followed by inverse differencing; interval
widths grow with the cumulative psi-weight sum of the integrated process.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from ..dataset import MonthStamp, TagSeries
from ..errors import InvalidOrder, SeriesTooShort
from .forecast import Forecast, build_forecast, check_horizon, check_level, z_quantile

SEASONAL_LAG = 12
MAX_EVALS = 2000
SIMPLEX_TOL = 1e-6
_BAD_OBJECTIVE = 1e15

DEFAULT_ORDER_TUPLE = (1, 1, 1, 0, 1, 1)


@dataclass(frozen=True)
class SarimaOrder:
    """(p,d,q)(P,D,Q) with the seasonal lag fixed at 12 months."""

    p: int = 1
    d: int = 1
    q: int = 1
    P: int = 0
    D: int = 1
    Q: int = 1
    s: int = SEASONAL_LAG

    def __post_init__(self):
        for name in ("p", "d", "q", "P", "D", "Q"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise InvalidOrder(f"{name} must be a non-negative integer, got {v!r}")
        if self.p > 3 or self.q > 3 or self.P > 3 or self.Q > 3:
            raise InvalidOrder("p, q, P, Q must each be <= 3")
        if self.d + self.D > 3:
            raise InvalidOrder("d + D must be <= 3")
        if self.s != SEASONAL_LAG:
            raise InvalidOrder(f"seasonal lag is fixed at {SEASONAL_LAG} months")

    @property
    def n_arma(self) -> int:
        return self.p + self.q + self.P + self.Q

    def min_diff_len(self) -> int:
        return 10 + self.n_arma

    def label(self) -> str:
        return f"({self.p},{self.d},{self.q})({self.P},{self.D},{self.Q})[{self.s}]"


@dataclass(frozen=True)
class SarimaFit:
    order: SarimaOrder
    mu: float
    phi: tuple[float, ...]
    theta: tuple[float, ...]
    seasonal_phi: tuple[float, ...]
    seasonal_theta: tuple[float, ...]
    has_mu: bool
    residual_sd: float
    converged: bool
    n_obs: int
    origin: MonthStamp
    sse: float
    n_residuals: int
    chain: tuple = field(repr=False)  # series at each differencing level
    residuals: np.ndarray = field(repr=False)

    def aic(self) -> float:
        """CSS-based AIC: n*ln(SSE/n) + 2*(k+1) over the conditional sample."""
        n = self.n_residuals
        k = len(self.phi) + len(self.theta) + len(self.seasonal_phi) + len(self.seasonal_theta)
        k += 1 if self.has_mu else 0
        sigma2 = max(self.sse / n, 1e-300)
        return float(n * np.log(sigma2) + 2 * (k + 1))


def _difference_chain(y: np.ndarray, order: SarimaOrder) -> list[np.ndarray]:
    """Seasonal differences first, then regular; chain[0] is the raw series."""
    chain = [np.asarray(y, dtype=float)]
    for _ in range(order.D):
        cur = chain[-1]
        if len(cur) <= order.s:
            raise SeriesTooShort("series too short for seasonal differencing")
        chain.append(cur[order.s:] - cur[:-order.s])
    for _ in range(order.d):
        cur = chain[-1]
        if len(cur) <= 1:
            raise SeriesTooShort("series too short for differencing")
        chain.append(np.diff(cur))
    return chain


def _expand(coeffs: np.ndarray, seasonal: np.ndarray, s: int, sign: float) -> np.ndarray:
    """Multiply (1 + sign*c1*B + ...) by (1 + sign*C1*B^s + ...), returning
    the full lag-polynomial coefficient array starting at lag 0."""
    base = np.concatenate([[1.0], sign * coeffs])
    seas = np.zeros(s * len(seasonal) + 1)
    seas[0] = 1.0
    for i, c in enumerate(seasonal, start=1):
        seas[s * i] = sign * c
    return np.convolve(base, seas)


def _split_params(params: np.ndarray, order: SarimaOrder, has_mu: bool):
    i = 0
    mu = params[0] if has_mu else 0.0
    i += 1 if has_mu else 0
    phi = params[i:i + order.p]; i += order.p
    theta = params[i:i + order.q]; i += order.q
    sphi = params[i:i + order.P]; i += order.P
    stheta = params[i:i + order.Q]
    return float(mu), phi, theta, sphi, stheta


def _css_residuals(w: np.ndarray, params: np.ndarray, order: SarimaOrder,
                   has_mu: bool) -> tuple[np.ndarray, int]:
    """One-step residuals conditioned on the first p + 12P observations and
    zero pre-sample shocks. Returns (residual array, start index)."""
    mu, phi, theta, sphi, stheta = _split_params(params, order, has_mu)
    ar = _expand(phi, sphi, order.s, -1.0)    # 1 - phi B terms
    ma = _expand(theta, stheta, order.s, +1.0)  # 1 + theta B terms
    wt = w - mu
    n = len(wt)
    n_pre = len(ar) - 1
    # a(B) wt = b(B) eps  <=>  eps is the AR-convolved series passed through
    # the inverse MA filter; zero filter state matches zero pre-sample shocks.
    with np.errstate(over="ignore", invalid="ignore"):
        ar_part = np.convolve(wt, ar)[n_pre:n]
        eps_tail = lfilter([1.0], ma, ar_part)
    eps = np.zeros(n)
    eps[n_pre:] = eps_tail
    return eps, n_pre


def _css_objective(w: np.ndarray, order: SarimaOrder, has_mu: bool):
    def objective(params: np.ndarray) -> float:
        if np.any(np.abs(params) > 50.0):
            return _BAD_OBJECTIVE
        eps, n_pre = _css_residuals(w, params, order, has_mu)
        with np.errstate(over="ignore", invalid="ignore"):
            sse = float(np.dot(eps[n_pre:], eps[n_pre:]))
        if not np.isfinite(sse):
            return _BAD_OBJECTIVE
        return sse
    return objective


def fit_sarima(series: TagSeries, order: SarimaOrder | None = None) -> SarimaFit:
    """Estimate by CSS with Nelder-Mead from a zero start (max 2000 evals).

    A drift/intercept is estimated jointly whenever no differencing is
    applied or the differenced series has nonzero mean. Non-convergence
    (final simplex spread above 1e-6) is reported via ``converged=False``
    on the returned fit, keeping the best point found.
    """
    order = order or SarimaOrder()
    y = series.values
    chain = _difference_chain(y, order)
    w = chain[-1]
    if len(w) < order.min_diff_len():
        raise SeriesTooShort(
            f"need >= {order.min_diff_len()} points after differencing, got {len(w)}")

    has_mu = (order.d + order.D == 0) or abs(float(np.mean(w))) > 1e-8 * (1.0 + float(np.mean(np.abs(w))))
    n_params = order.n_arma + (1 if has_mu else 0)

    if n_params == 0:
        params = np.zeros(0)
        converged = True
    else:
        objective = _css_objective(w, order, has_mu)
        result = minimize(
            objective,
            np.zeros(n_params),
            method="Nelder-Mead",
            options={"maxfev": MAX_EVALS, "xatol": 1e-9, "fatol": 1e-12, "adaptive": False},
        )
        params = result.x
        sim = result.final_simplex[0]
        spread = float(np.max(np.abs(sim - sim[0])))
        converged = spread <= SIMPLEX_TOL

    eps, n_pre = _css_residuals(w, params, order, has_mu)
    n_resid = len(w) - n_pre
    sse = float(np.dot(eps[n_pre:], eps[n_pre:]))
    residual_sd = float(np.sqrt(sse / n_resid)) if n_resid > 0 else 0.0
    mu, phi, theta, sphi, stheta = _split_params(params, order, has_mu)
    return SarimaFit(
        order=order,
        mu=mu,
        phi=tuple(float(v) for v in phi),
        theta=tuple(float(v) for v in theta),
        seasonal_phi=tuple(float(v) for v in sphi),
        seasonal_theta=tuple(float(v) for v in stheta),
        has_mu=has_mu,
        residual_sd=residual_sd,
        converged=converged,
        n_obs=len(y),
        origin=series.end,
        sse=sse,
        n_residuals=n_resid,
        chain=tuple(c.copy() for c in chain),
        residuals=eps,
    )


def _forecast_differenced(fit: SarimaFit, horizon: int) -> np.ndarray:
    """Recursive substitution on the differenced scale (future shocks = 0)."""
    order = fit.order
    ar = _expand(np.array(fit.phi), np.array(fit.seasonal_phi), order.s, -1.0)
    ma = _expand(np.array(fit.theta), np.array(fit.seasonal_theta), order.s, +1.0)
    w = fit.chain[-1]
    wt = np.concatenate([w - fit.mu, np.zeros(horizon)])
    eps = np.concatenate([fit.residuals, np.zeros(horizon)])
    n = len(w)
    for h in range(horizon):
        t = n + h
        acc = 0.0
        for i in range(1, len(ar)):
            if t - i >= 0:
                acc -= ar[i] * wt[t - i]
        for j in range(1, len(ma)):
            if t - j >= 0:
                acc += ma[j] * eps[t - j]
        wt[t] = acc
    return wt[n:] + fit.mu


def _invert_differences(fit: SarimaFit, w_future: np.ndarray) -> np.ndarray:
    """Undo regular differencing, then seasonal, using the stored chain."""
    order = fit.order
    future = w_future
    level = len(fit.chain) - 1
    for _ in range(order.d):
        prev = fit.chain[level - 1]
        out = np.empty_like(future)
        last = prev[-1]
        for k in range(len(future)):
            last = last + future[k]
            out[k] = last
        future = out
        level -= 1
    for _ in range(order.D):
        prev = fit.chain[level - 1]
        out = np.empty_like(future)
        for k in range(len(future)):
            base = prev[len(prev) - order.s + k] if k < order.s else out[k - order.s]
            out[k] = base + future[k]
        future = out
        level -= 1
    return future


def psi_weights(fit: SarimaFit, horizon: int) -> np.ndarray:
    """Impulse-response weights of the integrated process, used to grow the
    interval width with the forecast step."""
    order = fit.order
    ar = _expand(np.array(fit.phi), np.array(fit.seasonal_phi), order.s, -1.0)
    ma = _expand(np.array(fit.theta), np.array(fit.seasonal_theta), order.s, +1.0)
    full = ar
    for _ in range(order.d):
        full = np.convolve(full, [1.0, -1.0])
    seas = np.zeros(order.s + 1)
    seas[0], seas[-1] = 1.0, -1.0
    for _ in range(order.D):
        full = np.convolve(full, seas)
    psi = np.zeros(horizon)
    psi[0] = 1.0
    for j in range(1, horizon):
        acc = ma[j] if j < len(ma) else 0.0
        for k in range(1, min(j, len(full) - 1) + 1):
            acc -= full[k] * psi[j - k]
        psi[j] = acc
    return psi


def predict_sarima(fit: SarimaFit, horizon: int, level: float = 0.8) -> Forecast:
    check_horizon(horizon)
    check_level(level)
    w_future = _forecast_differenced(fit, horizon)
    yhat = _invert_differences(fit, w_future)
    psi = psi_weights(fit, horizon)
    widths = fit.residual_sd * np.sqrt(np.cumsum(psi**2))
    half = z_quantile(level) * widths
    return build_forecast(fit.origin, level, yhat, half)


def select_order_by_aic(series: TagSeries, d: int = 1, D: int = 1) -> tuple[SarimaOrder, SarimaFit]:
    """Grid search p, q, P, Q over {0, 1} picking the lowest CSS-based AIC.

    Ties break toward the smaller parameter count, then lexicographic order,
    so the search is deterministic.
    """
    best: tuple[float, int, tuple, SarimaFit] | None = None
    for p in (0, 1):
        for q in (0, 1):
            for P in (0, 1):
                for Q in (0, 1):
                    order = SarimaOrder(p=p, d=d, q=q, P=P, D=D, Q=Q)
                    try:
                        fit = fit_sarima(series, order)
                    except SeriesTooShort:
                        continue
                    key = (fit.aic(), order.n_arma, (p, q, P, Q), fit)
                    if best is None or key[:3] < best[:3]:
                        best = key
    if best is None:
        raise SeriesTooShort("series too short for any order in the search grid")
    return best[3].order, best[3]
