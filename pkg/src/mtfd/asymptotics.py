"""Short-time expansions of the trace from large-p transfer-function algebra.

For the homogeneous problem the modal transform z/(p(lambda+z)) expands,
for large p, into the double family

    sum_{k>=0} (-lambda)^k q1^{-k} p^{-1-k a1}
        * (1 + sum_{j>=2} (q_j/q1) p^{a_j-a1})^{-k},

and the inner power opens by the generalized binomial series into
monomials p^{-1-s} with composite exponents

    s = k a1 + sum_j n_j (a1 - a_j),   n_j >= 0.

Term-by-term inversion p^{-1-s} -> t^s / Gamma(s+1) then yields the
short-time series of u(x0, t); weighting each lambda-power k by the mode
sum S_k = sum_n lambda_n^k a_n phi_n(x0) = (L^k a)(x0) gives the
coefficients.  The source analogue carries rhohat(p) = Gamma(mu+1)
p^{-mu-1} (exact power-law profile) and one extra factor 1/z, shifting
every exponent by mu + a1.

The classical closed-form anchor is the m = 1 structure
u = a(x0) - t^{a1} (La)(x0)/(q1 Gamma(a1+1)) + O(t^{2 a1}); the
multi-term coefficients come from the bookkeeping above and are
validated against the forward solver numerically in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .exceptions import ConfigError, NumericalError
from .forward import MultiTermModel, ObservationTrace
from .mittag_leffler import gamma_lanczos, reciprocal_gamma
from .spectral import FieldCoefficients

__all__ = ["ExpansionSeries", "ExpansionTerm", "large_p_expand",
           "short_time_series", "short_time_series_source",
           "empirical_order", "expansion_monomials", "expansion_structure",
           "structure_exponent", "structure_weight", "first_neglected_exponent"]

_EXPONENT_MERGE_TOL = 1e-12
_TERM_LIMIT = 4000
_MODE_SUM_TOL = 1e-4


@dataclass(frozen=True)
class ExpansionTerm:
    exponent: float
    coefficient: float


@dataclass(frozen=True)
class ExpansionSeries:
    """u(x0, t) ~ sum_i c_i t^{mu_i} + O(t^{remainder_order})."""

    terms: Tuple[ExpansionTerm, ...]
    remainder_order: float
    anchor_value: float = 0.0

    def __post_init__(self):
        exps = [t.exponent for t in self.terms]
        if any(b - a <= 0 for a, b in zip(exps, exps[1:])):
            raise ConfigError("exponents must be strictly increasing")
        if exps and self.remainder_order <= exps[-1]:
            raise ConfigError("remainder order must exceed the last retained exponent")

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for term in self.terms:
            if term.exponent == 0.0:
                out = out + term.coefficient
            else:
                out = out + term.coefficient * t ** term.exponent
        return out

    def exponents(self) -> np.ndarray:
        return np.array([t.exponent for t in self.terms])

    def coefficient_of(self, exponent: float, tol: float = 1e-9) -> float:
        for term in self.terms:
            if abs(term.exponent - exponent) <= tol:
                return term.coefficient
        raise KeyError(f"no term with exponent {exponent}")

    def truncated(self, order_cap: float) -> "ExpansionSeries":
        """Drop terms above order_cap; the first dropped exponent becomes
        the remainder order."""
        keep = tuple(t for t in self.terms if t.exponent <= order_cap + 1e-12)
        dropped = [t.exponent for t in self.terms if t.exponent > order_cap + 1e-12]
        rem = min(dropped) if dropped else self.remainder_order
        return ExpansionSeries(terms=keep, remainder_order=rem,
                               anchor_value=self.anchor_value)

    def to_json_dict(self) -> dict:
        return {"terms": [{"exp": t.exponent, "coef": t.coefficient}
                          for t in self.terms],
                "remainder": self.remainder_order}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExpansionSeries":
        terms = tuple(ExpansionTerm(float(t["exp"]), float(t["coef"]))
                      for t in doc["terms"])
        anchor = 0.0
        for t in terms:
            if t.exponent == 0.0:
                anchor = t.coefficient
        return cls(terms=terms, remainder_order=float(doc["remainder"]),
                   anchor_value=anchor)


# ---------------------------------------------------------------------------
# monomial bookkeeping
# ---------------------------------------------------------------------------

def _binomial_weight(k: int, counts: Sequence[int]) -> float:
    """Coefficient of prod_j w_j^{n_j} in (1 + sum_j w_j)^{-k} (times the
    multinomial expansion of the s-th power of the sum)."""
    s = sum(counts)
    if s == 0:
        return 1.0
    c = math.comb(k + s - 1, s) * math.factorial(s)
    for n in counts:
        c //= math.factorial(n)
    return float((-1) ** s * c)


def expansion_structure(orders: Sequence[float], order_cap: float,
                        extra_z_power: int = 0, shift: float = 0.0,
                        term_limit: int = _TERM_LIMIT
                        ) -> List[Tuple[int, Tuple[int, ...]]]:
    """Index skeleton (lambda-power k, multiplicities n_j) of every monomial
    whose exponent shift + (k+extra) a1 + sum_j n_j (a1 - a_j) fits under
    order_cap.  The identification fits re-evaluate exponents and weights
    from this fixed skeleton while the parameters move."""
    a1 = orders[0]
    gaps = [a1 - a for a in orders[1:]]
    out: List[Tuple[int, Tuple[int, ...]]] = []

    def rec(j: int, counts: List[int], s: float, k: int):
        if len(out) > term_limit:
            raise NumericalError(
                f"expansion exceeds {term_limit} terms; reduce order_cap")
        if j == len(gaps):
            out.append((k, tuple(counts)))
            return
        n = 0
        while True:
            s_n = s + n * gaps[j]
            if s_n > order_cap + _EXPONENT_MERGE_TOL:
                break
            rec(j + 1, counts + [n], s_n, k)
            n += 1

    k = 0
    while True:
        base = shift + (k + extra_z_power) * a1
        if base > order_cap + _EXPONENT_MERGE_TOL:
            break
        if k + extra_z_power == 0:
            out.append((0, tuple(0 for _ in gaps)))    # the bare 1/p term
        else:
            rec(0, [], base, k)
        k += 1
    return out


def structure_exponent(k: int, counts: Sequence[int], orders: Sequence[float],
                       extra_z_power: int = 0, shift: float = 0.0) -> float:
    a1 = orders[0]
    return (shift + (k + extra_z_power) * a1
            + sum(n * (a1 - orders[j + 1]) for j, n in enumerate(counts)))


def structure_weight(k: int, counts: Sequence[int], ratios: Sequence[float],
                     extra_z_power: int = 0) -> float:
    """Binomial/multinomial weight including the ratio product."""
    if k + extra_z_power == 0:
        return 1.0
    w = _binomial_weight(k + extra_z_power, counts)
    for idx, n in enumerate(counts):
        if n:
            w *= ratios[idx] ** n
    return w


def expansion_monomials(orders: Sequence[float], ratios: Sequence[float],
                        order_cap: float, extra_z_power: int = 0,
                        shift: float = 0.0, term_limit: int = _TERM_LIMIT
                        ) -> List[Tuple[float, int, float]]:
    """Monomials (t-exponent s, lambda-power k, weight) with s <= order_cap.

    Models the expansion of the z^{-extra_z_power} / (lambda + z) factors:
    the weight contains the binomial/multinomial factors and the ratio
    product prod_j ratios[j]^{n_j}; the caller supplies the remaining
    (-lambda)^k q1^{-(k + extra_z_power)} and the shift (0 homogeneous,
    mu source)."""
    skeleton = expansion_structure(orders, order_cap, extra_z_power, shift,
                                   term_limit)
    out = [(structure_exponent(k, counts, orders, extra_z_power, shift), k,
            structure_weight(k, counts, ratios, extra_z_power))
           for k, counts in skeleton]
    out.sort(key=lambda item: (item[0], item[1]))
    return out


def first_neglected_exponent(orders: Sequence[float], order_cap: float,
                             extra_z_power: int = 0, shift: float = 0.0) -> float:
    """Smallest expansion exponent strictly beyond order_cap."""
    a1 = orders[0]
    probe = expansion_monomials(orders, [1.0] * (len(orders) - 1),
                                order_cap + a1, extra_z_power, shift,
                                term_limit=200000)
    beyond = [s for s, _, _ in probe if s > order_cap + _EXPONENT_MERGE_TOL]
    return min(beyond) if beyond else order_cap + a1


def _merge(items: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """Sum coefficients of exponents that collide within 1e-12; drop the
    terms that cancel (or vanish) exactly."""
    merged: List[Tuple[float, float]] = []
    for s, c in sorted(items):
        if merged and abs(merged[-1][0] - s) <= _EXPONENT_MERGE_TOL:
            merged[-1] = (merged[-1][0], merged[-1][1] + c)
        else:
            merged.append((s, c))
    return [(s, c) for s, c in merged if c != 0.0]


def large_p_expand(model: MultiTermModel, lam: float, order_cap: float
                   ) -> List[Tuple[float, float]]:
    """Large-p expansion of z/(p(lambda+z)) as (p-exponent, coefficient) pairs.

    Retains every monomial whose time-domain exponent s (p-exponent is
    -1-s) does not exceed order_cap; coefficients are exact combinations
    of the q_j and lambda.  lambda = 0 collapses to the single 1/p term.
    """
    if not order_cap > 0:
        raise ConfigError("order_cap must be positive")
    q1 = model.coefficients[0]
    ratios = [q / q1 for q in model.coefficients[1:]]
    items = [(s, weight * (-lam) ** k / q1 ** k)
             for s, k, weight in expansion_monomials(model.orders, ratios, order_cap)]
    return [(-1.0 - s, c) for s, c in _merge(items)]


# ---------------------------------------------------------------------------
# mode sums S_k = sum_n lambda_n^k c_n phi_n(x0) = (L^k h)(x0)
# ---------------------------------------------------------------------------

def _mode_sums(coeffs: FieldCoefficients, x0: float, k_max: int) -> np.ndarray:
    op = coeffs.operator
    lo, hi = op.domain
    if not (lo < x0 < hi):
        raise ConfigError(f"x0 = {x0} must lie strictly inside ({lo}, {hi})")
    base = coeffs.coeffs * op.phi_at(x0)
    sums = np.empty(k_max + 1)
    lam_pow = np.ones_like(op.eigenvalues)
    for k in range(k_max + 1):
        terms = lam_pow * base
        full = float(np.sum(terms))
        half = float(np.sum(terms[: max(1, terms.size // 2)]))
        scale = max(abs(full), float(np.max(np.abs(terms))), 1e-300)
        if abs(full - half) > _MODE_SUM_TOL * scale:
            raise NumericalError(
                f"mode sum for (L^{k} h)(x0) has not converged at the retained "
                "mode count; the field is not smooth enough for this expansion order")
        sums[k] = full
        lam_pow = lam_pow * op.eigenvalues
    return sums


def _series_from_monomials(monomials, mode_sums, q1, extra_z_power, scale_pref):
    items = []
    for s, k, weight in monomials:
        coeff = (scale_pref * weight * (-1.0) ** k * mode_sums[k]
                 / q1 ** (k + extra_z_power)) * reciprocal_gamma(s + 1.0)
        items.append((s, coeff))
    return _merge(items)


def short_time_series(model: MultiTermModel, initial: FieldCoefficients,
                      x0: float, order_cap: float = None) -> ExpansionSeries:
    """Short-time expansion of the homogeneous trace at x0 up to t^order_cap.

    The constant term is a(x0) and the t^{a1} coefficient is
    -(La)(x0)/(q1 Gamma(a1+1)); default order_cap is 3 a1 (one order past
    the classical O(t^{2 a1}) remainder).
    """
    a1 = model.orders[0]
    if order_cap is None:
        order_cap = 3.0 * a1
    if order_cap <= 0:
        raise ConfigError("order_cap must be positive")
    q1 = model.coefficients[0]
    ratios = [q / q1 for q in model.coefficients[1:]]
    monomials = expansion_monomials(model.orders, ratios, order_cap)
    k_max = max(k for _, k, _ in monomials)
    sums = _mode_sums(initial, x0, k_max)
    merged = _series_from_monomials(monomials, sums, q1, 0, 1.0)
    terms = tuple(ExpansionTerm(s, c) for s, c in merged)
    return ExpansionSeries(
        terms=terms,
        remainder_order=first_neglected_exponent(model.orders, order_cap),
        anchor_value=sums[0])


def short_time_series_source(model: MultiTermModel,
                             source_spatial: FieldCoefficients,
                             mu: float, scale: float, x0: float,
                             order_cap: float = None) -> ExpansionSeries:
    """Expansion of the trace driven by rho(t) = scale * t^mu, zero initial data.

    Leading term: scale * f(x0) * Gamma(mu+1) / (q1 Gamma(mu+a1+1)) * t^{mu+a1}.
    order_cap bounds the exponents measured from zero (i.e. including mu).
    """
    if not mu > -1.0:
        raise ConfigError("power-law exponent must exceed -1")
    a1 = model.orders[0]
    if order_cap is None:
        order_cap = mu + 3.0 * a1
    if order_cap <= mu + a1:
        raise ConfigError("order_cap must reach at least the leading exponent mu + a1")
    q1 = model.coefficients[0]
    ratios = [q / q1 for q in model.coefficients[1:]]
    monomials = expansion_monomials(model.orders, ratios, order_cap,
                                    extra_z_power=1, shift=mu)
    k_max = max(k for _, k, _ in monomials)
    sums = _mode_sums(source_spatial, x0, k_max)
    pref = scale * gamma_lanczos(mu + 1.0)
    merged = _series_from_monomials(monomials, sums, q1, 1, pref)
    terms = tuple(ExpansionTerm(s, c) for s, c in merged)
    return ExpansionSeries(
        terms=terms,
        remainder_order=first_neglected_exponent(model.orders, order_cap,
                                                 extra_z_power=1, shift=mu),
        anchor_value=0.0)


# ---------------------------------------------------------------------------
# empirical remainder order
# ---------------------------------------------------------------------------

def empirical_order(trace: ObservationTrace, series: ExpansionSeries,
                    window: Tuple[float, float]) -> float:
    """Least-squares slope of log|trace - series| against log t on the window.

    Returns +inf when the residual sits at machine-precision level (the
    series already reproduces the trace)."""
    t_lo, t_hi = window
    if not (0 < t_lo < t_hi):
        raise ConfigError("window must satisfy 0 < t_lo < t_hi")
    mask = (trace.times >= t_lo) & (trace.times <= t_hi)
    if np.count_nonzero(mask) < 5:
        raise ConfigError("window contains fewer than 5 trace samples")
    t = trace.times[mask]
    resid = trace.values[mask] - series.evaluate(t)
    scale = max(float(np.max(np.abs(trace.values))), 1.0)
    floor = 1e-13 * scale
    if np.max(np.abs(resid)) < floor:
        return math.inf
    good = np.abs(resid) > 1e-15 * scale
    if np.count_nonzero(good) < 5:
        return math.inf
    slope, _ = np.polyfit(np.log(t[good]), np.log(np.abs(resid[good])), 1)
    return float(slope)
