"""Recover the number of fractional terms, the orders, and the coefficient
ratios from a single-point short-time trace.

The recovery peels the trace like the inductive argument behind the
uniqueness result: estimate the leading power, classify the next exponent
of the residual against the expansion structure, convert it into a new
order or consume it as a correction, repeat.

Classification, in the homogeneous case with accepted orders a_1 > ... :

* a new order a_j first shows up at exponent 2 a_1 - a_j (never at a_j
  itself -- the trace's exponent lattice is k a_1 + sum n_j (a_1 - a_j));
* composite exponents built from already-known orders carry coefficients
  that follow from quantities already estimated, so they sit in the model
  basis from the start and are never fitted separately;
* exponents k a_1 (k >= 2) carry the new composite (L^k a)(x0)/q_1^k, a
  fresh unknown consumed by fitting, and contribute no new order.

An exponent within tolerance of both a composite slot and a plausible
new-order slot is reported as ambiguous, not guessed.

Mechanically, every stage runs one weighted nonlinear least-squares fit of
the full current structure plus a single free "probe" monomial c* x^{s*}
whose exponent roams above the explained frontier.  The probe gives the
optimizer capacity to represent the next unknown term, which keeps the
known orders from drifting to absorb it (the classic failure of sequential
power-law peeling), and its converged exponent is precisely the quantity
to classify.  Identification is up to a common multiplier on the q_j (only
ratios q_j/q_1 are determined; the leading composite carries the remaining
scale freedom).

``laplace_domain_fit`` runs the same engine on G(p) = p uhat(x0, p) -
baseline against x = 1/p, where the same exponent lattice appears without
the Gamma factors of term-by-term inversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from .asymptotics import (expansion_structure, structure_exponent,
                          structure_weight)
from .exceptions import (AmbiguousExponent, ConfigError, NumericalError,
                         SignalBelowFloor)
from .forward import ObservationTrace
from .mittag_leffler import gamma_lanczos, reciprocal_gamma

__all__ = ["IdentificationConfig", "IdentificationResult", "CoincidenceOutcome",
           "estimate_leading_order", "peel_orders", "laplace_domain_fit",
           "coincidence_test", "sampled_equivalence_check"]


@dataclass(frozen=True)
class IdentificationConfig:
    max_terms: int = 4
    fit_window: Tuple[float, float] = (1e-6, 1e-2)
    residual_floor: float = 1e-9
    nu_threshold: float = 1.0
    p_grid: Tuple[float, float, int] = (1e2, 1e4, 160)
    alpha_stability_tol: float = 5e-3     # two-pass acceptance for the limit t->0
    classification_tol: float = 2e-2      # new-order vs correction-slot distance
    min_order: float = 0.05               # smallest identifiable order
    max_composites: int = 6               # cap on the (L^k a) family

    def __post_init__(self):
        lo, hi = self.fit_window
        if not (0 < lo < hi):
            raise ConfigError("fit window must satisfy 0 < t_lo < t_hi")
        if self.max_terms < 1:
            raise ConfigError("max_terms must be at least 1")
        if not self.residual_floor > 0:
            raise ConfigError("residual floor must be positive")

    def p_values(self) -> np.ndarray:
        lo, hi, n = self.p_grid
        return np.geomspace(lo, hi, int(n))


@dataclass(frozen=True)
class IdentificationResult:
    m_hat: int
    orders_hat: Tuple[float, ...]
    coeff_ratios: Tuple[float, ...]       # q_j / q_1, first entry 1
    leading_composite: float              # fitted coefficient of the leading power
    diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "m_hat": self.m_hat,
            "orders_hat": list(self.orders_hat),
            "coeff_ratios": list(self.coeff_ratios),
            "leading_composite": self.leading_composite,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class CoincidenceOutcome:
    verdict: str                          # "consistent" | "divergent"
    exponent: Optional[float] = None      # fitted decay order of |u - v|

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent"


# ---------------------------------------------------------------------------
# power-law fitting primitives
# ---------------------------------------------------------------------------

def _loglog_fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Fit |y| ~ |c| x^s; returns (s, c) with the sign taken from the data."""
    slope, intercept = np.polyfit(np.log(x), np.log(np.abs(y)), 1)
    sign = 1.0 if np.median(np.sign(y)) >= 0 else -1.0
    return float(slope), float(sign * math.exp(intercept))


def _live_mask(x, y, floor, what):
    live = np.abs(y) > floor
    if np.count_nonzero(live) < 10:
        raise SignalBelowFloor(
            f"{what} is below the residual floor on the fit window; nothing to fit")
    return live


def _check_sign(y, what):
    flips = np.abs(np.diff(np.sign(y))) > 1
    if np.mean(flips) > 0.2:
        raise NumericalError(
            f"{what} changes sign across the window; not a clean power law "
            "(window too wide or floor too low)")


def _deep_fit(x, y, floor, what):
    """Log-log fit on the deepest quarter of the window (log extent), where
    the next expansion term contaminates least."""
    live = _live_mask(x, y, floor, what)
    x1, y1 = x[live], y[live]
    _check_sign(y1, what)
    deep = x1 <= x1.min() * (x1.max() / x1.min()) ** 0.25
    if np.count_nonzero(deep) < 8:
        deep = slice(None)
    return _loglog_fit(x1[deep], y1[deep])


def estimate_leading_order(trace: ObservationTrace, baseline: float,
                           cfg: IdentificationConfig) -> Tuple[float, float]:
    """Leading (exponent, coefficient) of u(t) - baseline on the fit window.

    A full-window log-log fit is gated by a second pass with the upper edge
    shrunk 4x (the exponent must move by less than cfg.alpha_stability_tol,
    emulating the t -> 0 limit); the returned values come from the deepest
    quarter of the window by log extent, where contamination by the next
    expansion term is smallest.
    """
    t, y = _window_data(trace, baseline, cfg)
    if t.size < 10:
        raise ConfigError("need at least 10 samples inside the fit window")
    live = _live_mask(t, y, cfg.residual_floor, "trace signal")
    t1, y1 = t[live], y[live]
    _check_sign(y1, "trace signal")
    s1, _ = _loglog_fit(t1, y1)
    shrink = t1 <= t1.max() / 4.0
    if np.count_nonzero(shrink) >= 8:
        s2, _ = _loglog_fit(t1[shrink], y1[shrink])
        if abs(s2 - s1) > cfg.alpha_stability_tol:
            raise NumericalError(
                f"leading exponent unstable under window shrink "
                f"({s1:.4f} vs {s2:.4f}); the window is too wide")
    return _deep_fit(t, y, cfg.residual_floor, "trace signal")


def _window_data(trace, baseline, cfg):
    lo, hi = cfg.fit_window
    mask = (trace.times >= lo) & (trace.times <= hi) & (trace.times > 0)
    return trace.times[mask], trace.values[mask] - baseline


# ---------------------------------------------------------------------------
# structure-driven model with a probe term
# ---------------------------------------------------------------------------

class _StructureModel:
    """y(x) = sum over skeleton of w(k, n; ratios) (-1)^k G_k x^s
              [+ c_probe x^{s_probe}],
    with s = shift + (k+extra) a_1 + sum n_j (a_1 - a_j), optionally carrying
    the 1/Gamma(s+1) factor of term-by-term Laplace inversion."""

    def __init__(self, n_orders, k_max, extra_z_power, shift, gamma_mapped,
                 skeleton):
        self.n_orders = n_orders
        self.k_max = k_max
        self.extra = extra_z_power
        self.shift = shift
        self.gamma_mapped = gamma_mapped
        self.skeleton = list(skeleton)

    def term_coefficients(self, alphas, ratios, G):
        out = []
        for k, counts in self.skeleton:
            s = structure_exponent(k, counts, alphas, self.extra, self.shift)
            w = structure_weight(k, counts, ratios[1:], self.extra)
            c = w * (-1.0) ** k * G[k]
            if self.gamma_mapped:
                c *= reciprocal_gamma(s + 1.0)
            out.append((s, c))
        return out

    def evaluate(self, x, alphas, ratios, G):
        out = np.zeros_like(x)
        for s, c in self.term_coefficients(alphas, ratios, G):
            out += c * x ** s
        return out

    def refine(self, x, y, alphas, ratios, G, alpha_lo, alpha_hi,
               probe=None, probe_bounds=None):
        """Weighted joint least squares.  Orders stay within [alpha_lo,
        alpha_hi]; ``probe = (s0, c0)`` adds one free monomial (exponent
        bounded to probe_bounds) that absorbs whatever the structure cannot
        represent yet.  Returns (alphas, ratios, G, probe)."""
        weights = 1.0 / (np.abs(y) + 1e-3 * np.max(np.abs(y)))
        n = self.n_orders
        n_g = len(G)
        with_probe = probe is not None

        def unpack(vec):
            a = vec[:n]
            r = np.concatenate([[1.0], vec[n: 2 * n - 1]])
            g = vec[2 * n - 1: 2 * n - 1 + n_g]
            pr = (vec[-2], vec[-1]) if with_probe else None
            return a, r, g, pr

        def resid(vec):
            a, r, g, pr = unpack(vec)
            model = self.evaluate(x, a, r, g)
            if pr is not None:
                model = model + pr[1] * x ** pr[0]
            return (model - y) * weights

        lower = [np.maximum(alpha_lo, 0.01), np.full(n - 1, 1e-6),
                 np.full(n_g, -np.inf)]
        upper = [np.minimum(alpha_hi, 0.999), np.full(n - 1, 1e4),
                 np.full(n_g, np.inf)]
        x0 = [np.clip(alphas, np.maximum(alpha_lo, 0.01) + 1e-9,
                      np.minimum(alpha_hi, 0.999) - 1e-9),
              np.clip(ratios[1:], 2e-6, 9e3), G]
        if with_probe:
            s0 = min(max(probe[0], probe_bounds[0] + 1e-6), probe_bounds[1] - 1e-6)
            x0.append([s0, probe[1]])
            lower.append([probe_bounds[0], -np.inf])
            upper.append([probe_bounds[1], np.inf])
        sol = least_squares(resid, np.concatenate(x0),
                            bounds=(np.concatenate(lower), np.concatenate(upper)),
                            method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                            max_nfev=600)
        return unpack(sol.x), float(np.sum(sol.fun ** 2))


def _initial_G(model: _StructureModel, x, y, alphas, ratios):
    """Linear solve for the composites given fixed orders/ratios; indexed by
    the literal composite order k (entries with no skeleton term stay 0)."""
    cols = {}
    for k, counts in model.skeleton:
        s = structure_exponent(k, counts, alphas, model.extra, model.shift)
        w = structure_weight(k, counts, ratios[1:], model.extra) * (-1.0) ** k
        if model.gamma_mapped:
            w *= reciprocal_gamma(s + 1.0)
        cols.setdefault(k, np.zeros_like(x))
        cols[k] += w * x ** s
    ks = sorted(cols)
    A = np.stack([cols[k] for k in ks], axis=1)
    scale = 1.0 / (np.abs(y) + 1e-3 * np.max(np.abs(y)))
    sol, *_ = np.linalg.lstsq(A * scale[:, None], y * scale, rcond=None)
    G = np.zeros(model.k_max + 1)
    for k, g in zip(ks, sol):
        G[k] = g
    return G


# ---------------------------------------------------------------------------
# the peeling engine (shared by time- and Laplace-domain identification)
# ---------------------------------------------------------------------------

def _peel_engine(x, y, cfg: IdentificationConfig, *, shift: float,
                 extra_z_power: int, gamma_mapped: bool, method: str):
    """Peel y(x) = sum c_i x^{s_i} on increasing x; x plays the role of t
    (time domain) or 1/p (Laplace domain)."""
    diagnostics: Dict = {"method": method, "stages": []}
    floor = cfg.residual_floor
    extra = extra_z_power

    s1, c1 = _deep_fit(x, y, floor, "leading term")
    alpha1 = s1 - shift               # homogeneous: s1 = a1; source: s1 = mu + a1
    if not (cfg.min_order <= alpha1 <= 0.999):
        raise NumericalError(
            f"fitted leading exponent {s1:.4f} does not correspond to an "
            f"order in ({cfg.min_order}, 1)")
    anchors = np.array([alpha1])
    ratios = np.array([1.0])
    origin = np.array([alpha1])            # first estimates; drift is capped
    origin_cap = np.array([0.04])
    rail_lo = np.array([alpha1 - 0.015])
    rail_hi = np.array([alpha1 + 0.015])
    # keep one composite of headroom beyond what the data has demanded so
    # far: without it, a freshly added order and the probe sit in a nearly
    # degenerate basis and the optimizer splits real terms between them
    k_hi = (1 if not extra else 0) + 1
    frontier = s1                          # largest classified exponent so far

    def recenter(refined):
        # rails follow the structure-aware refits (better than the raw
        # log-log anchors) but never drift far from the first estimates
        nonlocal rail_lo, rail_hi
        hw = np.full(len(refined), 0.03)
        hw[0] = 0.008
        rail_lo = np.maximum(refined - hw, origin - origin_cap)
        rail_hi = np.minimum(refined + hw, origin + origin_cap)
    _PROBE_GAP = 0.08                      # keeps the probe off modeled slots
    _G_SLOT_TOL = 0.06                     # probe position noise when it also
    #                                        soaks terms above the slot
    diagnostics["stages"].append(
        {"kind": "order", "exponent": float(s1), "coefficient": float(c1),
         "alpha": float(alpha1)})

    def build_model(a, kmax):
        # everything strictly below the next *unknown* composite slot is in
        # the basis: known-ratio combination terms come along for free
        cap = shift + (kmax + 1 + extra) * a[0] - 1e-9
        skel = [(k, counts) for k, counts in
                expansion_structure(a, cap, extra, shift) if k <= kmax]
        return _StructureModel(len(a), kmax, extra, shift, gamma_mapped, skel)

    def refit(with_probe, kmax):
        mdl = build_model(anchors, kmax)
        g0 = _initial_G(mdl, x, y, anchors, ratios)
        if not with_probe:
            (a, r, g, pr), _ = mdl.refine(x, y, anchors, ratios, g0,
                                          rail_lo, rail_hi)
            return mdl, a, r, g, pr
        # multi-start on the probe exponent: the weighted landscape has
        # local minima when the probe can trade against deep-window misfit
        g_next = shift + (kmax + 1 + extra) * anchors[0]
        bounds = (frontier + _PROBE_GAP, g_next + 0.6 * anchors[0])
        seeds = list(np.linspace(bounds[0] + 0.02, bounds[1] - 0.02, 5))
        r0 = y - mdl.evaluate(x, anchors, ratios, g0)
        try:
            sp, _ = _deep_fit(x, r0, floor, "probe seed")
            seeds.append(min(max(sp, bounds[0] + 0.02), bounds[1] - 0.02))
        except (SignalBelowFloor, NumericalError):
            pass
        best = None
        for s_seed in seeds:
            basis = x ** s_seed
            c_seed = float((r0 @ basis) / (basis @ basis))
            out, cost = mdl.refine(x, y, anchors, ratios, g0,
                                   rail_lo, rail_hi,
                                   probe=(s_seed, c_seed), probe_bounds=bounds)
            if best is None or cost < best[1]:
                best = (out, cost)
        a, r, g, pr = best[0]
        return mdl, a, r, g, pr

    while True:
        model, alphas, ratios, G, probe = refit(True, k_hi)
        anchors = alphas.copy()
        recenter(alphas)
        s_probe, c_probe = probe
        probe_peak = float(np.max(np.abs(c_probe * x ** s_probe)))
        resid = y - model.evaluate(x, alphas, ratios, G) - c_probe * x ** s_probe
        rmax = float(np.max(np.abs(resid)) + probe_peak)

        if probe_peak < floor:
            diagnostics["stages"].append(
                {"kind": "floor", "probe_peak": probe_peak})
            break

        a1 = anchors[0]
        next_g_slot = shift + (k_hi + 1 + extra) * a1
        # first appearance of a new order a_new sits at
        # shift + (1 + extra) a1 + (a1 - a_new)
        alpha_new = shift + (2 + extra) * a1 - s_probe
        new_valid = (cfg.min_order <= alpha_new
                     <= anchors[-1] - cfg.classification_tol
                     and len(anchors) < cfg.max_terms)
        d_g = abs(s_probe - next_g_slot)
        known_exps = [structure_exponent(k, counts, alphas, extra, shift)
                      for k, counts in model.skeleton]
        d_known = min(abs(s_probe - s) for s in known_exps)

        if d_known <= cfg.classification_tol:
            diagnostics["stages"].append(
                {"kind": "stop", "reason": f"probe exponent {s_probe:.4f} "
                 "matches a modeled slot; structure exhausted at this floor"})
            break
        if d_g <= cfg.classification_tol and new_valid:
            raise AmbiguousExponent(
                f"fitted exponent {s_probe:.4f} lies within "
                f"{cfg.classification_tol} of both the composite slot "
                f"{next_g_slot:.4f} and the new-order slot for alpha = "
                f"{alpha_new:.4f}; cannot classify",
                exponent=float(s_probe),
                candidates=[("composite", next_g_slot), ("new-order", alpha_new)])
        if d_g <= _G_SLOT_TOL and not new_valid:
            if k_hi >= cfg.max_composites:
                diagnostics["stages"].append(
                    {"kind": "budget", "reason": "composite budget exhausted",
                     "residual": rmax})
                break
            k_hi += 1
            frontier = max(frontier, float(s_probe))
            diagnostics["stages"].append(
                {"kind": "correction", "exponent": float(s_probe),
                 "slot": next_g_slot, "residual": rmax})
            continue
        if new_valid:
            r_new = c_probe * (gamma_lanczos(s_probe + 1.0) if gamma_mapped else 1.0)
            lead_G = G[1] if not extra else G[0]
            r_new = abs(float(r_new / lead_G))
            anchors = np.append(anchors, alpha_new)
            ratios = np.append(ratios, max(r_new, 1e-4))
            # the probe soaks structure above the slot it reports, so the
            # measured exponent errs high and the derived order errs low:
            # give the new order more room upward than downward
            origin = np.append(origin, alpha_new + 0.045)
            origin_cap = np.append(origin_cap, 0.1)
            rail_lo = np.append(rail_lo, alpha_new - 0.05)
            rail_hi = np.append(rail_hi, alpha_new + 0.14)
            k_hi = min(k_hi + 1, cfg.max_composites)   # keep the headroom
            frontier = max(frontier, float(s_probe))
            diagnostics["stages"].append(
                {"kind": "order", "exponent": float(s_probe),
                 "alpha": float(alpha_new), "ratio_init": r_new,
                 "residual": rmax})
            continue
        diagnostics["stages"].append(
            {"kind": "stop", "reason": f"probe exponent {s_probe:.4f} is "
             "beyond the new-order range and matches no composite slot"})
        break

    # final polish: complete structure plus one spare composite (so nothing
    # unmodeled is left for the orders to absorb), rails re-centered on the
    # refined positions
    anchors = alphas.copy()
    rail_lo = anchors - 0.025
    rail_hi = anchors + 0.025
    rail_lo[0] = anchors[0] - 0.01
    rail_hi[0] = anchors[0] + 0.01
    model, alphas, ratios, G, _ = refit(False, min(k_hi + 1, cfg.max_composites))

    lead_G = G[1] if not extra else G[0]
    s_lead = shift + (1 + extra) * alphas[0] if not extra else shift + alphas[0]
    c_lead = (-1.0 if not extra else 1.0) * lead_G
    if gamma_mapped:
        c_lead *= reciprocal_gamma(s_lead + 1.0)
    resid = y - model.evaluate(x, alphas, ratios, G)
    diagnostics["final_residual"] = float(np.max(np.abs(resid)))
    diagnostics["composites"] = [float(g) for g in G]
    order = np.argsort(alphas)[::-1]
    return IdentificationResult(
        m_hat=len(alphas),
        orders_hat=tuple(float(a) for a in alphas[order]),
        coeff_ratios=tuple(float(r) for r in ratios[order]),
        leading_composite=float(c_lead),
        diagnostics=diagnostics)


def peel_orders(trace: ObservationTrace, baseline: float,
                cfg: IdentificationConfig, mode: str = "homogeneous",
                mu: float = 0.0) -> IdentificationResult:
    """Sequential recovery of (m, alpha_j, q_j/q_1) from a short-time trace.

    ``baseline`` is u(x0, 0) = a(x0) in the homogeneous case and 0 in source
    mode; source mode requires the power-law exponent mu of the temporal
    profile to be known.
    """
    if mode not in ("homogeneous", "source"):
        raise ConfigError(f"unknown identification mode {mode!r}")
    t, y = _window_data(trace, baseline, cfg)
    if t.size < 10:
        raise ConfigError("need at least 10 samples inside the fit window")
    if mode == "source" and not mu > -1.0:
        raise ConfigError("source mode needs mu > -1")
    extra = 1 if mode == "source" else 0
    shift = mu if mode == "source" else 0.0
    return _peel_engine(t, y, cfg, shift=shift, extra_z_power=extra,
                        gamma_mapped=True, method=f"peel-{mode}")


# ---------------------------------------------------------------------------
# Laplace-domain identification
# ---------------------------------------------------------------------------

def _numeric_laplace(trace: ObservationTrace, baseline: float,
                     p: np.ndarray) -> np.ndarray:
    """G(p) = p uhat(x0, p) - baseline by quadrature with a power-law head
    and an exponential tail bound."""
    t, u = trace.times, trace.values
    pos = t > 0
    t, u = t[pos], u[pos]
    if t.size < 16:
        raise ConfigError("trace too sparse for a quadrature Laplace transform")
    t0, t_end = t[0], t[-1]

    head_pts = slice(0, max(10, t.size // 20))
    yh = u[head_pts] - baseline
    if np.max(np.abs(yh)) > 0:
        s_h, c_h = _loglog_fit(t[head_pts], yh)
        s_h = max(s_h, 1e-3)
    else:
        s_h, c_h = 1.0, 0.0
    from scipy.special import gammainc  # regularized lower incomplete gamma
    head = (baseline * (1.0 - np.exp(-p * t0)) / p
            + c_h * gamma_lanczos(s_h + 1.0) * p ** (-s_h - 1.0)
            * gammainc(s_h + 1.0, p * t0))

    body = np.trapezoid(np.exp(-np.multiply.outer(p, t)) * u, t, axis=-1)
    uhat = head + body

    tail_bound = np.abs(u[-1]) * np.exp(-p * t_end) / p
    G = p * uhat - baseline
    bad = tail_bound * p > 0.1 * np.abs(G)
    if np.any(bad):
        raise NumericalError(
            "quadrature tail bound exceeds 10% of |G(p)| at "
            f"p = {p[bad][0]:.3g}; the trace's time support is too short "
            "for this p grid")
    return G


def laplace_domain_fit(trace: ObservationTrace, baseline: float,
                       cfg: IdentificationConfig) -> IdentificationResult:
    """Identification in the transform domain.

    Computes G(p) = p uhat(x0, p) - baseline on cfg.p_grid, reads the
    leading order off the large-p slope of log|G| against log p, and peels
    the same exponent lattice in x = 1/p (no Gamma factors there).
    """
    p = cfg.p_values()
    G = _numeric_laplace(trace, baseline, p)
    x = 1.0 / p[::-1]
    y = G[::-1]
    return _peel_engine(x, y, cfg, shift=0.0, extra_z_power=0,
                        gamma_mapped=False, method="laplace-domain")


# ---------------------------------------------------------------------------
# coincidence of two traces
# ---------------------------------------------------------------------------

def coincidence_test(trace_u: ObservationTrace, trace_v: ObservationTrace,
                     nu: float, window: Tuple[float, float],
                     residual_floor: float = 1e-10) -> CoincidenceOutcome:
    """Fit |u - v| ~ C t^s on the window.

    "consistent" when the difference stays below the residual floor or
    decays at least like t^{nu} (within a 0.05 exponent margin); otherwise
    "divergent" with the fitted exponent -- the numerical witness that
    s < min(alpha_1, beta_1) forces the leading orders to differ.
    """
    if not np.array_equal(trace_u.times, trace_v.times):
        raise ConfigError("coincidence test requires a shared time grid")
    lo, hi = window
    mask = (trace_u.times >= lo) & (trace_u.times <= hi) & (trace_u.times > 0)
    if np.count_nonzero(mask) < 5:
        raise ConfigError("window contains fewer than 5 shared samples")
    t = trace_u.times[mask]
    d = trace_u.values[mask] - trace_v.values[mask]
    if np.max(np.abs(d)) < residual_floor:
        return CoincidenceOutcome("consistent", None)
    live = np.abs(d) > residual_floor
    s, _ = _loglog_fit(t[live], d[live])
    if s >= nu - 0.05:
        return CoincidenceOutcome("consistent", float(s))
    return CoincidenceOutcome("divergent", float(s))


def sampled_equivalence_check(trace_u: ObservationTrace,
                              trace_v: ObservationTrace,
                              sample_times: Sequence[float],
                              nu_tilde: float,
                              window: Optional[Tuple[float, float]] = None,
                              residual_floor: float = 1e-10) -> bool:
    """Does the sampling-sequence decay bound agree with the full-window test?

    Evaluates |u - v| <= C t_m^{nu_tilde} on the given subsequence only,
    then reruns coincidence_test on the full window; returns whether the
    two verdicts agree.
    """
    st = np.asarray(sorted(sample_times), dtype=float)
    if st.size < 5:
        raise ConfigError("sampling subsequence too short (need at least 5 points)")
    if not np.array_equal(trace_u.times, trace_v.times):
        raise ConfigError("traces must share a time grid")
    idx = []
    for s in st:
        j = int(np.argmin(np.abs(trace_u.times - s)))
        if abs(trace_u.times[j] - s) > 1e-9 * max(s, 1e-30):
            raise ConfigError(f"sample time {s} is not on the trace grid")
        idx.append(j)
    t = trace_u.times[idx]
    d = trace_u.values[idx] - trace_v.values[idx]
    if np.max(np.abs(d)) < residual_floor:
        sub_consistent = True
    else:
        live = np.abs(d) > residual_floor
        if np.count_nonzero(live) < 5:
            sub_consistent = True
        else:
            s_fit, _ = _loglog_fit(t[live], d[live])
            sub_consistent = s_fit >= nu_tilde - 0.05
    if window is None:
        window = (float(t.min()), float(t.max()))
    full = coincidence_test(trace_u, trace_v, nu_tilde, window, residual_floor)
    return sub_consistent == full.consistent
