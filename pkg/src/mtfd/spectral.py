"""Eigenvalue/eigenfunction machinery for the spatial operator.

Covers the analytic Dirichlet Laplacian on an interval, symmetric
finite-difference discretizations of -(a u')' + c u with Dirichlet
boundary, projections onto the eigenbasis, pointwise application of the
operator through its spectral sum, and the kappa-matching combinatorics
between an eigenvalue set and its scaled copy.

Mode indices in the public API are 1-based (mode n has eigenvalue
``eigenvalues[n-1]``), matching the usual lambda_1 < lambda_2 < ...
numbering; this keeps the matched index sets readable (e.g. the even
modes {2, 4, 6, ...} map to {1, 2, 3, ...} under theta(n) = n/2 when
kappa = 4 on (0, pi)).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .exceptions import ConfigError, HypothesisViolation, NumericalError

__all__ = [
    "SpectralOperator", "FieldCoefficients", "KappaMatching",
    "dirichlet_laplacian", "discretize_symmetric", "project",
    "field_from_modes", "apply_l_at_point", "kappa_match",
    "operator_document", "operator_from_document",
]

_ZERO_EIGENVALUE_TOL = 1e-12
_DIVERGENCE_TOL = 1e-4


@dataclass(frozen=True)
class SpectralOperator:
    """Immutable bundle of eigenpairs plus the quadrature used to project.

    ``phi_grid[n-1, i]`` holds phi_n at ``grid[i]``; eigenfunctions are
    orthonormal in L^2 under the trapezoidal weights ``weights``.
    """

    eigenvalues: np.ndarray          # strictly increasing, shape (N,)
    domain: Tuple[float, float]
    mode_count: int
    source: str                      # "analytic-dirichlet-laplacian" | "discretized"
    grid: np.ndarray                 # quadrature nodes, shape (G,)
    weights: np.ndarray              # trapezoidal weights, shape (G,)
    phi_grid: np.ndarray             # shape (N, G)
    _evaluator: Callable[[int, float], float] = field(repr=False, default=None)

    def phi(self, n: int, x):
        """phi_n(x) for 1-based mode index n; x may be an array."""
        if not 1 <= n <= self.mode_count:
            raise ConfigError(f"mode index {n} outside 1..{self.mode_count}")
        return self._evaluator(n, x)

    def phi_at(self, x) -> np.ndarray:
        """Vector (phi_1(x), ..., phi_N(x))."""
        return np.array([self._evaluator(n, x) for n in range(1, self.mode_count + 1)])

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def kappa_tolerance(self) -> float:
        # floating point stands in for the paper-exact spectrum, so matching
        # needs a tolerance; discretized eigenvalues carry O(h^2) error.
        return 1e-9 if self.source == "analytic-dirichlet-laplacian" else 1e-6


@dataclass(frozen=True)
class FieldCoefficients:
    """Eigen-coefficients c_n = (h, phi_n) of a spatial field h."""

    coeffs: np.ndarray
    operator: SpectralOperator

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.shape != (self.operator.mode_count,):
            raise ConfigError(
                f"coefficient vector has length {coeffs.shape}, operator holds "
                f"{self.operator.mode_count} modes")
        if not np.all(np.isfinite(coeffs)):
            raise ConfigError("coefficients must be finite")

    def value_at(self, x) -> float:
        """Pointwise field value sum_n c_n phi_n(x)."""
        return float(self.coeffs @ self.operator.phi_at(x))

    def samples(self) -> np.ndarray:
        """Field values on the operator's quadrature grid."""
        return self.coeffs @ self.operator.phi_grid

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs ** 2)))


@dataclass(frozen=True)
class KappaMatching:
    """Matched index sets and bijection for lambda_n = kappa * lambda_theta(n)."""

    kappa: float
    m_set: Tuple[int, ...]        # n with lambda_n in kappa * sigma(L)
    m_prime_set: Tuple[int, ...]  # n' with kappa * lambda_n' in sigma(L)
    theta: Dict[int, int]
    in_sigma: bool

    def theta_inverse(self) -> Dict[int, int]:
        return {v: k for k, v in self.theta.items()}


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def dirichlet_laplacian(length: float, n_modes: int,
                        grid_points: Optional[int] = None) -> SpectralOperator:
    """Dirichlet Laplacian -d^2/dx^2 on (0, length).

    lambda_n = (n pi / length)^2 with phi_n(x) = sqrt(2/length) sin(n pi x / length).
    """
    if not (length > 0 and math.isfinite(length)):
        raise ConfigError(f"length must be positive, got {length}")
    if n_modes < 1:
        raise ConfigError("need at least one mode")
    if grid_points is None:
        # trapezoid on a uniform grid integrates products sin(nx)sin(mx)
        # exactly (up to roundoff) while panels > n+m; 8N is generous.
        grid_points = max(1024, 8 * n_modes) + 1
    ns = np.arange(1, n_modes + 1)
    eigenvalues = (ns * math.pi / length) ** 2
    grid = np.linspace(0.0, length, grid_points)
    h = grid[1] - grid[0]
    weights = np.full(grid_points, h)
    weights[0] = weights[-1] = h / 2.0
    amp = math.sqrt(2.0 / length)
    phi_grid = amp * np.sin(np.outer(ns, grid) * (math.pi / length))

    def evaluator(n, x, _amp=amp, _l=length):
        return _amp * np.sin(n * math.pi * np.asarray(x, dtype=float) / _l)

    return SpectralOperator(
        eigenvalues=eigenvalues, domain=(0.0, length), mode_count=n_modes,
        source="analytic-dirichlet-laplacian", grid=grid, weights=weights,
        phi_grid=phi_grid, _evaluator=evaluator)


def discretize_symmetric(diffusion, potential, grid_points: int, length: float,
                         n_modes: Optional[int] = None) -> SpectralOperator:
    """Symmetric tridiagonal discretization of -(a u')' + c u on (0, length).

    ``diffusion``/``potential`` may be callables of x or arrays sampled on
    the full grid (``grid_points`` interior nodes plus the two endpoints).
    Eigenvectors are normalized against the trapezoidal weights so that the
    grid functions are orthonormal in L^2(0, length).
    """
    if grid_points < 3:
        raise ConfigError("grid_points must be at least 3")
    if not (length > 0 and math.isfinite(length)):
        raise ConfigError(f"length must be positive, got {length}")
    grid = np.linspace(0.0, length, grid_points + 2)
    h = grid[1] - grid[0]

    def sample(f, pts):
        if callable(f):
            return np.asarray([f(p) for p in pts], dtype=float)
        arr = np.asarray(f, dtype=float)
        if arr.shape != grid.shape:
            raise ConfigError(
                f"sampled coefficient must match the full grid "
                f"({grid.size} points), got {arr.shape}")
        return np.interp(pts, grid, arr)

    midpoints = 0.5 * (grid[:-1] + grid[1:])
    a_mid = sample(diffusion, midpoints)
    c_int = sample(potential, grid[1:-1])
    if np.any(a_mid <= 0.0):
        raise ConfigError("diffusion coefficient must be strictly positive")

    diag = (a_mid[:-1] + a_mid[1:]) / h ** 2 + c_int
    offdiag = -a_mid[1:-1] / h ** 2
    try:
        vals, vecs = eigh_tridiagonal(diag, offdiag)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc

    if np.any(np.abs(vals) <= _ZERO_EIGENVALUE_TOL):
        raise HypothesisViolation(
            "operator has a zero eigenvalue; 0 must not belong to the spectrum")

    if n_modes is None:
        n_modes = grid_points
    n_modes = min(n_modes, grid_points)
    vals = vals[:n_modes]
    # eigh returns sum v_i^2 = 1; dividing by sqrt(h) makes the grid
    # function trapezoid-orthonormal (endpoints are zero).
    vecs = vecs[:, :n_modes].T / math.sqrt(h)

    phi_grid = np.zeros((n_modes, grid.size))
    phi_grid[:, 1:-1] = vecs
    # fix a deterministic sign: first nonzero interior value positive
    for row in phi_grid:
        j = np.argmax(np.abs(row) > 0)
        if row[j] < 0:
            row *= -1.0

    weights = np.full(grid.size, h)
    weights[0] = weights[-1] = h / 2.0

    def evaluator(n, x, _grid=grid, _phi=phi_grid):
        return np.interp(np.asarray(x, dtype=float), _grid, _phi[n - 1])

    return SpectralOperator(
        eigenvalues=vals, domain=(0.0, length), mode_count=n_modes,
        source="discretized", grid=grid, weights=weights,
        phi_grid=phi_grid, _evaluator=evaluator)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def field_from_modes(op: SpectralOperator, amplitudes: Dict[int, float]) -> FieldCoefficients:
    """Exact eigen-coefficients for a finite mode combination sum c_n phi_n.

    Bypasses quadrature: projecting otherwise leaves ~1e-15 leakage in
    every mode, which high powers of L amplify catastrophically in the
    expansion machinery."""
    coeffs = np.zeros(op.mode_count)
    for n, c in amplitudes.items():
        if not 1 <= n <= op.mode_count:
            raise ConfigError(f"mode {n} outside 1..{op.mode_count}")
        coeffs[n - 1] = c
    return FieldCoefficients(coeffs=coeffs, operator=op)


def project(field_samples, op: SpectralOperator) -> FieldCoefficients:
    """Quadrature inner products c_n = (field, phi_n) on the operator grid."""
    samples = np.asarray(field_samples, dtype=float)
    if samples.shape != op.grid.shape:
        raise ConfigError(
            f"field sampled on {samples.shape}, operator grid has {op.grid.shape}")
    coeffs = op.phi_grid @ (op.weights * samples)
    return FieldCoefficients(coeffs=coeffs, operator=op)


def apply_l_at_point(coeffs: FieldCoefficients, x0: float) -> float:
    """(L h)(x0) = sum_n lambda_n c_n phi_n(x0), with a tail-stability check."""
    op = coeffs.operator
    lo, hi = op.domain
    if not (lo < x0 < hi):
        raise ConfigError(f"x0 = {x0} must lie strictly inside ({lo}, {hi})")
    terms = op.eigenvalues * coeffs.coeffs * op.phi_at(x0)
    full = float(np.sum(terms))
    half = float(np.sum(terms[: max(1, op.mode_count // 2)]))
    scale = max(abs(full), np.max(np.abs(terms)), 1e-300)
    if abs(full - half) > _DIVERGENCE_TOL * scale:
        raise NumericalError(
            "spectral sum for (Lh)(x0) has not settled between N/2 and N "
            f"modes (rel change {abs(full - half) / scale:.2e}); the field is "
            "not smooth enough for this operation")
    return full


def kappa_match(op: SpectralOperator, kappa: float,
                tol: Optional[float] = None) -> KappaMatching:
    """Match lambda_n = kappa * lambda_n' within relative tolerance.

    For each mode n, a partner n' is accepted when
    |lambda_n - kappa lambda_n'| <= tol * |lambda_n|; strict monotonicity of
    the spectrum makes the partner unique, and two candidates within the
    tolerance mean the tolerance is too loose for this spectrum.
    """
    if not (kappa > 0 and math.isfinite(kappa)):
        raise ConfigError(f"kappa must be a positive real, got {kappa}")
    if tol is None:
        tol = op.kappa_tolerance()
    lam = op.eigenvalues
    target = lam / kappa          # want lambda_n' = lambda_n / kappa
    theta: Dict[int, int] = {}
    for i, t in enumerate(target):
        j = int(np.searchsorted(lam, t))
        candidates = [c for c in (j - 1, j) if 0 <= c < lam.size
                      and abs(lam[i] - kappa * lam[c]) <= tol * abs(lam[i])]
        if len(candidates) > 1:
            raise NumericalError(
                f"ambiguous kappa match for mode {i + 1}: modes "
                f"{[c + 1 for c in candidates]} both fit; tighten the tolerance")
        if candidates:
            theta[i + 1] = candidates[0] + 1
    m_set = tuple(sorted(theta))
    m_prime_set = tuple(sorted(theta.values()))
    if len(set(theta.values())) != len(theta):
        raise NumericalError("kappa matching is not injective; tolerance too loose")
    return KappaMatching(kappa=kappa, m_set=m_set, m_prime_set=m_prime_set,
                         theta=theta, in_sigma=bool(m_set))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def operator_document(op: SpectralOperator,
                      coeffs: Optional[FieldCoefficients] = None) -> dict:
    doc = {
        "lambda": op.eigenvalues.tolist(),
        "grid": op.grid.tolist(),
        "phi": op.phi_grid.tolist(),
        "domain": list(op.domain),
        "source": op.source,
    }
    if coeffs is not None:
        doc["coeffs"] = coeffs.coeffs.tolist()
    return doc


def operator_from_document(doc: dict) -> Tuple[SpectralOperator, Optional[FieldCoefficients]]:
    try:
        lam = np.asarray(doc["lambda"], dtype=float)
        grid = np.asarray(doc["grid"], dtype=float)
        phi = np.asarray(doc["phi"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed operator document: {exc}") from exc
    domain = tuple(doc.get("domain", (float(grid[0]), float(grid[-1]))))
    h = grid[1] - grid[0]
    weights = np.full(grid.size, h)
    weights[0] = weights[-1] = h / 2.0

    def evaluator(n, x, _grid=grid, _phi=phi):
        return np.interp(np.asarray(x, dtype=float), _grid, _phi[n - 1])

    op = SpectralOperator(
        eigenvalues=lam, domain=domain, mode_count=lam.size,
        source=doc.get("source", "discretized"), grid=grid, weights=weights,
        phi_grid=phi, _evaluator=evaluator)
    coeffs = None
    if "coeffs" in doc:
        coeffs = FieldCoefficients(np.asarray(doc["coeffs"], dtype=float), op)
    return op, coeffs
