"""Casimir force between a lens and a plate: primed Matsubara sum of y-integrals.

The force in the proximity force approximation is

    F = k_B T R / (4 a^2) * sum'_l  int_{zeta_l}^inf y dy
            { ln[1 - r_TM^2 e^{-y}] + ln[1 - r_TE^2 e^{-y}] },

with the l=0 term halved.  Every integral is shifted to start at 0
(``y = zeta_l + t``) and cut at ``t = y_tail_cut``; the discarded tail is
bounded analytically and folded into the per-term error estimate.  The sum
over l is accumulated with :func:`math.fsum` in ascending order and stops
once a rigorous geometric bound on the remaining terms is below ``rel_tol``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from scipy.integrate import IntegrationWarning, quad, quad_vec

from .quantities import CONSTANTS, Geometry, matsubara_zeta
from .reflection import reflector

__all__ = [
    "EngineConfig",
    "TermBreakdown",
    "ForceResult",
    "ConvergenceError",
    "InternalConsistencyError",
    "QUADRATURE_RULES",
    "prefactor",
    "integrand",
    "tail_envelope",
    "matsubara_term",
    "casimir_force",
    "model_difference",
    "sweep",
]

QUADRATURE_RULES = ("qags", "gk21", "gk15")

# Fixed subdivision of [0, y_tail_cut]: static plasma-model TE coefficients
# vary on the scale of the reduced plasma frequency (1e-4 .. 1e-1), which a
# single adaptive pass over the whole interval can miss.
_BREAKPOINTS = (1.0e-4, 1.0e-3, 1.0e-2, 0.1, 1.0, 10.0)


class ConvergenceError(RuntimeError):
    """Adaptive quadrature or the Matsubara sum did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float | None = None, partial: "ForceResult | None" = None):
        super().__init__(message)
        self.achieved = achieved
        self.partial = partial


class InternalConsistencyError(ArithmeticError):
    """A reflection coefficient left the physical range, so ln(1 - r^2 e^-y) is undefined."""


@dataclass(frozen=True)
class EngineConfig:
    """Accuracy controls.

    ``rel_tol`` applies both to each y-integral and to truncation of the sum;
    ``quad_limit`` is the maximum number of adaptive subintervals.
    """

    rel_tol: float = 1.0e-10
    y_tail_cut: float = 60.0
    l_max_hard: int = 2000
    quadrature_rule: str = "qags"
    quad_limit: int = 200

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol <= 1.0e-4:
            raise ValueError(f"rel_tol must lie in (0, 1e-4], got {self.rel_tol}")
        if not self.y_tail_cut >= 30.0:
            raise ValueError(f"y_tail_cut must be >= 30, got {self.y_tail_cut}")
        if self.l_max_hard < 1:
            raise ValueError("l_max_hard must be >= 1")
        if self.quadrature_rule not in QUADRATURE_RULES:
            raise ValueError(f"unknown quadrature rule {self.quadrature_rule!r}; choose from {QUADRATURE_RULES}")
        if self.quad_limit < 10:
            raise ValueError("quad_limit must be >= 10")


@dataclass(frozen=True)
class TermBreakdown:
    """One Matsubara term in newtons, weight and prefactor included."""

    l: int
    zeta: float
    tm_contribution: float
    te_contribution: float
    quadrature_error_estimate: float

    @property
    def total(self) -> float:
        return self.tm_contribution + self.te_contribution


@dataclass(frozen=True)
class ForceResult:
    force: float
    terms: tuple[TermBreakdown, ...]
    l_used: int
    truncation_bound: float
    converged: bool
    model: str = ""
    geometry: Geometry | None = None
    magnitude: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "magnitude", abs(self.force))

    @property
    def quadrature_error(self) -> float:
        return math.fsum(t.quadrature_error_estimate for t in self.terms)

    @property
    def rel_err_est(self) -> float:
        """Combined quadrature and truncation error relative to ``|force|``."""
        if self.force == 0.0:
            return 0.0
        return (self.quadrature_error + self.truncation_bound) / self.magnitude


def prefactor(geom: Geometry) -> float:
    """``k_B T R / (4 a^2)`` in newtons."""
    return CONSTANTS.k_B * geom.T * geom.R / (4.0 * geom.a**2)


def _ylog(r: float, y: float) -> float:
    """``y * ln(1 - r^2 e^-y)``; zero at y = 0 even for |r| = 1."""
    if y == 0.0:
        return 0.0
    x = r * r * math.exp(-y)
    if not x < 1.0:
        raise InternalConsistencyError(f"r^2 e^-y = {x!r} >= 1 at y={y!r}")
    return y * math.log1p(-x)


def integrand(l: int, zeta: float, y: float, model, geom: Geometry) -> float:
    """``y * (ln[1 - r_TM^2 e^-y] + ln[1 - r_TE^2 e^-y])`` for the l-th term."""
    pair = reflector(l, zeta, model, geom)(y)
    return _ylog(pair.r_tm, y) + _ylog(pair.r_te, y)


def tail_envelope(y0: float) -> float:
    """Bound on ``int_{y0}^inf y |ln(1 - r^2 e^-y)| dy`` valid for any ``|r| <= 1``, ``y0 > 0``.

    Uses ``-ln(1 - x) <= x / (1 - x)`` and ``x <= e^-y <= e^-y0``.
    """
    return (y0 + 1.0) * math.exp(-y0) / -math.expm1(-y0)


def _integrate(f: Callable[[float], float], upper: float, cfg: EngineConfig) -> tuple[float, float, bool]:
    if cfg.quadrature_rule == "qags":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            out = quad(
                f, 0.0, upper, epsabs=0.0, epsrel=cfg.rel_tol, limit=cfg.quad_limit, points=_BREAKPOINTS, full_output=1
            )
        # a 4th element (diagnostic message) is present only when QUADPACK flags a problem
        return out[0], out[1], len(out) == 3
    res = quad_vec(
        f,
        0.0,
        upper,
        epsabs=0.0,
        epsrel=cfg.rel_tol,
        limit=cfg.quad_limit,
        quadrature=cfg.quadrature_rule,
        points=_BREAKPOINTS,
        full_output=True,
    )
    return float(res[0]), float(res[1]), bool(res[2].success)


def _polarization_integral(
    r_of_y: Callable[[float], float], zeta: float, cfg: EngineConfig, floor: float
) -> tuple[float, float]:
    def f(t: float) -> float:
        y = zeta + t
        return _ylog(r_of_y(y), y)

    value, err, ok = _integrate(f, cfg.y_tail_cut, cfg)
    if not ok and err > cfg.rel_tol * abs(value) + floor:
        raise ConvergenceError(
            f"adaptive quadrature failed at zeta={zeta:.6g}: error {err:.3g} vs value {value:.6g}", achieved=err
        )
    return value, err


def _dimensionless_term(l: int, zeta: float, model, geom: Geometry, cfg: EngineConfig) -> tuple[float, float, float]:
    """Unweighted TM and TE integrals of the l-th term plus their error estimate."""
    refl = reflector(l, zeta, model, geom)
    env = tail_envelope(zeta) if zeta > 0.0 else 1.0
    floor = 1.0e-6 * cfg.rel_tol * env
    tm, tm_err = _polarization_integral(lambda y: refl(y).r_tm, zeta, cfg, floor)
    te, te_err = _polarization_integral(lambda y: refl(y).r_te, zeta, cfg, floor)
    tail = 2.0 * tail_envelope(zeta + cfg.y_tail_cut)
    return tm, te, tm_err + te_err + tail


def matsubara_term(l: int, model, geom: Geometry, cfg: EngineConfig = EngineConfig()) -> TermBreakdown:
    """Weighted l-th term of the Matsubara sum, in newtons."""
    if l < 0:
        raise ValueError("Matsubara index must be non-negative")
    zeta = matsubara_zeta(l, geom)
    tm, te, err = _dimensionless_term(l, zeta, model, geom, cfg)
    scale = prefactor(geom) * (0.5 if l == 0 else 1.0)
    return TermBreakdown(l, zeta, scale * tm, scale * te, scale * err)


def _sum_tail_bound(L: int, step: float) -> float:
    """Bound on ``sum_{l > L}`` of the dimensionless terms when ``zeta_l = l * step``."""
    n = L + 1
    q = math.exp(-step)
    c = 1.0 / -math.expm1(-step * n)
    geo = q**n / (1.0 - q)
    lin = q**n * (n - (n - 1) * q) / (1.0 - q) ** 2
    return 2.0 * c * (step * lin + geo)


def _require_thermal(geom: Geometry) -> None:
    if geom.T <= 0.0:
        raise ValueError("the Matsubara sum needs T > 0")
    geom.check_pfa()


def casimir_force(model, geom: Geometry, cfg: EngineConfig = EngineConfig()) -> ForceResult:
    """Casimir force (N, negative for attraction) between lens and plate.

    Raises
    ------
    ConvergenceError
        If ``cfg.l_max_hard`` terms do not reach ``cfg.rel_tol``; the partial
        result is attached as ``exc.partial``.
    """
    _require_thermal(geom)
    pref = prefactor(geom)
    step = matsubara_zeta(1, geom)
    terms: list[TermBreakdown] = []
    weighted: list[float] = []
    for l in range(cfg.l_max_hard + 1):
        term = matsubara_term(l, model, geom, cfg)
        terms.append(term)
        weighted.append(term.tm_contribution)
        weighted.append(term.te_contribution)
        if l == 0:
            continue
        partial = math.fsum(weighted)
        bound = pref * _sum_tail_bound(l, step)
        target = cfg.rel_tol * abs(partial)
        if abs(term.total) <= target and bound <= target:
            return ForceResult(partial, tuple(terms), l, bound, True, _model_name(model), geom)
        if partial == 0.0 and bound <= cfg.rel_tol * pref * 1.0e-12:
            # reflectionless: every term vanished identically
            return ForceResult(0.0, tuple(terms), l, bound, True, _model_name(model), geom)
    partial_result = ForceResult(math.fsum(weighted), tuple(terms), cfg.l_max_hard, bound, False, _model_name(model), geom)
    raise ConvergenceError(
        f"Matsubara sum not converged after {cfg.l_max_hard} terms (tail bound {bound:.3g} N)",
        achieved=bound,
        partial=partial_result,
    )


def _model_name(model) -> str:
    return getattr(model, "name", type(model).__name__)


def model_difference(model_a, model_b, geom: Geometry, cfg: EngineConfig = EngineConfig()) -> float:
    """``|F_a| - |F_b|`` in newtons, from integrals of the integrand difference.

    Both forces are attractive, so ``|F_a| - |F_b| = -(F_a - F_b)``; the
    per-term difference is integrated directly so that nearly equal models
    are not compared through two large totals.
    """
    osc_a, osc_b = getattr(model_a, "osc", None), getattr(model_b, "osc", None)
    if osc_a != osc_b:
        raise ValueError("model_difference needs both models to share the same oscillator core")
    _require_thermal(geom)
    pref = prefactor(geom)
    step = matsubara_zeta(1, geom)
    diffs: list[float] = []
    scale = 0.0
    for l in range(cfg.l_max_hard + 1):
        zeta = l * step
        ra, rb = reflector(l, zeta, model_a, geom), reflector(l, zeta, model_b, geom)

        def f(t: float) -> float:
            y = zeta + t
            pa, pb = ra(y), rb(y)
            return (_ylog(pa.r_tm, y) - _ylog(pb.r_tm, y)) + (_ylog(pa.r_te, y) - _ylog(pb.r_te, y))

        value, err, ok = _integrate(f, cfg.y_tail_cut, cfg)
        weight = 0.5 if l == 0 else 1.0
        diffs.append(weight * value)
        if l == 0:
            # magnitude of the static term fixes the absolute accuracy scale
            scale = abs(_dimensionless_term(0, 0.0, model_a, geom, cfg)[0]) * 0.5
            continue
        if not ok and err > cfg.rel_tol * max(abs(value), scale):
            raise ConvergenceError(f"quadrature failed for difference term l={l}", achieved=err)
        total = math.fsum(diffs)
        # difference tail is at most the sum of both tails
        if 2.0 * _sum_tail_bound(l, step) <= cfg.rel_tol * max(abs(total), scale):
            return -pref * total
    raise ConvergenceError(f"model difference not converged after {cfg.l_max_hard} terms")


def _force_at(args: tuple) -> ForceResult:
    model, geom, cfg = args
    return casimir_force(model, geom, cfg)


def sweep(
    model,
    separations: Iterable[float],
    R: float,
    T: float,
    cfg: EngineConfig = EngineConfig(),
    workers: int = 1,
    processes: bool = False,
) -> list[ForceResult]:
    """Forces at several separations (m), returned in input order.

    With ``workers > 1`` points are evaluated concurrently; each point is an
    independent sequential sum, so the results do not depend on scheduling.
    """
    jobs = [(model, Geometry(a, R, T), cfg) for a in separations]
    if workers <= 1 or len(jobs) <= 1:
        return [_force_at(j) for j in jobs]
    pool_cls = ProcessPoolExecutor if processes else ThreadPoolExecutor
    with pool_cls(max_workers=workers) as pool:
        return list(pool.map(_force_at, jobs))


def with_overrides(cfg: EngineConfig, **changes) -> EngineConfig:
    """Copy of ``cfg`` with the given fields replaced, ignoring ``None`` values."""
    return replace(cfg, **{k: v for k, v in changes.items() if v is not None})
