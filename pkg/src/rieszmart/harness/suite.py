"""End-to-end verification suite.

Each trial draws its instances from its own sub-seed and feeds them to every
registered check.  A check returns observations ``(ratio, ok)``; ``ratio`` is
the quantity persisted in the report (lhs/rhs for inequalities, scaled error
for identities) and ``ok`` says whether the observation passed at the
configured tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import weaktype
from ..errors import NotAMartingale, NotPredictable
from ..expectation import Filtration
from ..gundy import decomposition_report, gundy_decompose, ratio_of
from ..martingale import (
    Martingale,
    TransformCoefficients,
    abel_band_identity,
    band_sup_delta_bound,
    is_martingale,
    krickeberg,
    martingale_violation,
    maximal,
    stopped_process,
    threshold_stopping_time,
    transform,
)
from ..riemann import holder_check, lower_upper_sums
from ..riesz_core import Element, power_gap_bounds
from . import generate as gen
from .config import HarnessConfig, trial_seed

SCHEMA = "suite/1"
RADEMACHER_HORIZON = 8
# proof-chain constants for positive martingales; doubled on the Krickeberg route
GUNDY_BOUNDS = {
    "gundy_u_l1": "u_l1",
    "gundy_u_band": "u_band_delta",
    "gundy_v_abs": "v_abs",
    "gundy_w_sup": "w_sup",
    "gundy_w_l1": "w_l1",
    "gundy_w_l2": "w_l2",
    "gundy_w_l2_chain": "w_l2_chain",
    "gundy_y_partial": "y_partial",
    "gundy_tau_count": "tau_count",
}


@dataclass
class Trial:
    cfg: HarnessConfig
    index: int
    seed: int
    rng: np.random.Generator
    f: Martingale
    _cache: dict = field(default_factory=dict)

    @property
    def filtration(self) -> Filtration:
        return self.f.filtration

    def decompositions(self):
        if "gundy" not in self._cache:
            self._cache["gundy"] = [
                (lam, d, decomposition_report(d, self.f))
                for lam in self.cfg.lambda_grid
                for d in [gundy_decompose(self.f, lam)]
            ]
        return self._cache["gundy"]


def make_trial(cfg: HarnessConfig, index: int) -> Trial:
    seed = trial_seed(cfg.seed, index)
    rng = gen.rng_for(seed)
    f = gen.generate_random_martingale(cfg, rng)
    return Trial(cfg, index, seed, rng, f)


def _le(lhs: Element, rhs: Element, tol: float) -> bool:
    return bool(np.all(lhs.values <= rhs.values + tol * (1.0 + np.abs(rhs.values))))


# ---------------------------------------------------------------- checks


def check_martingale_property(t: Trial):
    vals = gen.corrupt_values(t.rng, t.f) if t.cfg.corrupt else t.f.values
    gap = martingale_violation(t.filtration, vals)
    yield gap, gap <= t.cfg.tol


def check_gundy_reconstruction(t: Trial):
    for _, d, _ in t.decompositions():
        err = d.reconstruction_error()
        yield err, err <= t.cfg.tol


def check_gundy_martingales(t: Trial):
    for _, d, _ in t.decompositions():
        gap = max(martingale_violation(t.filtration, m.values) for m in (d.u, d.v, d.w))
        yield gap, gap <= t.cfg.tol


def check_gundy_epsilon_positive(t: Trial):
    for _, d, _ in t.decompositions():
        low = min(float(p.epsilon.min()) for p in d.parts)
        yield max(0.0, -low), low >= -t.cfg.tol


def check_gundy_stopped_split(t: Trial):
    """f^τ = v + w for every positive part."""
    for _, d, _ in t.decompositions():
        err = max(
            float(np.max(np.abs(p.stopped.values - p.v.values - p.w.values))) for p in d.parts
        )
        yield err, err <= t.cfg.tol


def _bound_check(key: str):
    def check(t: Trial):
        for _, _, rep in t.decompositions():
            for name, rec in rep.items():
                if name == key or name.startswith(key + "_neg"):
                    yield rec.ratio, rec.holds(t.cfg.tol)

    check.__name__ = f"check_{key}"
    return check


def check_band_sup_delta(t: Trial):
    Pa = gen.random_stopping_time(t.rng, t.filtration)
    Pb = gen.random_stopping_time(t.rng, t.filtration)
    worst = 0.0
    ok = True
    for lhs, rhs in band_sup_delta_bound(Pa, Pb):
        ok &= bool(np.all(lhs.values <= rhs.values))
        worst = max(worst, ratio_of(lhs, rhs))
    yield worst, ok


def check_threshold_positive(t: Trial):
    x = gen.random_adapted(t.rng, t.filtration)
    lam = float(t.rng.uniform(0.1, 2.0))
    P = threshold_stopping_time(
        [Element(t.f.space, r) for r in x], lam, t.filtration
    )
    dx = np.diff(x, axis=0, prepend=np.zeros((1, x.shape[1])))
    low = float(np.min(np.where(P.deltas, dx, 0.0)))
    yield max(0.0, -low), low >= -1e-12


def check_abel_identity(t: Trial):
    P = gen.random_stopping_time(t.rng, t.filtration)
    a = t.rng.exponential(1.0, size=(len(t.filtration), t.f.space.size))
    lhs, rhs = abel_band_identity(P, [Element(t.f.space, r) for r in a])
    err = float(np.max(np.abs(lhs.values - rhs.values) / (1 + np.abs(rhs.values))))
    yield err, err <= 1e-12


def check_optional_stopping(t: Trial):
    P = gen.random_stopping_time(t.rng, t.filtration)
    _, path = stopped_process(t.f, P, bounded=False)
    T = t.filtration.level(1)
    base = T.average(t.f.values[0])
    err = float(np.max(np.abs(T.average(path.values) - base)) / (1 + np.abs(base).max()))
    yield err, err <= t.cfg.tol


def check_transform_martingale(t: Trial):
    v = gen.random_predictable(t.rng, t.filtration)
    h = transform(t.f, v)
    gap = martingale_violation(t.filtration, h.values)
    yield gap, gap <= t.cfg.tol


def check_krickeberg(t: Trial):
    g, h = krickeberg(t.f)
    err = float(np.max(np.abs(g.values - h.values - t.f.values)))
    fl = t.f.norm(1)
    ok = (
        err <= t.cfg.tol
        and g.is_nonnegative()
        and h.is_nonnegative()
        and _le(g.norm(1), fl, t.cfg.tol)
        and _le(h.norm(1), fl, t.cfg.tol)
    )
    yield max(ratio_of(g.norm(1), fl), ratio_of(h.norm(1), fl)), ok


def _weak_type(L, constant: float):
    def check(t: Trial):
        c = constant * (1 if t.f.is_nonnegative() else 2)
        for lam in t.cfg.lambda_grid:
            lhs, rhs = weaktype.weak_type_ratio(L, t.f, lam)
            yield ratio_of(lhs, rhs), _le(lhs, c * rhs, t.cfg.tol)

    return check


def check_transform_bands(t: Trial):
    v = gen.random_predictable(t.rng, t.filtration, bound=2.0)
    Ph, Pf, Psh = weaktype.transform_band_domination(t.f, v, 2.0)
    yield 0.0, (Ph <= Pf) and (Psh <= Pf)


def check_maximal_quasilinear(t: Trial):
    g = gen.random_martingale_on(t.rng, t.filtration, t.cfg.nonneg_only)
    lhs = maximal(t.f + g)
    rhs = maximal(t.f) + maximal(g)
    yield ratio_of(lhs, rhs), _le(lhs, rhs, 1e-12)


def check_rademacher_step1(t: Trial):
    if t.f.horizon > RADEMACHER_HORIZON:
        return
    b = weaktype.rademacher_randomized_bound(t.f)
    ok = _le(b.avg, b.sq, t.cfg.tol) and _le(b.maxavg, b.sq, t.cfg.tol)
    yield max(ratio_of(b.avg, b.sq), ratio_of(b.maxavg, b.sq)), ok


def check_maximal_vs_square(t: Trial):
    for lam in t.cfg.lambda_grid:
        lhs, rhs = weaktype.sign_transform_bound(t.f, lam)
        r = ratio_of(lhs, rhs)
        yield r, math.isfinite(r)


def check_holder(t: Trial):
    space = t.f.space
    f = gen.random_step_function(t.rng, space)
    g = gen.random_step_function(t.rng, space)
    for p in t.cfg.holder_exponents:
        q = p / (p - 1)
        lhs, rhs = holder_check(f, g, p, q)
        yield ratio_of(lhs, rhs), _le(lhs, rhs, t.cfg.tol)


def check_riemann_refinement(t: Trial):
    f = gen.random_step_function(t.rng, t.f.space)
    # α is drawn independently of f's own breakpoints
    alpha = gen.random_step_function(t.rng, t.f.space).partition
    beta = gen.random_refinement(t.rng, alpha)
    La, Ua = lower_upper_sums(f, alpha)
    Lb, Ub = lower_upper_sums(f, beta)
    ok = La.le(Lb) and Lb.le(Ub) and Ub.le(Ua)
    yield float(np.max(Ub.values - Lb.values)), ok


def check_power_gap(t: Trial):
    space = t.f.space
    x = Element(space, t.rng.exponential(1.0, size=space.size))
    y = Element(space, t.rng.exponential(1.0, size=space.size))
    for p in (0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 3.0):
        lhs, rhs = power_gap_bounds(x, y, p)
        yield ratio_of(lhs, rhs), _le(lhs, rhs, t.cfg.tol)


CHECKS: dict[str, Callable] = {
    "martingale_property": check_martingale_property,
    "gundy_reconstruction": check_gundy_reconstruction,
    "gundy_martingales": check_gundy_martingales,
    "gundy_epsilon_positive": check_gundy_epsilon_positive,
    "gundy_stopped_split": check_gundy_stopped_split,
    **{name: _bound_check(key) for name, key in GUNDY_BOUNDS.items()},
    "lemma_band_sup_delta": check_band_sup_delta,
    "lemma_threshold_positive": check_threshold_positive,
    "abel_band_identity": check_abel_identity,
    "optional_stopping": check_optional_stopping,
    "transform_martingale": check_transform_martingale,
    "krickeberg": check_krickeberg,
    "weaktype_maximal": _weak_type(weaktype.MAXIMAL, 1.0),
    "weaktype_square": _weak_type(weaktype.SQUARE, 3.0),
    "transform_band_domination": check_transform_bands,
    "maximal_quasilinear": check_maximal_quasilinear,
    "rademacher_step1": check_rademacher_step1,
    "maximal_vs_square_ratio": check_maximal_vs_square,
    "holder": check_holder,
    "riemann_refinement": check_riemann_refinement,
    "power_gap": check_power_gap,
}


@dataclass
class CheckRecord:
    name: str
    trials: int = 0
    failures: int = 0
    max_ratio: float = 0.0
    worst_seed: int | None = None
    _worst: tuple = (False, -math.inf)

    def observe(self, seed: int, observations) -> None:
        seen = failed = False
        for ratio, ok in observations:
            seen = True
            ratio = float(ratio)
            # a failing observation outranks any passing one
            key = (not ok, ratio)
            if key > self._worst:
                self._worst = key
                self.worst_seed = seed
            self.max_ratio = max(self.max_ratio, ratio)
            failed |= not ok
        if seen:
            self.trials += 1
            self.failures += int(failed)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "max_ratio": self.max_ratio if math.isfinite(self.max_ratio) else None,
            "worst_seed": self.worst_seed,
            "pass": self.passed,
        }


@dataclass
class SuiteReport:
    config: HarnessConfig
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config.to_json(),
            "checks": [c.to_json() for c in self.checks],
            "pass": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def negative_controls(cfg: HarnessConfig) -> list[CheckRecord]:
    """A corrupted martingale must be rejected; non-predictable coefficients must raise."""
    rng = gen.rng_for(trial_seed(cfg.seed, 2**32))
    space = gen.random_space(rng, max(cfg.omega_size, 3))
    F = gen.random_filtration(rng, space, max(cfg.depth, 2))
    f = gen.random_martingale_on(rng, F, True)
    corrupted = CheckRecord("negative_corrupted_rejected")
    bad = gen.corrupt_values(rng, f)
    rejected = not is_martingale(F, bad)
    try:
        Martingale(F, bad)
        rejected = False
    except NotAMartingale:
        pass
    corrupted.observe(cfg.seed, [(0.0, rejected)])

    predictable = CheckRecord("negative_not_predictable")
    # v_2 must be level-1 measurable; split the largest level-1 block
    block = max(F.level(1).blocks, key=len)
    coeffs = np.zeros((len(F), space.size))
    coeffs[1, block[0]] = 1.0
    raised = False
    try:
        TransformCoefficients(F, coeffs)
    except NotPredictable:
        raised = True
    predictable.observe(cfg.seed, [(0.0, raised)])
    return [corrupted, predictable]


def run_checks(cfg: HarnessConfig, names=None) -> SuiteReport:
    names = list(CHECKS) if names is None else list(names)
    records = {n: CheckRecord(n) for n in names}
    for i in range(cfg.trials):
        t = make_trial(cfg, i)
        for n in names:
            records[n].observe(t.seed, CHECKS[n](t))
    return SuiteReport(cfg, [records[n] for n in names])


def run_suite(cfg: HarnessConfig) -> SuiteReport:
    report = run_checks(cfg)
    report.checks.extend(negative_controls(cfg))
    if cfg.out_path:
        with open(cfg.out_path, "w") as fh:
            fh.write(report.dumps())
    return report
