"""Three-martingale decomposition ``f = u + v + w`` at a level λ.

For a positive martingale f the construction uses three stopping times:

* R stops when f first exceeds λ,
* S stops when the predictable driver ``g_n = Σ_{k=0}^{n} T_k(ε_{k+1})``
  first exceeds λ, where ``ε_k = ΔR_k Δf_k`` is the jump at the R-crossing,
* τ = R ∨ S.

Then ``u = f - f^τ`` collects the increments after τ, and the stopped
martingale splits as ``f^τ = v + w`` with

    Δv_k = S_{k-1}^d (ε_k - T_{k-1} ε_k)
    Δw_k = S_{k-1}^d (y_k + T_{k-1} ε_k),   y_k = R_k^d Δf_k.

T_0 is identified with T_1.  The driver includes g_0 = T_0 ε_1, so S (and
hence τ) may already stop at time 0; this is what keeps ``|w| <= 2λe`` when
f_1 itself overshoots.  Signed martingales go through the Krickeberg split
and the two positive decompositions are subtracted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadLambda, Mismatch
from .expectation import Filtration, cond_exp, martingale_norm_p
from .martingale import (
    Martingale,
    StoppingTime,
    increments,
    krickeberg,
)
from .riesz_core import ZERO_TOL, Element, band_of

SCHEMA = "gundy/1"


@dataclass(frozen=True, eq=False)
class PositiveDecomposition:
    """All intermediate objects of the decomposition of one positive martingale."""

    lam: float
    f: Martingale
    R: StoppingTime
    S: StoppingTime
    tau: StoppingTime
    epsilon: np.ndarray  # rows ε_1..ε_N
    y: np.ndarray  # rows y_1..y_N
    g: np.ndarray  # rows g_0..g_N
    u: Martingale
    v: Martingale
    w: Martingale
    stopped: Martingale  # f^τ = v + w


@dataclass(frozen=True, eq=False)
class GundyDecomposition:
    lam: float
    u: Martingale
    v: Martingale
    w: Martingale
    path: str  # "positive" or "krickeberg"
    parts: tuple  # one PositiveDecomposition, or (positive part, negative part)
    source: Martingale = field(repr=False)

    def _single(self) -> PositiveDecomposition:
        return self.parts[0]

    @property
    def R(self) -> StoppingTime:
        return self._single().R

    @property
    def S(self) -> StoppingTime:
        return self._single().S

    @property
    def tau(self) -> StoppingTime:
        return self._single().tau

    @property
    def epsilon(self) -> np.ndarray:
        return self._single().epsilon

    @property
    def y(self) -> np.ndarray:
        return self._single().y

    @property
    def g(self) -> np.ndarray:
        return self._single().g

    @property
    def constant_factor(self) -> int:
        """Multiplier on every proof constant: 2 for the Krickeberg route."""
        return 1 if self.path == "positive" else 2

    def reconstruction_error(self) -> float:
        """max |u + v + w - f| / (1 + |f|) over all times and points."""
        f = self.source.values
        err = np.abs(self.u.values + self.v.values + self.w.values - f)
        return float(np.max(err / (1.0 + np.abs(f))))


def _decompose_positive(f: Martingale, lam: float) -> PositiveDecomposition:
    filt = f.filtration
    space = f.space
    N = f.horizon
    x = f.values
    df = increments(x)

    # R: first strict crossing of λ by f
    R_rows = (np.maximum.accumulate(x, axis=0) - lam) > ZERO_TOL
    R_full = np.vstack([np.zeros(space.size, bool), R_rows])  # R_0..R_N
    eps = np.where(R_full[1:] & ~R_full[:-1], df, 0.0)  # ε_1..ε_N
    y = np.where(~R_full[1:], df, 0.0)

    # predictable projections T_{k-1} ε_k, k = 1..N (T_0 = T_1)
    proj = np.array([filt.level(k - 1).average(eps[k - 1]) for k in range(1, N + 1)])
    # g_n = Σ_{k=1}^{n+1} T_{k-1} ε_k for n = 0..N (ε_{N+1} = 0)
    g = np.cumsum(proj, axis=0)
    g = np.vstack([g, g[-1:]])

    S_full = (np.maximum.accumulate(g, axis=0) - lam) > ZERO_TOL  # S_0..S_N
    tau_full = R_full | S_full

    R = StoppingTime(space, R_rows, filt)
    S = StoppingTime(space, S_full[1:], filt, initial=S_full[0])
    tau = StoppingTime(space, tau_full[1:], filt, initial=tau_full[0])

    before_tau = tau_full[:-1]  # τ_{k-1}, k = 1..N
    live_S = ~S_full[:-1]  # S_{k-1}^d
    du = np.where(before_tau, df, 0.0)
    dstop = np.where(before_tau, 0.0, df)
    dv = np.where(live_S, eps - proj, 0.0)
    dw = np.where(live_S, y + proj, 0.0)

    # tolerance scaled to f: sums of projections carry float noise
    tol = 1e-9
    u = Martingale(filt, np.cumsum(du, axis=0), tol)
    v = Martingale(filt, np.cumsum(dv, axis=0), tol)
    w = Martingale(filt, np.cumsum(dw, axis=0), tol)
    stopped = Martingale(filt, np.cumsum(dstop, axis=0), tol)
    return PositiveDecomposition(lam, f, R, S, tau, eps, y, g, u, v, w, stopped)


def gundy_decompose(f: Martingale, lam: float) -> GundyDecomposition:
    if not lam > 0:
        raise BadLambda(f"λ must be positive, got {lam}")
    lam = float(lam)
    if f.is_nonnegative():
        part = _decompose_positive(f, lam)
        return GundyDecomposition(lam, part.u, part.v, part.w, "positive", (part,), f)
    g, h = krickeberg(f)
    pg = _decompose_positive(g, lam)
    ph = _decompose_positive(h, lam)
    return GundyDecomposition(
        lam, pg.u - ph.u, pg.v - ph.v, pg.w - ph.w, "krickeberg", (pg, ph), f
    )


@dataclass(frozen=True)
class InequalityRecord:
    lhs: Element
    rhs: Element
    ratio: float
    note: str = ""

    def holds(self, tol: float = 1e-9) -> bool:
        scale = 1.0 + np.abs(self.rhs.values)
        return bool(np.all(self.lhs.values <= self.rhs.values + tol * scale))

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs.tolist(),
            "rhs": self.rhs.tolist(),
            "ratio": self.ratio,
            "note": self.note,
        }


def ratio_of(lhs: Element, rhs: Element) -> float:
    """max componentwise lhs/rhs over nonzero rhs; inf if lhs > 0 where rhs = 0."""
    a, b = lhs.values, rhs.values
    nz = np.abs(b) > ZERO_TOL
    if np.any(~nz & (a > ZERO_TOL)):
        return float("inf")
    if not nz.any():
        return 0.0
    return float(max(0.0, np.max(a[nz] / b[nz])))


def _record(lhs: Element, rhs: Element, note: str = "") -> InequalityRecord:
    return InequalityRecord(lhs, rhs, ratio_of(lhs, rhs), note)


def decomposition_report(d: GundyDecomposition, f: Martingale) -> dict[str, InequalityRecord]:
    """Both sides of every bound attached to the decomposition.

    The constants shown are those the construction exhibits for positive f
    (doubled on the Krickeberg route).  Nothing here asserts.
    """
    if d.source is not f and not (
        d.source.filtration == f.filtration and np.array_equal(d.source.values, f.values)
    ):
        raise Mismatch("decomposition was computed from a different martingale")
    lam = d.lam
    c = d.constant_factor
    filt: Filtration = f.filtration
    T = filt.level(1)
    space = f.space
    e = space.unit
    f_l1 = f.norm(1)

    rep: dict[str, InequalityRecord] = {}
    rep["u_l1"] = _record(d.u.norm(1), 2 * c * f_l1, "||u||_1 <= 2||f||_1")

    du_star = Element(space, np.max(np.abs(d.u.increments), axis=0))
    band_du = band_of(du_star).indicator
    rep["u_band_delta"] = _record(
        lam * cond_exp(T, band_du), 3 * c * f_l1, "λ T P_{Δu*} e <= 3||f||_1"
    )
    # proof variant: sup_n P_{τ_{n-1} e} e, i.e. the final τ mask
    tau_mask = np.zeros(space.size, bool)
    for part in d.parts:
        tau_mask |= part.tau.masks[-1]
    tau_ind = Element(space, tau_mask.astype(float))
    rep["u_band_tau"] = _record(
        lam * cond_exp(T, tau_ind), 3 * c * f_l1, "λ T sup_n P_{τ_(n-1)} e <= 3||f||_1"
    )
    rep["v_abs"] = _record(
        cond_exp(T, Element(space, np.sum(np.abs(d.v.increments), axis=0))),
        2 * c * f_l1,
        "T Σ|Δv_k| <= 2||f||_1",
    )
    rep["w_sup"] = _record(d.w.norm(np.inf), 2 * c * lam * e, "||w||_inf <= 2λe")
    rep["w_l1"] = _record(d.w.norm(1), 2 * c * f_l1, "||w||_1 <= 2||f||_1")
    w_l2_sq = martingale_norm_p(filt, [Element(space, r**2) for r in d.w.values], 1)
    rep["w_l2"] = _record(w_l2_sq, 4 * c * c * lam * f_l1, "||w||_2^2 <= 4λ||f||_1")
    # per-n chain T w_n^2 <= 2λ T|w_n|, worst n
    chain_l = []
    chain_r = []
    for row in d.w.values:
        chain_l.append(T.average(row**2))
        chain_r.append(2 * c * lam * T.average(np.abs(row)))
    chain_l = np.array(chain_l)
    chain_r = np.array(chain_r)
    worst = int(np.argmax(np.max(chain_l - chain_r, axis=1)))
    rep["w_l2_chain"] = _record(
        Element(space, chain_l[worst]), Element(space, chain_r[worst]), "T w_n^2 <= 2λ T|w_n|"
    )

    for tag, part in zip(("", "_neg") if c == 2 else ("",), d.parts):
        pf_l1 = part.f.norm(1)
        ysum = np.abs(np.cumsum(part.y, axis=0)).max(axis=0)
        rep["y_partial" + tag] = _record(Element(space, ysum), lam * e, "|Σ_{k<=n} y_k| <= λe")
        rep["r_count" + tag] = _record(
            lam * cond_exp(T, Element(space, part.R.masks[-1].astype(float))),
            pf_l1,
            "λ T R_∞ e <= ||f||_1",
        )
        rep["s_count" + tag] = _record(
            lam * cond_exp(T, Element(space, part.S.masks[-1].astype(float))),
            2 * pf_l1,
            "λ T S_∞ e <= 2||f||_1",
        )
        rep["tau_count" + tag] = _record(
            lam * cond_exp(T, Element(space, part.tau.masks[-1].astype(float))),
            3 * pf_l1,
            "λ T Σ Δτ_k e <= 3||f||_1",
        )
    return rep


def to_json(d: GundyDecomposition, report: dict[str, InequalityRecord] | None = None) -> dict:
    def stop_json(P: StoppingTime) -> dict:
        return {"initial": P.initial.tolist(), "masks": P.masks.tolist()}

    parts = []
    for part in d.parts:
        parts.append(
            {
                "R": stop_json(part.R),
                "S": stop_json(part.S),
                "tau": stop_json(part.tau),
                "epsilon": part.epsilon.tolist(),
                "y": part.y.tolist(),
                "g": part.g.tolist(),
                "f": part.f.values.tolist(),
            }
        )
    out = {
        "schema": SCHEMA,
        "lambda": d.lam,
        "path": d.path,
        "u": d.u.values.tolist(),
        "v": d.v.values.tolist(),
        "w": d.w.values.tolist(),
        "parts": parts,
        "reconstruction_error": d.reconstruction_error(),
        "reconstruction": d.reconstruction_error() <= 1e-9,
    }
    if report is not None:
        out["report"] = {k: r.to_json() for k, r in report.items()}
    return out
