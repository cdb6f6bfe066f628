import json

import numpy as np
import pytest
from hypothesis import given, settings

from rieszmart.errors import BadLambda, Mismatch
from rieszmart.gundy import decomposition_report, gundy_decompose, ratio_of, to_json
from rieszmart.martingale import is_martingale, krickeberg, martingale_from_terminal
from rieszmart.riesz_core import make_space

from conftest import le, random_instance, seeds


def oracle(f, lam):
    """Pointwise loop evaluation of the defining formulas for a positive martingale."""
    F, x = f.filtration, f.values
    N, n = x.shape
    df = np.diff(np.vstack([np.zeros(n), x]), axis=0)
    R = [[False] * n] + [[max(x[: k + 1, j]) > lam for j in range(n)] for k in range(N)]
    eps = np.array([[df[k][j] if R[k + 1][j] and not R[k][j] else 0.0 for j in range(n)] for k in range(N)])
    y = np.array([[0.0 if R[k + 1][j] else df[k][j] for j in range(n)] for k in range(N)])

    def T(level, row):
        out = np.empty(n)
        for block in F.level(level).blocks:
            b = list(block)
            out[b] = np.dot(f.space.weights[b], row[b]) / f.space.weights[b].sum()
        return out

    proj = np.array([T(k, eps[k]) for k in range(N)])  # T_{k-1} ε_k, 0-based k
    g = [sum(proj[: m + 1]) for m in range(N)] + [sum(proj)]
    S = [[max(g[i][j] for i in range(m + 1)) > lam for j in range(n)] for m in range(N + 1)]
    tau = [[R[m][j] or S[m][j] for j in range(n)] for m in range(N + 1)]
    du = np.array([[df[k][j] if tau[k][j] else 0.0 for j in range(n)] for k in range(N)])
    dv = np.array([[0.0 if S[k][j] else eps[k][j] - proj[k][j] for j in range(n)] for k in range(N)])
    dw = np.array([[0.0 if S[k][j] else y[k][j] + proj[k][j] for j in range(n)] for k in range(N)])
    return np.cumsum(du, 0), np.cumsum(dv, 0), np.cumsum(dw, 0)


def test_fixture_high_threshold(two_point):
    _, _, f = two_point
    d = gundy_decompose(f, 3.0)
    assert not d.R.masks.any() and not d.S.masks.any() and not d.tau.masks.any()
    assert not d.u.values.any() and not d.v.values.any()
    assert d.w.values.tolist() == f.values.tolist()
    rep = decomposition_report(d, f)
    assert rep["u_l1"].ratio == 0 and rep["v_abs"].ratio == 0


def test_fixture_low_threshold(two_point):
    # f_1 = e already overshoots λ = 0.5: the driver's initial term stops
    # everything at time 0, so all of f goes to u
    _, _, f = two_point
    d = gundy_decompose(f, 0.5)
    assert d.R.masks[0].all() and d.S.initial.all() and d.tau.masks[0].all()
    assert d.epsilon[0].tolist() == [1, 1]
    assert d.g[1].tolist() == [1, 1]
    assert d.u.values.tolist() == f.values.tolist()
    assert not d.v.values.any() and not d.w.values.any()


def test_fixture_intermediate(two_point):
    _, _, f = two_point
    d = gundy_decompose(f, 1.0)
    assert d.R.masks.tolist() == [[False, False], [True, False]]
    assert np.allclose(d.v.values, [[0, 0], [0.5, -0.5]])
    assert np.allclose(d.w.values, [[1, 1], [1.5, 0.5]])
    rep = decomposition_report(d, f)
    assert rep["w_sup"].ratio == pytest.approx(0.75)
    assert rep["y_partial"].ratio == pytest.approx(1.0)


@pytest.mark.parametrize("lam", [0.25, 0.5, 0.75, 1.0, 1.5])
def test_fixture_sup_bound(two_point, lam):
    _, _, f = two_point
    d = gundy_decompose(f, lam)
    assert le(np.abs(d.w.values), 2 * lam)
    assert d.reconstruction_error() == 0


def test_bad_lambda(two_point):
    with pytest.raises(BadLambda):
        gundy_decompose(two_point[2], 0.0)
    with pytest.raises(BadLambda):
        gundy_decompose(two_point[2], -1.0)


def test_report_mismatch(two_point):
    space, F, f = two_point
    other = martingale_from_terminal(F, space.element([0, 2]))
    with pytest.raises(Mismatch):
        decomposition_report(gundy_decompose(f, 1.0), other)


def test_ratio_of():
    s = make_space([1, 1, 1])
    assert ratio_of(s.element([1, 0, 3]), s.element([2, 0, 4])) == 0.75
    assert ratio_of(s.element([0, 1, 0]), s.element([1, 0, 1])) == np.inf
    assert ratio_of(s.zero, s.zero) == 0


def test_json_roundtrip(two_point):
    _, _, f = two_point
    d = gundy_decompose(f, 1.0)
    obj = json.loads(json.dumps(to_json(d, decomposition_report(d, f))))
    assert obj["schema"] == "gundy/1" and obj["reconstruction"]
    assert obj["w"] == d.w.values.tolist()


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_matches_oracle(seed):
    rng, f = random_instance(seed, omega=6, depth=4)
    for lam in (0.3, 1.0, 2.0):
        d = gundy_decompose(f, lam)
        u, v, w = oracle(f, lam)
        assert np.allclose(d.u.values, u, atol=1e-12)
        assert np.allclose(d.v.values, v, atol=1e-12)
        assert np.allclose(d.w.values, w, atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_decomposition_properties(seed):
    rng, f = random_instance(seed, omega=10, depth=5, nonneg=bool(seed % 2))
    lam = float(rng.uniform(0.1, 3))
    d = gundy_decompose(f, lam)
    assert d.reconstruction_error() <= 1e-9
    for m in (d.u, d.v, d.w):
        assert is_martingale(f.filtration, m.values, 1e-9)
    for part in d.parts:
        assert np.all(part.epsilon >= -1e-12)
        assert np.allclose(part.stopped.values, (part.v + part.w).values)
    for name, rec in decomposition_report(d, f).items():
        assert rec.holds(1e-9), name


def test_krickeberg_route(two_point):
    space, F, _ = two_point
    f = martingale_from_terminal(F, space.element([1.5, -1.5]))
    d = gundy_decompose(f, 0.4)
    assert d.path == "krickeberg" and d.constant_factor == 2
    g, h = krickeberg(f)
    assert np.allclose(d.w.values, (gundy_decompose(g, 0.4).w - gundy_decompose(h, 0.4).w).values)
