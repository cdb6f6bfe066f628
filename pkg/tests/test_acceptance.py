"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (shown even
without ``-s``) before asserting.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from rieszmart.harness import acceptance as acc
from rieszmart.harness.cli import main
from rieszmart.harness.suite import negative_controls, run_checks
from rieszmart.riemann import integrable_product, rademacher
from rieszmart.riesz_core import make_space

BASELINE = json.loads((Path(__file__).parent / "data" / "baseline.json").read_text())


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")
        return ok

    return emit


def _summary(rep, names):
    return ", ".join(
        f"{n} {rep.check(n).failures}/{rep.check(n).trials} max={rep.check(n).max_ratio:.3g}"
        for n in names
    )


@pytest.fixture(scope="module")
def sweep():
    start = time.perf_counter()
    names = acc.RECONSTRUCTION_CHECKS + acc.BOUND_CHECKS + acc.WEAK_TYPE_CHECKS
    rep = run_checks(acc.SWEEP, names)
    return rep, time.perf_counter() - start


def test_1_reconstruction(sweep, report):
    rep, elapsed = sweep
    names = acc.RECONSTRUCTION_CHECKS
    ok = all(rep.check(n).passed and rep.check(n).trials == 1000 for n in names)
    ok &= elapsed < 60
    assert report(1, ok, f"{_summary(rep, names)}; sweep {elapsed:.1f}s")


def test_2_proof_bounds(sweep, report):
    rep, _ = sweep
    ok = all(rep.check(n).passed for n in acc.BOUND_CHECKS)
    assert report(2, ok, _summary(rep, acc.BOUND_CHECKS))


def test_3_weak_type(sweep, report):
    rep, _ = sweep
    ok = True
    for n in acc.WEAK_TYPE_CHECKS:
        rec = rep.check(n)
        ok &= rec.passed and not acc.regressed(rec.max_ratio, BASELINE[n])
    base = ", ".join(f"{n} baseline={BASELINE[n]:.4f}" for n in acc.WEAK_TYPE_CHECKS)
    assert report(3, ok, f"{_summary(rep, acc.WEAK_TYPE_CHECKS)}; {base}")


def test_4_lemmas(report):
    rep = run_checks(acc.SWEEP, acc.LEMMA_CHECKS)
    ok = all(rep.check(n).passed and rep.check(n).trials == 1000 for n in acc.LEMMA_CHECKS)
    assert report(4, ok, _summary(rep, acc.LEMMA_CHECKS))


def test_5_riemann(report):
    refine = run_checks(acc.SWEEP, ("riemann_refinement",)).check("riemann_refinement")
    holder = run_checks(acc.HOLDER, ("holder",)).check("holder")
    gap = run_checks(acc.POWER_GAP, ("power_gap",)).check("power_gap")
    s = make_space([1.0])
    R = [rademacher(n, s) for n in range(1, 11)]
    ortho = all(
        integrable_product(R[i], R[j]).tolist() == [1.0 if i == j else 0.0]
        for i in range(10)
        for j in range(10)
    )
    ok = refine.passed and holder.passed and gap.passed and ortho
    ok &= holder.trials == 500 and gap.trials == 200
    detail = (
        f"refinement {refine.failures}/{refine.trials}, orthonormal n,m<=10 {ortho}, "
        f"holder {holder.failures}/{holder.trials} max={holder.max_ratio:.3g}, "
        f"power gap {gap.failures}/{gap.trials} max={gap.max_ratio:.3g}"
    )
    assert report(5, ok, detail)


def test_6_rademacher_chain(report):
    rep = run_checks(acc.CHAIN, acc.CHAIN_CHECKS)
    step1, ratio = rep.check("rademacher_step1"), rep.check("maximal_vs_square_ratio")
    base = BASELINE["maximal_vs_square_ratio"]
    ok = step1.passed and step1.trials == 500 and ratio.passed
    ok &= np.isfinite(ratio.max_ratio) and not acc.regressed(ratio.max_ratio, base)
    assert report(6, ok, f"{_summary(rep, acc.CHAIN_CHECKS)}; baseline={base:.4f}")


def test_7_negative_controls(report):
    recs = negative_controls(acc.SWEEP)
    corrupt = run_checks(
        acc.HarnessConfig(seed=42, depth=3, trials=50, corrupt=True), ("martingale_property",)
    ).check("martingale_property")
    ok = all(r.passed for r in recs) and corrupt.failures == corrupt.trials
    detail = ", ".join(f"{r.name} {'ok' if r.passed else 'missed'}" for r in recs)
    assert report(7, ok, f"{detail}; corrupted sweep rejected {corrupt.failures}/{corrupt.trials}")


def test_8_determinism(report, tmp_path, capsys):
    outs = []
    for _ in range(2):
        assert main(["verify", "--seed", "42"]) == 0
        outs.append(capsys.readouterr().out.encode())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    assert report(8, ok, f"two runs of verify --seed 42, {len(outs[0])} bytes, identical={ok}")
