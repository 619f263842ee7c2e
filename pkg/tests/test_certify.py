import itertools

import numpy as np
import pytest

from adplab import certify as c
from adplab import phi_engine as pe
from adplab.reduction import bound_constants

P_VALUES = [2.01, 2.1, 2.5, 3.0, 5.0, 8.0]


@pytest.mark.parametrize("p", P_VALUES)
def test_lemma5_and_lemma2_hold(p):
    r5 = c.certify_lemma5(p, 2000)
    rv, rw = c.certify_lemma2(p, 2000)
    for r in (r5, rv, rw):
        assert r.passed and r.worst_margin >= -1e-9
    assert abs(r5.details["margin_u0"]) <= 1e-12 and abs(r5.details["margin_u1"]) <= 1e-12
    assert abs(rv.details["margin_u0"]) <= 1e-12 and abs(rv.details["margin_u1"]) <= 1e-12
    assert abs(rw.details["margin_u0"]) <= 1e-12


def test_lemma5_rejects_broken_inequality():
    # with a positive required slack the equality endpoints must fail
    assert not c.certify_lemma5(3.0, 100, slack=-1e-3).passed


@pytest.mark.parametrize("p", [2.1, 5.0])
def test_reduction_suites(p):
    r4 = c.certify_prop4(p, (2, 4), (2, 8), 8, seed=3)
    r1 = c.certify_cor1(p, (2, 4), (2, 8), 8, seed=3)
    assert r4.passed and r1.passed
    assert r4.grid_or_samples["configurations"] == 32


def naive_tail(x, thr):
    return sum(1 for eps in itertools.product((-1, 1), repeat=len(x)) if np.dot(eps, x) > thr)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_tail_count_matches_naive(n, rng):
    x = rng.normal(size=n)
    for thr in (-0.5, 0.0, 0.7, 2.0):
        assert c.tail_count(x, thr) == naive_tail(x, thr)


@pytest.mark.parametrize("kind", ["equal", "geometric"])
@pytest.mark.parametrize("n", [1, 4, 11])
def test_lemma3_passes_and_is_reproducible(n, kind):
    x = c.lemma3_vectors(n)[kind]
    a = c.certify_lemma3(n, (0.5, 1.0, 2.0), x)
    b = c.certify_lemma3(n, (0.5, 1.0, 2.0), x)
    assert a.passed and a.worst_margin == b.worst_margin


def test_lemma3_cap():
    with pytest.raises(ValueError):
        c.certify_lemma3(25)


def test_prop1_config_has_majority_above_half(rng):
    for extremal in (False, True):
        rc = c.prop1_config(9, 3.0, rng, extremal)
        assert np.count_nonzero(rc.us > 0.5) > 4.5


def test_prop1_small_exact():
    r = c.certify_prop1(2.5, 8, samples=6)
    assert r.passed and r.grid_or_samples["method"] == "exact"
    assert r.details["min_phi"] > 1.0


def test_intro_chain_is_expected_failure():
    r = c.certify_intro_chain(2.05, 4)
    assert r.expected_fail and not r.passed and r.ok
    assert r.details["phi"] < 1.0
    assert r.details["phi"] <= r.details["chain_bound"] <= r.details["final_bound"]


def test_lemma1_large_p_passes_and_small_p_flagged():
    assert c.certify_lemma1(3.0, 2000).passed
    r = c.certify_lemma1(2.1, 2000)
    assert not r.passed and r.expected_fail


@pytest.mark.parametrize("mode", ["uniform", "spiky", "vertex"])
def test_prop2_config_constraints(mode, rng):
    p, n = 3.0, 20
    caps = None
    for _ in range(20):
        rc = c.prop2_config(n, p, rng, mode)
        caps = rc.u_caps(p)
        assert np.all(rc.us <= np.minimum(1.0, caps) + 1e-15)
        assert np.count_nonzero(rc.us > 0.5) <= n // 2
        assert np.any(rc.us > 0.0)
        assert rc.alphas.sum() == pytest.approx(1.0)


def test_prop2_exact_mode_large_p():
    r = c.certify_prop2(8.0, 12, samples=9, enum_cap=16)
    assert r.grid_or_samples["method"] == "exact"
    assert r.passed and r.details["aj_ok"] and r.details["sign_equiv_ok"]


def test_prop2_mc_mode():
    r = c.certify_prop2(3.0, 40, samples=6, mc_samples=128, enum_cap=16)
    assert r.grid_or_samples["method"] == "monte_carlo"
    assert r.details["sign_checks"] > 0


def test_sign_equivalence_on_exact_partials(rng):
    # the sign of each exactly enumerated paired summand follows a_j - alpha_j f(u_j)
    p, n = 2.5, 8
    rc = c.prop2_config(n, p, rng, "uniform")
    signs = np.array(list(itertools.product((-1, 1), repeat=n)), dtype=np.int8)
    a, _ = pe.paired_samples(rc, p, signs)
    inner = (rc.us > 0) & (rc.us < 1)
    fu = pe.f(rc.us[inner], p)
    mm, checked = c._sign_equivalence_mismatches(a[:, inner], rc.alphas[inner], rc.us[inner], p, fu)
    assert checked > 0 and mm == 0


def test_n2_sufficient_decreases_with_p():
    vals = [c.n2_sufficient(p, 2000) for p in (2.5, 3.0, 5.0, 8.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] >= 4.0


def test_bound_constants_feed_prop2():
    assert c.certify_prop2(3.0, 8, samples=3).details["c5"] == bound_constants(3.0).c5


def test_run_all_small():
    cfg = c.SuiteConfig(grid=1000, sample_n_values=(2, 4), sample_dims=(2,), samples_per_n=4,
                        lemma3_n_values=(3,), prop1_n_values=(8,), prop1_configs=2,
                        prop2_n_values=(8,), prop2_configs=3)
    reps = c.run_all([3.0], cfg)
    ids = [r.statement_id for r in reps]
    assert set(ids) == set(c.STATEMENTS)
    assert all(r.ok for r in reps)
    assert c.run_all([], cfg) == []
