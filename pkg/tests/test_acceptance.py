"""End-to-end acceptance checks.

Eleven checks, one verdict line each; run ``pytest tests/test_acceptance.py -s``
to see every line.  Each check prints its measured values before asserting so
a failure still reports what was observed.
"""

import math
import statistics
import time

import numpy as np
import pytest

from meancore import (
    FwProblem,
    StreamSummary,
    SparseWeights,
    WeightedSet,
    coreset,
    dim_coreset,
    fast_coreset,
    fw_iterate,
    fw_solve,
    iterations_for_error,
    kde_coreset,
    kernel_density,
    lift,
    mean_embedding,
    normalize,
    one_mean_certificates,
    one_mean_coreset,
    one_mean_cost,
    prob_coreset,
    random_orthogonal,
    subspace_cost,
    summarization_error,
    svd,
    weighted_mean,
    weighted_variance,
)
from meancore import GaussianRandomFeatures
from meancore.harness import ExperimentConfig, run_experiment
from oracles import best_support_distribution


def _verdict(num, name, ok, detail):
    print(f"acceptance {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"acceptance {num} {name}: {detail}"


@pytest.fixture(scope="module")
def ball_instances():
    """50 unit-ball point sets with random simplex weights."""
    rng = np.random.default_rng(20260822)
    out = []
    for _ in range(50):
        pts = rng.standard_normal((1000, 10))
        pts /= np.linalg.norm(pts, axis=1).max()
        out.append((pts, rng.dirichlet(np.ones(1000))))
    return out


def test_acceptance_1_solver_error_bound(ball_instances):
    ok = True
    worst_ratio = 0.0
    worst_time = 0.0
    for eps in (0.5, 0.1, 0.02):
        iters = iterations_for_error(eps)
        nnz_cap = math.ceil(8.0 / eps) + 1
        for pts, w in ball_instances:
            start = time.perf_counter()
            u = fw_solve(FwProblem(pts, w, iters))
            elapsed = time.perf_counter() - start
            res = (w - u.to_dense(1000)) @ pts
            res_sq = float(res @ res)
            worst_ratio = max(worst_ratio, res_sq / eps)
            worst_time = max(worst_time, elapsed)
            ok = ok and res_sq <= eps and u.nnz <= nnz_cap and elapsed < 1.0
    _verdict(
        1,
        "solver error bound",
        ok,
        f"150 runs, max res2/eps={worst_ratio:.3g}, max time={worst_time:.3f}s",
    )


def test_acceptance_2_convergence_rate(ball_instances):
    ok = True
    worst = 0.0
    marks = (8, 16, 80)
    for pts, w in ball_instances:
        for state in fw_iterate(FwProblem(pts, w, max(marks))):
            if state.iteration in marks:
                res = (w - state.x) @ pts
                res_sq = float(res @ res)
                bound = 8.0 / (state.iteration + 3)
                worst = max(worst, res_sq / bound)
                ok = ok and res_sq <= bound
    _verdict(
        2,
        "convergence rate",
        ok,
        f"k in {marks} on 50 instances, max res2/(8/(k+3))={worst:.3f}",
    )


def test_acceptance_3_deterministic_coreset():
    rng = np.random.default_rng(3)
    ok = True
    worst_err = {0.2: 0.0, 0.05: 0.0}
    worst_nnz = {0.2: 0, 0.05: 0}
    for _ in range(50):
        pts = rng.standard_normal((2000, 20)) + rng.uniform(-2, 2, 20)
        w = rng.lognormal(0.0, 1.0, 2000)
        s = WeightedSet(pts, w)
        for eps in (0.2, 0.05):
            u = coreset(s, eps, mode="slow")
            err = summarization_error(s, u)
            worst_err[eps] = max(worst_err[eps], err)
            worst_nnz[eps] = max(worst_nnz[eps], u.nnz)
            ok = ok and err <= eps and u.nnz <= 128.0 / eps

    # support-enumeration oracle: the certificate of any <=3-point
    # distribution matches a from-scratch evaluation of its mean gap
    rng2 = np.random.default_rng(36)
    worst_gap = 0.0
    for _ in range(12):
        s = WeightedSet(rng2.standard_normal((6, 2)), rng2.uniform(0.2, 2.0, 6))
        ns, _ = normalize(s)
        for support_size in (1, 2, 3):
            gap, support, coeffs = best_support_distribution(
                ns.points, np.zeros(2), support_size
            )
            u = SparseWeights(support, coeffs * s.total_weight)
            diff = abs(summarization_error(s, u) - gap)
            worst_gap = max(worst_gap, diff)
            ok = ok and diff <= 1e-9
    _verdict(
        3,
        "deterministic coreset",
        ok,
        f"err<=eps worst {worst_err[0.2]:.3g}@0.2 {worst_err[0.05]:.3g}@0.05, "
        f"nnz worst {worst_nnz[0.2]}@0.2 {worst_nnz[0.05]}@0.05, "
        f"oracle certificate gap {worst_gap:.2e}",
    )


def test_acceptance_4_fast_booster():
    rng = np.random.default_rng(4)
    ok = True
    worst_res = {0.2: 0.0, 0.05: 0.0}
    worst_nnz = {0.2: 0, 0.05: 0}
    last_set = None
    for _ in range(50):
        pts = rng.standard_normal((100000, 20))
        w = rng.lognormal(0.0, 1.0, 100000)
        s = WeightedSet(pts, w)
        last_set = s
        ns, _ = normalize(s)
        lifted = lift(ns)
        target = lifted.weights @ lifted.points
        for eps in (0.2, 0.05):
            u = fast_coreset(lifted.points, lifted.weights, eps)
            gap = target - u.weights @ lifted.points[u.indices]
            res_sq = float(gap @ gap)
            worst_res[eps] = max(worst_res[eps], res_sq)
            worst_nnz[eps] = max(worst_nnz[eps], u.nnz)
            ok = ok and res_sq <= 2.0 * eps and u.nnz <= 8.0 / eps

    def _median_time(mode):
        times = []
        for _ in range(5):
            start = time.perf_counter()
            coreset(last_set, 0.05, mode)
            times.append(time.perf_counter() - start)
        return statistics.median(times)

    slow_t = _median_time("slow")
    fast_t = _median_time("fast")
    ok = ok and fast_t < slow_t
    _verdict(
        4,
        "fast booster",
        ok,
        f"res2 worst {worst_res[0.2]:.3g}@0.2 {worst_res[0.05]:.3g}@0.05 "
        f"(caps 0.4/0.1), nnz worst {worst_nnz[0.2]}@0.2 {worst_nnz[0.05]}@0.05 "
        f"(caps 40/160), median time fast {fast_t*1e3:.1f}ms < slow {slow_t*1e3:.1f}ms",
    )


def test_acceptance_5_randomized_coreset():
    rng = np.random.default_rng(5)
    pts = rng.standard_normal((10000, 5))
    s = WeightedSet(pts)
    mu = weighted_mean(s)
    var = weighted_variance(s)
    eps, delta = 0.25, 0.1
    start = time.perf_counter()
    sizes_ok = True
    hits = 0
    for seed in range(500):
        ps = prob_coreset(pts, eps, delta, seed)
        sizes_ok = sizes_ok and ps.indices.size == 16 and not ps.exact
        gap = ps.mean_of(pts) - mu
        if float(gap @ gap) <= 33.0 * eps * var:
            hits += 1
    elapsed = time.perf_counter() - start
    freq = hits / 500.0
    ok = sizes_ok and freq >= 0.70 and elapsed < 60.0
    _verdict(
        5,
        "randomized coreset",
        ok,
        f"|S|=16 always: {sizes_ok}, success freq {freq:.3f} >= 0.70, "
        f"500 seeds in {elapsed:.2f}s",
    )


def test_acceptance_6_one_mean():
    rng = np.random.default_rng(6)
    eps = 0.2
    s = WeightedSet(rng.standard_normal((300, 5)) + 1.5)
    u = one_mean_coreset(s, eps)
    certs = one_mean_certificates(s, u)
    cert_ok = all(c <= 2.0 * (eps / 4.0) for c in certs)

    mu = weighted_mean(s)
    sigma = math.sqrt(weighted_variance(s))
    max_gap = 0.0
    queries = [mu + rng.uniform(-3, 3, 5) * sigma for _ in range(100)]
    for x in queries:
        true = one_mean_cost(s, x)
        max_gap = max(max_gap, abs(one_mean_cost(s, x, weights=u) - true) / true)
    query_ok = max_gap <= eps

    rot = random_orthogonal(5, 5, seed=60)
    shift = rng.uniform(-4, 4, 5)
    mapped = WeightedSet(1.8 * s.points @ rot.T + shift, s.weights)
    certs_m = one_mean_certificates(mapped, u)
    affine_gap = max(
        abs(a - b) / max(abs(a), 1e-12) if abs(a) > 1e-12 else abs(a - b)
        for a, b in zip(certs, certs_m)
    )
    for x in queries[:20]:
        rel_a = (one_mean_cost(s, x, weights=u) - one_mean_cost(s, x)) / one_mean_cost(s, x)
        y = 1.8 * rot @ x + shift
        rel_b = (one_mean_cost(mapped, y, weights=u) - one_mean_cost(mapped, y)) / one_mean_cost(mapped, y)
        affine_gap = max(affine_gap, abs(rel_a - rel_b) / max(abs(rel_a), 1e-12))
    affine_ok = affine_gap <= 1e-9

    ok = cert_ok and query_ok and affine_ok
    _verdict(
        6,
        "one-mean coreset",
        ok,
        f"certs {certs[0]:.3g}/{certs[1]:.3g}/{certs[2]:.3g} <= 0.1, "
        f"max query gap {max_gap:.3g} <= {eps}, affine drift {affine_gap:.2e} <= 1e-9",
    )


def test_acceptance_7_projection_costs():
    rng = np.random.default_rng(7)
    n, d, k, eps = 2000, 10, 3, 0.3
    a = rng.standard_normal((n, d)) @ np.diag(np.linspace(3.0, 0.3, d))
    ds = dim_coreset(a, k, eps)
    nnz_cap = 128.0 * (5.0 * k / eps) ** 2
    scale = float(np.abs(a).max())
    max_ratio_gap = 0.0
    for trial in range(100):
        x = random_orthogonal(d, d - k, seed=700 + trial)
        ell = rng.standard_normal(d) * scale * rng.uniform(0, 0.5)
        true = subspace_cost(a, ell, x)
        got = subspace_cost(a, ell, x, ds.weights)
        max_ratio_gap = max(max_ratio_gap, abs(1.0 - got / true))
    ok = (not ds.exact) and max_ratio_gap <= 5.0 * eps and ds.nnz <= nnz_cap
    _verdict(
        7,
        "projection costs",
        ok,
        f"max |1-ratio|={max_ratio_gap:.4f} <= {5*eps}, nnz={ds.nnz} <= {nnz_cap:.0f}",
    )


def test_acceptance_8_kernel_density():
    rng = np.random.default_rng(8)
    pts = rng.standard_normal((500, 4))
    eps = 0.3
    u = kde_coreset(pts, eps)
    v = coreset(WeightedSet(pts), eps * eps)
    identity_ok = np.array_equal(u.indices, v.indices) and np.array_equal(
        u.weights, v.weights
    )

    pts2 = np.concatenate(
        [rng.standard_normal((300, 3)), rng.standard_normal((300, 3)) + 3.0]
    )
    fm = GaussianRandomFeatures(3, 64, 1.0, seed=80)
    u2 = kde_coreset(pts2, eps, feature_map=fm)
    mapped_err = summarization_error(WeightedSet(fm(pts2)), u2)
    mapped_ok = mapped_err <= eps * eps

    emb_gap = float(
        np.linalg.norm(mean_embedding(pts2, fm) - mean_embedding(pts2, fm, u2))
    )
    probes = rng.standard_normal((50, 3)) * 2.0
    devs = np.abs(
        kernel_density(pts2, probes, fm) - kernel_density(pts2, probes, fm, weights=u2)
    )
    probe_ok = bool(np.all(devs <= emb_gap + 1e-12))

    ok = identity_ok and mapped_ok and probe_ok
    _verdict(
        8,
        "kernel density",
        ok,
        f"identity path bit-equal: {identity_ok}, mapped err {mapped_err:.3g} <= "
        f"{eps*eps}, max probe dev {devs.max():.3g} <= embedding gap {emb_gap:.3g}",
    )


def test_acceptance_9_svd_kernel():
    rng = np.random.default_rng(9)
    worst_rec = 0.0
    worst_orth = 0.0
    ok = True
    for _ in range(200):
        n = int(rng.integers(1, 201))
        d = int(rng.integers(1, 33))
        a = rng.standard_normal((n, d)) * 10.0 ** rng.uniform(-3, 3)
        f = svd(a)
        norm = float(np.linalg.norm(a))
        rec = float(np.linalg.norm(a - f.reconstruct())) / max(norm, 1e-300)
        m = min(n, d)
        orth = max(
            float(np.abs(f.U.T @ f.U - np.eye(m)).max()),
            float(np.abs(f.V.T @ f.V - np.eye(m)).max()),
        )
        worst_rec = max(worst_rec, rec)
        worst_orth = max(worst_orth, orth)
        ok = ok and rec <= 1e-8 and orth <= 1e-10
    _verdict(
        9,
        "svd kernel",
        ok,
        f"200 matrices, worst reconstruction {worst_rec:.2e} <= 1e-8, "
        f"worst orthonormality {worst_orth:.2e} <= 1e-10",
    )


def test_acceptance_10_streaming():
    rng = np.random.default_rng(10)
    eps = 0.05
    chunks = [rng.standard_normal((1000, 5)) + rng.uniform(-3, 3, 5) for _ in range(32)]
    ss = StreamSummary(eps, 1000)
    for chunk in chunks:
        ss.insert(chunk)
    final = ss.finalize()
    full = WeightedSet(np.concatenate(chunks))
    err = summarization_error(full, final)
    budget = 6.0 * ss.max_reduce_error
    ok = err <= budget and ss.peak_buckets <= 6
    _verdict(
        10,
        "streaming",
        ok,
        f"final err {err:.3g} <= 6*max cert {budget:.3g}, "
        f"peak buckets {ss.peak_buckets} <= 6",
    )


def test_acceptance_11_benchmark_sanity():
    config = ExperimentConfig(
        algorithms=["slow", "uniform"],
        synthetic="heavy-tail:n=10000,d=10,seed=11",
        sizes=[150],
        trials=20,
        timing=False,
    )
    rows = run_experiment(config)
    slow_mean = np.mean([r["error"] for r in rows if r["algorithm"] == "slow"])
    uni_mean = np.mean([r["error"] for r in rows if r["algorithm"] == "uniform"])
    ok = bool(slow_mean < uni_mean)
    _verdict(
        11,
        "benchmark sanity",
        ok,
        f"deterministic mean err {slow_mean:.4g} < uniform mean err {uni_mean:.4g} "
        f"at size 150 over 20 trials",
    )
