"""Acceptance criteria, each run at its stated tolerance.

Every test records a PASS/FAIL line that is printed in the terminal summary
(and immediately, when run with ``-s``).
"""

import time
from collections import Counter
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from conftest import ACCEPTANCE, three_sigma
from degseq import inc_bipartite, inc_gen
from degseq.bipartite import X, Y, bipartite_phase_bounds
from degseq.cli import main as cli_main
from degseq.graph import Multigraph, build_degree_sequence, compute_p2
from degseq.pairing import generate_pairing, project
from degseq.relaxation import iterated_probability, random_family, relax, relax_probability
from degseq.switching import (
    apply_d_switching,
    apply_l_switching,
    b_d_1,
    b_l_1,
    phase_bounds,
    sample_d_candidate,
    sample_l_candidate,
)
from degseq.verification import (
    ExactSmallBounds,
    chi_square_uniformity,
    enumerate_bipartite_graphs,
    enumerate_graphs,
    oracle_b,
    oracle_count_switchings,
    simple_two_paths,
)
from helpers import bipartite_corpus, random_degrees


def record(key, ok, detail=""):
    verdict = "PASS" if ok else "FAIL"
    ACCEPTANCE[key] = (verdict, detail)
    print(f"CRITERION {key}: {verdict}  {detail}")


def capped_corpus(rng, count, n_hi=14):
    """Projected pairings with no multiplicity >= 3, no double loop,
    m1 <= M2/M and m2 <= (M2/M)^2."""
    out = []
    while len(out) < count:
        ds = build_degree_sequence(random_degrees(rng, n_lo=5, n_hi=n_hi, d_hi=6))
        if ds.M2 == 0:
            continue
        P = generate_pairing(ds, rng)
        prof = P.profile
        cap = Fraction(ds.M2, ds.M)
        if prof.has_bad_multiplicity or prof.m1 > cap or prof.m2 > cap * cap:
            continue
        out.append((ds, project(P)))
    return out


# -- 1 ----------------------------------------------------------------------------


def test_c1_uniformity_general():
    U = enumerate_graphs([2, 2, 2, 2])
    assert len(U) == 3
    ds = build_degree_sequence([2, 2, 2, 2])
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    keys = [inc_gen(ds, rng)[0].key() for _ in range(30000)]
    elapsed = time.perf_counter() - start
    rep = chi_square_uniformity(U.tally(keys), alpha=0.001)
    ok = rep.passed and rep.df == 2 and elapsed < 10
    record("1", ok, f"chi2={rep.statistic:.2f} crit={rep.critical:.2f} df={rep.df} time={elapsed:.2f}s")
    assert rep.df == 2
    assert rep.passed
    assert elapsed < 10


# -- 2 ----------------------------------------------------------------------------


@pytest.fixture(scope="module")
def c2_run():
    degrees = [3] * 6
    U = enumerate_graphs(degrees)
    rng = np.random.default_rng(2002)
    keys, steps_l, steps_d = [], 0, 0
    for _ in range(70 * len(U)):
        g, stats = inc_gen(degrees, rng)
        keys.append(g.key())
        steps_l += stats.switching_steps_l
        steps_d += stats.switching_steps_d
    rep = chi_square_uniformity(U.tally(keys), alpha=0.001)
    return U, rep, steps_l, steps_d


def test_c2_uniformity(c2_run):
    U, rep, steps_l, steps_d = c2_run
    fired = steps_l > 0 and steps_d > 0
    record(
        "2",
        rep.passed and fired,
        f"|U|={len(U)} chi2={rep.statistic:.2f} crit={rep.critical:.2f} "
        f"l-steps={steps_l} d-steps={steps_d} (phases cannot run here, see README)",
    )
    assert len(U) == 70
    assert rep.passed


@pytest.mark.xfail(
    strict=True,
    reason="3-regular on 6 vertices has 22*Delta^3 >= M2, so both caps are 0 and neither phase "
    "can run; K_{3,3} also has no d-switching preimage, so no correct bound could enable it",
)
def test_c2_phases_fired(c2_run):
    _, _, steps_l, steps_d = c2_run
    assert steps_l > 0 and steps_d > 0


def test_c2_supplement_phases_forced():
    """Both phases exercised: 2-regular on 7 vertices with exact enumerated bounds."""
    degrees = [2] * 7
    eb = ExactSmallBounds(degrees, 1, 1)
    U = enumerate_graphs(degrees)
    rng = np.random.default_rng(2003)
    keys, steps_l, steps_d = [], 0, 0
    for _ in range(70 * len(U)):
        g, stats = inc_gen(degrees, rng, thresholds=eb.thresholds, bounds=eb)
        keys.append(g.key())
        steps_l += stats.switching_steps_l
        steps_d += stats.switching_steps_d
    rep = chi_square_uniformity(U.tally(keys), alpha=0.001)
    ok = rep.passed and steps_l > 0 and steps_d > 0
    record(
        "2 supplement",
        ok,
        f"2-regular n=7 |U|={len(U)} chi2={rep.statistic:.2f} crit={rep.critical:.2f} "
        f"l-steps={steps_l} d-steps={steps_d}",
    )
    assert ok


# -- 3 ----------------------------------------------------------------------------


def test_c3_bipartite_uniformity():
    s = t = (2, 1, 1)
    U = enumerate_bipartite_graphs(s, t)
    rng = np.random.default_rng(3003)
    n = 200 * len(U)
    keys = [inc_bipartite((s, t), rng)[0].key() for _ in range(n)]
    rep = chi_square_uniformity(U.tally(keys), alpha=0.001)
    record("3", rep.passed, f"|U|={len(U)} samples={n} chi2={rep.statistic:.2f} crit={rep.critical:.2f}")
    assert rep.passed


# -- 4 ----------------------------------------------------------------------------


def test_c4_oracle_equivalence():
    rng = np.random.default_rng(4004)
    checked = mismatches = 0
    for ds, G in capped_corpus(rng, 400):
        paths = simple_two_paths(G)
        rng.shuffle(paths)
        for path in paths[:3]:
            path = tuple(path)
            checked += 1
            mismatches += b_l_1(G, path) != oracle_b(G, path, "ell")
            mismatches += b_d_1(G, path) != oracle_b(G, path, "dee")
    # frequency of valid candidates on fixed instances
    freq_ok = True
    details = []
    instances = [
        ("ell", [(0, 0), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (7, 1), (7, 4), (0, 7)], sample_l_candidate),
        ("dee", [(0, 7), (0, 7), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4)], sample_d_candidate),
    ]
    for kind, edges, sample in instances:
        G = Multigraph.from_edges(8, edges)
        fbar = G.m1 * G.M**2 if kind == "ell" else 2 * G.m2 * G.M**2
        f = oracle_count_switchings(G, kind)
        trials = 100_000
        hits = sum(sample(G, rng) is not None for _ in range(trials))
        p = f / fbar
        ok = abs(hits / trials - p) < three_sigma(p, trials)
        freq_ok &= ok
        details.append(f"{kind}: f/fbar={p:.4f} observed={hits / trials:.4f}")
    ok = checked >= 500 and mismatches == 0 and freq_ok
    record("4", ok, f"instances={checked} mismatches={mismatches}; " + "; ".join(details))
    assert checked >= 500
    assert mismatches == 0
    assert freq_ok


# -- 5 ----------------------------------------------------------------------------


def test_c5_bound_lemmas():
    rng = np.random.default_rng(5005)
    violations = Counter()
    probs_ok = True
    checked = 0
    for ds, G in capped_corpus(rng, 300, n_hi=10):
        M, M2, D = ds.M, ds.M2, ds.max_degree
        m1, m2 = G.m1, G.m2
        pb = phase_bounds(ds, m1, m2)
        b0 = oracle_b(G, (), "ell")
        violations["b0<=M2"] += not b0 <= M2
        violations["lower b_l0"] += not pb.b_l0 <= b0
        if m1 == 0:
            violations["lower b_d0"] += not pb.b_d0 <= b0
        for path in simple_two_paths(G):
            checked += 1
            bl = oracle_b(G, path, "ell")
            bd = oracle_b(G, path, "dee")
            violations["b_l1<=M"] += not bl <= M
            violations["lower b_l1"] += not pb.b_l1 <= bl
            violations["b_d1<=M2"] += not bd <= M2
            if m1 == 0:
                violations["lower b_d1"] += not pb.b_d1 <= bd
            if pb.b_l0 > 0 and pb.b_l1 > 0 and bl > 0 and b0 > 0:
                p = Fraction(pb.b_l0 * pb.b_l1, b0 * bl)
                probs_ok &= 0 <= p <= 1
        if m1:
            f = oracle_count_switchings(G, "ell")
            violations["f_l<=fbar"] += not f <= pb.f_bar_l
            lo = Fraction(pb.f_bar_l) * (1 - Fraction(11 * D * D - 4 * D + 4, M))
            violations["f_l lower"] += not (lo < 0 or lo <= f)
            probs_ok &= 0 <= Fraction(f, pb.f_bar_l) <= 1
        elif m2:
            f = oracle_count_switchings(G, "dee")
            violations["f_d<=fbar"] += not f <= pb.f_bar_d
            lo = Fraction(pb.f_bar_d) * (1 - Fraction(12 * D * D - 4 * D + 8, M))
            violations["f_d lower"] += not (lo < 0 or lo <= f)
            probs_ok &= 0 <= Fraction(f, pb.f_bar_d) <= 1
    bad = {k: v for k, v in violations.items() if v}
    for bds, G in bipartite_corpus(np.random.default_rng(5006), 100):
        pb = bipartite_phase_bounds(bds, G.m2)
        b0 = oracle_b(G, (), "dee", centre_part=Y)
        bad_bip = not (pb.b_d0 <= b0 <= bds.T2)
        for y in range(bds.n_x, G.n):
            for x1, x2 in permutations(G.simple_neighbors(y), 2):
                b1 = oracle_b(G, (x1, y, x2), "dee", centre_part=X)
                bad_bip |= not (pb.b_d1 <= b1 <= bds.S2)
        if G.m2:
            f = oracle_count_switchings(G, "dee_bipartite")
            M, D = bds.M, bds.max_degree
            lo = Fraction(pb.f_bar_d) * (1 - Fraction(8 * G.m2 + 6 * D * D + 20 * D, M))
            bad_bip |= not (f <= pb.f_bar_d and (lo < 0 or lo <= f))
        if bad_bip:
            bad["bipartite"] = bad.get("bipartite", 0) + 1
    ok = not bad and probs_ok
    record("5", ok, f"anchors={checked} violations={bad or 0} probabilities_in_[0,1]={probs_ok}")
    assert not bad
    assert probs_ok


# -- 6 ----------------------------------------------------------------------------


def test_c6_relaxation_lemma():
    rng = np.random.default_rng(6006)
    worst = 0.0
    failures = 0
    mismatched = 0
    for _ in range(20):
        fam = random_family(rng, max_ground=50, depth=3)
        counter = fam.counter()
        # exact agreement of the collapsed and iterated probabilities per ground element
        collapsed, iterated = Counter(), Counter()
        for F in fam.top:
            collapsed[F.ground] += relax_probability(F, counter)
            iterated[F.ground] += iterated_probability(F, counter)
        mismatched += collapsed != iterated
        index = {g: i for i, g in enumerate(fam.ground)}
        counts = [0] * len(fam.ground)
        top = fam.top
        for _ in range(100_000):
            g = relax(top[int(rng.integers(len(top)))], counter, rng)
            if g is not None:
                counts[index[g]] += 1
        rep = chi_square_uniformity(counts, alpha=0.001)
        failures += not rep.passed
        worst = max(worst, rep.statistic / rep.critical)
    ok = failures == 0 and mismatched == 0
    record("6", ok, f"families=20 chi2_failures={failures} worst_stat/crit={worst:.3f} exact_mismatches={mismatched}")
    assert mismatched == 0
    assert failures == 0


# -- 7 ----------------------------------------------------------------------------


def test_c7_p2_cache_coherence():
    rng = np.random.default_rng(7007)
    switchings = mismatches = 0
    while switchings < 10_000:
        ds = build_degree_sequence(random_degrees(rng, n_lo=15, n_hi=40, d_hi=8))
        G = project(generate_pairing(ds, rng))
        for _ in range(2000):
            if G.m1:
                a = sample_l_candidate(G, rng)
                if a is not None:
                    apply_l_switching(G, a)
            elif G.m2:
                a = sample_d_candidate(G, rng)
                if a is not None:
                    apply_d_switching(G, a)
            else:
                break
            if a is not None:
                switchings += 1
                mismatches += G.p2 != compute_p2(G)
    record("7", mismatches == 0, f"switchings={switchings} mismatches={mismatches}")
    assert mismatches == 0


# -- 8 ----------------------------------------------------------------------------


def test_c8_linear_time():
    means = {}
    for n in (10**5, 10**6):
        ds = build_degree_sequence([4] * n)
        times = []
        for seed in range(10):
            start = time.perf_counter()
            inc_gen(ds, seed)
            times.append(time.perf_counter() - start)
        means[n] = float(np.mean(times))
    ratio = means[10**6] / means[10**5]
    ok = 4 <= ratio <= 25 and means[10**6] < 60
    record("8", ok, f"mean 1e5={means[10**5]:.3f}s mean 1e6={means[10**6]:.3f}s ratio={ratio:.1f}")
    assert 4 <= ratio <= 25
    assert means[10**6] < 60


# -- 9 ----------------------------------------------------------------------------


def test_c9_restarts_bounded():
    ds = build_degree_sequence([4] * 10**4)
    restarts = [inc_gen(ds, 9000 + i)[1].restarts for i in range(100)]
    mean = float(np.mean(restarts))
    record("9", mean <= 5, f"mean restarts={mean:.2f} max={max(restarts)}")
    assert mean <= 5


# -- 10 ---------------------------------------------------------------------------


def test_c10_determinism(tmp_path, capsys):
    outs = []
    for i in range(2):
        p = tmp_path / f"run{i}.jsonl"
        code = cli_main(["gen", "--regular", "4", "--n", "5000", "--samples", "4", "--seed", "1010", "--format", "jsonl", "-o", str(p)])
        assert code == 0
        outs.append(p.read_bytes())
    a, _ = inc_gen([3] * 1000 + [5] * 100, 42)
    b, _ = inc_gen([3] * 1000 + [5] * 100, 42)
    bip = [inc_bipartite(([3] * 40, [4] * 30), 8)[0].key() for _ in range(2)]
    ok = outs[0] == outs[1] and a.key() == b.key() and bip[0] == bip[1]
    record("10", ok, f"cli bytes={len(outs[0])} identical={outs[0] == outs[1]}")
    assert ok
