"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines in
order (they are also printed without ``-s``).
"""

import json
import time

import pytest

from thintree import cli
from thintree.clustering import local_minima
from thintree.generators import barbell, random_weighted_graph
from thintree.formats import format_edge_list
from thintree.oracles import (
    brute_force_optimum, exhaustive_instances, exhaustive_suite, pinch_suite, random_instances,
    random_suite, replay_trace,
)
from thintree.shift_engine import ThinConfig, is_weakly_reducible_exhaustive, run_thin
from thintree.tilo import tilo_shift
from thintree.tree_position import EPS, WidthProfile, caterpillar_position, lex_compare

from itertools import permutations

SEEDS = range(20)


def announce(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {k}] {'PASS' if ok else 'FAIL'}: {detail}")


def tagged(failures, *tags):
    return [f for f in failures if any(f"[{t}]" in f for t in tags)]


@pytest.fixture(scope="module")
def oracle_run():
    t0 = time.perf_counter()
    summaries = [exhaustive_suite(n, SEEDS, EPS) for n in (4, 5, 6)]
    summaries.append(random_suite(200, 12, seed=0, eps=EPS))
    seconds = time.perf_counter() - t0
    failures = [f for s in summaries for f in s.failures]
    return summaries, failures, seconds


@pytest.fixture(scope="module")
def barbell_runs():
    g = barbell()
    t0 = time.perf_counter()
    best, count = brute_force_optimum(g)
    runs = {}
    for order in permutations(range(6)):
        start = caterpillar_position(g, order)
        runs[order] = (start, run_thin(start))
    seconds = time.perf_counter() - t0
    return best, count, runs, seconds


@pytest.fixture(scope="module")
def thin_runs():
    """Thin every criterion-3 start and replay each trace."""
    iters, cap_hits, replay_fail, steps = [], 0, [], 0
    cfg = ThinConfig()
    instances = [inst for n in (4, 5, 6) for inst in exhaustive_instances(n, SEEDS)]
    instances += list(random_instances(200, 12, seed=0))
    for label, start in instances:
        res = run_thin(start, cfg)
        iters.append(res.iterations)
        cap_hits += res.iterations > cfg.max_iterations
        k, fails = replay_trace(start, res.trace)
        steps += k
        replay_fail.extend(f"{label}: {f}" for f in fails)
    return len(instances), iters, cap_hits, replay_fail, steps


def test_criterion_1_profile_order(capsys):
    thinner = WidthProfile((3, 3, 3, 2, 2, 2, 2))
    wider = WidthProfile((3, 3, 3, 3, 2, 2, 2))
    ok = thinner < wider and not wider < thinner and thinner.compare(wider) == -1
    announce(capsys, 1, ok, "(3,3,3,2,2,2,2) < (3,3,3,3,2,2,2)")
    assert ok


def test_criterion_2_tilo_shift_fixtures(capsys):
    seq = tuple(range(8))
    a, b = tilo_shift(seq, 2, 5), tilo_shift(seq, 5, 2)
    ok = a == (0, 1, 3, 4, 5, 2, 6, 7) and b == (0, 1, 5, 2, 3, 4, 6, 7)
    announce(capsys, 2, ok, f"2->5 gives {a}, 5->2 gives {b}")
    assert ok


def test_criterion_3_quotient_oracles(capsys, oracle_run):
    summaries, failures, seconds = oracle_run
    bad = tagged(failures, "quotient", "structure")
    pairs = sum(s.pairs for s in summaries)
    positions = sum(s.instances for s in summaries)
    ok = not bad and seconds < 60
    announce(capsys, 3, ok, f"{positions} positions, {pairs} ordered pairs, {len(bad)} mismatches, "
                            f"{seconds:.1f}s (limit 60s)")
    for s in summaries:
        with capsys.disabled():
            print(f"    {s.line()}")
    assert not bad, bad[:5]
    assert seconds < 60


def test_criterion_4_reduction_soundness(capsys, oracle_run):
    _, failures, _ = oracle_run
    bad = tagged(failures, "prediction", "soundness")
    announce(capsys, 4, not bad, f"{len(bad)} prediction or soundness violations")
    assert not bad, bad[:5]


def test_criterion_5_identities(capsys, oracle_run):
    summaries, failures, _ = oracle_run
    bad = tagged(failures, "identity")
    positions = sum(s.instances for s in summaries)
    announce(capsys, 5, not bad, f"{len(bad)} identity violations over {positions} positions")
    assert not bad, bad[:5]


def test_criterion_6_barbell_optimum(capsys, barbell_runs):
    best, count, runs, seconds = barbell_runs
    not_thin = [o for o, (_, r) in runs.items()
                if not r.position.certified or is_weakly_reducible_exhaustive(r.position) is not None]
    optimal = [o for o, (_, r) in runs.items() if lex_compare(r.position.profile().widths, best) == 0]
    canon = runs[(0, 3, 1, 4, 2, 5)][1].position
    canon_opt = lex_compare(canon.profile().widths, best) == 0
    splits_ok = False
    for m in local_minima(canon):
        side = canon.side_mask(m.edge)
        if m.width == 1 and {side, 63 ^ side} == {0b000111, 0b111000}:
            splits_ok = True
    ok = not not_thin and canon_opt and splits_ok and seconds < 30
    announce(capsys, 6, ok, f"optimum {tuple(best)} attained by {count} of 105 shapes; "
                            f"{len(runs) - len(not_thin)}/720 starts strongly irreducible; "
                            f"{len(optimal)}/720 = {len(optimal) / 720:.3f} reach the optimum; "
                            f"interleaved start optimal={canon_opt} split={splits_ok}; {seconds:.1f}s (limit 30s)")
    assert not not_thin
    assert canon_opt and splits_ok
    assert seconds < 30


def test_criterion_7_pinch_clusters(capsys):
    s = pinch_suite(50, 7, seed=0)
    bad = tagged(s.failures, "pinch")
    ok = not bad and s.seconds < 300 and s.pairs > 0
    announce(capsys, 7, ok, f"{s.instances} graphs, {s.pairs} local-minimum cuts, {len(bad)} counterexamples, "
                            f"{s.seconds:.1f}s (limit 300s)")
    assert s.pairs > 0
    assert not bad, bad[:5]
    assert s.seconds < 300


def _cli_report(tmp_path, graph_file, extra, tag):
    out = tmp_path / f"{tag}.json"
    code = cli.main(["cluster", "--input", str(graph_file), "--json-out", str(out), *extra])
    assert code == 0
    return out.read_bytes()


def test_criterion_8_termination_and_determinism(capsys, tmp_path, thin_runs, barbell_runs):
    n_inst, iters, cap_hits, _, _ = thin_runs
    _, _, runs, _ = barbell_runs
    bar_iters = max(r.iterations for _, r in runs.values())
    files = {"barbell": barbell(), "random12": random_weighted_graph(12, 77), "random20": random_weighted_graph(20, 5)}
    mismatches = []
    for name, g in files.items():
        path = tmp_path / f"{name}.tsv"
        path.write_text(format_edge_list(g))
        for seed in (0, 7):
            base = ["--init", "random", "--seed", str(seed)]
            variants = {}
            for workers in (None, 1, 2, 8):
                extra = base + ([] if workers is None else ["--parallel", str(workers)])
                first = _cli_report(tmp_path, path, extra, f"{name}-{seed}-{workers}-a")
                second = _cli_report(tmp_path, path, extra, f"{name}-{seed}-{workers}-b")
                if first != second:
                    mismatches.append(f"{name} seed={seed} workers={workers}: repeated runs differ")
                report = json.loads(first)
                report["config"].pop("parallel")
                variants[workers] = report
            if any(v != variants[None] for v in variants.values()):
                mismatches.append(f"{name} seed={seed}: parallel scan changed the result")
    ok = cap_hits == 0 and not mismatches
    announce(capsys, 8, ok, f"{n_inst} criterion-3 starts thinned, max {max(iters)} shifts; barbell max {bar_iters}; "
                            f"{len(mismatches)} report mismatches across repeats and 1/2/8 workers")
    assert cap_hits == 0
    assert not mismatches, mismatches


def test_criterion_9_incremental_cache(capsys, oracle_run, thin_runs, barbell_runs):
    _, failures, _ = oracle_run
    bad = tagged(failures, "cache")
    _, _, _, replay_fail, steps = thin_runs
    _, _, runs, _ = barbell_runs
    bar_steps = 0
    for start, res in runs.values():
        k, fails = replay_trace(start, res.trace)
        bar_steps += k
        bad.extend(fails)
    pinch = pinch_suite(50, 7, seed=0)
    bad += replay_fail + tagged(pinch.failures, "cache")
    announce(capsys, 9, not bad, f"{len(bad)} cache or off-path mismatches (oracle shifts, {steps} thinning steps, "
                                 f"{bar_steps} barbell steps, pinch-suite traces)")
    assert not bad, bad[:5]
