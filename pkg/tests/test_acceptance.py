"""Exit criteria. Each test prints one PASS/FAIL line with its timing.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import itertools
import json
import random
import re
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from eventtree.prob import EXACT, FLOAT, ProbabilityModel, prob_node, two_state
from eventtree.sample_space import NULL_STATE, n_product, oracle_prob, product, union
from eventtree.saifi import (
    DEFAULT_RATES,
    REPORTED_SAIFI,
    GridStudy,
    binding_sweep,
    monte_carlo,
    oracle_group_probabilities,
    power_grid_study,
)
from eventtree.transform import ReductionSpec, partition, reduce, reduce_many
from eventtree.tree import AtomicEvent, Node, Path, branch_product, generate, paths, semantics, wrap_atomic

from conftest import ACCEPTANCE_LINES, random_world
from test_saifi import REDUCED_LEAVES

pytestmark = pytest.mark.acceptance

FLOAT_TOL = 1e-12


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed >= limit:
            raise AssertionError(f"took {elapsed:.2f}s, limit {limit}s")
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"[{status}] AC{number:<2d} {title} ({elapsed:.2f}s, limit {limit:g}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def complete_paths(names):
    lv = two_state(names)
    return paths(lv[:-1], lv[-1])


def test_ac1_generation_count():
    with criterion(1, "3 components -> 8 paths, 5 -> 32", 1):
        assert len(complete_paths(["C1", "C2", "C3"])) == 8
        assert len(complete_paths(["M1", "M2", "M3", "L1", "L2"])) == 32
        lv = two_state(["C1", "C2", "C3"])
        assert len(wrap_atomic(paths(lv[:-1], lv[-1]))) == 8


def test_ac2_system_failure_equation():
    rng = random.Random(1)
    fig1 = reduce(complete_paths(["C1", "C2", "C3"]), ReductionSpec((7, 6, 5, 4), (AtomicEvent("C1", "down"),)))
    failure = wrap_atomic(partition([3, 4], fig1))
    with criterion(2, "failure of paths {3,4} = P(C1S)P(C2F)P(C3F) + P(C1F), 1000 cases", 5):
        for _ in range(1000):
            p = [Fraction(rng.randint(0, 1000), 1000) for _ in range(3)]
            formula = p[0] * (1 - p[1]) * (1 - p[2]) + (1 - p[0])
            exact = ProbabilityModel.two_state(dict(zip(["C1", "C2", "C3"], p)), EXACT)
            got = prob_node(exact, failure)
            assert got == formula
            assert oracle_prob(exact.world, semantics(exact.world, Node(failure))) == formula

            approx = ProbabilityModel.two_state(dict(zip(["C1", "C2", "C3"], p)), FLOAT)
            got_f = prob_node(approx, failure)
            assert abs(got_f - float(formula)) <= FLOAT_TOL
            assert abs(got_f - oracle_prob(approx.world, semantics(approx.world, Node(failure)))) <= FLOAT_TOL


def test_ac3_totality():
    rng = random.Random(3)
    with criterion(3, "complete two-state tree has probability 1 for 1..8 components", 10):
        for n in range(1, 9):
            names = [f"C{i}" for i in range(n)]
            m = ProbabilityModel.two_state({c: Fraction(rng.randint(0, 97), 97) for c in names}, EXACT)
            lv = two_state(names)
            assert prob_node(m, generate(lv[:-1], lv[-1])) == 1


def _levels(world):
    out = []
    for s in world.spaces:
        names = list(s.states) + ([NULL_STATE] if s.null_mass != 0 else [])
        out.append([AtomicEvent(s.component, x) for x in names])
    return out


def _concrete(world, level):
    return frozenset(world.event(e.component, e.state) for e in level)


def test_ac4_tree_set_equivalence():
    rng = random.Random(4)
    shapes = [s for k in range(1, 5) for s in itertools.product(range(1, 4), repeat=k)]
    assert len(shapes) == 120
    with criterion(4, "tree semantics = set-product union on all 120 shapes (<=4 comps x <=3 states)", 30):
        for shape in shapes:
            w = random_world(rng, shape)
            lv = _levels(w)
            for i, j in itertools.permutations(range(len(lv)), 2):
                lhs = semantics(w, Node(branch_product(lv[i], lv[j])))
                assert lhs == union(product(_concrete(w, lv[i]), _concrete(w, lv[j])))
            forest = generate(lv[:-1], lv[-1])
            tree_side = semantics(w, Node(forest))
            assert tree_side == union(n_product([_concrete(w, l) for l in lv[:-1]], _concrete(w, lv[-1])))
            path_side = semantics(w, Node(wrap_atomic(paths(lv[:-1], lv[-1]))))
            assert semantics(w, Node(generate(lv[:-1], wrap_atomic(lv[-1])))) == path_side == tree_side
            assert oracle_prob(w, tree_side) == 1


def _random_case(rng):
    n = rng.randint(1, 7)
    ps = complete_paths([f"X{i}" for i in range(n)])
    k = rng.randint(1, len(ps))
    idx = sorted(rng.sample(range(len(ps)), k), reverse=True)
    ce = tuple(AtomicEvent(f"X{i}", rng.choice(["up", "down"])) for i in range(rng.randint(0, n)))
    return ps, ReductionSpec(tuple(idx), ce)


def test_ac5_length_and_preservation():
    rng = random.Random(5)
    with criterion(5, "length law and preservation, 1000 cases each", 5):
        for _ in range(1000):
            ps, spec = _random_case(rng)
            assert len(reduce(ps, spec)) == len(ps) - len(spec.indices) + 1
        for _ in range(1000):
            ps, spec = _random_case(rng)
            out = reduce(ps, spec)
            for i in range(min(spec.indices)):
                assert i != spec.indices[-1]
                assert out[i] == ps[i]


def test_ac6_partition_reverse():
    rng = random.Random(6)
    with criterion(6, "partition(reverse m) = reverse(partition m), 1000 cases", 5):
        for _ in range(1000):
            ps, spec = _random_case(rng)
            specs = [spec]
            current = reduce(ps, spec)
            if len(current) > 1 and rng.random() < 0.5:
                idx = sorted(rng.sample(range(len(current)), rng.randint(1, len(current))), reverse=True)
                specs.append(ReductionSpec(tuple(idx), ()))
            reduced = reduce_many(ps, specs)
            m = [rng.randrange(len(reduced)) for _ in range(rng.randint(0, 20))]
            assert partition(m[::-1], reduced) == partition(m, reduced)[::-1]


def test_ac7_grid_reduction():
    with criterion(7, "grid 32 -> 14 paths matching the reduced-tree leaf listing", 1):
        study = GridStudy()
        assert len(study.complete_paths()) == 32
        reduced = study.reduced_paths()
        assert len(reduced) == 14
        assert reduced == REDUCED_LEAVES


def test_ac8_saifi_structure_and_value():
    with criterion(8, "symbolic terms of paths 11/12/6/2; SAIFI = oracle within 1e-12", 1):
        report = power_grid_study(DEFAULT_RATES, 1.0, (250, 100, 50))
        sym = {r.index: r.symbolic for r in report.rows}
        assert sym[11] == "(1 - exp(-lambda_M1*t)) * exp(-lambda_M2*t) * (1 - exp(-lambda_M3*t)) * exp(-lambda_L2*t)"
        assert sym[12] == ("(1 - exp(-lambda_M1*t)) * exp(-lambda_M2*t) * (1 - exp(-lambda_M3*t)) * "
                           "(1 - exp(-lambda_L2*t))")
        assert sym[6] == "exp(-lambda_M1*t) * (1 - exp(-lambda_M2*t)) * (1 - exp(-lambda_M3*t)) * exp(-lambda_L1*t)"
        assert sym[2] == "exp(-lambda_M1*t) * exp(-lambda_M2*t) * (1 - exp(-lambda_L1*t)) * (1 - exp(-lambda_L2*t))"
        assert abs(report.saifi - report.oracle_saifi) <= FLOAT_TOL
        text = report.to_text()
        assert f"SAIFI = {report.saifi:.12g}" in text
        assert "binding: rates per unit time: M1=3, M2=2, M3=1, L1=4, L2=5; t=1" in text
        assert f"delta = {report.saifi - REPORTED_SAIFI:+.12g}" in text
    print(text)
    best = binding_sweep()[0]
    print(f"closest binding to {REPORTED_SAIFI}: {best[2]} t={best[3]:g} -> {best[1]:.12g} "
          f"(|delta| {best[0]:.3g})")


def test_ac9_monte_carlo():
    study = GridStudy()
    with criterion(9, "10^6 samples within 4 standard errors for A, B, C", 60):
        est = monte_carlo(study, samples=1_000_000, seed=2020)
        exact = oracle_group_probabilities(study)
        for g in "ABC":
            p, se = est[g]
            assert abs(p - exact[g]) <= 4 * se, (g, p, exact[g], se)


def test_ac10_cli_determinism(grid_file):
    cmd = [sys.executable, "-m", "eventtree"]
    with criterion(10, "saifi output byte-identical across runs; reduced DOT has 14 leaves", 1):
        a = subprocess.run(cmd + ["saifi", "--model", grid_file], capture_output=True, check=True).stdout
        b = subprocess.run(cmd + ["saifi", "--model", grid_file], capture_output=True, check=True).stdout
        assert a == b and b"SAIFI = " in a
        dot = subprocess.run(cmd + ["export-dot", "--model", grid_file], capture_output=True,
                             check=True, text=True).stdout
        nodes = re.findall(r"^\s+(n\d+) \[", dot, flags=re.M)
        sources = set(re.findall(r"(n\d+) ->", dot))
        assert len([n for n in nodes if n not in sources]) == 14
