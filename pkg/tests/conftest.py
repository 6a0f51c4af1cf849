import random
from fractions import Fraction
from importlib import resources

import pytest

from eventtree import ProbabilityModel
from eventtree.sample_space import OutcomeSpace, WorldModel

# Filled by tests/test_acceptance.py, printed once at the end of the session.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def data_file(name):
    return str(resources.files("eventtree") / "data" / name)


@pytest.fixture
def grid_file():
    return data_file("grid.json")


@pytest.fixture
def fig1_file():
    return data_file("fig1.json")


@pytest.fixture
def fig1_model():
    """C1, C2, C3 with P(up) = 0.9, 0.8, 0.7."""
    return ProbabilityModel.two_state(
        {"C1": Fraction(9, 10), "C2": Fraction(8, 10), "C3": Fraction(7, 10)}
    )


def random_fraction(rng, denominator=97):
    return Fraction(rng.randint(0, denominator), denominator)


def random_space(rng, name, n_states, complete=None):
    """Random rational outcome space; ``complete`` forces zero null mass."""
    if complete is None:
        complete = rng.random() < 0.5
    cuts = sorted(random_fraction(rng) for _ in range(n_states - 1 if complete else n_states))
    if complete:
        edges = [Fraction(0)] + cuts + [Fraction(1)]
    else:
        edges = [Fraction(0)] + cuts
    probs = [b - a for a, b in zip(edges, edges[1:])]
    return OutcomeSpace(name, tuple(f"s{k}" for k in range(n_states)), tuple(probs))


def random_world(rng, shape, complete=None):
    return WorldModel(tuple(random_space(rng, f"X{i}", n, complete) for i, n in enumerate(shape)))


@pytest.fixture
def rng():
    return random.Random(20200501)
