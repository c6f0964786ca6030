"""Shared fixtures and instance generators for the test suite."""

from __future__ import annotations

import pytest

from ltlpredict.kripke import KripkeStructure, decode_kripke, random_kripke
from ltlpredict.ltl import parse_ltl, random_formula
from ltlpredict.rng import SplitMix64

K0_TEXT = "0000100100101110110122124303243"
F1_TEXT = "!X((!F((!p&q|r)U(p|!q|r)))U(F(p&q&!r)))"
F2_TEXT = "X!((F(G!(!p|!q&r)))U((p&q|r)U(!p|q&r)))"


def random_instance(rng: SplitMix64, n_states: int, length: int, n_props: int = 3):
    """A random total structure with n..floor(1.6 n) transitions and a formula."""
    n_trans = n_states + rng.randbelow(int(1.6 * n_states) - n_states + 1)
    k = random_kripke(n_states, n_props, n_trans, rng)
    return k, random_formula(length, n_props, rng)


def self_loop(label: tuple[int, ...]) -> KripkeStructure:
    return KripkeStructure(1, len(label), (label,), ((0, 0),))


@pytest.fixture
def k0() -> KripkeStructure:
    return decode_kripke(K0_TEXT, 5, 3)


@pytest.fixture
def f1():
    return parse_ltl(F1_TEXT)


@pytest.fixture
def f2():
    return parse_ltl(F2_TEXT)
