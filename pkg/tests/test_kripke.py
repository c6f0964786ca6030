import itertools

import pytest

from ltlpredict.kripke import (
    KripkeFormatError,
    KripkeStructure,
    decode_kripke,
    decode_kripke_ext,
    encode_kripke,
    encode_kripke_ext,
    random_kripke,
)
from ltlpredict.rng import SplitMix64

from conftest import K0_TEXT


def test_decode_k0(k0):
    assert k0.labels == ((0, 0, 0), (0, 1, 0), (0, 1, 0), (0, 1, 0), (1, 1, 1))
    assert k0.transitions == ((0, 1), (1, 0), (1, 2), (2, 1), (2, 4), (3, 0), (3, 2), (4, 3))
    assert k0.initial == 0 and k0.n_transitions == 8


def test_encode_k0(k0):
    assert encode_kripke(k0) == K0_TEXT


def test_single_state():
    k = decode_kripke("10000", 1, 3)
    assert k.labels == ((1, 0, 0),) and k.transitions == ((0, 0),)
    assert encode_kripke(k) == "10000"


@pytest.mark.parametrize(
    "text, n, fragment",
    [
        (K0_TEXT[:-1], 5, "length"),
        ("000010010010111011012212430324", 5, "length"),
        ("0000100100101110110122124303x43", 5, "digit"),
        ("0020100100101110110122124303243", 5, "label bit"),
        ("0000100100101110110122124303293", 5, "state"),
        ("000010010010111011012212430324301", 5, "duplicate"),
        ("0000100100101110110122124303203", 5, "successor"),
        ("000000000", 3, "transition"),
    ],
)
def test_decode_errors(text, n, fragment):
    with pytest.raises(KripkeFormatError) as info:
        decode_kripke(text, n, 3)
    assert fragment in str(info.value)


def test_decode_error_position():
    with pytest.raises(KripkeFormatError) as info:
        decode_kripke("0000100100101110110122124303x43", 5, 3)
    assert info.value.position == 28


def test_structure_invariants_rejected():
    with pytest.raises(ValueError):
        KripkeStructure(2, 1, ((0,), (1,)), ((0, 1),))  # state 1 has no successor
    with pytest.raises(ValueError):
        KripkeStructure(1, 1, ((0,),), ((0, 0), (0, 0)))
    with pytest.raises(ValueError):
        KripkeStructure(1, 1, ((2,),), ((0, 0),))


def test_encode_rejects_large_structures():
    k = random_kripke(11, 1, 11, SplitMix64(0))
    with pytest.raises(KripkeFormatError):
        encode_kripke(k)


def test_round_trip_random():
    rng = SplitMix64(42)
    for _ in range(10_000):
        n = 1 + rng.randbelow(10)
        t = n + rng.randbelow(n * n - n + 1)
        k = random_kripke(n, 3, t, rng)
        assert decode_kripke(encode_kripke(k), n, 3) == k


def test_round_trip_exhaustive_small():
    """Every labelling and every total relation (in canonical order) for n <= 3, one prop."""
    count = 0
    for n in (1, 2, 3):
        pairs = [(s, t) for s in range(n) for t in range(n)]
        for labels in itertools.product((0, 1), repeat=n):
            for mask in range(1, 1 << len(pairs)):
                trans = tuple(p for i, p in enumerate(pairs) if mask >> i & 1)
                if {s for s, _ in trans} != set(range(n)):
                    continue
                k = KripkeStructure(n, 1, tuple((b,) for b in labels), trans)
                assert decode_kripke(encode_kripke(k), n, 1) == k
                count += 1
    assert count == 2 * 1 + 4 * 9 + 8 * 343


def test_extended_format_round_trip():
    rng = SplitMix64(5)
    for n in (1, 12, 40, 100):
        k = random_kripke(n, 2, min(2 * n, n * n), rng)
        text = encode_kripke_ext(k)
        assert text.startswith("S:")
        assert decode_kripke_ext(text, 2) == k


def test_extended_format_errors():
    for bad in ("0101;T:0-0", "S:01;T:0-0,x", "S:012;T:0-0", "S:01;T:0-5"):
        with pytest.raises(KripkeFormatError):
            decode_kripke_ext(bad, 1)


def test_generator_determinism():
    a = random_kripke(5, 3, 8, SplitMix64(2019))
    b = random_kripke(5, 3, 8, SplitMix64(2019))
    assert a == b
    assert a != random_kripke(5, 3, 8, SplitMix64(2020))


def test_generator_invariants():
    rng = SplitMix64(9)
    for _ in range(2000):
        n = 1 + rng.randbelow(8)
        t = n + rng.randbelow(n * n - n + 1)
        k = random_kripke(n, 3, t, rng)
        assert k.n_transitions == t == len(set(k.transitions))
        assert all(k.successors(s) for s in range(n))


def test_generator_sparse_large():
    k = random_kripke(500, 2, 700, SplitMix64(1))
    assert k.n_transitions == 700 and all(k.successor_table())


def test_generator_complete_relation():
    k = random_kripke(3, 3, 9, SplitMix64(11))
    assert set(k.transitions) == {(s, t) for s in range(3) for t in range(3)}


@pytest.mark.parametrize("n, t", [(5, 4), (3, 10), (0, 0)])
def test_generator_infeasible(n, t):
    with pytest.raises(ValueError):
        random_kripke(n, 3, t, SplitMix64(0))
