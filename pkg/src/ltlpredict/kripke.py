"""Kripke structures, the compact digit-string codec and a random generator.

Compact strings hold ``n_states * n_props`` label bits (state 0 first,
propositions in p, q, r order) followed by one digit pair ``<from><to>`` per
transition. State indices are single digits, so the format caps structures
at 10 states. Larger structures use the extended form
``S:<label bits>;T:<from>-<to>,<from>-<to>,...``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rng import SplitMix64

MAX_COMPACT_STATES = 10


class KripkeFormatError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class KripkeStructure:
    n_states: int
    n_props: int
    labels: tuple[tuple[int, ...], ...]
    transitions: tuple[tuple[int, int], ...]
    initial: int = 0

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("a Kripke structure needs at least one state")
        if len(self.labels) != self.n_states:
            raise ValueError("one label vector per state required")
        for row in self.labels:
            if len(row) != self.n_props or any(b not in (0, 1) for b in row):
                raise ValueError(f"bad label vector {row!r}")
        seen = set()
        has_succ = [False] * self.n_states
        for s, t in self.transitions:
            if not (0 <= s < self.n_states and 0 <= t < self.n_states):
                raise ValueError(f"transition ({s},{t}) out of range")
            if (s, t) in seen:
                raise ValueError(f"duplicate transition ({s},{t})")
            seen.add((s, t))
            has_succ[s] = True
        if not all(has_succ):
            missing = has_succ.index(False)
            raise ValueError(f"state {missing} has no successor")
        if not 0 <= self.initial < self.n_states:
            raise ValueError("initial state out of range")

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)

    def successors(self, state: int) -> list[int]:
        """Successors in transition-list order."""
        return [t for s, t in self.transitions if s == state]

    def successor_table(self) -> list[list[int]]:
        table: list[list[int]] = [[] for _ in range(self.n_states)]
        for s, t in self.transitions:
            table[s].append(t)
        return table


def decode_kripke(text: str, n_states: int, n_props: int) -> KripkeStructure:
    if not 1 <= n_states <= MAX_COMPACT_STATES:
        raise KripkeFormatError(f"compact format supports 1..{MAX_COMPACT_STATES} states, got {n_states}")
    n_bits = n_states * n_props
    rest = len(text) - n_bits
    if rest < 2 or rest % 2:
        raise KripkeFormatError(
            f"length {len(text)} is not {n_bits} label bits plus a nonempty even transition block",
            len(text),
        )
    for i, ch in enumerate(text):
        if ch not in "0123456789":
            raise KripkeFormatError(f"non-digit character {ch!r}", i)
        if i < n_bits and ch not in "01":
            raise KripkeFormatError(f"label bit must be 0 or 1, got {ch!r}", i)
        if i >= n_bits and int(ch) >= n_states:
            raise KripkeFormatError(f"state digit {ch} >= n_states={n_states}", i)

    labels = tuple(
        tuple(int(text[s * n_props + j]) for j in range(n_props)) for s in range(n_states)
    )
    transitions = []
    seen = set()
    for i in range(n_bits, len(text), 2):
        pair = (int(text[i]), int(text[i + 1]))
        if pair in seen:
            raise KripkeFormatError(f"duplicate transition {pair}", i)
        seen.add(pair)
        transitions.append(pair)
    sources = {s for s, _ in transitions}
    for s in range(n_states):
        if s not in sources:
            raise KripkeFormatError(f"transition relation not total: state {s} has no successor", len(text))
    return KripkeStructure(n_states, n_props, labels, tuple(transitions))


def encode_kripke(k: KripkeStructure) -> str:
    if k.n_states > MAX_COMPACT_STATES:
        raise KripkeFormatError(
            f"compact format supports at most {MAX_COMPACT_STATES} states; use encode_kripke_ext"
        )
    bits = "".join(str(b) for row in k.labels for b in row)
    return bits + "".join(f"{s}{t}" for s, t in k.transitions)


def encode_kripke_ext(k: KripkeStructure) -> str:
    bits = "".join(str(b) for row in k.labels for b in row)
    return "S:" + bits + ";T:" + ",".join(f"{s}-{t}" for s, t in k.transitions)


def decode_kripke_ext(text: str, n_props: int) -> KripkeStructure:
    if not text.startswith("S:") or ";T:" not in text:
        raise KripkeFormatError("extended format must look like S:<bits>;T:<from>-<to>,...", 0)
    bits, _, trans = text[2:].partition(";T:")
    if n_props < 1 or len(bits) % n_props:
        raise KripkeFormatError(f"{len(bits)} label bits not divisible by n_props={n_props}", 2)
    for i, ch in enumerate(bits):
        if ch not in "01":
            raise KripkeFormatError(f"label bit must be 0 or 1, got {ch!r}", 2 + i)
    n_states = len(bits) // n_props
    labels = tuple(
        tuple(int(bits[s * n_props + j]) for j in range(n_props)) for s in range(n_states)
    )
    transitions = []
    offset = len(bits) + 5
    for item in trans.split(","):
        src, sep, dst = item.partition("-")
        if not sep or not src.isdigit() or not dst.isdigit():
            raise KripkeFormatError(f"bad transition {item!r}", offset)
        transitions.append((int(src), int(dst)))
        offset += len(item) + 1
    try:
        return KripkeStructure(n_states, n_props, labels, tuple(transitions))
    except ValueError as exc:
        raise KripkeFormatError(str(exc)) from exc


def random_kripke(n_states: int, n_props: int, n_transitions: int, rng: SplitMix64) -> KripkeStructure:
    """Random structure with a total transition relation.

    Each state first gets one random successor; the remaining transitions are
    drawn without replacement from the unused pairs. The transition list is
    shuffled so the codec string does not reveal the construction order.
    """
    if n_states < 1 or n_props < 0:
        raise ValueError("need n_states >= 1 and n_props >= 0")
    if not n_states <= n_transitions <= n_states * n_states:
        raise ValueError(
            f"n_transitions must lie in [{n_states}, {n_states * n_states}], got {n_transitions}"
        )
    labels = tuple(tuple(rng.bit() for _ in range(n_props)) for _ in range(n_states))
    chosen = [(s, rng.randbelow(n_states)) for s in range(n_states)]
    taken = set(chosen)
    extra = n_transitions - n_states
    if n_states <= 64 or 2 * n_transitions > n_states * n_states:
        free = [(s, t) for s in range(n_states) for t in range(n_states) if (s, t) not in taken]
        for _ in range(extra):
            chosen.append(free.pop(rng.randbelow(len(free))))
    else:
        # sparse case: rejection keeps memory linear in n_transitions
        while extra:
            pair = (rng.randbelow(n_states), rng.randbelow(n_states))
            if pair not in taken:
                taken.add(pair)
                chosen.append(pair)
                extra -= 1
    rng.shuffle(chosen)
    return KripkeStructure(n_states, n_props, labels, tuple(chosen))
