"""Explicit-state LTL model checking.

``check(k, f)`` searches the product of ``k`` with an automaton for ``!f``
for an accepting cycle (nested depth-first search). The automaton is built
lazily from obligation sets, so only product states reachable in ``k`` are
ever expanded; this keeps long formulas tractable on small structures.

``build_buchi`` is the classical closure/elementary-set tableau. It is
exponential in the number of temporal subformulas and is used for small
formulas and as an independent cross-check (``check_explicit``).

``eval_on_lasso`` and ``enumerate_lassos`` share no code with either
construction; they are the oracles the tests validate verdicts against.

Label-reading convention: a product step out of ``(s, a)`` lets the automaton
read ``label(s)``, so the initial state's label is consumed by the first step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Sequence

from .kripke import KripkeStructure
from .ltl import (
    Atom,
    And,
    Finally,
    Formula,
    Globally,
    Next,
    Not,
    Or,
    Top,
    Until,
    children,
    desugar,
    is_core,
    iter_prefix,
    max_atom,
)

Label = Sequence[int]


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic path ``prefix . cycle^omega`` of Kripke states."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def is_path_of(self, k: KripkeStructure) -> bool:
        if not self.cycle:
            return False
        states = self.prefix + self.cycle
        if states[0] != k.initial:
            return False
        edges = set(k.transitions)
        pairs = list(zip(states, states[1:])) + [(self.cycle[-1], self.cycle[0])]
        return all(p in edges for p in pairs)

    def labels(self, k: KripkeStructure) -> tuple[list[Label], list[Label]]:
        return [k.labels[s] for s in self.prefix], [k.labels[s] for s in self.cycle]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: Lasso | None = None


# ---------------------------------------------------------------------------
# lasso oracle


def eval_on_lasso(f: Formula, prefix: Sequence[Label], cycle: Sequence[Label]) -> bool:
    """Truth of ``f`` at position 0 of the word ``prefix . cycle^omega``."""
    if not cycle:
        raise ValueError("cycle must be nonempty")
    word = list(prefix) + list(cycle)
    n = len(word)
    loop = len(prefix)
    succ = list(range(1, n)) + [loop]
    order = list(iter_prefix(f))[::-1]  # children before parents
    values: dict[int, list[bool]] = {}

    def fixpoint(start: bool, step: Callable[[int, list[bool]], bool]) -> list[bool]:
        val = [start] * n
        changed = True
        while changed:
            changed = False
            for i in reversed(range(n)):
                new = step(i, val)
                if new != val[i]:
                    val[i] = new
                    changed = True
        return val

    for node in order:
        if id(node) in values:
            continue
        kids = [values[id(c)] for c in children(node)]
        if isinstance(node, Atom):
            val = [bool(word[i][node.index]) for i in range(n)]
        elif isinstance(node, Top):
            val = [True] * n
        elif isinstance(node, Not):
            val = [not v for v in kids[0]]
        elif isinstance(node, And):
            val = [a and b for a, b in zip(*kids)]
        elif isinstance(node, Or):
            val = [a or b for a, b in zip(*kids)]
        elif isinstance(node, Next):
            val = [kids[0][succ[i]] for i in range(n)]
        elif isinstance(node, Finally):
            g = kids[0]
            val = fixpoint(False, lambda i, v: g[i] or v[succ[i]])
        elif isinstance(node, Globally):
            g = kids[0]
            val = fixpoint(True, lambda i, v: g[i] and v[succ[i]])
        elif isinstance(node, Until):
            g, h = kids
            val = fixpoint(False, lambda i, v: h[i] or (g[i] and v[succ[i]]))
        else:
            raise TypeError(f"not a formula node: {node!r}")
        values[id(node)] = val
    return values[id(f)][0]


def enumerate_lassos(k: KripkeStructure, max_prefix: int, max_cycle: int) -> Iterator[Lasso]:
    """Every lasso from the initial state within the given bounds, each once."""
    if max_prefix < 0 or max_cycle < 1:
        raise ValueError("need max_prefix >= 0 and max_cycle >= 1")
    succ = k.successor_table()
    edges = set(k.transitions)
    max_len = max_prefix + max_cycle
    path = [k.initial]

    def walk() -> Iterator[Lasso]:
        n = len(path)
        for cut in range(max(0, n - max_cycle), min(max_prefix, n - 1) + 1):
            if (path[-1], path[cut]) in edges:
                yield Lasso(tuple(path[:cut]), tuple(path[cut:]))
        if n < max_len:
            for t in succ[path[-1]]:
                path.append(t)
                yield from walk()
                path.pop()

    yield from walk()


# ---------------------------------------------------------------------------
# nested depth-first search


def nested_dfs(
    initial: Sequence[Hashable],
    successors: Callable[[Hashable], Sequence[Hashable]],
    accepting: Callable[[Hashable], bool],
) -> tuple[list, list] | None:
    """Find a reachable accepting cycle.

    Returns ``(prefix_nodes, cycle_nodes)`` or None. Successors are visited
    in the order given; the second search stops at any node on the first
    search's stack, which closes a cycle through the seed.
    """
    cache: dict = {}

    def succ(node):
        out = cache.get(node)
        if out is None:
            out = cache[node] = successors(node)
        return out

    visited: set = set()
    flagged: set = set()
    on_stack: dict = {}
    path: list = []

    def inner(seed) -> list | None:
        flagged.add(seed)
        trail = [seed]
        iters = [iter(succ(seed))]
        while iters:
            for nxt in iters[-1]:
                if nxt in on_stack:
                    return trail + [nxt]
                if nxt not in flagged:
                    flagged.add(nxt)
                    trail.append(nxt)
                    iters.append(iter(succ(nxt)))
                    break
            else:
                iters.pop()
                trail.pop()
        return None

    for start in initial:
        if start in visited:
            continue
        visited.add(start)
        on_stack[start] = 0
        path.append(start)
        iters = [iter(succ(start))]
        while iters:
            for nxt in iters[-1]:
                if nxt not in visited:
                    visited.add(nxt)
                    on_stack[nxt] = len(path)
                    path.append(nxt)
                    iters.append(iter(succ(nxt)))
                    break
            else:
                node = path[-1]
                if accepting(node):
                    trail = inner(node)
                    if trail is not None:
                        cut = on_stack[trail[-1]]
                        return path[:cut], path[cut:] + trail[1:-1]
                iters.pop()
                path.pop()
                del on_stack[node]
    return None


# ---------------------------------------------------------------------------
# classical tableau automaton


@dataclass
class BuchiAutomaton:
    """Degeneralized Buchi automaton over label bit-vectors.

    State ``i`` is ``states[i] = (assignment, counter)`` where ``assignment``
    gives truth values of the elementary formulas. Every transition carries
    one concrete letter (the label it reads).
    """

    n_props: int
    elementary: list[Formula]
    n_untils: int
    states: list[tuple[tuple[bool, ...], int]]
    initial: list[int]
    transitions: dict[int, list[tuple[tuple[int, ...], int]]] = field(default_factory=dict)
    accepting: set[int] = field(default_factory=set)

    def letter_of(self, state: int) -> tuple[int, ...]:
        return tuple(int(b) for b in self.states[state][0][: self.n_props])

    def accepts(self, prefix: Sequence[Label], cycle: Sequence[Label]) -> bool:
        """Membership of the lasso word, via the product with a lasso-shaped graph."""
        word = [tuple(int(b) for b in x) for x in list(prefix) + list(cycle)]
        n = len(word)
        loop = len(prefix)

        def successors(node):
            pos, q = node
            nxt = pos + 1 if pos + 1 < n else loop
            return [(nxt, t) for letter, t in self.transitions.get(q, ()) if letter == word[pos]]

        found = nested_dfs([(0, q) for q in self.initial], successors,
                           lambda node: node[1] in self.accepting)
        return found is not None


def _subformulas(f: Formula) -> list[Formula]:
    seen: dict[Formula, None] = {}
    for node in reversed(list(iter_prefix(f))):
        seen.setdefault(node, None)
    return list(seen)


def build_buchi(f: Formula, n_props: int) -> BuchiAutomaton:
    """Automaton accepting exactly the models of core formula ``f``."""
    if not is_core(f):
        raise ValueError("build_buchi expects a desugared formula (no F/G)")
    if max_atom(f) >= n_props:
        raise ValueError("formula mentions an atom beyond n_props")
    subs = _subformulas(f)
    untils = [g for g in subs if isinstance(g, Until)]
    nexts = [g for g in subs if isinstance(g, Next)]
    elementary: list[Formula] = [Atom(i) for i in range(n_props)]
    elementary += nexts + [Next(u) for u in untils if Next(u) not in nexts]
    index = {g: i for i, g in enumerate(elementary)}

    def truth(assign: tuple[bool, ...]) -> dict[Formula, bool]:
        val: dict[Formula, bool] = {}
        for g in subs:  # children precede parents
            if isinstance(g, Atom):
                val[g] = assign[g.index]
            elif isinstance(g, Top):
                val[g] = True
            elif isinstance(g, Not):
                val[g] = not val[g.operand]
            elif isinstance(g, And):
                val[g] = val[g.left] and val[g.right]
            elif isinstance(g, Or):
                val[g] = val[g.left] or val[g.right]
            elif isinstance(g, Next):
                val[g] = assign[index[g]]
            else:
                val[g] = val[g.right] or (val[g.left] and assign[index[Next(g)]])
        return val

    assigns = list(itertools.product((False, True), repeat=len(elementary)))
    truths = [truth(a) for a in assigns]
    # obligations each state places on its successor: X g in state <=> g holds next
    obligations = [
        tuple((g.operand, a[index[g]]) for g in elementary[n_props:]) for a in assigns
    ]
    fair = [
        tuple((not t[u]) or t[u.right] for u in untils) for t in truths
    ]
    k = len(untils)

    def next_counter(a: int, c: int) -> int:
        c = 0 if c == k else c
        while c < k and fair[a][c]:
            c += 1
        return c

    ba = BuchiAutomaton(n_props, elementary, k, [], [])
    ids: dict[tuple[int, int], int] = {}

    def state_id(a: int, c: int) -> int:
        key = (a, c)
        if key not in ids:
            ids[key] = len(ba.states)
            ba.states.append((assigns[a], c))
            if c == k:
                ba.accepting.add(ids[key])
        return ids[key]

    work = []
    for a, t in enumerate(truths):
        if t[f]:
            ba.initial.append(state_id(a, 0))
            work.append((a, 0))
    done = set()
    while work:
        a, c = work.pop()
        if (a, c) in done:
            continue
        done.add((a, c))
        src = ids[(a, c)]
        letter = tuple(int(b) for b in assigns[a][:n_props])
        c2 = next_counter(a, c)
        out = []
        for b, t in enumerate(truths):
            if all(t[g] == want for g, want in obligations[a]):
                out.append((letter, state_id(b, c2)))
                work.append((b, c2))
        ba.transitions[src] = out
    return ba


def check_explicit(k: KripkeStructure, f: Formula) -> Verdict:
    """``check`` via the classical tableau; exponential, for small formulas."""
    _validate(k, f)
    ba = build_buchi(desugar(Not(f)), k.n_props)
    succ_k = k.successor_table()

    def successors(node):
        s, q = node
        out = []
        for letter, q2 in ba.transitions.get(q, ()):
            if letter == k.labels[s]:
                out.extend((s2, q2) for s2 in succ_k[s])
        return sorted(set(out))

    found = nested_dfs(sorted((k.initial, q) for q in ba.initial), successors,
                       lambda node: node[1] in ba.accepting)
    return _verdict(found)


# ---------------------------------------------------------------------------
# on-the-fly obligation-set automaton

_TRUE, _FALSE, _LIT, _AND, _OR, _NEXT, _UNTIL, _RELEASE = range(8)

Alternative = tuple[frozenset, frozenset]


def _prune(alts: list[Alternative]) -> list[Alternative]:
    """Drop duplicates and alternatives that demand and postpone more than another."""
    if len(alts) < 2:
        return alts
    alts = sorted(set(alts), key=lambda p: (len(p[0]) + len(p[1]), sorted(p[0]), sorted(p[1])))
    kept: list[Alternative] = []
    for n, p in alts:
        if not any(n2 <= n and p2 <= p for n2, p2 in kept):
            kept.append((n, p))
    return kept


def _cross(xs: list[Alternative], ys: list[Alternative]) -> list[Alternative]:
    if not xs or not ys:
        return []
    return _prune([(n1 | n2, p1 | p2) for n1, p1 in xs for n2, p2 in ys])


class ObligationAutomaton:
    """Lazily expanded automaton over the states of one Kripke structure.

    Formulas are kept in negation normal form and hash-consed, so several
    queries (``add``) share subformulas and cached expansions. An automaton
    state is a set of formulas that must hold at the current position. In
    Kripke state ``s`` it expands into alternatives, each a set of
    obligations for the next position plus the Until formulas postponed
    rather than fulfilled; an Until postponed forever rejects the run.

    ``labels[s]`` is the letter read in Kripke state ``s``. It may gain
    trailing entries between queries; earlier formulas never read them.
    """

    def __init__(self, labels: Sequence[Sequence[int]]):
        self.labels = labels
        self.nodes: list[tuple[int, int, int]] = []
        self._intern: dict[tuple[int, int, int], int] = {}
        self.propositional: list[bool] = []
        self.states: list[tuple[int, ...]] = []
        self._state_ids: dict[tuple[int, ...], int] = {}
        self._alts: dict[tuple[int, int], list[Alternative]] = {}
        self._expansions: dict[tuple[int, int], list[tuple[int, frozenset]]] = {}
        self._untils: dict[int, list[int]] = {}

    def _mk(self, op: int, a: int = -1, b: int = -1) -> int:
        kind = self.nodes
        if op == _AND:
            if a == b or kind[b][0] == _TRUE:
                return a
            if kind[a][0] == _TRUE:
                return b
            if kind[a][0] == _FALSE or kind[b][0] == _FALSE:
                return self._mk(_FALSE)
            a, b = min(a, b), max(a, b)
        elif op == _OR:
            if a == b or kind[b][0] == _FALSE:
                return a
            if kind[a][0] == _FALSE:
                return b
            if kind[a][0] == _TRUE or kind[b][0] == _TRUE:
                return self._mk(_TRUE)
            a, b = min(a, b), max(a, b)
        elif op == _NEXT and kind[a][0] in (_TRUE, _FALSE):
            return a
        elif op in (_UNTIL, _RELEASE) and kind[b][0] in (_TRUE, _FALSE):
            return b
        key = (op, a, b)
        got = self._intern.get(key)
        if got is None:
            got = self._intern[key] = len(self.nodes)
            self.nodes.append(key)
            if op in (_TRUE, _FALSE, _LIT):
                prop = True
            elif op in (_AND, _OR):
                prop = self.propositional[a] and self.propositional[b]
            else:
                prop = False
            self.propositional.append(prop)
        return got

    def add(self, f: Formula) -> int:
        """Intern core formula ``f``; returns the initial state for it."""
        memo: dict[tuple[int, bool], int] = {}

        def go(g: Formula, pos: bool) -> int:
            key = (id(g), pos)
            if key in memo:
                return memo[key]
            if isinstance(g, Top):
                out = self._mk(_TRUE if pos else _FALSE)
            elif isinstance(g, Atom):
                out = self._mk(_LIT, g.index, int(pos))
            elif isinstance(g, Not):
                out = go(g.operand, not pos)
            elif isinstance(g, Next):
                out = self._mk(_NEXT, go(g.operand, pos))
            elif isinstance(g, And):
                out = self._mk(_AND if pos else _OR, go(g.left, pos), go(g.right, pos))
            elif isinstance(g, Or):
                out = self._mk(_OR if pos else _AND, go(g.left, pos), go(g.right, pos))
            elif isinstance(g, Until):
                # !(a U b) == (!a) R (!b)
                out = self._mk(_UNTIL if pos else _RELEASE, go(g.left, pos), go(g.right, pos))
            else:
                raise ValueError("ObligationAutomaton expects a desugared formula")
            memo[key] = out
            return out

        root = go(f, True)
        state = self.state_id((root,))
        untils = set()
        stack, seen = [root], {root}
        while stack:
            x = stack.pop()
            op, a, b = self.nodes[x]
            if op == _UNTIL:
                untils.add(x)
            if op not in (_TRUE, _FALSE, _LIT):
                for child in (a, b):
                    if child >= 0 and child not in seen:
                        seen.add(child)
                        stack.append(child)
        self._untils[state] = sorted(untils)
        return state

    def untils(self, initial_state: int) -> list[int]:
        """Until formulas reachable from a state returned by ``add``."""
        return self._untils[initial_state]

    def state_id(self, obligations: tuple[int, ...]) -> int:
        got = self._state_ids.get(obligations)
        if got is None:
            got = self._state_ids[obligations] = len(self.states)
            self.states.append(obligations)
        return got

    def _holds(self, node: int, s: int) -> bool:
        op, a, b = self.nodes[node]
        if op == _TRUE:
            return True
        if op == _FALSE:
            return False
        if op == _LIT:
            return bool(self.labels[s][a]) == bool(b)
        if op == _AND:
            return self._holds(a, s) and self._holds(b, s)
        return self._holds(a, s) or self._holds(b, s)

    def alternatives(self, x: int, s: int) -> list[Alternative]:
        key = (x, s)
        got = self._alts.get(key)
        if got is not None:
            return got
        if self.propositional[x]:
            got = [(frozenset(), frozenset())] if self._holds(x, s) else []
        else:
            op, a, b = self.nodes[x]
            if op == _NEXT:
                got = [(frozenset((a,)), frozenset())]
            elif op == _AND:
                got = _cross(self.alternatives(a, s), self.alternatives(b, s))
            elif op == _OR:
                got = _prune(self.alternatives(a, s) + self.alternatives(b, s))
            elif op == _UNTIL:
                later = [(n | {x}, p | {x}) for n, p in self.alternatives(a, s)]
                got = _prune(self.alternatives(b, s) + later)
            else:  # release: b now, and a now or the release again next
                now_or_later = _prune(self.alternatives(a, s) + [(frozenset((x,)), frozenset())])
                got = _cross(self.alternatives(b, s), now_or_later)
        self._alts[key] = got
        return got

    def expand(self, state: int, s: int) -> list[tuple[int, frozenset]]:
        """Alternatives ``(next_state, postponed_untils)`` in Kripke state ``s``."""
        key = (state, s)
        got = self._expansions.get(key)
        if got is None:
            alts: list[Alternative] = [(frozenset(), frozenset())]
            for x in self.states[state]:
                alts = _cross(alts, self.alternatives(x, s))
                if not alts:
                    break
            got = [(self.state_id(tuple(sorted(n))), p) for n, p in alts]
            self._expansions[key] = got
        return got


def _search(succ_k: list[list[int]], init: int, aut: ObligationAutomaton, start: int):
    """Nested DFS for an accepting cycle from ``(init, start)``."""
    untils = aut.untils(start)
    n_untils = len(untils)

    def successors(node):
        s, a, c = node
        base = 0 if c == n_untils else c
        out = []
        for a2, post in aut.expand(a, s):
            c2 = base
            while c2 < n_untils and untils[c2] not in post:
                c2 += 1
            out.extend((s2, a2, c2) for s2 in succ_k[s])
        out.sort()
        return out

    return nested_dfs([(init, start, 0)], successors, lambda node: node[2] == n_untils)


# ---------------------------------------------------------------------------
# state-determined subformulas


class _Columns:
    """Per-state truth columns; column ``i`` is read as ``Atom(i)``."""

    def __init__(self, k: KripkeStructure):
        self.n = k.n_states
        self.succ = [sorted(set(ts)) for ts in k.successor_table()]
        self.cols: list[tuple[bool, ...]] = []
        self.index: dict[tuple[bool, ...], int] = {}
        self.rows: list[list[int]] = [list(k.labels[s]) for s in range(self.n)]
        for i in range(k.n_props):
            col = tuple(bool(k.labels[s][i]) for s in range(self.n))
            self.index.setdefault(col, i)
            self.cols.append(col)

    def atom(self, col: tuple[bool, ...]) -> Atom:
        got = self.index.get(col)
        if got is None:
            got = self.index[col] = len(self.cols)
            self.cols.append(col)
            for s in range(self.n):
                self.rows[s].append(int(col[s]))
        return Atom(got)

    def ex(self, c):
        return tuple(any(c[t] for t in self.succ[s]) for s in range(self.n))

    def ax(self, c):
        return tuple(all(c[t] for t in self.succ[s]) for s in range(self.n))

    def until(self, a, b, step):
        """Least fixpoint of ``Z = b | (a & step(Z))``."""
        z = tuple(b)
        while True:
            nz = tuple(b[s] or (a[s] and v) for s, v in enumerate(step(z)))
            if nz == z:
                return z
            z = nz


def _path_quantified(cols: _Columns, node: Formula, kids: list[tuple[bool, ...]]):
    """(some-path, all-paths) truth columns of a temporal node over atom children."""
    if isinstance(node, Next):
        return cols.ex(kids[0]), cols.ax(kids[0])
    ones = (True,) * cols.n
    if isinstance(node, Finally):
        return cols.until(ones, kids[0], cols.ex), cols.until(ones, kids[0], cols.ax)
    if isinstance(node, Globally):
        neg = tuple(not v for v in kids[0])
        ef = cols.until(ones, neg, cols.ex)
        af = cols.until(ones, neg, cols.ax)
        return tuple(not v for v in af), tuple(not v for v in ef)
    a, b = kids
    return cols.until(a, b, cols.ex), cols.until(a, b, cols.ax)


def _determined(cols: _Columns, aut: ObligationAutomaton, g: Formula) -> tuple[bool, ...] | None:
    core = desugar(g)
    neg = aut.add(Not(core))
    pos = aut.add(core)
    col = []
    for s in range(cols.n):
        satisfiable = _search(cols.succ, s, aut, pos) is not None
        if satisfiable and _search(cols.succ, s, aut, neg) is not None:
            return None
        col.append(satisfiable)
    return tuple(col)


def _reduce(k: KripkeStructure, f: Formula):
    cols = _Columns(k)
    aut = ObligationAutomaton(cols.rows)
    n = cols.n
    memo: dict[int, tuple[Formula, tuple[bool, ...] | None]] = {}
    for node in reversed(list(iter_prefix(f))):
        if id(node) in memo:
            continue
        kids = [memo[id(c)] for c in children(node)]
        col = None
        if isinstance(node, Atom):
            col = cols.cols[node.index]
        elif isinstance(node, Top):
            col = (True,) * n
        elif all(c is not None for _, c in kids):
            vals = [c for _, c in kids]
            if isinstance(node, Not):
                col = tuple(not v for v in vals[0])
            elif isinstance(node, And):
                col = tuple(x and y for x, y in zip(*vals))
            elif isinstance(node, Or):
                col = tuple(x or y for x, y in zip(*vals))
            else:
                some, every = _path_quantified(cols, node, vals)
                if some == every:
                    col = some
        if col is None:
            rebuilt = type(node)(*(g for g, _ in kids))
            col = _determined(cols, aut, rebuilt)
            if col is None:
                memo[id(node)] = (rebuilt, None)
                continue
        memo[id(node)] = (cols.atom(col), col)
    return memo[id(f)], cols, aut


def reduce_formula(k: KripkeStructure, f: Formula) -> tuple[Formula, list[tuple[int, ...]]]:
    """Replace state-determined subformulas of ``f`` by fresh atoms.

    A subformula is state-determined in ``k`` when, from every state, either
    all paths satisfy it or none does. On paths of ``k`` it is then
    equivalent to an atom labelling exactly the states where it holds, so the
    substitution preserves the verdict of every path. Returns the reduced
    formula and the extended labels (original propositions first).
    """
    (g, _), cols, _ = _reduce(k, f)
    return g, [tuple(row) for row in cols.rows]


def _validate(k: KripkeStructure, f: Formula) -> None:
    if max_atom(f) >= k.n_props:
        raise ValueError(
            f"formula uses atom index {max_atom(f)} but the structure has {k.n_props} propositions"
        )


def _verdict(found) -> Verdict:
    if found is None:
        return Verdict(True)
    prefix, cycle = found
    return Verdict(False, Lasso(tuple(n[0] for n in prefix), tuple(n[0] for n in cycle)))


def check(k: KripkeStructure, f: Formula, reduce: bool = True) -> Verdict:
    """Does every infinite path of ``k`` from its initial state satisfy ``f``?

    With ``reduce`` (the default) state-determined subformulas are first
    replaced by atoms; the product search then runs on what is left.
    """
    _validate(k, f)
    succ_k = [sorted(set(ts)) for ts in k.successor_table()]
    if reduce:
        (f, col), _, aut = _reduce(k, f)
        if col is not None and col[k.initial]:
            return Verdict(True)
    else:
        aut = ObligationAutomaton(k.labels)
    start = aut.add(desugar(Not(f)))
    return _verdict(_search(succ_k, k.initial, aut, start))
