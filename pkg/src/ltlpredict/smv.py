"""SMV model export, for cross-checking verdicts with NuSMV / nuXmv.

The exported text is fully determined by the structure and formula::

    MODULE main
    VAR
      state : 0..<n-1>;
    ASSIGN
      init(state) := 0;
      next(state) :=
        case
          state = 0 : {1};
          state = 1 : {0, 2};
          ...
        esac;
    DEFINE
      p := state in {4};
      q := FALSE;                 -- atom true in no state
      ...
    LTLSPEC
      <formula>

Successor sets and label sets are listed in ascending order. The formula
uses TRUE for ``true``, puts every unary operand in parentheses and spaces
every binary operator.
"""

from __future__ import annotations

import re

from .kripke import MAX_COMPACT_STATES, KripkeStructure
from .ltl import SYMBOL, Atom, Formula, Top, atom_name, children


def smv_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return atom_name(f.index)
    if isinstance(f, Top):
        return "TRUE"
    kids = children(f)
    if len(kids) == 1:
        return f"{SYMBOL[type(f)]}({smv_formula(kids[0])})"
    return f"({smv_formula(kids[0])} {SYMBOL[type(f)]} {smv_formula(kids[1])})"


def export_smv(k: KripkeStructure, f: Formula) -> str:
    if k.n_states > MAX_COMPACT_STATES:
        raise ValueError(f"SMV export supports compact-format structures (<= {MAX_COMPACT_STATES} states)")
    succ = k.successor_table()
    lines = [
        "MODULE main",
        "VAR",
        f"  state : 0..{k.n_states - 1};",
        "ASSIGN",
        f"  init(state) := {k.initial};",
        "  next(state) :=",
        "    case",
    ]
    for s in range(k.n_states):
        targets = ", ".join(str(t) for t in sorted(succ[s]))
        lines.append(f"      state = {s} : {{{targets}}};")
    lines += ["    esac;", "DEFINE"]
    for i in range(k.n_props):
        where = [str(s) for s in range(k.n_states) if k.labels[s][i]]
        body = f"state in {{{', '.join(where)}}}" if where else "FALSE"
        lines.append(f"  {atom_name(i)} := {body};")
    lines += ["LTLSPEC", f"  {smv_formula(f)}", ""]
    return "\n".join(lines)


_CASE = re.compile(r"^\s*state = (\d+) : \{([\d, ]*)\};$")
_DEFINE = re.compile(r"^\s*([a-z]) := (?:state in \{([\d, ]*)\}|FALSE);$")
_RANGE = re.compile(r"^\s*state : 0\.\.(\d+);$")


def parse_smv(text: str) -> tuple[int, set[tuple[int, int]], dict[str, set[int]]]:
    """Read back ``(n_states, transitions, atom -> states)`` from exported text."""
    n_states = None
    transitions: set[tuple[int, int]] = set()
    defines: dict[str, set[int]] = {}
    for line in text.splitlines():
        if m := _RANGE.match(line):
            n_states = int(m.group(1)) + 1
        elif m := _CASE.match(line):
            src = int(m.group(1))
            transitions |= {(src, int(t)) for t in m.group(2).split(",") if t.strip()}
        elif m := _DEFINE.match(line):
            states = m.group(2) or ""
            defines[m.group(1)] = {int(s) for s in states.split(",") if s.strip()}
    if n_states is None:
        raise ValueError("no state variable declaration found")
    return n_states, transitions, defines
