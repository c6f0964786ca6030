"""Fixed-length numeric encoding of (Kripke structure, formula) pairs.

Layout, for a given FeatureConfig::

    [ label bits, row-major           ]  n_states * n_props slots, 0/1
    [ transition digits, in order     ]  2 * n_transitions slots, 0..n_states-1
    [ formula tokens, prefix order    ]  max_formula_tokens slots, VOCABULARY codes,
                                         right-padded with PAD (0)

Prefix order needs no parentheses to be unambiguous, so the encoding is
injective on structures of the configured geometry and formulas that fit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .kripke import KripkeStructure
from .ltl import Formula, iter_prefix, token

VOCABULARY = {
    "PAD": 0,
    "p": 1,
    "q": 2,
    "r": 3,
    "!": 4,
    "&": 5,
    "|": 6,
    "X": 7,
    "F": 8,
    "G": 9,
    "U": 10,
    "true": 11,
}


@dataclass(frozen=True)
class FeatureConfig:
    n_states: int = 5
    n_props: int = 3
    n_transitions: int = 8
    max_formula_tokens: int = 25

    @property
    def width(self) -> int:
        return self.n_states * self.n_props + 2 * self.n_transitions + self.max_formula_tokens

    @property
    def fingerprint(self) -> str:
        return (
            f"kripke:{self.n_states}x{self.n_props}x{self.n_transitions};"
            f"ltl-prefix:{self.max_formula_tokens};vocab:v1"
        )

    @classmethod
    def from_fingerprint(cls, text: str) -> "FeatureConfig":
        m = re.fullmatch(r"kripke:(\d+)x(\d+)x(\d+);ltl-prefix:(\d+);vocab:v1", text)
        if m is None:
            raise ValueError(f"unrecognised feature layout {text!r}")
        return cls(*(int(g) for g in m.groups()))


def formula_codes(f: Formula) -> list[int]:
    return [VOCABULARY[token(node)] for node in iter_prefix(f)]


def featurize(k: KripkeStructure, f: Formula, cfg: FeatureConfig) -> np.ndarray:
    if (k.n_states, k.n_props, k.n_transitions) != (cfg.n_states, cfg.n_props, cfg.n_transitions):
        raise ValueError(
            f"structure geometry {(k.n_states, k.n_props, k.n_transitions)} does not match "
            f"config {(cfg.n_states, cfg.n_props, cfg.n_transitions)}"
        )
    codes = formula_codes(f)
    if len(codes) > cfg.max_formula_tokens:
        raise ValueError(f"formula has {len(codes)} tokens, config allows {cfg.max_formula_tokens}")
    out = np.zeros(cfg.width, dtype=np.int64)
    pos = 0
    for row in k.labels:
        out[pos:pos + len(row)] = row
        pos += len(row)
    for s, t in k.transitions:
        out[pos] = s
        out[pos + 1] = t
        pos += 2
    out[pos:pos + len(codes)] = codes
    return out
