"""Datasets of checked (structure, formula) pairs, train/test splits,
experiments and timing.

A dataset is a CSV file with header ``k,f,r,check_time_s`` (compact
structure string, formula text, verdict bit, seconds spent checking) and a
JSON sidecar ``<file>.meta.json`` holding the geometry and generator seeds.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import gbrt
from .checker import check
from .features import FeatureConfig, featurize
from .kripke import decode_kripke, encode_kripke, random_kripke
from .ltl import parse_ltl, random_formula, render_ltl
from .rng import SplitMix64, uniform_at

log = logging.getLogger(__name__)

CSV_HEADER = ["k", "f", "r", "check_time_s"]

# generator seeds of the bundled reference experiments
REFERENCE_KRIPKE_SEED = 2019
REFERENCE_FORMULA_SEED = 625


@dataclass(frozen=True)
class Record:
    k_text: str
    f_text: str
    r: int
    check_time: float


@dataclass(frozen=True)
class DatasetMeta:
    n_states: int = 5
    n_props: int = 3
    n_transitions: int = 8
    formula_length: int = 25
    n_kripke: int = 25
    n_formulas: int = 25
    kripke_seed: int = REFERENCE_KRIPKE_SEED
    formula_seed: int = REFERENCE_FORMULA_SEED

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(self.n_states, self.n_props, self.n_transitions, self.formula_length)


@dataclass
class Dataset:
    records: list[Record]
    meta: DatasetMeta = field(default_factory=DatasetMeta)

    def __len__(self) -> int:
        return len(self.records)

    def class_counts(self) -> tuple[int, int]:
        yes = sum(rec.r for rec in self.records)
        return yes, len(self.records) - yes

    def features(self, cfg: FeatureConfig | None = None) -> np.ndarray:
        cfg = cfg or self.meta.feature_config()
        m = self.meta
        rows = [
            featurize(decode_kripke(rec.k_text, m.n_states, m.n_props), parse_ltl(rec.f_text), cfg)
            for rec in self.records
        ]
        return np.array(rows, dtype=np.int64).reshape(len(rows), cfg.width)

    def labels(self) -> np.ndarray:
        return np.array([rec.r for rec in self.records], dtype=np.int64)


@dataclass(frozen=True)
class SplitParams:
    seed: int = 1988
    fraction: float = 0.83

    def __post_init__(self):
        if not 0 < self.fraction <= 1:
            raise ValueError("fraction must be in (0, 1]")

    def in_train(self, index: int) -> bool:
        return uniform_at(self.seed, index) < self.fraction


def _check_pair(args: tuple[str, str, int, int]) -> tuple[int, float]:
    k_text, f_text, n_states, n_props = args
    k = decode_kripke(k_text, n_states, n_props)
    f = parse_ltl(f_text)
    start = time.perf_counter()
    verdict = check(k, f)
    return int(verdict.holds), time.perf_counter() - start


def build_dataset(
    n_kripke: int,
    n_formulas: int,
    formula_length: int,
    n_states: int = 5,
    n_props: int = 3,
    n_transitions: int = 8,
    pair_limit: int | None = None,
    kripke_seed: int = REFERENCE_KRIPKE_SEED,
    formula_seed: int = REFERENCE_FORMULA_SEED,
    workers: int = 1,
) -> Dataset:
    """Generate structures and formulas and check the first ``pair_limit``
    pairs in (structure, formula) lexicographic order."""
    total = n_kripke * n_formulas
    pair_limit = total if pair_limit is None else pair_limit
    if not 0 <= pair_limit <= total:
        raise ValueError(f"pair_limit must be in [0, {total}]")
    krng, frng = SplitMix64(kripke_seed), SplitMix64(formula_seed)
    structures = [encode_kripke(random_kripke(n_states, n_props, n_transitions, krng))
                  for _ in range(n_kripke)]
    formulas = [render_ltl(random_formula(formula_length, n_props, frng))
                for _ in range(n_formulas)]
    pairs = [(structures[i // n_formulas], formulas[i % n_formulas], n_states, n_props)
             for i in range(pair_limit)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_pair, pairs, chunksize=4))
    else:
        results = []
        for i, pair in enumerate(pairs):
            results.append(_check_pair(pair))
            if (i + 1) % 50 == 0:
                log.info("checked %d/%d pairs", i + 1, pair_limit)
    records = [Record(k, f, r, t) for (k, f, _, _), (r, t) in zip(pairs, results)]
    meta = DatasetMeta(n_states, n_props, n_transitions, formula_length, n_kripke, n_formulas,
                       kripke_seed, formula_seed)
    return Dataset(records, meta)


def split_dataset(d: Dataset, p: SplitParams) -> tuple[Dataset, Dataset]:
    train, test = [], []
    for i, rec in enumerate(d.records):
        (train if p.in_train(i) else test).append(rec)
    return Dataset(train, d.meta), Dataset(test, d.meta)


# ---------------------------------------------------------------------------
# persistence


def save_dataset(d: Dataset, path: str | Path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for rec in d.records:
            fh.write(f'{rec.k_text},"{rec.f_text}",{rec.r},{rec.check_time!r}\n')
    meta_path(path).write_text(json.dumps(asdict(d.meta), indent=1) + "\n", encoding="utf-8")


def meta_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


class DataError(ValueError):
    pass


def load_dataset(path: str | Path, meta: DatasetMeta | None = None) -> Dataset:
    """Read a dataset CSV; geometry comes from the sidecar unless given."""
    path = Path(path)
    if meta is None:
        side = meta_path(path)
        meta = DatasetMeta(**json.loads(side.read_text(encoding="utf-8"))) if side.exists() else DatasetMeta()
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise DataError(f"{path}: expected header {','.join(CSV_HEADER)}, got {header}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise DataError(f"{path}:{line_no}: expected 4 fields, got {len(row)}")
            k_text, f_text, r, t = row
            try:
                decode_kripke(k_text, meta.n_states, meta.n_props)
                parse_ltl(f_text)
                rec = Record(k_text, f_text, int(r), float(t))
            except ValueError as exc:
                raise DataError(f"{path}:{line_no}: {exc}") from exc
            if rec.r not in (0, 1) or rec.check_time < 0:
                raise DataError(f"{path}:{line_no}: r must be 0/1 and check time >= 0")
            records.append(rec)
    return Dataset(records, meta)


# ---------------------------------------------------------------------------
# experiments


@dataclass
class ExperimentReport:
    formula_length: int
    n_train: int
    n_test: int
    accuracy: float
    majority_baseline: float
    t1_mean: float
    t2_mean: float
    ratio_t1_over_t2: float
    ratio_t2_over_t1: float
    class_counts: tuple[int, int]
    train_class_counts: tuple[int, int]
    predictions: list[int] = field(default_factory=list)
    truth: list[int] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1) + "\n"

    def table(self) -> str:
        return timing_table([(self.formula_length, self.t1_mean, self.t2_mean)]) + (
            f"\naccuracy {self.accuracy:.4f} on {self.n_test} test records "
            f"(majority baseline {self.majority_baseline:.4f}; trained on {self.n_train})"
            f"\nclass counts yes/no: {self.class_counts[0]}/{self.class_counts[1]}"
        )


def timing_table(rows: list[tuple[int, float, float]]) -> str:
    """Rows of (L, t1, t2) as a speedup table."""
    out = [f"{'L':<8}{'t1 (s)':>14}{'t2 (s)':>14}{'t2/t1':>14}{'t1/t2':>14}"]
    for length, t1, t2 in rows:
        out.append(f"{'L=' + str(length):<8}{t1:>14.6g}{t2:>14.3g}"
                   f"{100 * t2 / t1:>13.3g}%{t1 / t2:>14.0f}")
    return "\n".join(out)


def benchmark(d: Dataset, model: gbrt.GbrtModel, min_calls: int = 1000,
              cfg: FeatureConfig | None = None) -> tuple[float, float, float, float]:
    """(t1_mean, t2_mean, t1/t2, t2/t1).

    t1 is the mean recorded check time; t2 is wall-clock time of repeated
    ``classify`` calls over all records divided by the number of calls.
    """
    if not d.records:
        raise ValueError("benchmark needs a nonempty dataset")
    t1 = float(np.mean([rec.check_time for rec in d.records]))
    vectors = [tuple(v) for v in d.features(cfg).tolist()]
    rounds = max(1, -(-min_calls // len(vectors)))
    classify = model.classify
    start = time.perf_counter()
    for _ in range(rounds):
        for v in vectors:
            classify(v)
    t2 = (time.perf_counter() - start) / (rounds * len(vectors))
    return t1, t2, t1 / t2, t2 / t1


def run_experiment(d: Dataset, p: SplitParams, g: gbrt.GbrtParams,
                   min_calls: int = 1000) -> tuple[ExperimentReport, gbrt.GbrtModel]:
    train, test = split_dataset(d, p)
    if not test.records:
        raise ValueError("the split left the test set empty; lower the fraction")
    cfg = d.meta.feature_config()
    warnings = []
    y_train = train.labels()
    if len(set(y_train.tolist())) < 2:
        warnings.append("training set contains a single class; the model is constant")
    model = gbrt.fit(train.features(cfg), y_train, g, layout=cfg.fingerprint)
    X_test, y_test = test.features(cfg), test.labels()
    pred = model.classify_many(X_test)
    accuracy = float(np.mean(pred == y_test))
    majority = 1 if y_train.sum() * 2 > len(y_train) else 0
    baseline = float(np.mean(y_test == majority))
    _, t2, _, _ = benchmark(test, model, min_calls, cfg)
    report = ExperimentReport(
        formula_length=d.meta.formula_length,
        n_train=len(train),
        n_test=len(test),
        accuracy=accuracy,
        majority_baseline=baseline,
        t1_mean=float(np.mean([rec.check_time for rec in d.records])),
        t2_mean=t2,
        ratio_t1_over_t2=0.0,
        ratio_t2_over_t1=0.0,
        class_counts=d.class_counts(),
        train_class_counts=train.class_counts(),
        predictions=pred.tolist(),
        truth=y_test.tolist(),
        warnings=warnings,
    )
    report.ratio_t1_over_t2 = report.t1_mean / t2
    report.ratio_t2_over_t1 = t2 / report.t1_mean
    return report, model
