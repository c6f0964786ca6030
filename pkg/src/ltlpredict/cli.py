"""Command-line interface: ``ltlpredict <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import gbrt
from .checker import check
from .features import FeatureConfig, featurize
from .kripke import decode_kripke
from .ltl import parse_ltl, token_length
from .pipeline import (
    REFERENCE_FORMULA_SEED,
    REFERENCE_KRIPKE_SEED,
    SplitParams,
    benchmark,
    build_dataset,
    load_dataset,
    run_experiment,
    save_dataset,
    timing_table,
)
from .smv import export_smv

EXIT_USAGE = 1
EXIT_DATA = 2



class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_geometry(p: argparse.ArgumentParser) -> None:
    p.add_argument("--states", type=int, default=5, help="number of Kripke states (default 5)")
    p.add_argument("--props", type=int, default=3, help="atomic propositions (default 3)")


def _pair(args):
    k = decode_kripke(args.k, args.states, args.props)
    f = parse_ltl(args.f)
    return k, f


def cmd_gen(args) -> int:
    d = build_dataset(
        args.kripke, args.formulas, args.length, args.states, args.props, args.transitions,
        pair_limit=args.pairs, kripke_seed=args.kripke_seed, formula_seed=args.formula_seed,
        workers=args.workers,
    )
    save_dataset(d, args.out)
    yes, no = d.class_counts()
    print(f"wrote {len(d)} records to {args.out} (yes {yes}, no {no})")
    return 0


def cmd_check(args) -> int:
    k, f = _pair(args)
    v = check(k, f)
    print("true" if v.holds else "false")
    if v.counterexample is not None:
        ce = v.counterexample
        print("counterexample: prefix " + " ".join(f"S{s}" for s in ce.prefix)
              + " | cycle " + " ".join(f"S{s}" for s in ce.cycle))
    return 0


def cmd_train(args) -> int:
    d = load_dataset(args.data)
    params = gbrt.GbrtParams(args.trees, args.depth, args.rate, args.min_leaf, args.threshold)
    report, model = run_experiment(d, SplitParams(args.seed, args.fraction), params)
    Path(args.model).write_text(gbrt.serialize_model(model), encoding="utf-8")
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    print(report.table())
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _load_model(path: str) -> tuple[gbrt.GbrtModel, FeatureConfig]:
    model = gbrt.deserialize_model(Path(path).read_text(encoding="utf-8"))
    return model, FeatureConfig.from_fingerprint(model.layout)


def cmd_predict(args) -> int:
    model, cfg = _load_model(args.model)
    k = decode_kripke(args.k, cfg.n_states, cfg.n_props)
    f = parse_ltl(args.f)
    if token_length(f) > cfg.max_formula_tokens:
        raise ValueError(f"formula has {token_length(f)} tokens; the model accepts {cfg.max_formula_tokens}")
    print(model.classify(featurize(k, f, cfg).tolist()))
    return 0


def cmd_bench(args) -> int:
    model, cfg = _load_model(args.model)
    d = load_dataset(args.data)
    t1, t2, _, _ = benchmark(d, model, args.calls, cfg)
    print(timing_table([(d.meta.formula_length, t1, t2)]))
    return 0


def cmd_export_smv(args) -> int:
    k, f = _pair(args)
    text = export_smv(k, f)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltlpredict", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="build a labelled dataset CSV")
    _add_geometry(p)
    p.add_argument("--transitions", type=int, default=8)
    p.add_argument("--kripke", type=int, default=25, help="number of structures")
    p.add_argument("--formulas", type=int, default=25, help="number of formulas")
    p.add_argument("--length", type=int, default=25, help="formula token length L")
    p.add_argument("--pairs", type=int, default=None, help="check only the first N pairs")
    p.add_argument("--kripke-seed", type=int, default=REFERENCE_KRIPKE_SEED)
    p.add_argument("--formula-seed", type=int, default=REFERENCE_FORMULA_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="model check one pair exactly")
    _add_geometry(p)
    p.add_argument("--k", required=True, help="compact structure string")
    p.add_argument("--f", required=True, help="LTL formula")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("train", help="split, train and evaluate")
    p.add_argument("--data", required=True)
    p.add_argument("--seed", type=int, default=1988, help="split seed")
    p.add_argument("--fraction", type=float, default=0.83, help="training fraction")
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--rate", type=float, default=0.1)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--model", required=True, help="where to write the model document")
    p.add_argument("--report", help="where to write the JSON report")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict the verdict of one pair")
    p.add_argument("--model", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--f", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("bench", help="time checking against prediction")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--calls", type=int, default=1000, help="minimum classify calls")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-smv", help="write an SMV model for external checkers")
    _add_geometry(p)
    p.add_argument("--k", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--out", default="-", help="output file (default stdout)")
    p.set_defaults(func=cmd_export_smv)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"ltlpredict: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
