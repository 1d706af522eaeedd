"""Command-line pipeline: corpus, expertise, logs, labels, training, serving.

Each subcommand reads and writes plain files so the stages can run
independently. A corpus directory holds corpus.jsonl, dictionaries/,
and priors.json; expertise matrices, models, sessions, and labeled
lists are single files. Common path arguments honor TALENTSEARCH_*
environment variables as defaults.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .corpus import load_corpus, load_dictionaries, save_corpus, save_dictionaries
from .evaluation import compare_models, format_comparison
from .expertise import FactorizationConfig, build_expertise, load_expertise, save_expertise
from .label_gen import (
    SimulatorConfig,
    attach_features,
    derive_coinmail_labels,
    derive_keyword_labels,
    load_labeled_lists,
    load_sessions,
    save_labeled_lists,
    save_sessions,
    simulate_sessions,
    split_by_session,
)
from .features import FeatureModels
from .ltr import LinearModel, TrainConfig, train_coordinate_ascent
from .retrieval import build_index
from .service import build_snapshot, create_app
from .synth import SynthConfig, build_taxonomy, generate_corpus, generate_priors

logger = logging.getLogger(__name__)


def _env(name: str, fallback: str | None = None) -> str | None:
    return os.environ.get(f"TALENTSEARCH_{name}", fallback)


def _load_corpus_dir(corpus_dir: str):
    base = Path(corpus_dir)
    corpus = load_corpus(base / "corpus.jsonl")
    dictionaries = load_dictionaries(base / "dictionaries")
    priors_path = base / "priors.json"
    priors = {}
    if priors_path.exists():
        with open(priors_path, encoding="utf-8") as handle:
            priors = {int(k): float(v) for k, v in json.load(handle).items()}
    return corpus, dictionaries, priors


def cmd_make_corpus(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = SynthConfig(n_members=args.members)
    dictionaries = build_taxonomy(seed=args.seed)
    corpus = generate_corpus(cfg, seed=args.seed, dictionaries=dictionaries)
    save_corpus(corpus, out / "corpus.jsonl")
    save_dictionaries(dictionaries, out / "dictionaries")
    priors = generate_priors(corpus, seed=args.seed + 1)
    with open(out / "priors.json", "w", encoding="utf-8") as handle:
        json.dump({str(k): round(v, 6) for k, v in priors.items()}, handle)
    print(f"wrote {len(corpus.profiles)} members to {out}")
    return 0


def cmd_build_expertise(args: argparse.Namespace) -> int:
    corpus, dictionaries, _ = _load_corpus_dir(args.corpus)
    cfg = FactorizationConfig(
        rank=args.rank,
        regularization=args.regularization,
        iterations=args.iterations,
        threshold=args.threshold,
        rng_seed=args.seed,
    )
    matrix = build_expertise(corpus, dictionaries, cfg)
    out = args.out or str(Path(args.corpus) / "expertise.json")
    save_expertise(matrix, out)
    print(f"wrote {matrix.n_cells()} expertise cells to {out}")
    return 0


def cmd_simulate_logs(args: argparse.Namespace) -> int:
    corpus, dictionaries, _ = _load_corpus_dir(args.corpus)
    index = build_index(corpus)
    cfg = SimulatorConfig(
        n_sessions=args.sessions,
        page_size=args.page_size,
        top_k=args.top_k,
        randomize=not args.no_randomize,
        session_id_base=args.session_id_base,
    )
    sessions = simulate_sessions(corpus, index, dictionaries, cfg, seed=args.seed)
    save_sessions(sessions, args.out)
    usable = sum(1 for s in sessions if len(s.inmailed()) >= 2)
    print(f"wrote {len(sessions)} sessions ({usable} with 2+ contacts) to {args.out}")
    return 0


def cmd_make_labels(args: argparse.Namespace) -> int:
    corpus, dictionaries, priors = _load_corpus_dir(args.corpus)
    expertise = load_expertise(args.expertise or str(Path(args.corpus) / "expertise.json"))
    sessions = load_sessions(args.sessions)
    models = FeatureModels(dictionaries=dictionaries, priors=priors)
    rng = np.random.default_rng(args.seed)

    coinmail = []
    for session in sessions:
        labeled = derive_coinmail_labels(session, int(rng.integers(1, 4)), rng)
        if labeled is not None:
            coinmail.append(labeled)
    attach_features(coinmail, corpus, expertise, models)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    train, valid, test = split_by_session(coinmail, rng)
    save_labeled_lists(train, f"{prefix}.train.jsonl")
    save_labeled_lists(valid, f"{prefix}.valid.jsonl")
    save_labeled_lists(test, f"{prefix}.test.jsonl")
    print(
        f"wrote {len(train)}/{len(valid)}/{len(test)} train/valid/test lists to {prefix}.*.jsonl"
    )

    if args.keyword:
        keyword = [derive_keyword_labels(s) for s in sessions]
        attach_features(keyword, corpus, expertise, models)
        save_labeled_lists(keyword, f"{prefix}.keyword.jsonl")
        print(f"wrote {len(keyword)} keyword lists to {prefix}.keyword.jsonl")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    train_lists = load_labeled_lists(args.train)
    valid_lists = load_labeled_lists(args.valid) if args.valid else []
    frozen = tuple(name for name in (args.frozen or "").split(",") if name)
    cfg = TrainConfig(
        ndcg_cutoff=args.cutoff,
        rng_seed=args.seed,
        restarts=args.restarts,
        frozen_features=frozen,
    )
    model = train_coordinate_ascent(
        [x.to_ranking_list() for x in train_lists],
        [x.to_ranking_list() for x in valid_lists],
        cfg,
    )
    model.save(args.out)
    history = model.metadata.get("train_ndcg_history", [])
    last = history[-1] if history else float("nan")
    print(
        f"trained on {len(train_lists)} lists, final train ndcg@{args.cutoff} {last:.4f}, "
        f"wrote {args.out}"
    )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    test_lists = load_labeled_lists(args.test)
    named = {}
    for spec in args.models.split(","):
        path = spec.strip()
        if not path:
            continue
        named[Path(path).stem] = LinearModel.load(path)
    comparison = compare_models(named, [x.to_ranking_list() for x in test_lists])
    print(format_comparison(comparison))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(comparison.to_record(), handle, indent=2)
        print(f"wrote report to {args.report}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    corpus, dictionaries, priors = _load_corpus_dir(args.corpus)
    expertise = load_expertise(args.expertise or str(Path(args.corpus) / "expertise.json"))
    model = LinearModel.load(args.model)
    snapshot = build_snapshot(corpus, dictionaries, expertise, model, priors=priors)
    app = create_app(snapshot, static_dir=args.static)
    print(f"serving snapshot {snapshot.version} on port {args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="talentsearch",
        description="Query-by-example talent search pipeline.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="enable info logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-corpus", help="generate a synthetic member corpus")
    p.add_argument("--out", default=_env("CORPUS", "corpus_dir"))
    p.add_argument("--members", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_make_corpus)

    p = sub.add_parser("build-expertise", help="factorize skill scores into dense expertise")
    p.add_argument("--corpus", default=_env("CORPUS", "corpus_dir"))
    p.add_argument("--out", default=_env("EXPERTISE"))
    p.add_argument("--rank", type=int, default=16)
    p.add_argument("--regularization", type=float, default=0.05)
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--threshold", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_build_expertise)

    p = sub.add_parser("simulate-logs", help="fabricate keyword-search sessions")
    p.add_argument("--corpus", default=_env("CORPUS", "corpus_dir"))
    p.add_argument("--out", required=True)
    p.add_argument("--sessions", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--page-size", type=int, default=25)
    p.add_argument("--top-k", type=int, default=100)
    p.add_argument("--session-id-base", type=int, default=0)
    p.add_argument("--no-randomize", action="store_true")
    p.set_defaults(func=cmd_simulate_logs)

    p = sub.add_parser("make-labels", help="derive graded lists from sessions")
    p.add_argument("--corpus", default=_env("CORPUS", "corpus_dir"))
    p.add_argument("--expertise", default=_env("EXPERTISE"))
    p.add_argument("--sessions", required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--keyword", action="store_true", help="also write keyword-query lists")
    p.set_defaults(func=cmd_make_labels)

    p = sub.add_parser("train", help="fit ranking weights by coordinate ascent")
    p.add_argument("--train", required=True)
    p.add_argument("--valid")
    p.add_argument("--out", default=_env("MODEL", "model.json"))
    p.add_argument("--cutoff", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--frozen", help="comma-separated feature names pinned to zero")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="compare ranking models on held-out lists")
    p.add_argument("--test", required=True)
    p.add_argument("--models", required=True, help="comma-separated model files")
    p.add_argument("--report", help="write machine-readable results here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="run the search API server")
    p.add_argument("--corpus", default=_env("CORPUS", "corpus_dir"))
    p.add_argument("--expertise", default=_env("EXPERTISE"))
    p.add_argument("--model", default=_env("MODEL", "model.json"))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=int(_env("PORT", "8080")))
    p.add_argument("--static", default=_env("STATIC"))
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
