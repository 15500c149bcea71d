"""Command-line entry point.

Pipeline stages (prep, filter, sample, featurize, train, evaluate) run
against a pipeline config; invoking a stage runs the chain up to it,
skipping anything already fresh in the manifest. Analysis commands (stats,
lexdiv, ngrams, contrib, ablate, cluster) work on corpus files directly,
and scan/search/serve drive a persisted model behind the scanner config.

Exit codes: 0 ok, 2 config error, 3 data error, 4 upstream fetch error.
All randomness derives from one seed, keyed by stage name (see
``pipeline.derive_seed``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import ConfigError, DataError, FetchError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_UPSTREAM = 4


def _load_corpus_tokenized(path, fmt: str, min_tokens: int):
    from .ingest import load_corpus
    from .textprep import extract_corpus

    stream = extract_corpus(load_corpus(path, format=fmt), min_tokens=min_tokens)
    articles = list(stream)
    return articles, stream.discarded_count


def _pipeline_config(args) -> "object":
    from .pipeline import PipelineConfig

    if not args.config:
        raise ConfigError("this command needs --config pointing at a pipeline config")
    config = PipelineConfig.from_file(args.config)
    if args.seed is not None:
        config.seed = args.seed
    return config


def _scanner_config(args):
    from .scanner import ScannerConfig

    if not args.config:
        raise ConfigError("this command needs --config pointing at a scanner config")
    path = Path(args.config)
    if not path.is_file():
        raise ConfigError(f"scanner config not found: {path}")
    doc = json.loads(path.read_text(encoding="utf-8"))
    if "scanner" in doc and "model_path" not in doc:
        doc = doc["scanner"]
    return ScannerConfig.from_dict(doc, base=path.parent)


def _stage_command(stage: str):
    def handler(args) -> int:
        from .pipeline import STAGES, Pipeline

        config = _pipeline_config(args)
        chain = STAGES[:STAGES.index(stage) + 1]
        ran = Pipeline(config).run(chain)
        print(json.dumps({"stages": {s: ("ran" if r else "fresh") for s, r in ran.items()}}))
        return EXIT_OK

    return handler


def cmd_pipeline(args) -> int:
    from .pipeline import Pipeline

    config = _pipeline_config(args)
    ran = Pipeline(config).run()
    print(json.dumps({"stages": {s: ("ran" if r else "fresh") for s, r in ran.items()}}))
    return EXIT_OK


def cmd_stats(args) -> int:
    from .lexstats import length_distribution, summarize_corpus
    from .ingest import load_corpus
    from .textprep import extract_corpus

    records = list(load_corpus(args.corpus, format=args.format))
    by_id = {r.page_id: r.metadata for r in records}
    stream = extract_corpus(iter(records), min_tokens=args.min_tokens)
    articles = list(stream)
    summary = summarize_corpus((a, by_id.get(a.page_id)) for a in articles)
    out = summary.as_dict()
    out["discarded_below_min_tokens"] = stream.discarded_count
    print(json.dumps(out, indent=1, sort_keys=True))
    if args.lengths_csv:
        dist = length_distribution(articles)
        with open(args.lengths_csv, "w", encoding="utf-8") as fh:
            fh.write("page_id,tokens,chars\n")
            for page_id, tokens, chars in dist.rows:
                fh.write(f"{page_id},{tokens},{chars}\n")
    return EXIT_OK


def cmd_lexdiv(args) -> int:
    from .lexstats import lexical_diversity

    articles, _ = _load_corpus_tokenized(args.corpus, args.format, args.min_tokens)
    tokens = [t for a in articles for t in a.tokens]
    if not tokens:
        raise DataError("no tokens survived extraction")
    report = lexical_diversity(tokens, threshold=args.mtld_threshold)
    out = report.as_dict()
    # table-style display values to two decimals (TTR keeps three)
    out["formatted"] = {
        "ttr": f"{report.ttr:.3f}",
        "rttr": f"{report.rttr:.2f}",
        "cttr": f"{report.cttr:.2f}",
        "mtld": f"{report.mtld:.2f}" if report.mtld is not None else "undefined",
    }
    print(json.dumps(out, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_prep(args) -> int:
    if args.config:
        return _stage_command("prep")(args)
    if not args.corpus:
        raise ConfigError("prep needs --config or --corpus")
    from .ingest import load_corpus
    from .textprep import extract_corpus

    stream = extract_corpus(load_corpus(args.corpus, format=args.format),
                            min_tokens=args.min_tokens)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for article in stream:
            out.write(json.dumps(
                {"page_id": article.page_id, "tokens": article.tokens,
                 "char_count": article.char_count},
                ensure_ascii=False, sort_keys=True) + "\n")
    finally:
        if args.out:
            out.close()
    print(json.dumps({"kept": stream.kept_count,
                      "discarded": stream.discarded_count}), file=sys.stderr)
    return EXIT_OK


def cmd_ngrams(args) -> int:
    import math

    from .ngrams import count_ngrams, diagnose_decay, top1_decay

    articles, _ = _load_corpus_tokenized(args.corpus, args.format, args.min_tokens)
    rows = []
    for n in args.n:
        for rank, (gram, count) in enumerate(count_ngrams(articles, n, args.k), start=1):
            rows.append((n, rank, " ".join(gram), count, math.log10(count)))
    writer = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        writer.write("n,rank,gram,count,log10\n")
        for n, rank, gram, count, log10 in rows:
            gram_escaped = '"' + gram.replace('"', '""') + '"'
            writer.write(f"{n},{rank},{gram_escaped},{count},{log10!r}\n")
    finally:
        if args.out:
            writer.close()
    if args.decay:
        series = top1_decay(articles, n_max=args.decay)
        try:
            diagnosis = diagnose_decay(series, band=tuple(args.band),
                                       threshold=args.decay_threshold)
            verdict = {"anomaly_flag": diagnosis.anomaly_flag,
                       "geometric_mean_ratio": diagnosis.geometric_mean,
                       "band": list(diagnosis.anomaly_band)}
        except DataError as exc:
            verdict = {"anomaly_flag": None, "error": str(exc)}
        print(json.dumps(verdict), file=sys.stderr)
    return EXIT_OK


def cmd_contrib(args) -> int:
    from .contrib import creator_editor_percentages, rank_creators
    from .ingest import load_bot_registry, load_corpus

    registry = load_bot_registry(args.bots)
    records = list(load_corpus(args.corpus, format=args.format))
    shares = creator_editor_percentages(records, registry,
                                        suffix_heuristic=args.suffix_heuristic)
    ranking = rank_creators(records, registry, top_n=args.top,
                            suffix_heuristic=args.suffix_heuristic)
    print(json.dumps({
        "creator_bot_pct": shares.creator_bot_pct,
        "creator_human_pct": shares.creator_human_pct,
        "editor_bot_pct": shares.editor_bot_pct,
        "editor_human_pct": shares.editor_human_pct,
        "articles_without_editors": shares.articles_without_editors,
        "top_creators": [
            {"username": u, "created": c, "pct": p, "type": t}
            for u, c, p, t in ranking.entries
        ],
    }, ensure_ascii=False, indent=1, sort_keys=True))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("kind,type,pct\n")
            fh.write(f"creator,bot,{shares.creator_bot_pct!r}\n")
            fh.write(f"creator,human,{shares.creator_human_pct!r}\n")
            fh.write(f"editor,bot,{shares.editor_bot_pct!r}\n")
            fh.write(f"editor,human,{shares.editor_human_pct!r}\n")
    return EXIT_OK


def _ablation_items(config):
    from .ingest import load_corpus
    from .pipeline import LABEL_CODES, Pipeline

    pipe = Pipeline(config)
    if not pipe.sample_path.is_file():
        pipe.run(("prep", "filter", "sample"))
    sample_doc = json.loads(pipe.sample_path.read_text(encoding="utf-8"))
    wanted = {item["page_id"]: LABEL_CODES[item["label"]]
              for item in sample_doc["items"]}
    metadata = {a.page_id: a.metadata for a in load_corpus(config.corpus)
                if a.page_id in wanted}
    return [(metadata[pid], label) for pid, label in wanted.items()]


def cmd_ablate(args) -> int:
    from .classify import ABLATION_SETS, MODEL_TYPES, run_ablation
    from .pipeline import derive_seed

    config = _pipeline_config(args)
    items = _ablation_items(config)
    models = list(MODEL_TYPES) if args.models == ["all"] else args.models
    seed = derive_seed(config.seed, "ablate")

    def cell(model_type):
        return model_type, run_ablation(items, model_type, seed=seed)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = dict(pool.map(cell, models))
    else:
        results = dict(cell(m) for m in models)
    writer = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        writer.write("classifier," + ",".join(ABLATION_SETS) + "\n")
        for model_type in models:
            row = results[model_type]
            writer.write(model_type + "," +
                         ",".join(repr(row[s]) for s in ABLATION_SETS) + "\n")
    finally:
        if args.out:
            writer.close()
    return EXIT_OK


def cmd_cluster(args) -> int:
    from .classify import ABLATION_SETS
    from .cluster import CLUSTER_ALGORITHMS, run_cluster_ablation
    from .pipeline import derive_seed

    config = _pipeline_config(args)
    items = _ablation_items(config)
    algorithms = list(CLUSTER_ALGORITHMS) if args.algorithms == ["all"] else args.algorithms
    seed = derive_seed(config.seed, "cluster")
    writer = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        writer.write("clusterer," + ",".join(ABLATION_SETS) + "\n")
        for algorithm in algorithms:
            row = run_cluster_ablation(items, algorithm, k=args.k, seed=seed)
            writer.write(algorithm + "," + ",".join(
                repr(row[s]) if row[s] is not None else "" for s in ABLATION_SETS) + "\n")
    finally:
        if args.out:
            writer.close()
    return EXIT_OK


def cmd_sample(args) -> int:
    return _stage_command("sample")(args)


def cmd_featurize(args) -> int:
    return _stage_command("featurize")(args)


def cmd_filter(args) -> int:
    return _stage_command("filter")(args)


def cmd_train(args) -> int:
    return _stage_command("train")(args)


def cmd_evaluate(args) -> int:
    return _stage_command("evaluate")(args)


def cmd_scan(args) -> int:
    from .scanner import build_scanner

    scanner = build_scanner(_scanner_config(args))
    verdict = scanner.scan(args.title)
    print(json.dumps(verdict.to_json_dict(), ensure_ascii=False, sort_keys=True))
    return EXIT_OK


def cmd_search(args) -> int:
    from .scanner import build_scanner

    scanner = build_scanner(_scanner_config(args))
    results = scanner.search(args.query, args.limit)
    print(json.dumps({"query": args.query, "results": [
        {"title": t, "score": s} for t, s in results
    ]}, ensure_ascii=False))
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    config = _scanner_config(args)
    if args.port:
        config.port = args.port
    serve(config, host=args.host)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wikiforensics",
        description="Corpus forensics and template-translation detection for wiki dumps.")
    parser.add_argument("--config", help="pipeline or scanner config (JSON)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker bound for parallelizable grids")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def corpus_flags(p, required=True):
        p.add_argument("--corpus", required=required)
        p.add_argument("--format", choices=("jsonl", "mediawiki-xml"), default="jsonl")
        p.add_argument("--min-tokens", type=int, default=50)

    p = sub.add_parser("prep", help="tokenize a corpus, dropping short articles")
    corpus_flags(p, required=False)
    p.add_argument("--out", help="tokenized JSONL output (default stdout)")
    p.set_defaults(handler=cmd_prep)

    p = sub.add_parser("stats", help="corpus summary statistics")
    corpus_flags(p)
    p.add_argument("--lengths-csv", help="write per-article length series CSV")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("lexdiv", help="lexical richness/diversity metrics")
    corpus_flags(p)
    p.add_argument("--mtld-threshold", type=float, default=0.72)
    p.set_defaults(handler=cmd_lexdiv)

    p = sub.add_parser("ngrams", help="top-k n-gram profile and decay diagnosis")
    corpus_flags(p)
    p.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 5, 10, 50])
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--decay", type=int, default=0,
                   help="also emit the top-1 decay diagnosis up to this n")
    p.add_argument("--band", type=int, nargs=2, default=[5, 15])
    p.add_argument("--decay-threshold", type=float, default=1.2)
    p.set_defaults(handler=cmd_ngrams)

    p = sub.add_parser("contrib", help="creator/editor bot-vs-human shares")
    corpus_flags(p)
    p.add_argument("--bots", required=True, help="bot registry file")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--suffix-heuristic", action="store_true")
    p.add_argument("--out", help="CSV output for the share chart")
    p.set_defaults(handler=cmd_contrib)

    for name, help_text in (
        ("filter", "apply the labeling rule chains"),
        ("sample", "draw the balanced training pool"),
        ("featurize", "assemble model input features"),
        ("train", "fit the configured model"),
        ("evaluate", "score the held-out split"),
    ):
        p = sub.add_parser(name, help=help_text + " (runs the chain up to here)")
        p.set_defaults(handler={"filter": cmd_filter, "sample": cmd_sample,
                                "featurize": cmd_featurize, "train": cmd_train,
                                "evaluate": cmd_evaluate}[name])

    p = sub.add_parser("pipeline", help="run every stage end to end")
    p.set_defaults(handler=cmd_pipeline)

    p = sub.add_parser("ablate", help="metadata ablation accuracy grid")
    p.add_argument("--models", nargs="+", default=["all"])
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(handler=cmd_ablate)

    p = sub.add_parser("cluster", help="clustering silhouette ablation grid")
    p.add_argument("--algorithms", nargs="+", default=["all"])
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(handler=cmd_cluster)

    p = sub.add_parser("scan", help="classify one article by title")
    p.add_argument("--title", required=True)
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("search", help="fuzzy title search")
    p.add_argument("--query", required=True)
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("serve", help="run the HTTP scanner service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=0)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FetchError as exc:
        print(f"upstream error: {exc}", file=sys.stderr)
        return EXIT_UPSTREAM
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
