"""End-to-end pipeline: prep -> filter -> sample -> featurize -> train -> evaluate.

Every stage reads and writes plain files under the configured workdir and
records content hashes of its inputs and outputs in a manifest; a rerun
skips any stage whose recorded hashes still match, and a forced recompute
reproduces the artifacts byte for byte (all randomness is derived from the
one config seed, keyed by stage name).
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

from .classify import (LabeledExample, cross_validate, evaluate, load_model,
                       save_model, stratified_split, train)
from .errors import ConfigError, DataError
from .features import (FeatureConfig, FeatureVector, PageVectorTable,
                       WordVectorTable, make_provider, metadata_values)
from .ingest import load_bot_registry, load_corpus
from .rules import (LABEL_HUMAN, LABEL_TEMPLATE, LabeledArticle, RuleConfig,
                    label_corpus, sample_training_pool)
from .textprep import TokenizedArticle, extract_corpus

logger = logging.getLogger(__name__)

STAGES = ("prep", "filter", "sample", "featurize", "train", "evaluate")
LABEL_CODES = {LABEL_HUMAN: 0, LABEL_TEMPLATE: 1}


def derive_seed(master: int, stage: str) -> int:
    """Stage-keyed child seed: low 8 bytes of sha256("master:stage")."""
    digest = hashlib.sha256(f"{master}:{stage}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass
class PipelineConfig:
    corpus: Path
    bot_registry: Path
    workdir: Path
    seed: int = 42
    min_tokens: int = 50
    per_class: int = 600
    model: str = "gbt"
    feature: FeatureConfig = field(default_factory=FeatureConfig)
    test_fraction: float = 0.2
    cv_folds: int = 5
    rules: RuleConfig = field(default_factory=RuleConfig)
    word_vectors: Path | None = None
    page_vectors: Path | None = None

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        base = path.parent
        for key in ("corpus", "bot_registry", "workdir"):
            if key not in doc:
                raise ConfigError(f"config must set {key!r}")
        rules_doc = doc.get("rules", {})
        rule_kwargs = {}
        for key, value in rules_doc.items():
            if key in ("before_cutoff", "after_window_end", "snapshot_date"):
                rule_kwargs[key] = date.fromisoformat(value)
            elif key == "flagged_creators":
                rule_kwargs[key] = frozenset(value)
            else:
                rule_kwargs[key] = value
        feature = FeatureConfig.from_json_dict(doc["feature"]) if "feature" in doc \
            else FeatureConfig()
        return cls(
            corpus=(base / doc["corpus"]).resolve(),
            bot_registry=(base / doc["bot_registry"]).resolve(),
            workdir=(base / doc["workdir"]).resolve(),
            seed=int(doc.get("seed", 42)),
            min_tokens=int(doc.get("min_tokens", 50)),
            per_class=int(doc.get("per_class", 600)),
            model=doc.get("model", "gbt"),
            feature=feature,
            test_fraction=float(doc.get("test_fraction", 0.2)),
            cv_folds=int(doc.get("cv_folds", 5)),
            rules=RuleConfig(**rule_kwargs),
            word_vectors=(base / doc["word_vectors"]).resolve() if doc.get("word_vectors") else None,
            page_vectors=(base / doc["page_vectors"]).resolve() if doc.get("page_vectors") else None,
        )

    def fingerprint(self) -> str:
        doc = {
            "seed": self.seed,
            "min_tokens": self.min_tokens,
            "per_class": self.per_class,
            "model": self.model,
            "feature": self.feature.to_json_dict(),
            "test_fraction": self.test_fraction,
            "cv_folds": self.cv_folds,
            "rules": {
                "before_cutoff": self.rules.before_cutoff.isoformat(),
                "after_window_end": self.rules.after_window_end.isoformat(),
                "young_age_days": self.rules.young_age_days,
                "snapshot_date": self.rules.snapshot_date.isoformat(),
                "edits_hi": self.rules.edits_hi,
                "editors_hi": self.rules.editors_hi,
                "share_threshold": self.rules.share_threshold,
                "flagged_creators": sorted(self.rules.flagged_creators),
            },
        }
        blob = json.dumps(doc, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


def file_hash(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class Manifest:
    def __init__(self, path: Path):
        self.path = path
        self.data = {}
        if path.is_file():
            self.data = json.loads(path.read_text(encoding="utf-8"))

    def stage_fresh(self, stage: str, inputs: dict[str, str]) -> bool:
        entry = self.data.get(stage)
        if not entry or entry.get("inputs") != inputs:
            return False
        for rel, recorded in entry.get("outputs", {}).items():
            out = self.path.parent / rel
            if not out.is_file() or file_hash(out) != recorded:
                return False
        return True

    def record(self, stage: str, inputs: dict[str, str], outputs: list[Path]) -> None:
        self.data[stage] = {
            "inputs": inputs,
            "outputs": {out.name: file_hash(out) for out in outputs},
        }
        self.path.write_text(json.dumps(self.data, indent=1, sort_keys=True) + "\n",
                             encoding="utf-8")


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, ensure_ascii=False, indent=1, sort_keys=True) + "\n",
                    encoding="utf-8")


def _load_tokenized(path: Path) -> list[TokenizedArticle]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            doc = json.loads(line)
            out.append(TokenizedArticle(page_id=doc["page_id"], tokens=doc["tokens"],
                                        char_count=doc["char_count"]))
    return out


def _load_labeled(path: Path) -> list[LabeledArticle]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            doc = json.loads(line)
            out.append(LabeledArticle(page_id=doc["page_id"], label=doc["label"],
                                      matched_rules=doc["matched_rules"]))
    return out


class Pipeline:
    """Executes the stage graph against one config."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.workdir = Path(config.workdir)
        self.workdir.mkdir(parents=True, exist_ok=True)
        self.manifest = Manifest(self.workdir / "manifest.json")

    # artifact paths
    @property
    def tokenized_path(self) -> Path:
        return self.workdir / "tokenized.jsonl"

    @property
    def prep_report_path(self) -> Path:
        return self.workdir / "prep_report.json"

    @property
    def labeled_path(self) -> Path:
        return self.workdir / "labeled.jsonl"

    @property
    def attrition_path(self) -> Path:
        return self.workdir / "attrition.csv"

    @property
    def label_report_path(self) -> Path:
        return self.workdir / "label_report.json"

    @property
    def sample_path(self) -> Path:
        return self.workdir / "sample.json"

    @property
    def features_path(self) -> Path:
        return self.workdir / "features.csv"

    @property
    def model_path(self) -> Path:
        return self.workdir / "model.json"

    @property
    def split_path(self) -> Path:
        return self.workdir / "split.json"

    @property
    def eval_json_path(self) -> Path:
        return self.workdir / "eval.json"

    @property
    def eval_csv_path(self) -> Path:
        return self.workdir / "eval.csv"

    def _inputs(self, *paths: Path) -> dict[str, str]:
        fingerprint = {"config": self.config.fingerprint()}
        for p in paths:
            if not p.is_file():
                raise DataError(f"required input is missing: {p}")
            fingerprint[p.name] = file_hash(p)
        return fingerprint

    def _run_stage(self, stage: str, inputs: dict[str, str], outputs: list[Path],
                   fn) -> bool:
        if self.manifest.stage_fresh(stage, inputs):
            logger.info("stage %s: up to date, skipping", stage)
            return False
        logger.info("stage %s: running", stage)
        fn()
        for out in outputs:
            if not out.is_file():
                raise DataError(f"stage {stage} did not produce {out}")
        self.manifest.record(stage, inputs, outputs)
        return True

    def run(self, stages=STAGES) -> dict:
        from .errors import WikiForensicsError

        ran = {}
        for stage in stages:
            if stage not in STAGES:
                raise ConfigError(f"unknown stage {stage!r}")
            try:
                ran[stage] = getattr(self, f"stage_{stage}")()
            except WikiForensicsError as exc:
                exc.args = (f"stage {stage}: {exc}",)
                raise
        return ran

    def stage_prep(self) -> bool:
        inputs = self._inputs(self.config.corpus)

        def fn():
            stream = extract_corpus(load_corpus(self.config.corpus),
                                    min_tokens=self.config.min_tokens)
            with open(self.tokenized_path, "w", encoding="utf-8") as fh:
                for article in stream:
                    fh.write(json.dumps(
                        {"page_id": article.page_id, "tokens": article.tokens,
                         "char_count": article.char_count},
                        ensure_ascii=False, sort_keys=True) + "\n")
            _write_json(self.prep_report_path, {
                "kept": stream.kept_count,
                "discarded": stream.discarded_count,
                "min_tokens": self.config.min_tokens,
            })

        return self._run_stage("prep", inputs,
                               [self.tokenized_path, self.prep_report_path], fn)

    def stage_filter(self) -> bool:
        if not Path(self.config.bot_registry).is_file():
            raise ConfigError(f"bot registry not found: {self.config.bot_registry}")
        inputs = self._inputs(self.config.corpus, self.tokenized_path,
                              self.config.bot_registry)

        def fn():
            registry = load_bot_registry(self.config.bot_registry)
            kept_ids = {a.page_id for a in _load_tokenized(self.tokenized_path)}
            articles = [a for a in load_corpus(self.config.corpus)
                        if a.page_id in kept_ids]
            report = label_corpus(articles, registry, self.config.rules)
            with open(self.labeled_path, "w", encoding="utf-8") as fh:
                for labeled in report.labeled:
                    fh.write(json.dumps(labeled.to_json_dict(),
                                        ensure_ascii=False, sort_keys=True) + "\n")
            with open(self.attrition_path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["chain", "rule", "filtered_out"])
                for chain in ("before", "after"):
                    for rule, count in report.attrition[chain].items():
                        writer.writerow([chain, rule, count])
            _write_json(self.label_report_path, {"counts": report.counts})

        return self._run_stage(
            "filter", inputs,
            [self.labeled_path, self.attrition_path, self.label_report_path], fn)

    def stage_sample(self) -> bool:
        inputs = self._inputs(self.labeled_path)

        def fn():
            labeled = _load_labeled(self.labeled_path)
            sample = sample_training_pool(labeled, per_class=self.config.per_class,
                                          seed=derive_seed(self.config.seed, "sample"))
            _write_json(self.sample_path, {
                "per_class": self.config.per_class,
                "items": [{"page_id": a.page_id, "label": a.label} for a in sample],
            })

        return self._run_stage("sample", inputs, [self.sample_path], fn)

    def _provider(self):
        config = self.config.feature
        if config.mode == "metadata":
            return None
        word_vectors = WordVectorTable.load(self.config.word_vectors) \
            if self.config.word_vectors else None
        page_vectors = PageVectorTable.load(self.config.page_vectors) \
            if self.config.page_vectors else None
        return make_provider(config, word_vectors, page_vectors)

    def stage_featurize(self) -> bool:
        inputs = self._inputs(self.config.corpus, self.tokenized_path, self.sample_path)

        def fn():
            sample_doc = json.loads(self.sample_path.read_text(encoding="utf-8"))
            wanted = {item["page_id"]: LABEL_CODES[item["label"]]
                      for item in sample_doc["items"]}
            tokenized = {a.page_id: a for a in _load_tokenized(self.tokenized_path)}
            metadata = {a.page_id: a.metadata for a in load_corpus(self.config.corpus)
                        if a.page_id in wanted}
            provider = self._provider()
            config = self.config.feature
            with open(self.features_path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                first = True
                for item in sample_doc["items"]:
                    page_id = item["page_id"]
                    parts = []
                    if config.mode in ("embeddings", "both"):
                        from .features import embed_article

                        parts.append(embed_article(tokenized[page_id], provider).values)
                    if config.mode in ("metadata", "both"):
                        parts.append(metadata_values(metadata[page_id],
                                                     config.metadata_fields))
                    values = np.concatenate(parts)
                    if first:
                        writer.writerow(["page_id", "label"] +
                                        [f"f{i}" for i in range(len(values))])
                        first = False
                    writer.writerow([page_id, wanted[page_id]] +
                                    [repr(float(v)) for v in values])

        return self._run_stage("featurize", inputs, [self.features_path], fn)

    def _load_examples(self) -> list[LabeledExample]:
        examples = []
        with open(self.features_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            dim = len(header) - 2
            for row in reader:
                values = np.array([float(v) for v in row[2:2 + dim]])
                examples.append(LabeledExample(
                    FeatureVector(int(row[0]), values), int(row[1])))
        return examples

    def stage_train(self) -> bool:
        inputs = self._inputs(self.features_path)

        def fn():
            examples = self._load_examples()
            seed = derive_seed(self.config.seed, "train")
            train_set, test_set = stratified_split(examples, self.config.test_fraction,
                                                   seed=seed)
            model = train(self.config.model, train_set,
                          feature_config=self.config.feature, seed=seed)
            save_model(model, self.model_path)
            _write_json(self.split_path, {
                "seed": seed,
                "test_fraction": self.config.test_fraction,
                "test_page_ids": sorted(ex.features.page_id for ex in test_set),
            })

        return self._run_stage("train", inputs, [self.model_path, self.split_path], fn)

    def stage_evaluate(self) -> bool:
        inputs = self._inputs(self.features_path, self.model_path, self.split_path)

        def fn():
            examples = self._load_examples()
            split_doc = json.loads(self.split_path.read_text(encoding="utf-8"))
            test_ids = set(split_doc["test_page_ids"])
            test_set = [ex for ex in examples if ex.features.page_id in test_ids]
            model = load_model(self.model_path)
            cv = cross_validate(self.config.model, examples, k=self.config.cv_folds,
                                seed=derive_seed(self.config.seed, "evaluate"))
            report = evaluate(model, test_set, cv_fold_accuracies=cv)
            _write_json(self.eval_json_path, {
                "model_id": model.model_id,
                "model_type": model.model_type,
                **report.as_dict(),
            })
            with open(self.eval_csv_path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["model_type", "accuracy", "roc_auc",
                                 "tn", "fp", "fn", "tp"] +
                                [f"cv{i + 1}" for i in range(len(cv))])
                c = report.confusion
                writer.writerow([model.model_type, repr(report.accuracy),
                                 repr(report.roc_auc) if report.roc_auc is not None else "",
                                 c[0][0], c[0][1], c[1][0], c[1][1]] +
                                [repr(a) for a in cv])

        return self._run_stage("evaluate", inputs,
                               [self.eval_json_path, self.eval_csv_path], fn)


def run_pipeline(config: PipelineConfig, stages=STAGES) -> dict:
    return Pipeline(config).run(stages)
