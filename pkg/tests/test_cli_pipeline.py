import json
import shutil

import pytest

from wikiforensics.cli import main
from wikiforensics.fixtures import write_bundle
from wikiforensics.pipeline import (Pipeline, PipelineConfig, derive_seed,
                                    file_hash)


@pytest.fixture(scope="module")
def bundle_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("bundle")
    write_bundle(root, n=400, seed=21, per_class=100)
    return root


@pytest.fixture(scope="module")
def finished_pipeline(bundle_dir):
    config = PipelineConfig.from_file(bundle_dir / "config.json")
    Pipeline(config).run()
    return config


class TestPipeline:
    def test_all_stages_produce_artifacts(self, bundle_dir, finished_pipeline):
        workdir = bundle_dir / "out"
        for name in ("tokenized.jsonl", "labeled.jsonl", "attrition.csv",
                     "sample.json", "features.csv", "model.json", "split.json",
                     "eval.json", "eval.csv", "manifest.json"):
            assert (workdir / name).is_file(), name

    def test_metadata_model_is_perfect_on_fixture(self, bundle_dir, finished_pipeline):
        doc = json.loads((bundle_dir / "out" / "eval.json").read_text())
        assert doc["model_type"] == "gbt"
        assert doc["accuracy"] == 1.0

    def test_rerun_skips_and_keeps_bytes(self, bundle_dir, finished_pipeline):
        workdir = bundle_dir / "out"
        hashes = {p.name: file_hash(p) for p in workdir.iterdir()
                  if p.name != "manifest.json"}
        ran = Pipeline(finished_pipeline).run()
        assert all(r is False for r in ran.values())
        assert {p.name: file_hash(p) for p in workdir.iterdir()
                if p.name != "manifest.json"} == hashes

    def test_forced_recompute_is_byte_identical(self, bundle_dir, finished_pipeline,
                                                tmp_path):
        workdir = bundle_dir / "out"
        reference = {p.name: file_hash(p) for p in workdir.iterdir()
                     if p.name != "manifest.json"}
        clone = tmp_path / "again"
        clone.mkdir()
        for name in ("corpus.jsonl", "bots.txt", "config.json"):
            shutil.copy(bundle_dir / name, clone / name)
        config = PipelineConfig.from_file(clone / "config.json")
        Pipeline(config).run()
        redone = {p.name: file_hash(p) for p in (clone / "out").iterdir()
                  if p.name != "manifest.json"}
        assert redone == reference

    def test_sample_is_balanced(self, bundle_dir, finished_pipeline):
        doc = json.loads((bundle_dir / "out" / "sample.json").read_text())
        labels = [item["label"] for item in doc["items"]]
        assert labels.count("human-generated") == 100
        assert labels.count("template-translated") == 100

    def test_missing_bot_registry_names_path(self, bundle_dir, tmp_path):
        broken = tmp_path / "broken"
        broken.mkdir()
        shutil.copy(bundle_dir / "corpus.jsonl", broken / "corpus.jsonl")
        config_doc = json.loads((bundle_dir / "config.json").read_text())
        (broken / "config.json").write_text(json.dumps(config_doc))
        config = PipelineConfig.from_file(broken / "config.json")
        from wikiforensics.errors import ConfigError

        with pytest.raises(ConfigError, match="bots.txt"):
            Pipeline(config).run()

    def test_derive_seed_is_stage_keyed(self):
        assert derive_seed(42, "sample") != derive_seed(42, "train")
        assert derive_seed(42, "sample") == derive_seed(42, "sample")


class TestCli:
    def test_pipeline_command(self, bundle_dir, finished_pipeline, capsys):
        code = main(["--config", str(bundle_dir / "config.json"), "pipeline"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc["stages"]) == {"prep", "filter", "sample", "featurize",
                                      "train", "evaluate"}

    def test_stage_command_runs_prefix(self, bundle_dir, tmp_path, capsys):
        clone = tmp_path / "c"
        clone.mkdir()
        for name in ("corpus.jsonl", "bots.txt", "config.json"):
            shutil.copy(bundle_dir / name, clone / name)
        code = main(["--config", str(clone / "config.json"), "filter"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["stages"] == {"prep": "ran", "filter": "ran"}
        assert (clone / "out" / "labeled.jsonl").is_file()
        assert not (clone / "out" / "model.json").exists()

    def test_stats_command(self, bundle_dir, tmp_path, capsys):
        lengths = tmp_path / "lengths.csv"
        code = main(["stats", "--corpus", str(bundle_dir / "corpus.jsonl"),
                     "--lengths-csv", str(lengths)])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["article_count"] > 0
        assert doc["tokens"]["min"] >= 50
        header, first = lengths.read_text().splitlines()[:2]
        assert header == "page_id,tokens,chars"
        assert len(first.split(",")) == 3

    def test_lexdiv_command(self, bundle_dir, capsys):
        code = main(["lexdiv", "--corpus", str(bundle_dir / "corpus.jsonl")])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert 0 < doc["ttr"] <= 1
        assert doc["mtld_factor_threshold"] == 0.72

    def test_ngrams_command(self, bundle_dir, tmp_path, capsys):
        out = tmp_path / "grams.csv"
        code = main(["ngrams", "--corpus", str(bundle_dir / "corpus.jsonl"),
                     "--n", "1", "2", "--k", "3", "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "n,rank,gram,count,log10"
        assert len(lines) == 7

    def test_contrib_command(self, bundle_dir, capsys):
        code = main(["contrib", "--corpus", str(bundle_dir / "corpus.jsonl"),
                     "--bots", str(bundle_dir / "bots.txt")])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["creator_bot_pct"] + doc["creator_human_pct"] == pytest.approx(100.0)
        assert len(doc["top_creators"]) == 5

    def test_scan_and_search_commands(self, bundle_dir, finished_pipeline, capsys):
        corpus_lines = (bundle_dir / "corpus.jsonl").read_text(
            encoding="utf-8").splitlines()
        title = json.loads(corpus_lines[0])["title"]
        code = main(["--config", str(bundle_dir / "scanner.json"),
                     "search", "--query", title, "--limit", "3"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["results"][0]["title"] == title

        code = main(["--config", str(bundle_dir / "scanner.json"),
                     "scan", "--title", title])
        assert code == 0
        verdict = json.loads(capsys.readouterr().out)
        assert verdict["title"] == title
        assert verdict["label"] in ("human-generated", "template-translated")

    def test_ablate_command(self, bundle_dir, finished_pipeline, tmp_path):
        out = tmp_path / "ablation.csv"
        code = main(["--config", str(bundle_dir / "config.json"),
                     "ablate", "--models", "gnb", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("classifier,A,B,C,D,E,A+B,C+D+E,All")
        assert lines[1].startswith("gnb,")

    def test_cluster_command(self, bundle_dir, finished_pipeline, tmp_path):
        out = tmp_path / "cluster.csv"
        code = main(["--config", str(bundle_dir / "config.json"),
                     "cluster", "--algorithms", "kmeans", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1].startswith("kmeans,")
        cell = float(lines[1].split(",")[-1])
        assert cell > 90.0

    def test_missing_config_exit_2(self, capsys):
        assert main(["--config", "/nonexistent/config.json", "pipeline"]) == 2

    def test_missing_corpus_exit_3(self, tmp_path, capsys):
        assert main(["stats", "--corpus", str(tmp_path / "nope.jsonl")]) == 3

    def test_scan_unknown_title_exit_4(self, bundle_dir, finished_pipeline, capsys):
        code = main(["--config", str(bundle_dir / "scanner.json"),
                     "scan", "--title", "غير-موجود-بالمرة"])
        assert code == 4
