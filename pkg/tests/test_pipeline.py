import json
import os

import pytest

from litkg import ConfigError, PipelineConfig, build_config, parse_config_file, run_pipeline
from litkg.cli import main as cli_main
from litkg.pipeline import MANIFEST_NAME, STAGES, config_echo, validate_config

FAST = dict(min_word_count=0, dims=6, iterations=8, seed=42)


def fast_config(toy_nt_path, out, **extra):
    values = dict(input=str(toy_nt_path), out=str(out), **FAST)
    values.update(extra)
    return build_config(overrides=values)


def read_manifest(outdir):
    recs = [json.loads(line) for line in (outdir / MANIFEST_NAME).read_text().splitlines()]
    return {r.get("stage", r["record"]): r for r in recs}


# ------------------------------------------------------------- config

def test_parse_config_file(tmp_path):
    cfg_file = tmp_path / "p.conf"
    cfg_file.write_text(
        "# a comment\n"
        "\n"
        "input = graph.nt\n"
        "window = 7\n"
        "lenient = yes\n"
        "learning_rate = 0.01\n"
        "abstract_property = http://x/abstract\n"
        "abstract_property = http://x/comment\n"
    )
    values = parse_config_file(cfg_file)
    assert values["input"] == "graph.nt"
    assert values["window"] == 7
    assert values["lenient"] is True
    assert values["learning_rate"] == 0.01
    assert values["abstract_properties"] == ("http://x/abstract", "http://x/comment")


def test_parse_config_file_rejects_unknown_key(tmp_path):
    cfg_file = tmp_path / "p.conf"
    cfg_file.write_text("wnidow = 5\n")
    with pytest.raises(ConfigError):
        parse_config_file(cfg_file)


def test_parse_config_file_rejects_bad_value(tmp_path):
    cfg_file = tmp_path / "p.conf"
    cfg_file.write_text("window = five\n")
    with pytest.raises(ConfigError):
        parse_config_file(cfg_file)


def test_build_config_precedence():
    cfg = build_config({"window": 9, "dims": 32}, {"dims": 64, "seed": None})
    assert cfg.window == 9
    assert cfg.dims == 64  # explicit override beats the file
    assert cfg.seed == PipelineConfig().seed  # None overrides are ignored


def test_validate_config_names_the_field():
    cfg = build_config(overrides=dict(input="x.nt", out="o", restart_alpha=1.5))
    with pytest.raises(ConfigError, match="restart_alpha"):
        validate_config(cfg, STAGES)
    cfg = build_config(overrides=dict(input="x.nt", out="o", weighting="square"))
    with pytest.raises(ConfigError, match="weighting"):
        validate_config(cfg, STAGES)
    with pytest.raises(ConfigError, match="input"):
        validate_config(build_config(overrides=dict(out="o")), STAGES)


def test_config_echo_hides_paths_and_threads(toy_nt_path):
    cfg = fast_config(toy_nt_path, "/anywhere/out", threads=8)
    echo = config_echo(cfg)
    assert echo["input"] == "toy_graph.nt"
    assert "out" not in echo
    assert "threads" not in echo


# ------------------------------------------------------------ stages

def test_full_run_writes_all_artifacts(toy_nt_path, tmp_path):
    out = tmp_path / "run"
    results = run_pipeline(fast_config(toy_nt_path, out, debug_corpus=True))
    assert [r.stage for r in results] == list(STAGES)
    assert all(r.ran for r in results)
    expected = {
        "vocab.tsv", "graph.nt", "abstracts.tsv", "vocab_full.tsv",
        "text_cooc.mat", "linked_corpus.txt", "graph_cooc.mat",
        "merged.mat", "embeddings.txt", "train_log.tsv", MANIFEST_NAME,
    }
    assert {p.name for p in out.iterdir()} == expected


def test_manifest_lists_every_output_file(toy_nt_path, tmp_path):
    out = tmp_path / "run"
    run_pipeline(fast_config(toy_nt_path, out))
    recs = read_manifest(out)
    listed = set()
    for rec in recs.values():
        listed.update(rec.get("outputs", {}))
    listed.add(recs["manifest"]["path"])
    assert listed == {p.name for p in out.iterdir()}


def test_two_runs_identical_manifests(toy_nt_path, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    run_pipeline(fast_config(toy_nt_path, out_a))
    run_pipeline(fast_config(toy_nt_path, out_b))
    assert (out_a / MANIFEST_NAME).read_bytes() == (out_b / MANIFEST_NAME).read_bytes()
    assert (out_a / "embeddings.txt").read_bytes() == (out_b / "embeddings.txt").read_bytes()


def test_resume_skips_everything_when_current(toy_nt_path, tmp_path):
    out = tmp_path / "run"
    cfg = fast_config(toy_nt_path, out)
    run_pipeline(cfg)
    again = run_pipeline(cfg)
    assert all(not r.ran for r in again)


def test_resume_reruns_only_train_after_deleting_embeddings(toy_nt_path, tmp_path):
    out = tmp_path / "run"
    cfg = fast_config(toy_nt_path, out)
    run_pipeline(cfg)
    (out / "embeddings.txt").unlink()
    again = run_pipeline(cfg)
    ran = {r.stage for r in again if r.ran}
    assert ran == {"train"}


def test_resume_reruns_on_param_change(toy_nt_path, tmp_path):
    out = tmp_path / "run"
    run_pipeline(fast_config(toy_nt_path, out))
    again = run_pipeline(fast_config(toy_nt_path, out, iterations=9))
    ran = {r.stage for r in again if r.ran}
    assert ran == {"train"}
    # window change leaves vocab_full.tsv byte-identical, so graph-cooc
    # stays current; only the text matrix and its consumers rebuild
    again = run_pipeline(fast_config(toy_nt_path, out, window=3, iterations=9))
    ran = {r.stage for r in again if r.ran}
    assert ran == {"text-cooc", "merge", "train"}


def test_missing_input_is_config_error(tmp_path):
    cfg = build_config(overrides=dict(input=str(tmp_path / "nope.nt"), out=str(tmp_path / "o"), **FAST))
    with pytest.raises(ConfigError, match="missing input"):
        run_pipeline(cfg)


def test_stage_needs_upstream_artifacts(toy_nt_path, tmp_path):
    cfg = fast_config(toy_nt_path, tmp_path / "o")
    with pytest.raises(ConfigError, match="train"):
        run_pipeline(cfg, stages=("train",))


def test_french_abstract_filtered_out(toy_nt_path, tmp_path):
    out = tmp_path / "run"
    run_pipeline(fast_config(toy_nt_path, out))
    vocab_terms = {
        line.split("\t")[2]
        for line in (out / "vocab_full.tsv").read_text().splitlines()
    }
    assert "est" not in vocab_terms
    assert "capitale" not in vocab_terms
    assert "capital" in vocab_terms


def test_stagewise_run_equals_all(toy_nt_path, tmp_path):
    out_all, out_steps = tmp_path / "all", tmp_path / "steps"
    run_pipeline(fast_config(toy_nt_path, out_all))
    for stage in STAGES:
        run_pipeline(fast_config(toy_nt_path, out_steps), stages=(stage,))
    assert (out_all / "embeddings.txt").read_bytes() == (out_steps / "embeddings.txt").read_bytes()
    assert (out_all / MANIFEST_NAME).read_bytes() == (out_steps / MANIFEST_NAME).read_bytes()


# --------------------------------------------------------------- cli

def test_cli_all_and_exit_codes(toy_nt_path, tmp_path, capsys):
    out = tmp_path / "run"
    rc = cli_main([
        "all", "--in", str(toy_nt_path), "--out", str(out),
        "--min-word-count", "0", "--dims", "6", "--iterations", "8", "--seed", "42",
    ])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert [l.split(":")[0] for l in lines] == list(STAGES)
    assert (out / "embeddings.txt").is_file()


def test_cli_missing_input_exits_2(tmp_path, capsys):
    rc = cli_main(["all", "--in", str(tmp_path / "nope.nt"), "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_cli_bad_config_file_exits_2(toy_nt_path, tmp_path, capsys):
    bad = tmp_path / "bad.conf"
    bad.write_text("no equals sign here\n")
    rc = cli_main(["all", "--config", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 2


def test_cli_stage_failure_exits_1(tmp_path, capsys):
    src = tmp_path / "broken.nt"
    src.write_text("<http://x/a> <http://x/p> garbage\n")
    rc = cli_main(["parse", "--in", str(src), "--out", str(tmp_path / "o")])
    assert rc == 1
    err = capsys.readouterr().err
    assert "parse" in err
    rc = cli_main(["parse", "--in", str(src), "--out", str(tmp_path / "o"), "--lenient"])
    assert rc == 0


def test_cli_threads_env_fallback(toy_nt_path, tmp_path, monkeypatch):
    seen = {}

    def capture(cfg, stages):
        seen["threads"] = cfg.threads
        return []

    monkeypatch.setattr("litkg.cli.run_pipeline", capture)
    monkeypatch.setenv("LITKG_THREADS", "3")
    assert cli_main(["parse", "--in", str(toy_nt_path), "--out", str(tmp_path / "o")]) == 0
    assert seen["threads"] == 3
    # explicit flag wins over the environment
    cli_main([
        "parse", "--in", str(toy_nt_path), "--out", str(tmp_path / "o"), "--threads", "2",
    ])
    assert seen["threads"] == 2


def test_cli_abstract_property_repeatable(toy_nt_path, tmp_path, monkeypatch):
    seen = {}

    def capture(cfg, stages):
        seen["props"] = cfg.abstract_properties
        return []

    monkeypatch.setattr("litkg.cli.run_pipeline", capture)
    cli_main([
        "parse", "--in", str(toy_nt_path), "--out", str(tmp_path / "o"),
        "--abstract-property", "http://x/abstract",
        "--abstract-property", "http://x/comment",
    ])
    assert seen["props"] == ("http://x/abstract", "http://x/comment")
