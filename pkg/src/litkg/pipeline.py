"""Stage orchestration: parse, text-cooc, graph-cooc, merge, train.

Each stage reads files produced by the previous one and writes its own
artifacts into the output directory, so stages can also run as separate
invocations. A manifest (manifest.jsonl) records the settings and the
content hashes of every stage's inputs and outputs; a rerun skips stages
whose recorded hashes still match. The manifest contains no timestamps
or absolute paths, so identical runs produce byte-identical manifests.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import ConfigError, LitkgError, StageError
from .glove import Combine, GloveParams, emit_embeddings, train
from .matrix import SparseMatrix, fmt_float, merge_sum, scale_by_kth_largest
from .ppr import PprParams, graph_cooccurrence
from .rdf import (
    _tsv_escape,
    _tsv_unescape,
    parse_ntriples,
    read_vocab_tsv,
    write_ntriples,
    write_vocab_tsv,
)
from .text import (
    TextCoocParams,
    Weighting,
    build_matcher,
    link_text,
    text_cooccurrence,
    write_linked_corpus,
)

DBPEDIA_ABSTRACT = "http://dbpedia.org/ontology/abstract"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"

STAGES = ("parse", "text-cooc", "graph-cooc", "merge", "train")

MANIFEST_NAME = "manifest.jsonl"


@dataclass
class PipelineConfig:
    input: str = ""
    out: str = ""
    abstract_properties: tuple[str, ...] = (DBPEDIA_ABSTRACT,)
    label_property: str = RDFS_LABEL
    lenient: bool = False
    match_predicates: bool = False
    debug_corpus: bool = False
    restart_alpha: float = 0.15
    epsilon: float = 1e-5
    include_predicates: bool = False
    window: int = 5
    weighting: str = "harmonic"
    min_word_count: int = 5
    dims: int = 200
    iterations: int = 50
    learning_rate: float = 0.05
    x_max: float = 100.0
    weight_exponent: float = 0.75
    seed: int = 1
    deterministic: bool = True
    kth: int = 100
    kth_distinct: bool = False
    combine: str = "sum"
    threads: int = 1


_BOOL_WORDS = {
    "true": True, "yes": True, "1": True, "on": True,
    "false": False, "no": False, "0": False, "off": False,
}

# key -> coercion tag; abstract_property is handled separately because it
# repeats and accumulates.
_KEY_TYPES = {
    "input": "str",
    "out": "str",
    "label_property": "str",
    "weighting": "str",
    "combine": "str",
    "lenient": "bool",
    "match_predicates": "bool",
    "debug_corpus": "bool",
    "include_predicates": "bool",
    "deterministic": "bool",
    "kth_distinct": "bool",
    "window": "int",
    "min_word_count": "int",
    "dims": "int",
    "iterations": "int",
    "seed": "int",
    "kth": "int",
    "threads": "int",
    "restart_alpha": "float",
    "epsilon": "float",
    "learning_rate": "float",
    "x_max": "float",
    "weight_exponent": "float",
}


def _coerce(key: str, raw: str, where: str):
    tag = _KEY_TYPES[key]
    try:
        if tag == "str":
            return raw
        if tag == "bool":
            word = raw.strip().lower()
            if word not in _BOOL_WORDS:
                raise ValueError(raw)
            return _BOOL_WORDS[word]
        if tag == "int":
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {key} value {raw!r} as {tag}") from None


def parse_config_file(path: str | Path) -> dict:
    """``key = value`` lines, blank lines and # comments ignored.

    ``abstract_property`` may repeat; every other key takes its last value.
    """
    values: dict = {}
    props: list[str] = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key == "abstract_property":
            props.append(raw)
            continue
        if key not in _KEY_TYPES:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        values[key] = _coerce(key, raw, f"{path}:{line_no}")
    if props:
        values["abstract_properties"] = tuple(props)
    return values


def build_config(
    file_values: dict | None = None, overrides: dict | None = None
) -> PipelineConfig:
    """Defaults, then config file values, then explicit overrides."""
    merged = dataclasses.asdict(PipelineConfig())
    for source in (file_values, overrides):
        if source:
            for key, val in source.items():
                if val is None:
                    continue
                if key not in merged:
                    raise ConfigError(f"unknown setting {key!r}")
                merged[key] = val
    merged["abstract_properties"] = tuple(merged["abstract_properties"])
    return PipelineConfig(**merged)


def validate_config(cfg: PipelineConfig, stages: tuple[str, ...]) -> None:
    def bad(field: str, why: str):
        raise ConfigError(f"{field}: {why}")

    if not cfg.out:
        bad("out", "output directory is required")
    if "parse" in stages and not cfg.input:
        bad("input", "an input N-Triples file is required")
    if not 0.0 < cfg.restart_alpha < 1.0:
        bad("restart_alpha", "must be strictly between 0 and 1")
    if cfg.epsilon <= 0:
        bad("epsilon", "must be positive")
    if cfg.window < 1:
        bad("window", "must be >= 1")
    if cfg.weighting not in ("harmonic", "uniform"):
        bad("weighting", "must be 'harmonic' or 'uniform'")
    if cfg.min_word_count < 0:
        bad("min_word_count", "must be >= 0")
    if cfg.dims < 1:
        bad("dims", "must be >= 1")
    if cfg.iterations < 1:
        bad("iterations", "must be >= 1")
    if cfg.learning_rate <= 0:
        bad("learning_rate", "must be positive")
    if cfg.x_max <= 0:
        bad("x_max", "must be positive")
    if not 0.0 < cfg.weight_exponent <= 1.0:
        bad("weight_exponent", "must be in (0, 1]")
    if cfg.seed < 0:
        bad("seed", "must be >= 0")
    if cfg.kth < 1:
        bad("kth", "must be >= 1")
    if cfg.combine not in ("sum", "focus"):
        bad("combine", "must be 'sum' or 'focus'")
    if cfg.threads < 1:
        bad("threads", "must be >= 1")
    if not cfg.abstract_properties:
        bad("abstract_property", "at least one abstract property is required")


def config_echo(cfg: PipelineConfig) -> dict:
    """Result-affecting settings only; paths reduced to the input name."""
    echo = dataclasses.asdict(cfg)
    del echo["out"]
    del echo["threads"]
    echo["input"] = os.path.basename(cfg.input)
    echo["abstract_properties"] = list(cfg.abstract_properties)
    return echo


# ---------------------------------------------------------------- stages

def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _open_out(outdir: Path, name: str):
    return open(outdir / name, "w", encoding="utf-8", newline="\n")


def _read_abstracts(path: Path) -> list[tuple[str, str, str, str]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            entity, prop, lang, text = line.split("\t", 3)
            rows.append(
                (_tsv_unescape(entity), _tsv_unescape(prop), lang, _tsv_unescape(text))
            )
    return rows


def _stage_parse(cfg: PipelineConfig, outdir: Path) -> str:
    with open(cfg.input, "rb") as fh:
        result = parse_ntriples(
            fh,
            literal_properties=frozenset(cfg.abstract_properties),
            label_property=cfg.label_property,
            lenient=cfg.lenient,
        )
    g, v, stats = result.graph, result.vocab, result.stats
    with _open_out(outdir, "vocab.tsv") as fh:
        write_vocab_tsv(v, fh)
    with _open_out(outdir, "graph.nt") as fh:
        write_ntriples(g, fh, cfg.label_property)
    with _open_out(outdir, "abstracts.tsv") as fh:
        for sid in sorted(g.literals):
            for prop, text, lang in g.literals[sid]:
                fh.write(
                    f"{_tsv_escape(v.terms[sid])}\t{_tsv_escape(prop)}\t"
                    f"{lang or ''}\t{_tsv_escape(text)}\n"
                )
    extra = f", {stats.malformed_skipped} malformed skipped" if stats.malformed_skipped else ""
    return (
        f"{stats.edges} edges, {len(v)} terms, "
        f"{stats.captured_literals} abstracts{extra}"
    )


def _stage_text_cooc(cfg: PipelineConfig, outdir: Path) -> str:
    with open(outdir / "vocab.tsv", encoding="utf-8") as fh:
        vocab = read_vocab_tsv(fh)
    rows = _read_abstracts(outdir / "abstracts.tsv")
    matcher = build_matcher(vocab, match_predicates=cfg.match_predicates)
    docs = [link_text(text, matcher, vocab) for _, _, _, text in rows]
    params = TextCoocParams(
        window=cfg.window,
        weighting=Weighting(cfg.weighting),
        min_word_count=cfg.min_word_count,
    )
    m = text_cooccurrence(docs, params, vocab)
    with _open_out(outdir, "vocab_full.tsv") as fh:
        write_vocab_tsv(vocab, fh)
    m.save(outdir / "text_cooc.mat")
    if cfg.debug_corpus:
        with _open_out(outdir, "linked_corpus.txt") as fh:
            write_linked_corpus(docs, vocab, fh)
    return f"{len(rows)} documents, {len(vocab)} terms, {m.nnz} cells"


def _stage_graph_cooc(cfg: PipelineConfig, outdir: Path) -> str:
    with open(outdir / "vocab_full.tsv", encoding="utf-8") as fh:
        vocab = read_vocab_tsv(fh)
    with open(outdir / "graph.nt", "rb") as fh:
        result = parse_ntriples(
            fh, label_property=cfg.label_property, vocab=vocab
        )
    params = PprParams(
        restart_alpha=cfg.restart_alpha,
        epsilon=cfg.epsilon,
        include_predicates=cfg.include_predicates,
    )
    m = graph_cooccurrence(result.graph, params, threads=cfg.threads)
    m.save(outdir / "graph_cooc.mat")
    return f"{m.nnz} cells"


def _stage_merge(cfg: PipelineConfig, outdir: Path) -> str:
    text = SparseMatrix.load(outdir / "text_cooc.mat")
    graph = SparseMatrix.load(outdir / "graph_cooc.mat")
    if text.nnz:
        text = scale_by_kth_largest(text, cfg.kth, distinct=cfg.kth_distinct)
    merged = merge_sum(graph, text)
    merged.save(outdir / "merged.mat")
    return f"{merged.nnz} cells"


def _stage_train(cfg: PipelineConfig, outdir: Path) -> str:
    m = SparseMatrix.load(outdir / "merged.mat")
    with open(outdir / "vocab_full.tsv", encoding="utf-8") as fh:
        vocab = read_vocab_tsv(fh)
    params = GloveParams(
        dims=cfg.dims,
        iterations=cfg.iterations,
        learning_rate=cfg.learning_rate,
        x_max=cfg.x_max,
        weight_exponent=cfg.weight_exponent,
        seed=cfg.seed,
        deterministic=cfg.deterministic,
    )
    with _open_out(outdir, "train_log.tsv") as log:
        model, losses = train(m, params, threads=cfg.threads, log=log)
    with _open_out(outdir, "embeddings.txt") as fh:
        emit_embeddings(model, vocab, Combine(cfg.combine), fh)
    return f"{params.iterations} epochs, final loss {fmt_float(losses[-1])}"


_STAGE_FN: dict[str, Callable[[PipelineConfig, Path], str]] = {
    "parse": _stage_parse,
    "text-cooc": _stage_text_cooc,
    "graph-cooc": _stage_graph_cooc,
    "merge": _stage_merge,
    "train": _stage_train,
}


def _stage_params(cfg: PipelineConfig, stage: str) -> dict:
    if stage == "parse":
        return {
            "abstract_properties": list(cfg.abstract_properties),
            "label_property": cfg.label_property,
            "lenient": cfg.lenient,
        }
    if stage == "text-cooc":
        return {
            "window": cfg.window,
            "weighting": cfg.weighting,
            "min_word_count": cfg.min_word_count,
            "match_predicates": cfg.match_predicates,
            "debug_corpus": cfg.debug_corpus,
        }
    if stage == "graph-cooc":
        return {
            "restart_alpha": cfg.restart_alpha,
            "epsilon": cfg.epsilon,
            "include_predicates": cfg.include_predicates,
        }
    if stage == "merge":
        return {"kth": cfg.kth, "kth_distinct": cfg.kth_distinct}
    return {
        "dims": cfg.dims,
        "iterations": cfg.iterations,
        "learning_rate": cfg.learning_rate,
        "x_max": cfg.x_max,
        "weight_exponent": cfg.weight_exponent,
        "seed": cfg.seed,
        "deterministic": cfg.deterministic,
        "combine": cfg.combine,
    }


def _stage_input_paths(cfg: PipelineConfig, outdir: Path, stage: str) -> dict[str, Path]:
    if stage == "parse":
        if not cfg.input:
            raise ConfigError("input: an input N-Triples file is required")
        return {os.path.basename(cfg.input): Path(cfg.input)}
    if stage == "text-cooc":
        names = ["vocab.tsv", "abstracts.tsv"]
    elif stage == "graph-cooc":
        names = ["graph.nt", "vocab_full.tsv"]
    elif stage == "merge":
        names = ["text_cooc.mat", "graph_cooc.mat"]
    else:
        names = ["merged.mat", "vocab_full.tsv"]
    return {name: outdir / name for name in names}


def _stage_output_names(cfg: PipelineConfig, stage: str) -> list[str]:
    if stage == "parse":
        return ["vocab.tsv", "graph.nt", "abstracts.tsv"]
    if stage == "text-cooc":
        names = ["vocab_full.tsv", "text_cooc.mat"]
        if cfg.debug_corpus:
            names.append("linked_corpus.txt")
        return names
    if stage == "graph-cooc":
        return ["graph_cooc.mat"]
    if stage == "merge":
        return ["merged.mat"]
    return ["embeddings.txt", "train_log.tsv"]


def _load_manifest(path: Path) -> dict[str, dict]:
    """Prior stage records by stage name; ignored when unreadable."""
    records: dict[str, dict] = {}
    if not path.is_file():
        return records
    try:
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("record") == "stage":
                records[rec["stage"]] = rec
    except (json.JSONDecodeError, KeyError, OSError):
        return {}
    return records


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _up_to_date(rec: dict, params: dict, in_hashes: dict[str, str], outdir: Path) -> bool:
    if rec.get("params") != params or rec.get("inputs") != in_hashes:
        return False
    outputs = rec.get("outputs")
    if not isinstance(outputs, dict) or not outputs:
        return False
    for name, digest in outputs.items():
        p = outdir / name
        if not p.is_file() or _sha256(p) != digest:
            return False
    return True


@dataclass
class StageResult:
    stage: str
    ran: bool
    summary: str


def run_pipeline(
    cfg: PipelineConfig, stages: tuple[str, ...] | None = None
) -> list[StageResult]:
    """Run the requested stages in canonical order, skipping current ones.

    A stage is skipped when the manifest already records the same settings
    and identical input and output hashes. Failures raise StageError and
    leave the partial outputs in place for inspection; the manifest is
    only rewritten after the requested stages succeed.
    """
    requested = STAGES if stages is None else stages
    for s in requested:
        if s not in STAGES:
            raise ConfigError(f"unknown stage {s!r}")
    validate_config(cfg, requested)

    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    records = _load_manifest(outdir / MANIFEST_NAME)

    results: list[StageResult] = []
    for stage in STAGES:
        if stage not in requested:
            continue
        params = _stage_params(cfg, stage)
        in_paths = _stage_input_paths(cfg, outdir, stage)
        for name, p in in_paths.items():
            if not p.is_file():
                hint = "" if stage == "parse" else " (run the earlier stages first)"
                raise ConfigError(f"{stage}: missing input {p}{hint}")
        in_hashes = {name: _sha256(p) for name, p in in_paths.items()}

        prior = records.get(stage)
        if prior is not None and _up_to_date(prior, params, in_hashes, outdir):
            results.append(StageResult(stage, False, "outputs current"))
            continue

        try:
            summary = _STAGE_FN[stage](cfg, outdir)
        except LitkgError as exc:
            raise StageError(stage, exc) from exc
        except OSError as exc:
            raise StageError(stage, exc) from exc

        out_hashes = {}
        for name in _stage_output_names(cfg, stage):
            out_hashes[name] = _sha256(outdir / name)
        records[stage] = {
            "record": "stage",
            "stage": stage,
            "params": params,
            "inputs": in_hashes,
            "outputs": out_hashes,
        }
        results.append(StageResult(stage, True, summary))

    lines = [_dumps({"record": "config", "values": config_echo(cfg)})]
    for stage in STAGES:
        if stage in records:
            lines.append(_dumps(records[stage]))
    lines.append(_dumps({"record": "manifest", "path": MANIFEST_NAME}))
    with _open_out(outdir, MANIFEST_NAME) as fh:
        fh.write("\n".join(lines) + "\n")
    return results
