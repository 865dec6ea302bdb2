"""Command-line pipeline: convert, aggregate, project, train.

Exit codes: 0 success, 1 user/input error, 2 internal error.  Every command
writes a run-manifest.json beside its outputs recording the command, its
canonical arguments (output directory excluded; outputs are relative to the
manifest), and SHA-256 digests of the inputs, so a run can be reproduced
byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .dataset import extract_dataset, write_dataset_jsonl, write_dataset_tsv
from .gnn import (
    TrainingDiverged,
    format_grid_tables,
    grid_search,
    grid_to_csv,
    make_classifier,
    save_model,
)
from .parsers import accession_from_path, open_text, parse_cadd_tsv, parse_vcf
from .projection import (
    FeatureEncoder,
    assign_labels,
    build_projection,
    dedupe_nodes,
    export_graph,
    import_graph,
    split_masks,
)
from .rdf import (
    cadd_stream_to_triples,
    emit_ontology,
    serialize_nquads,
    serialize_turtle,
    variant_to_quads,
    vocab,
)
from .rdf.terms import Term, iri, literal
from .store import ANY, Pattern, QuadStore


class CliError(Exception):
    """User or input error; reported without a traceback, exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as source:
        for chunk in iter(lambda: source.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, command: str, args: dict, inputs: list[Path]) -> None:
    manifest = {
        "tool": "variantkg",
        "version": __version__,
        "command": command,
        "arguments": {k: v for k, v in sorted(args.items())},
        "inputs": [
            {"path": str(path), "sha256": _sha256(path)} for path in sorted(inputs)
        ],
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "run-manifest.json", "w", encoding="utf-8", newline="\n") as sink:
        json.dump(manifest, sink, indent=2, sort_keys=True)
        sink.write("\n")


def _gather_inputs(paths: list[str], suffixes: tuple[str, ...]) -> list[Path]:
    out: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            for suffix in suffixes:
                out.extend(sorted(path.glob(f"*{suffix}")))
                out.extend(sorted(path.glob(f"*{suffix}.gz")))
        else:
            out.append(path)
    return out


def _load_accession_map(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    mapping = {}
    with open_text(path) as stream:
        for line in stream:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            file_path, _, accession = line.partition("\t")
            if not accession:
                raise CliError(f"accession map line without accession: {line!r}")
            mapping[file_path] = accession
    return mapping


def _accession_for(path: Path, args) -> str:
    mapping = _load_accession_map(getattr(args, "accession_map", None))
    if str(path) in mapping:
        return mapping[str(path)]
    if getattr(args, "accession", None):
        if len(args.inputs) > 1:
            raise CliError("--accession is only valid with a single input file")
        return args.accession
    return accession_from_path(path)


# -- convert commands ---------------------------------------------------------


def _convert_one_vcf(path: Path, accession: str, out_dir: Path, strict: bool) -> dict:
    graph = vocab.accession_graph(accession)
    out_path = out_dir / f"{accession}.nq"
    records = 0
    quads = 0
    with open_text(path) as stream:
        _header, record_iter, diagnostics = parse_vcf(stream, accession, strict=strict)
        with open(out_path, "w", encoding="utf-8", newline="\n") as sink:
            for record in record_iter:
                records += 1
                quads += serialize_nquads(variant_to_quads(record, graph), sink)
    return {
        "input": str(path),
        "output": str(out_path),
        "records": records,
        "quads": quads,
        "diagnostics": len(diagnostics),
        "messages": [str(d) for d in diagnostics],
    }


def cmd_convert_vcf(args) -> int:
    inputs = _gather_inputs(args.inputs, (".vcf",))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not inputs:
        print("0 files to convert")
        write_manifest(out_dir, "convert-vcf", _manifest_args(args), [])
        return 0
    jobs = [(path, _accession_for(path, args)) for path in inputs]
    seen: dict[str, Path] = {}
    for path, accession in jobs:
        if accession in seen:
            raise CliError(f"accession {accession!r} maps to both {seen[accession]} and {path}")
        seen[accession] = path
    failures = []
    results = []
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        futures = [
            pool.submit(_convert_one_vcf, path, accession, out_dir, args.strict)
            for path, accession in jobs
        ]
        for (path, _), future in zip(jobs, futures):
            try:
                results.append(future.result())
            except Exception as exc:  # per-file report, keep converting the rest
                failures.append((path, exc))
    for stats in results:
        print(
            f"{stats['input']}: {stats['records']} records, "
            f"{stats['quads']} quads, {stats['diagnostics']} diagnostics"
        )
    for path, exc in failures:
        print(f"{path}: FAILED: {exc}", file=sys.stderr)
    write_manifest(out_dir, "convert-vcf", _manifest_args(args), [p for p, _ in jobs])
    return 1 if failures else 0


def _convert_one_cadd(path: Path, accession: str, out_dir: Path) -> dict:
    out_path = out_dir / f"{accession}.ttl"
    with open_text(path) as stream:
        records, diagnostics = parse_cadd_tsv(stream)
        triples = list(cadd_stream_to_triples(records, accession))
    with open(out_path, "w", encoding="utf-8", newline="\n") as sink:
        count = serialize_turtle(triples, {"ns1": vocab.BASE}, sink)
    return {
        "input": str(path),
        "output": str(out_path),
        "triples": count,
        "diagnostics": len(diagnostics),
    }


def cmd_convert_cadd(args) -> int:
    inputs = _gather_inputs(args.inputs, (".tsv",))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not inputs:
        print("0 files to convert")
        write_manifest(out_dir, "convert-cadd", _manifest_args(args), [])
        return 0
    jobs = [(path, _accession_for(path, args)) for path in inputs]
    failures = []
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        futures = [
            pool.submit(_convert_one_cadd, path, accession, out_dir)
            for path, accession in jobs
        ]
        for (path, _), future in zip(jobs, futures):
            try:
                stats = future.result()
                print(
                    f"{stats['input']}: {stats['triples']} triples, "
                    f"{stats['diagnostics']} diagnostics"
                )
            except Exception as exc:
                failures.append((path, exc))
    for path, exc in failures:
        print(f"{path}: FAILED: {exc}", file=sys.stderr)
    write_manifest(out_dir, "convert-cadd", _manifest_args(args), [p for p, _ in jobs])
    return 1 if failures else 0


def cmd_emit_ontology(args) -> int:
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8", newline="\n") as sink:
        count = serialize_turtle(emit_ontology(), vocab.DEFAULT_PREFIXES, sink)
    write_manifest(out_path.parent, "emit-ontology", _manifest_args(args), [])
    print(f"{out_path}: {count} statements")
    return 0


# -- build --------------------------------------------------------------------


def _load_store(paths: list[str]) -> tuple[QuadStore, list[Path]]:
    inputs = _gather_inputs(paths, (".nq", ".ttl"))
    if not inputs:
        raise CliError("no .nq or .ttl inputs found")
    store = QuadStore()
    for path in inputs:
        if not path.exists():
            raise CliError(f"input not found: {path}")
        store.load_path(path)
    return store, inputs


def cmd_build(args) -> int:
    store, inputs = _load_store(args.inputs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = extract_dataset(store)
    dataset_path = out_dir / ("dataset.jsonl" if args.dataset_format == "jsonl" else "dataset.tsv")
    with open(dataset_path, "w", encoding="utf-8", newline="\n") as sink:
        if args.dataset_format == "jsonl":
            write_dataset_jsonl(rows, sink)
        else:
            write_dataset_tsv(rows, sink)

    node_rows = dedupe_nodes(rows)
    mode = "variant-id+accession" if args.mode == "both" else args.mode
    graph = build_projection(node_rows, mode=mode, max_group_size=args.max_group_size)
    encoder = FeatureEncoder(scheme=args.encoding, include_accession=not args.drop_accession)
    graph.features = encoder.fit_transform(node_rows)
    graph.labels = assign_labels(node_rows)
    labeled = int((graph.labels >= 0).sum())
    if labeled == 0:
        raise CliError(
            "no labeled nodes: none of the variants joined a CADD score; "
            "check that CADD .ttl files were included"
        )
    graph.train_mask, graph.val_mask, graph.test_mask = split_masks(
        graph.labels, ratios=tuple(args.ratios), seed=args.seed, stratified=args.stratified
    )
    export_graph(graph, out_dir / "graph.vkg")
    with open(out_dir / "vocab.tsv", "w", encoding="utf-8", newline="\n") as sink:
        encoder.vocab_.save(sink)
    write_manifest(out_dir, "build", _manifest_args(args), inputs)

    print(f"{len(rows)} dataset rows from {store.quad_count} quads")
    print(f"{graph.n_nodes} nodes, {graph.n_edges} undirected edges")
    print(f"feature dim {graph.features.shape[1]} ({args.encoding}), {labeled} labeled nodes")
    counts = {int(c): int((graph.labels == c).sum()) for c in range(5)}
    print("label distribution: " + ", ".join(f"{c}: {n}" for c, n in counts.items()))
    print(
        f"split: train {int(graph.train_mask.sum())}, "
        f"val {int(graph.val_mask.sum())}, test {int(graph.test_mask.sum())}"
    )
    return 0


# -- train / grid ---------------------------------------------------------------


def _write_history_csv(history, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        sink.write("epoch,split,metric,value\n")
        for epoch, loss, train_acc, val_acc in history:
            sink.write(f"{epoch},train,loss,{loss!r}\n")
            sink.write(f"{epoch},train,accuracy,{train_acc!r}\n")
            if val_acc == val_acc:  # skip NaN (no validation mask)
                sink.write(f"{epoch},val,accuracy,{val_acc!r}\n")


def _write_confusion(confusion, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        classes = range(confusion.shape[0])
        sink.write("true\\pred," + ",".join(str(c) for c in classes) + "\n")
        for row_class in classes:
            sink.write(
                f"{row_class}," + ",".join(str(int(v)) for v in confusion[row_class]) + "\n"
            )


def _render_confusion(confusion) -> str:
    classes = range(confusion.shape[0])
    width = max(5, max(len(str(int(v))) for v in confusion.ravel()) + 1)
    lines = ["true\\pred" + "".join(str(c).rjust(width) for c in classes)]
    for row_class in classes:
        lines.append(
            str(row_class).ljust(9)
            + "".join(str(int(v)).rjust(width) for v in confusion[row_class])
        )
    return "\n".join(lines)


def cmd_train(args) -> int:
    graph_path = Path(args.graph)
    if not graph_path.exists():
        raise CliError(f"graph file not found: {graph_path}")
    graph = import_graph(graph_path)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = make_classifier(
        args.model,
        hidden_dim=args.hidden,
        depth=args.depth,
        learning_rate=args.lr,
        epochs=args.epochs,
        seed=args.seed,
        init=args.init,
        log_every=args.log_every,
    )
    model.fit(graph)
    _write_history_csv(model.history_, out_dir / f"history_{args.model}.csv")
    save_model(model, out_dir / f"model_{args.model}.vkgm")
    print(
        f"{args.model}: best val accuracy {model.best_val_accuracy_:.4f} "
        f"at epoch {model.best_epoch_}"
    )
    if graph.test_mask is not None and graph.test_mask.any():
        metrics = model.evaluate(graph, "test")
        _write_confusion(metrics.confusion, out_dir / f"confusion_test_{args.model}.csv")
        print(f"{args.model}: test accuracy {metrics.accuracy:.4f}, test loss {metrics.loss:.6f}")
        print(_render_confusion(metrics.confusion))
    write_manifest(out_dir, "train", _manifest_args(args), [graph_path])
    return 0


def cmd_grid(args) -> int:
    graph_path = Path(args.graph)
    if not graph_path.exists():
        raise CliError(f"graph file not found: {graph_path}")
    graph = import_graph(graph_path)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    kinds = ("sage", "gcn") if args.model == "both" else (args.model,)
    outcome = grid_search(
        graph,
        hidden_grid=tuple(args.hidden),
        learning_rates=tuple(args.lr),
        kinds=kinds,
        depth=args.depth,
        seed=args.seed,
        epochs=args.epochs,
        init=args.init,
    )
    tables = format_grid_tables(outcome.cells)
    print(tables, end="")
    with open(out_dir / "grid_table.txt", "w", encoding="utf-8", newline="\n") as sink:
        sink.write(tables)
    with open(out_dir / "grid.csv", "w", encoding="utf-8", newline="\n") as sink:
        grid_to_csv(outcome.cells, sink)
    for (lr, kind), metrics in sorted(outcome.best_test_metrics.items()):
        tag = f"{kind}_lr{lr}".replace(".", "p")
        _write_confusion(metrics.confusion, out_dir / f"confusion_test_{tag}.csv")
    write_manifest(out_dir, "grid", _manifest_args(args), [graph_path])
    return 0


# -- query ----------------------------------------------------------------------


def _parse_pattern_token(token: str):
    if token == "*":
        return ANY
    if token.startswith("?"):
        return token
    if token == "a":
        return iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
    if token.startswith("<") and token.endswith(">"):
        return iri(token[1:-1])
    if "^^<" in token and token.endswith(">"):
        lex, _, datatype = token.partition("^^")
        return literal(lex.strip('"'), datatype=datatype[1:-1])
    return literal(token.strip('"'))


def _parse_pattern(text: str) -> Pattern:
    import shlex

    tokens = shlex.split(text)
    if len(tokens) not in (3, 4):
        raise CliError(f"pattern must have 3 or 4 terms, got {len(tokens)}: {text!r}")
    slots = [_parse_pattern_token(t) for t in tokens]
    if len(tokens) == 3:
        slots.append(ANY)
    return Pattern(*slots)


def _render_binding_term(term: Term | None) -> str:
    if term is None:
        return "<default>"
    if term.kind == "iri":
        return f"<{term.value}>"
    if term.kind == "blank":
        return f"_:{term.value}"
    return term.value


def cmd_query(args) -> int:
    store, _inputs = _load_store(args.inputs)
    patterns = [_parse_pattern(text) for text in args.pattern]
    bindings = store.match(patterns)
    variables = sorted(set().union(*(p.variables() for p in patterns)))
    print("\t".join(variables))
    for binding in bindings:
        print("\t".join(_render_binding_term(binding[v]) for v in variables))
    print(f"{len(bindings)} solutions", file=sys.stderr)
    return 0


# -- entry point ------------------------------------------------------------------


def _manifest_args(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="variantkg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"variantkg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    convert_vcf = sub.add_parser("convert-vcf", help="convert VCF files to N-Quads")
    convert_vcf.add_argument("inputs", nargs="+", help="VCF files or directories")
    convert_vcf.add_argument("--out", required=True, help="output directory")
    convert_vcf.add_argument("--accession", help="override accession (single input only)")
    convert_vcf.add_argument("--accession-map", help="TSV file mapping path -> accession")
    convert_vcf.add_argument("--strict", action="store_true", help="abort on malformed data lines")
    convert_vcf.add_argument("--threads", type=int, default=1, help="file-level parallelism")
    convert_vcf.set_defaults(func=cmd_convert_vcf)

    convert_cadd = sub.add_parser("convert-cadd", help="convert CADD TSVs to Turtle")
    convert_cadd.add_argument("inputs", nargs="+")
    convert_cadd.add_argument("--out", required=True)
    convert_cadd.add_argument("--accession")
    convert_cadd.add_argument("--accession-map")
    convert_cadd.add_argument("--threads", type=int, default=1)
    convert_cadd.set_defaults(func=cmd_convert_cadd)

    ontology = sub.add_parser("emit-ontology", help="write the ontology as Turtle")
    ontology.add_argument("--out", default="ontology.ttl")
    ontology.set_defaults(func=cmd_emit_ontology)

    build = sub.add_parser("build", help="aggregate RDF, extract the dataset, project the graph")
    build.add_argument("inputs", nargs="+", help=".nq/.ttl files or directories")
    build.add_argument("--out", required=True)
    build.add_argument("--mode", choices=("variant-id", "both"), default="variant-id")
    build.add_argument("--encoding", choices=("onehot", "index"), default="onehot")
    build.add_argument("--dataset-format", choices=("tsv", "jsonl"), default="tsv")
    build.add_argument("--ratios", type=float, nargs=3, default=(0.6, 0.2, 0.2),
                       metavar=("TRAIN", "VAL", "TEST"))
    build.add_argument("--seed", type=int, default=0)
    build.add_argument("--stratified", action="store_true")
    build.add_argument("--drop-accession", action="store_true",
                       help="exclude the accession id from node features")
    build.add_argument("--max-group-size", type=int, default=1024)
    build.set_defaults(func=cmd_build)

    train = sub.add_parser("train", help="train one model on a built graph")
    train.add_argument("graph", help="graph container from the build step")
    train.add_argument("--out", required=True)
    train.add_argument("--model", choices=("gcn", "sage"), default="sage")
    train.add_argument("--hidden", type=int, default=16)
    train.add_argument("--depth", type=int, default=2)
    train.add_argument("--lr", type=float, default=0.01)
    train.add_argument("--epochs", type=int, default=1000)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--init", choices=("glorot", "ones"), default="glorot")
    train.add_argument("--log-every", type=int, default=0)
    train.set_defaults(func=cmd_train)

    grid = sub.add_parser("grid", help="hyperparameter grid over hidden width and learning rate")
    grid.add_argument("graph")
    grid.add_argument("--out", required=True)
    grid.add_argument("--model", choices=("gcn", "sage", "both"), default="both")
    grid.add_argument("--hidden", type=int, nargs="+", default=(2, 8, 16, 32))
    grid.add_argument("--lr", type=float, nargs="+", default=(0.001, 0.01))
    grid.add_argument("--depth", type=int, default=2)
    grid.add_argument("--epochs", type=int, default=None,
                      help="override the per-learning-rate epoch pairing")
    grid.add_argument("--seed", type=int, default=0)
    grid.add_argument("--init", choices=("glorot", "ones"), default="glorot")
    grid.set_defaults(func=cmd_grid)

    query = sub.add_parser("query", help="run a basic graph pattern over loaded RDF")
    query.add_argument("inputs", nargs="+")
    query.add_argument(
        "--pattern",
        action="append",
        required=True,
        help='quad pattern, e.g. \'?v <predicate-iri> ?o ?g\' (3 or 4 terms)',
    )
    query.set_defaults(func=cmd_query)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"variantkg: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, TrainingDiverged) as exc:
        print(f"variantkg: error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
