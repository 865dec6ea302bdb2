"""Variant knowledge-graph toolkit.

Converts SnpEff-annotated VCF files and CADD score TSVs into an RDF
knowledge graph (N-Quads per accession, Turtle for scores), aggregates the
graphs in an in-memory quad store, extracts a per-variant dataset, projects
it into a numeric graph, and trains GCN / GraphSAGE node classifiers that
predict CADD score categories.
"""

__version__ = "0.1.0"

from .dataset import DatasetRow, extract_dataset
from .gnn import (
    Adam,
    GCNClassifier,
    GraphSAGEClassifier,
    Metrics,
    TrainingDiverged,
    grid_search,
    load_model,
    make_classifier,
    normalized_adjacency,
    save_model,
)
from .model import (
    AnnAnnotation,
    CaddRecord,
    NUM_CADD_CATEGORIES,
    VariantRecord,
    bin_cadd_score,
    synthetic_variant_key,
    variant_key,
)
from .parsers import (
    CaddParseError,
    ParseDiagnostic,
    VcfHeader,
    VcfParseError,
    accession_from_path,
    open_text,
    parse_ann_info,
    parse_cadd_tsv,
    parse_vcf,
)
from .projection import (
    FeatureEncoder,
    FeatureVocab,
    GraphFormatError,
    ProjectionGraph,
    assign_labels,
    build_projection,
    build_vocab,
    dedupe_nodes,
    encode_features,
    export_graph,
    import_graph,
    split_masks,
)
from .rdf import (
    Quad,
    Term,
    cadd_to_triples,
    emit_ontology,
    origin_iri,
    parse_nquads,
    parse_turtle,
    serialize_nquads,
    serialize_turtle,
    variant_to_quads,
)
from .store import ANY, Pattern, QuadStore

__all__ = [
    "ANY",
    "Adam",
    "AnnAnnotation",
    "CaddParseError",
    "CaddRecord",
    "DatasetRow",
    "FeatureEncoder",
    "FeatureVocab",
    "GCNClassifier",
    "GraphFormatError",
    "GraphSAGEClassifier",
    "Metrics",
    "NUM_CADD_CATEGORIES",
    "ParseDiagnostic",
    "Pattern",
    "ProjectionGraph",
    "Quad",
    "QuadStore",
    "Term",
    "TrainingDiverged",
    "VariantRecord",
    "VcfHeader",
    "VcfParseError",
    "accession_from_path",
    "assign_labels",
    "bin_cadd_score",
    "build_projection",
    "build_vocab",
    "cadd_to_triples",
    "dedupe_nodes",
    "emit_ontology",
    "encode_features",
    "export_graph",
    "extract_dataset",
    "grid_search",
    "import_graph",
    "load_model",
    "make_classifier",
    "normalized_adjacency",
    "open_text",
    "origin_iri",
    "parse_ann_info",
    "parse_cadd_tsv",
    "parse_nquads",
    "parse_turtle",
    "parse_vcf",
    "save_model",
    "serialize_nquads",
    "serialize_turtle",
    "split_masks",
    "synthetic_variant_key",
    "variant_key",
    "variant_to_quads",
]
