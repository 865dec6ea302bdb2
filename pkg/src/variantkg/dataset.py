"""Per-variant dataset extraction from the aggregated knowledge graph.

One row is produced per (named graph, variant subject, ANN entry), carrying
the variant's position/REF/ALT/QUAL/FILTER plus the annotation fields, and
joined with CADD raw/PHRED scores on (accession, chrom, pos, ref, alt) --
the two vocabularies use different subject schemes, so the join is by
value, not by IRI.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import IO, Iterable

from .model import synthetic_variant_key
from .rdf import vocab
from .rdf.terms import XSD_DECIMAL
from .store import QuadStore

_SEQUENCE_PREFIX = vocab.VCF2RDF_BASE + "sequence/"
_CHROMOSOME_PREFIX = vocab.BASE + "chromosome/"

TSV_COLUMNS = (
    "accession",
    "variant_key",
    "chrom",
    "pos",
    "ref",
    "alt",
    "qual",
    "filter",
    "ann_allele",
    "ann_effect",
    "ann_impact",
    "gene_name",
    "gene_id",
    "raw_score",
    "phred",
)


@dataclass(frozen=True)
class DatasetRow:
    accession: str
    variant_key: str
    chrom: str
    pos: int
    ref: str
    alt: str
    qual: float | None
    filter: str
    ann_allele: str = ""
    ann_effect: str = ""
    ann_impact: str = ""
    gene_name: str = ""
    gene_id: str = ""
    raw_score: float | None = None
    phred: float | None = None

    def __post_init__(self):
        if (self.raw_score is None) != (self.phred is None):
            raise ValueError("raw_score and phred must be present together")


def extract_dataset(store: QuadStore) -> list[DatasetRow]:
    """Join variant facts and CADD scores into per-variant-annotation rows.

    Rows without a CADD counterpart carry absent scores.  ANN entries are
    reassembled by zipping each field's values in insertion order; because
    the store deduplicates statements, entries that repeat an earlier value
    in some field reuse that field's last distinct value.  Output is sorted
    by (accession, chrom, pos, alt).
    """
    pos_by: dict[tuple[str, str], int] = {}
    ref_by: dict[tuple[str, str], str] = {}
    alt_by: dict[tuple[str, str], str] = {}
    qual_by: dict[tuple[str, str], float | None] = {}
    filter_by: dict[tuple[str, str], str] = {}
    id_by: dict[tuple[str, str], str] = {}
    chrom_by: dict[tuple[str, str], str] = {}
    anns_by: dict[tuple[str, str], dict[str, list[str]]] = {}

    cadd_pos: dict[str, int] = {}
    cadd_ref: dict[str, str] = {}
    cadd_alt: dict[str, str] = {}
    cadd_link: dict[str, str] = {}  # score node -> variant node
    cadd_raw: dict[str, float] = {}
    cadd_phred: dict[str, float] = {}

    ann_fields_by_pred = {p.value: f for f, p in vocab.ANN_PREDICATES.items()}

    for quad in store.all_quads():
        pred = quad.predicate.value
        obj = quad.object
        if quad.graph is not None:
            key = (quad.graph.value, quad.subject.value)
            if pred == vocab.FALDO_POSITION.value:
                pos_by[key] = int(obj.value)
            elif pred == vocab.VCF2RDF_REF.value:
                ref_by[key] = obj.value[len(_SEQUENCE_PREFIX):]
            elif pred == vocab.VCF2RDF_ALT.value:
                alt_by[key] = obj.value[len(_SEQUENCE_PREFIX):]
            elif pred == vocab.VCF2RDF_QUAL.value:
                qual_by[key] = float(obj.value) if obj.datatype == XSD_DECIMAL else None
            elif pred == vocab.VCF2RDF_FILTER.value:
                filter_by[key] = obj.value
            elif pred == vocab.VCF2RDF_ID.value:
                id_by[key] = obj.value
            elif pred in ann_fields_by_pred:
                target = (quad.graph.value, quad.subject.value)
                fields = anns_by.setdefault(target, {f: [] for f in vocab.ANN_FIELDS})
                fields[ann_fields_by_pred[pred]].append(obj.value)
            elif pred == vocab.HAS_VARIANT.value and quad.subject.value.startswith(_CHROMOSOME_PREFIX):
                chrom_by[(quad.graph.value, obj.value)] = quad.subject.value[len(_CHROMOSOME_PREFIX):]
        else:
            subj = quad.subject.value
            if pred == vocab.HAS_POS.value:
                cadd_pos[subj] = int(obj.value)
            elif pred == vocab.HAS_REF_GENOME.value:
                cadd_ref[subj] = obj.value
            elif pred == vocab.HAS_ALT_GENOME.value:
                cadd_alt[subj] = obj.value
            elif pred == vocab.HAS_CADD_SCORES.value:
                cadd_link[obj.value] = subj
            elif pred == vocab.RAW_SCORE.value:
                cadd_raw[subj] = float(obj.value)
            elif pred == vocab.PHRED.value:
                cadd_phred[subj] = float(obj.value)

    scores: dict[tuple[str, str, int, str, str], tuple[float, float]] = {}
    for score_node, variant_node in cadd_link.items():
        if score_node not in cadd_raw or score_node not in cadd_phred:
            continue
        if variant_node not in cadd_pos:
            continue
        path = variant_node[len(vocab.BASE):].split("/")
        if len(path) != 3:
            continue
        accession, chrom = path[0], path[1]
        join_key = (
            accession,
            chrom,
            cadd_pos[variant_node],
            cadd_ref.get(variant_node, ""),
            cadd_alt.get(variant_node, ""),
        )
        scores[join_key] = (cadd_raw[score_node], cadd_phred[score_node])

    rows: list[DatasetRow] = []
    for key, pos in pos_by.items():
        graph_value, _subject = key
        if key not in ref_by or key not in alt_by:
            continue
        accession = graph_value[len("sg://"):] if graph_value.startswith("sg://") else graph_value
        chrom = chrom_by.get(key, "")
        ref = ref_by[key]
        alt = alt_by[key]
        variant_id = id_by.get(key)
        variant_key = variant_id if variant_id else synthetic_variant_key(chrom, pos, ref, alt)
        raw_score, phred = (None, None)
        hit = scores.get((accession, chrom, pos, ref, alt))
        if hit is not None:
            raw_score, phred = hit
        base = dict(
            accession=accession,
            variant_key=variant_key,
            chrom=chrom,
            pos=pos,
            ref=ref,
            alt=alt,
            qual=qual_by.get(key),
            filter=filter_by.get(key, ""),
            raw_score=raw_score,
            phred=phred,
        )
        fields = anns_by.get(key)
        entry_count = max((len(v) for v in fields.values()), default=0) if fields else 0
        if entry_count == 0:
            rows.append(DatasetRow(**base))
        else:
            for i in range(entry_count):
                ann = {
                    name: (values[min(i, len(values) - 1)] if values else "")
                    for name, values in fields.items()
                }
                rows.append(
                    DatasetRow(
                        **base,
                        ann_allele=ann["allele"],
                        ann_effect=ann["effect"],
                        ann_impact=ann["putative_impact"],
                        gene_name=ann["gene_name"],
                        gene_id=ann["gene_id"],
                    )
                )
    rows.sort(key=lambda r: (r.accession, r.chrom, r.pos, r.alt, r.ann_effect, r.ann_allele))
    return rows


def _format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_dataset_tsv(rows: Iterable[DatasetRow], sink: IO[str]) -> int:
    sink.write("\t".join(TSV_COLUMNS) + "\n")
    count = 0
    for row in rows:
        record = asdict(row)
        sink.write("\t".join(_format_cell(record[c]) for c in TSV_COLUMNS) + "\n")
        count += 1
    return count


def read_dataset_tsv(stream: Iterable[str]) -> list[DatasetRow]:
    lines = iter(stream)
    header = next(lines, None)
    if header is None or tuple(header.rstrip("\n").split("\t")) != TSV_COLUMNS:
        raise ValueError("unexpected dataset TSV header")
    rows = []
    for line in lines:
        parts = line.rstrip("\n").split("\t")
        if len(parts) != len(TSV_COLUMNS):
            raise ValueError(f"expected {len(TSV_COLUMNS)} columns, got {len(parts)}")
        cells = dict(zip(TSV_COLUMNS, parts))
        rows.append(
            DatasetRow(
                accession=cells["accession"],
                variant_key=cells["variant_key"],
                chrom=cells["chrom"],
                pos=int(cells["pos"]),
                ref=cells["ref"],
                alt=cells["alt"],
                qual=float(cells["qual"]) if cells["qual"] else None,
                filter=cells["filter"],
                ann_allele=cells["ann_allele"],
                ann_effect=cells["ann_effect"],
                ann_impact=cells["ann_impact"],
                gene_name=cells["gene_name"],
                gene_id=cells["gene_id"],
                raw_score=float(cells["raw_score"]) if cells["raw_score"] else None,
                phred=float(cells["phred"]) if cells["phred"] else None,
            )
        )
    return rows


def write_dataset_jsonl(rows: Iterable[DatasetRow], sink: IO[str]) -> int:
    count = 0
    for row in rows:
        sink.write(json.dumps(asdict(row), sort_keys=True, separators=(",", ":")))
        sink.write("\n")
        count += 1
    return count
