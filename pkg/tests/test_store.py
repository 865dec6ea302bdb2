import random

import pytest

from variantkg.model import CaddRecord
from variantkg.parsers import parse_vcf
from variantkg.rdf import (
    Quad,
    cadd_to_triples,
    iri,
    literal,
    variant_to_quads,
    write_nquads_file,
    write_turtle_file,
)
from variantkg.store import ANY, Pattern, QuadStore

from conftest import REFERENCE_VCF
import io


def load_reference_store():
    store = QuadStore()
    _, records, _ = parse_vcf(io.StringIO(REFERENCE_VCF), "SRR13112995")
    for record in records:
        store.insert(variant_to_quads(record))
    return store


def brute_force_match(quads, patterns):
    """Independent oracle: sequential linear-scan filtering, no indexes."""
    results = set()

    def recurse(i, binding):
        if i == len(patterns):
            results.add(frozenset(binding.items()))
            return
        pattern = patterns[i]
        for quad in quads:
            candidate = dict(binding)
            ok = True
            for slot, term in zip(
                pattern.slots(), (quad.subject, quad.predicate, quad.object, quad.graph)
            ):
                if slot is ANY:
                    continue
                if isinstance(slot, str):
                    if slot in candidate:
                        if candidate[slot] != term:
                            ok = False
                            break
                    else:
                        candidate[slot] = term
                elif slot != term:
                    ok = False
                    break
            if ok:
                recurse(i + 1, candidate)

    recurse(0, {})
    return results


def as_sets(bindings):
    return {frozenset(b.items()) for b in bindings}


class TestInsert:
    def test_idempotent(self):
        store = QuadStore()
        quad = Quad(iri("x:s"), iri("x:p"), literal("v"), iri("x:g"))
        assert store.insert([quad]) == 1
        assert store.insert([quad]) == 0
        assert store.quad_count == 1

    def test_distinct_count(self):
        store = QuadStore()
        quads = [Quad(iri("x:s"), iri("x:p"), literal(str(i)), iri("x:g")) for i in range(5)]
        assert store.insert(quads) == 5
        assert store.quad_count == 5

    def test_interning_single_copy(self):
        store = QuadStore()
        quads = [Quad(iri("x:s"), iri("x:p"), literal(str(i % 2)), iri("x:g")) for i in range(10)]
        store.insert(quads)
        # terms: x:s, x:p, "0", "1", x:g
        assert store.term_count == 5

    def test_two_graphs_after_two_files(self, tmp_path):
        store = QuadStore()
        for accession in ("SRR1", "SRR2"):
            quads = [Quad(iri("x:s"), iri("x:p"), literal("v"), iri(f"sg://{accession}"))]
            path = tmp_path / f"{accession}.nq"
            write_nquads_file(quads, path)
            store.load_path(path)
        graphs = store.graphs()
        assert {g.value for g in graphs} == {"sg://SRR1", "sg://SRR2"}

    def test_load_turtle(self, tmp_path):
        triples = cadd_to_triples(CaddRecord("1", 10, "G", "A", 0.5, 2.0), "SRR1", 1)
        path = tmp_path / "SRR1.ttl"
        write_turtle_file(triples, path)
        store = QuadStore()
        assert store.load_path(path) == len(triples)
        assert all(q.graph is None for q in store.all_quads())


class TestMatch:
    def test_position_binding(self):
        store = load_reference_store()
        pattern = Pattern("?v", iri("http://biohackathon.org/resource/faldo#position"), "?p", "?g")
        bindings = store.match([pattern])
        assert len(bindings) == 1
        assert bindings[0]["?p"].value == "16963"
        assert bindings[0]["?g"].value == "sg://SRR13112995"

    def test_empty_store(self):
        assert QuadStore().match([Pattern("?s", "?p", "?o")]) == []

    def test_unknown_term_empty(self):
        store = load_reference_store()
        assert store.match([Pattern(iri("x:nothere"), "?p", "?o")]) == []

    def test_empty_patterns_rejected(self):
        with pytest.raises(ValueError):
            QuadStore().match([])

    def test_disconnected_warns(self):
        store = load_reference_store()
        with pytest.warns(UserWarning, match="connected"):
            store.match([Pattern("?a", "?b", ANY), Pattern("?c", "?d", ANY)])

    def test_three_pattern_join_fixture(self):
        store = QuadStore()
        g = iri("x:g")
        quads = [
            Quad(iri("x:a"), iri("x:knows"), iri("x:b"), g),
            Quad(iri("x:b"), iri("x:knows"), iri("x:c"), g),
            Quad(iri("x:c"), iri("x:name"), literal("C"), g),
            Quad(iri("x:a"), iri("x:name"), literal("A"), g),
            Quad(iri("x:b"), iri("x:name"), literal("B"), g),
        ]
        store.insert(quads)
        patterns = [
            Pattern("?x", iri("x:knows"), "?y"),
            Pattern("?y", iri("x:knows"), "?z"),
            Pattern("?z", iri("x:name"), "?n"),
        ]
        assert as_sets(store.match(patterns)) == brute_force_match(quads, patterns)

    def test_variable_graph_binds_default_graph_to_none(self):
        store = QuadStore()
        store.insert([Quad(iri("x:s"), iri("x:p"), literal("v"))])
        bindings = store.match([Pattern("?s", "?p", "?o", "?g")])
        assert bindings[0]["?g"] is None

    def test_constant_graph_selection(self):
        store = QuadStore()
        store.insert(
            [
                Quad(iri("x:s"), iri("x:p"), literal("v"), iri("x:g1")),
                Quad(iri("x:s"), iri("x:p"), literal("w"), iri("x:g2")),
            ]
        )
        bindings = store.match([Pattern("?s", "?p", "?o", iri("x:g1"))])
        assert len(bindings) == 1
        assert bindings[0]["?o"].value == "v"


def random_store_and_patterns(rng):
    subjects = [iri(f"x:s{i}") for i in range(rng.randint(2, 8))]
    predicates = [iri(f"x:p{i}") for i in range(rng.randint(1, 4))]
    objects = [literal(f"o{i}") for i in range(rng.randint(2, 10))] + subjects
    graphs = [iri(f"x:g{i}") for i in range(rng.randint(1, 3))] + [None]
    n_patterns = rng.randint(1, 4)
    n_quads = rng.randint(5, 1000 if n_patterns <= 2 else 120)
    quads = []
    seen = set()
    for _ in range(n_quads):
        quad = Quad(
            rng.choice(subjects),
            rng.choice(predicates),
            rng.choice(objects),
            rng.choice(graphs),
        )
        if quad not in seen:
            seen.add(quad)
            quads.append(quad)

    variables = ["?a", "?b", "?c"]

    def random_slot(position, must_share):
        roll = rng.random()
        if must_share or roll < 0.45:
            return rng.choice(variables)
        if roll < 0.75:
            pool = (subjects, predicates, objects, graphs)[position]
            choice = rng.choice(pool)
            return choice
        return ANY

    patterns = []
    for i in range(n_patterns):
        slots = [random_slot(pos, False) for pos in range(4)]
        if i > 0 and not any(isinstance(s, str) for s in slots):
            slots[rng.randrange(4)] = rng.choice(variables)
        # keep at least one constant per pattern so the oracle stays tractable
        if not any(not isinstance(s, str) and s is not ANY for s in slots):
            slots[rng.randrange(4)] = rng.choice(predicates)
        patterns.append(Pattern(*slots))
    return quads, patterns


@pytest.mark.filterwarnings("ignore:pattern variables")
class TestMatchOracle:
    def test_randomized_equivalence(self):
        rng = random.Random(1234)
        for _ in range(25):
            quads, patterns = random_store_and_patterns(rng)
            store = QuadStore()
            store.insert(quads)
            assert as_sets(store.match(patterns)) == brute_force_match(quads, patterns)

    def test_join_order_invariance(self):
        rng = random.Random(99)
        for _ in range(10):
            quads, patterns = random_store_and_patterns(rng)
            store = QuadStore()
            store.insert(quads)
            reference = as_sets(store.match(patterns))
            shuffled = patterns[:]
            rng.shuffle(shuffled)
            assert as_sets(store.match(shuffled)) == reference


class TestQuadsScan:
    def test_wildcard_scan(self):
        store = load_reference_store()
        assert len(list(store.quads())) == store.quad_count == 7

    def test_predicate_scan(self):
        store = load_reference_store()
        hits = list(store.quads(predicate=iri("sg://0.99.11/vcf2rdf/variant/REF")))
        assert len(hits) == 1
        assert hits[0].object.value.endswith("/G")

    def test_default_graph_scan(self, tmp_path):
        store = QuadStore()
        store.insert(cadd_to_triples(CaddRecord("1", 10, "G", "A", 0.5, 2.0), "SRR1", 1))
        store.insert([Quad(iri("x:s"), iri("x:p"), literal("v"), iri("x:g"))])
        assert all(q.graph is None for q in store.quads(graph=None))
        assert len(list(store.quads(graph=None))) == 8
