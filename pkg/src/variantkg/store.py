"""In-memory named-graph quad store with basic-graph-pattern matching.

Terms are interned to dense integer ids; quads live in six sorted
permutation indexes (graph-first and graph-agnostic orderings) supporting
prefix scans, plus an insertion-ordered list that conversion-order-sensitive
consumers can walk.  Insertion has set semantics.  Loading is exclusive;
once loaded the store is safe for concurrent readers.
"""

from __future__ import annotations

import warnings
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .parsers import open_text
from .rdf.parse import parse_nquads, parse_turtle
from .rdf.terms import Quad, Term


class _Any:
    """Wildcard sentinel for pattern slots (None means the default graph)."""

    def __repr__(self) -> str:
        return "ANY"


ANY = _Any()

_DEFAULT_GRAPH_ID = -1
_MIN_ID = -2

# slot order inside a quad tuple: (s, p, o, g)
_ORDERINGS: dict[str, tuple[int, int, int, int]] = {
    "gspo": (3, 0, 1, 2),
    "gpos": (3, 1, 2, 0),
    "gosp": (3, 2, 0, 1),
    "spog": (0, 1, 2, 3),
    "posg": (1, 2, 3, 0),
    "ospg": (2, 0, 1, 3),
}


@dataclass(frozen=True)
class Pattern:
    """A quad pattern: each slot is a Term, a "?var" name, or ANY.

    The graph slot additionally accepts None to select the default
    (graph-less) graph.
    """

    subject: object = ANY
    predicate: object = ANY
    object: object = ANY
    graph: object = ANY

    def slots(self) -> tuple[object, object, object, object]:
        return (self.subject, self.predicate, self.object, self.graph)

    def variables(self) -> set[str]:
        return {s for s in self.slots() if isinstance(s, str)}


def _is_var(slot: object) -> bool:
    return isinstance(slot, str)


class QuadStore:
    def __init__(self):
        self._term_ids: dict[Term, int] = {}
        self._terms: list[Term] = []
        self._quad_set: set[tuple[int, int, int, int]] = set()
        self._quads: list[tuple[int, int, int, int]] = []
        self._indexes: dict[str, list[tuple[int, int, int, int]]] | None = None

    # -- construction -----------------------------------------------------

    def _intern(self, term: Term) -> int:
        tid = self._term_ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._term_ids[term] = tid
            self._terms.append(term)
        return tid

    def _lookup(self, term: Term | None) -> int | None:
        """Existing id for a term, or None when the store has never seen it."""
        if term is None:
            return _DEFAULT_GRAPH_ID
        return self._term_ids.get(term)

    def _term(self, tid: int) -> Term | None:
        if tid == _DEFAULT_GRAPH_ID:
            return None
        return self._terms[tid]

    def insert(self, quads: Iterable[Quad]) -> int:
        """Intern and index quads; duplicates are ignored (set semantics)."""
        added = 0
        for quad in quads:
            key = (
                self._intern(quad.subject),
                self._intern(quad.predicate),
                self._intern(quad.object),
                _DEFAULT_GRAPH_ID if quad.graph is None else self._intern(quad.graph),
            )
            if key in self._quad_set:
                continue
            self._quad_set.add(key)
            self._quads.append(key)
            added += 1
        if added:
            self._indexes = None
        return added

    def load_path(self, path: str | Path) -> int:
        """Load an .nq or .ttl file (optionally gzipped) into the store."""
        name = Path(path).name
        if name.endswith(".gz"):
            name = name[:-3]
        suffix = Path(name).suffix.lower()
        if suffix in (".nq", ".nquads", ".nt"):
            with open_text(path) as stream:
                return self.insert(parse_nquads(stream))
        if suffix in (".ttl", ".turtle"):
            with open_text(path) as stream:
                return self.insert(parse_turtle(stream.read()))
        raise ValueError(f"unsupported RDF file suffix: {path}")

    # -- inspection --------------------------------------------------------

    @property
    def quad_count(self) -> int:
        return len(self._quads)

    @property
    def term_count(self) -> int:
        return len(self._terms)

    def __len__(self) -> int:
        return len(self._quads)

    def graphs(self) -> list[Term]:
        """Distinct named graphs, in id order (excludes the default graph)."""
        seen: set[int] = set()
        out: list[Term] = []
        for key in self._quads:
            gid = key[3]
            if gid != _DEFAULT_GRAPH_ID and gid not in seen:
                seen.add(gid)
                out.append(self._terms[gid])
        return out

    def _to_quad(self, key: tuple[int, int, int, int]) -> Quad:
        return Quad(
            self._terms[key[0]],
            self._terms[key[1]],
            self._terms[key[2]],
            self._term(key[3]),
        )

    def all_quads(self) -> Iterator[Quad]:
        """All quads in insertion order."""
        for key in self._quads:
            yield self._to_quad(key)

    # -- indexed scans -----------------------------------------------------

    def _ensure_indexes(self) -> dict[str, list[tuple[int, int, int, int]]]:
        if self._indexes is None:
            indexes = {}
            for name, perm in _ORDERINGS.items():
                indexes[name] = sorted(tuple(key[i] for i in perm) for key in self._quads)
            self._indexes = indexes
        return self._indexes

    def _best_ordering(self, bound: dict[int, int]) -> tuple[str, tuple[int, ...]]:
        """Pick the ordering with the longest prefix of bound slots."""
        best_name, best_prefix = "gspo", ()
        for name, perm in _ORDERINGS.items():
            prefix = []
            for slot in perm:
                if slot in bound:
                    prefix.append(bound[slot])
                else:
                    break
            if len(prefix) > len(best_prefix):
                best_name, best_prefix = name, tuple(prefix)
        return best_name, best_prefix

    def _scan(self, bound: dict[int, int]) -> Iterator[tuple[int, int, int, int]]:
        """All quad keys whose slots agree with ``bound`` (slot index -> id)."""
        indexes = self._ensure_indexes()
        name, prefix = self._best_ordering(bound)
        perm = _ORDERINGS[name]
        index = indexes[name]
        lo = bisect_left(index, prefix + (_MIN_ID,) * (4 - len(prefix)))
        hi = bisect_right(index, prefix + (len(self._terms),) * (4 - len(prefix)))
        rest = {i: v for i, v in bound.items() if i not in set(perm[: len(prefix)])}
        for position in range(lo, hi):
            row = index[position]
            key = [0, 0, 0, 0]
            for slot_position, slot in enumerate(perm):
                key[slot] = row[slot_position]
            if all(key[slot] == value for slot, value in rest.items()):
                yield tuple(key)  # type: ignore[misc]

    def _estimate(self, bound: dict[int, int]) -> int:
        indexes = self._ensure_indexes()
        name, prefix = self._best_ordering(bound)
        index = indexes[name]
        lo = bisect_left(index, prefix + (_MIN_ID,) * (4 - len(prefix)))
        hi = bisect_right(index, prefix + (len(self._terms),) * (4 - len(prefix)))
        return hi - lo

    def quads(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        obj: Term | None = None,
        graph: object = ANY,
    ) -> Iterator[Quad]:
        """Quads matching the given constant slots (None = wildcard for s/p/o;
        the graph slot uses ANY as wildcard and None for the default graph)."""
        bound: dict[int, int] = {}
        for slot, value in ((0, subject), (1, predicate), (2, obj)):
            if value is not None:
                tid = self._lookup(value)
                if tid is None:
                    return
                bound[slot] = tid
        if not isinstance(graph, _Any):
            tid = self._lookup(graph)  # type: ignore[arg-type]
            if tid is None:
                return
            bound[3] = tid
        for key in self._scan(bound):
            yield self._to_quad(key)

    # -- basic graph pattern matching ---------------------------------------

    def match(self, patterns: Sequence[Pattern]) -> list[dict[str, Term | None]]:
        """Solve a conjunction of quad patterns.

        Returns every distinct variable binding satisfying all patterns,
        equal to brute-force cross-product-and-filter semantics.  Patterns
        are joined by index-backed nested loops, smallest estimated
        cardinality first.  Unknown terms yield an empty result.
        """
        if not patterns:
            raise ValueError("patterns may not be empty")
        self._check_connected(patterns)

        # Resolve constant slots once; a term the store has never seen means
        # the pattern (and the whole conjunction) has no matches.
        compiled: list[list[object]] = []
        for pattern in patterns:
            slots: list[object] = []
            for position, slot in enumerate(pattern.slots()):
                if isinstance(slot, _Any) or _is_var(slot):
                    slots.append(slot)
                else:
                    tid = self._lookup(slot)  # type: ignore[arg-type]
                    if tid is None:
                        return []
                    slots.append(("const", tid))
            compiled.append(slots)

        variables = sorted(set().union(*(p.variables() for p in patterns)))
        results: set[tuple[int, ...]] = set()

        def order_remaining(done: set[int], bound_vars: set[str]) -> int:
            best, best_key = -1, None
            for i, slots in enumerate(compiled):
                if i in done:
                    continue
                bound = {
                    pos: slot[1]  # type: ignore[index]
                    for pos, slot in enumerate(slots)
                    if isinstance(slot, tuple)
                }
                shares = any(_is_var(s) and s in bound_vars for s in slots)
                key = (not shares, self._estimate(bound))
                if best_key is None or key < best_key:
                    best, best_key = i, key
            return best

        def solve(done: set[int], binding: dict[str, int]) -> None:
            if len(done) == len(compiled):
                results.add(tuple(binding[v] for v in variables))
                return
            index = order_remaining(done, set(binding))
            slots = compiled[index]
            bound: dict[int, int] = {}
            var_positions: list[tuple[int, str]] = []
            for pos, slot in enumerate(slots):
                if isinstance(slot, tuple):
                    bound[pos] = slot[1]
                elif _is_var(slot):
                    if slot in binding:
                        bound[pos] = binding[slot]
                    else:
                        var_positions.append((pos, slot))
            for key in self._scan(bound):
                extended = dict(binding)
                consistent = True
                for pos, var in var_positions:
                    if var in extended and extended[var] != key[pos]:
                        consistent = False
                        break
                    extended[var] = key[pos]
                if consistent:
                    solve(done | {index}, extended)

        solve(set(), {})
        ordered = sorted(results)
        return [
            {var: self._term(tid) for var, tid in zip(variables, row)}
            for row in ordered
        ]

    @staticmethod
    def _check_connected(patterns: Sequence[Pattern]) -> None:
        if len(patterns) < 2:
            return
        groups = [p.variables() for p in patterns]
        reached = set([0])
        frontier = [0]
        while frontier:
            current = frontier.pop()
            for i, vars_i in enumerate(groups):
                if i in reached:
                    continue
                if groups[current] & vars_i or not vars_i or not groups[current]:
                    reached.add(i)
                    frontier.append(i)
        if len(reached) != len(patterns):
            warnings.warn("pattern variables do not form a connected join graph", stacklevel=3)
