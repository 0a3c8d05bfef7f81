"""Dowker-Thistlethwaite codes: parsing, realization, serialization.

Sign convention (Knotscape ecosystem): a negative entry means the pass at
the even label goes under. An all-positive code is therefore alternating
with every even-label pass on top.

Realization builds a small gadget graph (a wheel per crossing, forcing the
two strands to alternate around it) and asks networkx for a planar
embedding; the rotation system of the diagram is read off the embedding.
A non-planar gadget graph is exactly a non-realizable code. For prime
shadows the embedding is unique up to reflection, so the result is
deterministic; DT codes do not see chirality, and equivalence checks
elsewhere always compare against both mirror forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .diagram import Diagram
from .errors import DuplicateLabel, NonRealizable, NotAKnot, OddEntry, OutOfRange

# Chirality calibration: with REFLECT_EMBEDDING False the rotation system is
# read so that realize("3_1 4 6 2") is the left-handed trefoil
# (Jones = -t^-4 + t^-3 + t^-1), pinning the sign convention once.
REFLECT_EMBEDDING = False


@dataclass(frozen=True)
class DTCode:
    """A named Dowker-Thistlethwaite sequence."""

    name: str
    entries: tuple

    @property
    def n(self):
        return len(self.entries)

    def is_alternating_form(self):
        return all(e > 0 for e in self.entries)

    def mirrored(self):
        return DTCode(self.name, tuple(-e for e in self.entries))

    def line(self):
        return " ".join([self.name] + [str(e) for e in self.entries])


def parse_dt(line: str) -> DTCode:
    """Parse one catalog line ``name e1 e2 ... en``."""
    tokens = line.split()
    if not tokens:
        raise OutOfRange("empty line")
    name, raw = tokens[0], tokens[1:]
    entries = []
    for tok in raw:
        try:
            v = int(tok)
        except ValueError:
            raise OddEntry(f"not an integer: {tok!r}") from None
        entries.append(v)
    n = len(entries)
    seen = set()
    for tok, v in zip(raw, entries):
        if v % 2 != 0:
            raise OddEntry(f"odd entry: {tok}")
        a = abs(v)
        if a == 0 or a > 2 * n:
            raise OutOfRange(f"entry out of range: {tok}")
        if a in seen:
            raise DuplicateLabel(f"duplicate label: {tok}")
        seen.add(a)
    return DTCode(name, tuple(entries))


def _pass_table(code: DTCode):
    """Positions 0..2n-1 along the knot -> (crossing index, over flag)."""
    n = code.n
    table = [None] * (2 * n)
    for i, e in enumerate(code.entries):
        odd_pos = 2 * i          # label 2i+1, 0-indexed position
        even_pos = abs(e) - 1    # label |e|, 0-indexed position
        even_over = e > 0
        table[odd_pos] = (i, not even_over)
        table[even_pos] = (i, even_over)
    return table


def realize(code: DTCode) -> Diagram:
    """Embed the code as a planar diagram; NonRealizable if impossible."""
    n = code.n
    if n == 0:
        return Diagram((), loops=1)
    table = _pass_table(code)
    # passes per crossing, in traversal order
    passes = {}
    for pos, (ci, _over) in enumerate(table):
        passes.setdefault(ci, []).append(pos)

    G = nx.Graph()
    rim_of = {}
    for ci in range(n):
        p1, p2 = passes[ci]
        center = ("c", ci)
        rims = [("r", ci, k) for k in range(4)]
        for k in range(4):
            G.add_edge(center, rims[k])
            G.add_edge(rims[k], rims[(k + 1) % 4])
        # alternate the two passes around the wheel: in1, in2, out1, out2
        rim_of[("in", p1)] = rims[0]
        rim_of[("in", p2)] = rims[1]
        rim_of[("out", p1)] = rims[2]
        rim_of[("out", p2)] = rims[3]
    for k in range(2 * n):
        # knot edge k runs from position k to position k+1
        a = rim_of[("out", k)]
        b = rim_of[("in", (k + 1) % (2 * n))]
        G.add_edge(a, ("m", k, 0))
        G.add_edge(("m", k, 0), ("m", k, 1))
        G.add_edge(("m", k, 1), b)

    ok, emb = nx.check_planarity(G)
    if not ok:
        raise NonRealizable(f"{code.name or code.entries}: no planar embedding")

    germ_info = {}
    for (kind, pos), rim in rim_of.items():
        edge = pos if kind == "out" else (pos - 1) % (2 * n)
        germ_info[rim] = (edge, pos)

    crossings = []
    for ci in range(n):
        rims_cw = [v for v in emb.neighbors_cw_order(("c", ci))]
        order = rims_cw if REFLECT_EMBEDDING else list(reversed(rims_cw))
        p1, p2 = passes[ci]
        under_pos = p1 if table[p1][1] is False else p2
        # rotate so an under-pass germ sits at slot 0
        idx = next(
            k for k, rim in enumerate(order) if germ_info[rim][1] == under_pos
        )
        order = order[idx:] + order[:idx]
        crossings.append(tuple(germ_info[rim][0] for rim in order))

    d = Diagram(crossings, loops=0)
    if d.component_count != 1:
        raise NonRealizable(f"{code.name or code.entries}: realizes to a link")
    return d


def _dt_order_key(entries):
    # Lexicographic on (|entry|, sign), so 4 6 2 beats -4 -6 -2: table
    # convention keeps the all-positive form for alternating codes.
    return tuple((abs(e), e < 0) for e in entries)


def diagram_to_dt(d: Diagram, name: str = "") -> DTCode:
    """Serialize a knot diagram to its canonical DT code.

    Canonical form is the least entry sequence over all 2n starting edges
    and both directions, ordered lexicographically by (|entry|, sign).
    """
    cycle = d.knot_cycle()
    n = d.n
    if n == 0:
        return DTCode(name, ())
    reverse = tuple(reversed([(c, (s + 2) % 4) for (c, s) in cycle]))
    best = None
    for seq in (cycle, reverse):
        for k in range(2 * n):
            rot = seq[k:] + seq[:k]
            entries = _entries_from_passes(rot)
            if best is None or _dt_order_key(entries) < _dt_order_key(best):
                best = entries
    return DTCode(name, best)


def canonical_dt(code: DTCode) -> DTCode:
    """Canonical form of a code, without realizing it.

    Agrees with diagram_to_dt(realize(code)) since both minimize over the
    same orbit of starts and directions.
    """
    n = code.n
    if n == 0:
        return DTCode(code.name, ())
    table = _pass_table(code)
    # fake germs: slot parity is all _entries_from_passes reads
    forward = [(ci, 1 if over else 0) for (ci, over) in table]
    backward = list(reversed(forward))
    best = None
    for seq in (forward, backward):
        for k in range(2 * n):
            rot = seq[k:] + seq[:k]
            entries = _entries_from_passes(rot)
            if best is None or _dt_order_key(entries) < _dt_order_key(best):
                best = entries
    return DTCode(code.name, best)


def _entries_from_passes(rot):
    pos_of = {}
    for pos, (c, s) in enumerate(rot):
        pos_of.setdefault(c, []).append(pos)
    entries = []
    for pos, (c, s) in enumerate(rot):
        if pos % 2 != 0:
            continue
        p1, p2 = pos_of[c]
        even_pos = p2 if pos == p1 else p1
        if even_pos % 2 != 1:
            raise NotAKnot("crossing visited twice at the same parity")
        even_germ = rot[even_pos]
        even_over = even_germ[1] % 2 == 1
        label = even_pos + 1
        entries.append(label if even_over else -label)
    return tuple(entries)


def parse_catalog(text: str):
    """Yield DTCodes from catalog text; '#' starts a comment line."""
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        yield parse_dt(line)
