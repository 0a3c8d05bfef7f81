"""Combinatorial planar knot/link diagrams.

A diagram is stored as a tuple of crossings. Each crossing is a 4-tuple of
edge ids listed in counterclockwise order around the crossing; the strand
through slots (0, 2) is the understrand and the strand through slots (1, 3)
is the overstrand. Each edge id occurs exactly twice over all slots.
Crossing-free circle components are counted separately in ``loops``.

Slot arithmetic conventions used throughout:

* passing straight through a crossing maps slot s to (s + 2) % 4,
* a face corner at a crossing sits between slots k and k + 1,
* an arrival at an even slot is an underpass, at an odd slot an overpass.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IllegalSite, NotAKnot

# Port pairings used when a crossing is deleted.
SMOOTH_A = ((0, 1), (2, 3))
SMOOTH_B = ((1, 2), (3, 0))
STRAIGHT = ((0, 2), (1, 3))


def _norm_crossing(t):
    # Rotating a crossing tuple by two slots is the same crossing read from
    # the opposite side; store the lexicographically smaller reading.
    r = (t[2], t[3], t[0], t[1])
    return t if t <= r else r


class Diagram:
    """Immutable planar diagram value."""

    __slots__ = ("crossings", "loops", "_edge_ends")

    def __init__(self, crossings, loops=0, check=True):
        self.crossings = tuple(_norm_crossing(tuple(c)) for c in crossings)
        self.loops = int(loops)
        ends = {}
        for ci, cr in enumerate(self.crossings):
            if len(cr) != 4:
                raise ValueError(f"crossing {ci} does not have 4 slots")
            for s, e in enumerate(cr):
                ends.setdefault(e, []).append((ci, s))
        self._edge_ends = {e: tuple(g) for e, g in ends.items()}
        if check:
            self._validate()

    def _validate(self):
        for e, g in self._edge_ends.items():
            if len(g) != 2:
                raise ValueError(f"edge {e} has {len(g)} endpoints, expected 2")
        if self.loops < 0:
            raise ValueError("negative loop count")
        # Planarity witness: Euler formula per connected piece.
        for part in self.split_connected()[0]:
            n = len(part.crossings)
            if n and len(part.faces()) != n + 2:
                raise ValueError("face count violates Euler formula; not a planar rotation system")

    # -- basic accessors -------------------------------------------------

    @property
    def n(self):
        return len(self.crossings)

    def edges(self):
        return sorted(self._edge_ends)

    def edge_ends(self, e):
        return self._edge_ends[e]

    def edge_at(self, germ):
        ci, s = germ
        return self.crossings[ci][s]

    def other_end(self, germ):
        g1, g2 = self._edge_ends[self.edge_at(germ)]
        return g2 if germ == g1 else g1

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.crossings == other.crossings and self.loops == other.loops

    def __hash__(self):
        return hash((self.crossings, self.loops))

    def __repr__(self):
        return f"Diagram({list(self.crossings)!r}, loops={self.loops})"

    def germs(self):
        for ci in range(self.n):
            for s in range(4):
                yield (ci, s)

    # -- faces -----------------------------------------------------------

    def faces(self):
        """Faces as germ orbits of g -> rotate(other_end(g)).

        The corner between slots k and k+1 at crossing c belongs to the
        face orbit containing germ (c, k+1).
        """
        seen = set()
        out = []
        for g0 in self.germs():
            if g0 in seen:
                continue
            face = []
            g = g0
            while g not in seen:
                seen.add(g)
                face.append(g)
                c2, s2 = self.other_end(g)
                g = (c2, (s2 + 1) % 4)
            out.append(tuple(face))
        return out

    def face_of_corner(self):
        """Map corner (c, k) -> face index, with faces() indexing."""
        lookup = {}
        for fi, face in enumerate(self.faces()):
            for (c, s) in face:
                lookup[(c, (s - 1) % 4)] = fi
        return lookup

    # -- strand traversal ------------------------------------------------

    def _next_arrival(self, germ):
        ci, s = germ
        return self.other_end((ci, (s + 2) % 4))

    def strand_orbits(self):
        """Directed traversal orbits; two per undirected component."""
        seen = set()
        orbits = []
        for g0 in self.germs():
            if g0 in seen:
                continue
            orbit = []
            g = g0
            while g not in seen:
                seen.add(g)
                orbit.append(g)
                g = self._next_arrival(g)
            orbits.append(tuple(orbit))
        return orbits

    def components(self):
        """One directed arrival-germ cycle per link component.

        The representative direction is the orbit containing the smallest
        arrival germ of the component; the reverse traversal arrives exactly
        at the forward exit germs, which is how it gets skipped.
        """
        out = []
        used = set()
        for orbit in sorted(self.strand_orbits(), key=min):
            if orbit[0] in used:
                continue
            used.update(orbit)
            used.update((c, (s + 2) % 4) for (c, s) in orbit)
            out.append(orbit)
        return out

    @property
    def component_count(self):
        return len(self.components()) + self.loops

    def knot_cycle(self):
        """Arrival germs along the single component; NotAKnot otherwise."""
        comps = self.components()
        if len(comps) + self.loops != 1:
            raise NotAKnot(f"{len(comps) + self.loops} components, expected 1")
        if not comps:
            return ()
        return comps[0]

    # -- crossing signs ---------------------------------------------------

    def arrival_slots(self):
        """Per crossing, the arrival slots of its two passes."""
        slots = [[] for _ in range(self.n)]
        for orbit in self.components():
            for (ci, s) in orbit:
                slots[ci].append(s)
        return slots

    def crossing_signs(self):
        """Writhe contribution of each crossing (orientation as traversed)."""
        signs = []
        for arr in self.arrival_slots():
            (s1, s2) = arr
            under_in = s1 if s1 % 2 == 0 else s2
            over_in = s2 if s1 % 2 == 0 else s1
            signs.append(1 if under_in == (over_in + 1) % 4 else -1)
        return signs

    def writhe(self):
        """Sum of crossing signs. Orientation-independent for knots."""
        return sum(self.crossing_signs())

    def self_writhe(self):
        """Sum of signs over crossings where both passes share a component."""
        comp_of = {}
        for k, orbit in enumerate(self.components()):
            for (ci, s) in orbit:
                comp_of[(ci, s)] = k
        signs = self.crossing_signs()
        arr = self.arrival_slots()
        total = 0
        for ci in range(self.n):
            s1, s2 = arr[ci]
            if comp_of[(ci, s1)] == comp_of[(ci, s2)]:
                total += signs[ci]
        return total

    # -- alternation -----------------------------------------------------

    def non_alternating_edges(self):
        """Edges whose two endpoint passes are both over or both under."""
        out = []
        for e, (g1, g2) in self._edge_ends.items():
            if g1[1] % 2 == g2[1] % 2:
                out.append(e)
        return sorted(out)

    def is_alternating(self):
        return self.n == 0 or not self.non_alternating_edges()

    # -- elementary rewrites ----------------------------------------------

    def mirror(self):
        """Swap over/under at every crossing."""
        return Diagram(
            tuple((c[1], c[2], c[3], c[0]) for c in self.crossings),
            loops=self.loops,
            check=False,
        )

    def switch_crossing(self, ci):
        """Swap over/under at a single crossing."""
        cs = list(self.crossings)
        c = cs[ci]
        cs[ci] = (c[1], c[2], c[3], c[0])
        return Diagram(cs, loops=self.loops, check=False)

    def remove_crossing(self, ci, pairs):
        """Delete crossing ci, fusing its ports as given by ``pairs``.

        pairs is a pair of slot pairs, e.g. SMOOTH_A; fusing the two ends
        of one edge closes it into a free circle.
        """
        germs = {}
        for cj, cr in enumerate(self.crossings):
            for s, e in enumerate(cr):
                germs[(cj, s)] = e
        loops = self.loops
        for (sa, sb) in pairs:
            ea = germs.pop((ci, sa))
            eb = germs.pop((ci, sb))
            if ea == eb:
                loops += 1
            else:
                for k, v in germs.items():
                    if v == eb:
                        germs[k] = ea
        new = []
        for cj in range(self.n):
            if cj == ci:
                continue
            new.append(tuple(germs[(cj, s)] for s in range(4)))
        return Diagram(new, loops=loops, check=False)

    def smooth(self, ci, mode):
        """A- or B-smoothing at a crossing (mode 'A' or 'B')."""
        return self.remove_crossing(ci, SMOOTH_A if mode == "A" else SMOOTH_B)

    # -- R1 / R2 simplification -------------------------------------------

    def find_kink(self):
        """Return (crossing, sign) of a curl, or None."""
        for ci, cr in enumerate(self.crossings):
            for s in range(4):
                if cr[s] == cr[(s + 1) % 4]:
                    return ci, (1 if s % 2 == 0 else -1)
        return None

    def find_reducible_bigon(self):
        """Return (c1, c2) of a Reidemeister-2 reducible bigon, or None."""
        for face in self.faces():
            if len(face) != 2:
                continue
            (c1, s1), (c2, s2) = face
            if c1 == c2:
                continue
            ea = self.edge_at((c1, s1))
            eb = self.edge_at((c2, s2))
            if ea == eb:
                continue
            if (s1 + s2) % 2 == 1:
                return c1, c2
        return None

    def remove_r2(self, c1, c2):
        d = self.remove_crossing(c1, STRAIGHT)
        return d.remove_crossing(c2 - (1 if c2 > c1 else 0), STRAIGHT)

    def simplified(self):
        """Remove curls and reducible bigons until none remain.

        Returns (core, kink_signs); shed circles accumulate in core.loops.
        Both the bracket and the Kauffman polynomial engines consume the
        curl signs as a^±1 / (-A^3)^±1 prefactors.
        """
        d = self
        signs = []
        while True:
            k = d.find_kink()
            if k is not None:
                ci, sign = k
                d = d.remove_crossing(ci, STRAIGHT)
                signs.append(sign)
                continue
            b = d.find_reducible_bigon()
            if b is not None:
                d = d.remove_r2(*b)
                continue
            return d, tuple(signs)

    # -- connectivity ------------------------------------------------------

    def split_connected(self):
        """Split into connected crossing-bearing parts.

        Returns (parts, loops) where each part is a Diagram with loops=0.
        """
        if self.n == 0:
            return [], self.loops
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g1, g2 in self._edge_ends.values():
            a, b = find(g1[0]), find(g2[0])
            if a != b:
                parent[a] = b
        groups = {}
        for ci in range(self.n):
            groups.setdefault(find(ci), []).append(ci)
        parts = []
        for root in sorted(groups, key=lambda r: min(groups[r])):
            members = groups[root]
            parts.append(
                Diagram([self.crossings[old] for old in members], loops=0, check=False)
            )
        return parts, self.loops

    # -- Reidemeister 3 -----------------------------------------------------

    def r3_sites(self):
        """Triangular faces where the move is legal (a strand over both others)."""
        sites = []
        for face in self.faces():
            if len(face) != 3:
                continue
            (c1, s1), (c2, s2), (c3, s3) = face
            if len({c1, c2, c3}) != 3:
                continue
            e1 = self.edge_at((c1, s1))
            e2 = self.edge_at((c2, s2))
            e3 = self.edge_at((c3, s3))
            if len({e1, e2, e3}) != 3:
                continue
            over1 = (s1 % 2 == 1) + (s2 % 2 == 0)  # strand of e1 at c1, c2
            over2 = (s2 % 2 == 1) + (s3 % 2 == 0)
            over3 = (s3 % 2 == 1) + (s1 % 2 == 0)
            counts = sorted((over1, over2, over3))
            if counts != [0, 1, 2]:
                continue
            strands = {over1: e1, over2: e2, over3: e3}
            sites.append(
                R3Site(
                    face=face,
                    top=strands[2],
                    middle=strands[1],
                    bottom=strands[0],
                )
            )
        return sites

    def apply_r3(self, site):
        """Slide the triangle to the other side; crossing count unchanged."""
        if site not in self.r3_sites():
            raise IllegalSite(f"not a legal R3 site: {site}")
        (c1, s1), (c2, s2), (c3, s3) = site.face
        e1 = self.edge_at((c1, s1))
        e2 = self.edge_at((c2, s2))
        e3 = self.edge_at((c3, s3))
        g1 = self.edge_at((c1, (s1 + 1) % 4))
        g2 = self.edge_at((c2, (s2 + 1) % 4))
        g3 = self.edge_at((c3, (s3 + 1) % 4))
        h1 = self.edge_at((c1, (s1 + 2) % 4))
        h2 = self.edge_at((c2, (s2 + 2) % 4))
        h3 = self.edge_at((c3, (s3 + 2) % 4))
        cs = list(self.crossings)
        # crossing of strands e1/e2: e1's pass keeps its old sense from c2
        t = (e1, g3, h1, e2)
        cs[c2] = t if (s2 - 1) % 2 == 0 else t[1:] + t[:1]
        # crossing of strands e1/e3
        t = (g2, h3, e1, e3)
        cs[c1] = t if s1 % 2 == 0 else t[1:] + t[:1]
        # crossing of strands e2/e3
        t = (e3, e2, g1, h2)
        cs[c3] = t if s3 % 2 == 0 else t[1:] + t[:1]
        return Diagram(cs, loops=self.loops)

    # -- canonical encoding -------------------------------------------------

    def _encode_from(self, start):
        order = [start[0]]
        entry = {start[0]: start[1]}
        queue = [start[0]]
        qi = 0
        while qi < len(queue):
            ci = queue[qi]
            qi += 1
            s0 = entry[ci]
            for k in range(4):
                g = (ci, (s0 + k) % 4)
                cj, sj = self.other_end(g)
                if cj not in entry:
                    entry[cj] = sj
                    order.append(cj)
                    queue.append(cj)
        names = {}
        code = []
        for ci in order:
            s0 = entry[ci]
            base = 0 if s0 in (0, 1) else 2
            row = [s0 % 2]
            for k in range(4):
                e = self.crossings[ci][(base + k) % 4]
                if e not in names:
                    names[e] = len(names)
                row.append(names[e])
            code.append(tuple(row))
        return tuple(code)

    def canonical_code(self):
        """Relabeling-invariant encoding; distinguishes mirrors."""
        if self.n == 0:
            return ("loops", self.loops)
        parts, loops = self.split_connected()
        codes = sorted(
            min(part._encode_from(g) for g in part.germs()) for part in parts
        )
        return (tuple(codes), loops)


@dataclass(frozen=True)
class R3Site:
    """A triangular face with its strand role assignment."""

    face: tuple
    top: int
    middle: int
    bottom: int


def boost_nonalt(d: Diagram, budget: int):
    """Search R3 move sequences of length <= budget maximizing the
    non-alternating edge count.

    Breadth-first with visited pruning; ties broken by fewest moves, then
    by lexicographic canonical DT code. Returns d when nothing improves.
    """
    from .codec import diagram_to_dt

    def tie_key(diag):
        try:
            return tuple(diagram_to_dt(diag).entries)
        except NotAKnot:
            return ()

    best_key = (-len(d.non_alternating_edges()), 0)
    best_tie = None
    best = d
    seen = {d.canonical_code()}
    frontier = [d]
    for depth in range(1, budget + 1):
        nxt = []
        for cur in frontier:
            for site in cur.r3_sites():
                new = cur.apply_r3(site)
                code = new.canonical_code()
                if code in seen:
                    continue
                seen.add(code)
                nxt.append(new)
                key = (-len(new.non_alternating_edges()), depth)
                if key < best_key:
                    best_key, best, best_tie = key, new, None
                elif key == best_key:
                    if best_tie is None:
                        best_tie = tie_key(best)
                    if tie_key(new) < best_tie:
                        best, best_tie = new, tie_key(new)
        frontier = nxt
        if not frontier:
            break
    return best
