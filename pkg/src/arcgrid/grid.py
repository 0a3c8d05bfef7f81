"""Grid diagrams: structure, moves, destabilization, rendering, file format.

A grid of size n has one X and one O marker in every row and column,
vertical segments running X -> O inside columns, horizontal segments
O -> X inside rows, and verticals crossing over horizontals everywhere.
Rows are indexed 0..n-1 bottom to top internally; the interval API and
the .grd file format are 1-based.

Destabilization here covers any vertical segment spanning two adjacent
rows (and transposed, any horizontal spanning two adjacent columns):
since no other interval can interleave a unit interval, such a segment
commutes next to a partner marker where it forms the classic three-marker
2x2 block, so removing it and merging the two rows is a knot-type
preserving move in one step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram
from .errors import BadHeights, IllegalSite, NotAKnot, UnsupportedFormat


@dataclass(frozen=True)
class DestabSite:
    """A removable unit segment: kind 'col' removes column ``index`` whose
    markers sit in rows (level, level+1); kind 'row' is the transpose."""

    kind: str
    index: int
    level: int


class GridDiagram:
    """Immutable n x n grid diagram."""

    __slots__ = ("n", "X", "O")

    def __init__(self, X, O, check=True):
        self.X = tuple(X)
        self.O = tuple(O)
        self.n = len(self.X)
        if check:
            self._validate()

    def _validate(self):
        n = self.n
        if sorted(self.X) != list(range(n)) or sorted(self.O) != list(range(n)):
            raise ValueError("X and O must be permutations of 0..n-1")
        if any(x == o for x, o in zip(self.X, self.O)):
            raise ValueError("X and O collide in a row")
        if not self.is_single_cycle():
            raise NotAKnot("grid traces more than one cycle")

    def is_single_cycle(self):
        n = self.n
        xcol = [0] * n
        ocol = [0] * n
        for r in range(n):
            xcol[self.X[r]] = r
            ocol[self.O[r]] = r
        r, count = 0, 0
        while True:
            c = self.X[r]      # row segment ends at the X
            r = ocol[c]        # column segment runs from that X's column to its O
            count += 1
            if r == 0:
                return count == n

    def __eq__(self, other):
        if not isinstance(other, GridDiagram):
            return NotImplemented
        return self.X == other.X and self.O == other.O

    def __hash__(self):
        return hash((self.X, self.O))

    def __repr__(self):
        return f"GridDiagram(X={list(self.X)}, O={list(self.O)})"

    # -- geometry ---------------------------------------------------------

    def column_rows(self):
        """Per column, the sorted (lo, hi) rows of its two markers."""
        spans = [None] * self.n
        tmp = {}
        for r in range(self.n):
            for c in (self.X[r], self.O[r]):
                tmp.setdefault(c, []).append(r)
        for c, rows in tmp.items():
            spans[c] = (min(rows), max(rows))
        return spans

    def row_cols(self):
        """Per row, the sorted (lo, hi) columns of its two markers."""
        return [tuple(sorted((self.X[r], self.O[r]))) for r in range(self.n)]

    def intervals(self):
        """1-based (lo, hi) height interval per column, left to right."""
        return [(lo + 1, hi + 1) for lo, hi in self.column_rows()]

    def crossings(self):
        """(col, row) pairs where a vertical strictly crosses a horizontal."""
        spans = self.column_rows()
        rows = self.row_cols()
        out = []
        for c in range(self.n):
            lo, hi = spans[c]
            for r in range(lo + 1, hi):
                a, b = rows[r]
                if a < c < b:
                    out.append((c, r))
        return out

    # -- conversions --------------------------------------------------------

    def to_diagram(self) -> Diagram:
        """Planar diagram with verticals over horizontals."""
        cross = self.crossings()
        if not cross:
            return Diagram((), loops=1)
        index = {cr: i for i, cr in enumerate(cross)}
        spans = self.column_rows()
        rows = self.row_cols()

        col_hits = {c: [] for c in range(self.n)}
        row_hits = {r: [] for r in range(self.n)}
        for (c, r) in cross:
            col_hits[c].append(r)
            row_hits[r].append(c)
        for c in col_hits:
            col_hits[c].sort()
        for r in row_hits:
            row_hits[r].sort()

        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        # merge the column end piece and row end piece at every marker
        for c in range(self.n):
            lo, hi = spans[c]
            for r, v_end in ((lo, ("v", c, 0)), ((hi), ("v", c, len(col_hits[c])))):
                a, b = rows[r]
                h_end = ("h", r, 0) if c == a else ("h", r, len(row_hits[r]))
                union(v_end, h_end)

        crossings = []
        for (c, r) in cross:
            vi = col_hits[c].index(r)
            hi_ = row_hits[r].index(c)
            e = find(("h", r, hi_ + 1))
            n_ = find(("v", c, vi + 1))
            w = find(("h", r, hi_))
            s = find(("v", c, vi))
            crossings.append((e, n_, w, s))

        # rename edge classes to small ints
        names = {}
        renamed = []
        for tup in crossings:
            renamed.append(tuple(names.setdefault(e, len(names)) for e in tup))
        return Diagram(renamed)

    @classmethod
    def from_intervals(cls, ivals) -> "GridDiagram":
        """Build a grid whose column i spans the i-th (lo, hi) height pair.

        Heights are 1-based; each height must occur exactly twice among
        the endpoints, and the induced cycle must be single.
        """
        n = len(ivals)
        count = {}
        for lo, hi in ivals:
            if not (1 <= lo < hi <= n):
                raise BadHeights(f"bad interval ({lo}, {hi}) for size {n}")
            count[lo] = count.get(lo, 0) + 1
            count[hi] = count.get(hi, 0) + 1
        if any(count.get(h, 0) != 2 for h in range(1, n + 1)):
            raise BadHeights("each height must appear exactly twice")

        cols_of = {}
        for c, (lo, hi) in enumerate(ivals):
            cols_of.setdefault(lo - 1, []).append(c)
            cols_of.setdefault(hi - 1, []).append(c)

        X = [None] * n
        O = [None] * n
        c, r = 0, ivals[0][0] - 1
        placed = 0
        while True:
            lo, hi = ivals[c][0] - 1, ivals[c][1] - 1
            X[r] = c
            r2 = hi if r == lo else lo
            O[r2] = c
            placed += 1
            partner = [k for k in cols_of[r2] if k != c]
            c, r = partner[0], r2
            if c == 0 and r == ivals[0][0] - 1:
                break
            if placed > n:
                raise NotAKnot("interval sequence traces more than one cycle")
        if placed != n or any(v is None for v in X) or any(v is None for v in O):
            raise NotAKnot("interval sequence traces more than one cycle")
        return cls(X, O)

    # -- destabilization ------------------------------------------------------

    def destab_sites(self):
        """Unit vertical and horizontal segments, column sites first."""
        sites = []
        for c, (lo, hi) in enumerate(self.column_rows()):
            if hi - lo == 1 and self.n >= 3:
                sites.append(DestabSite("col", c, lo))
        for r, (a, b) in enumerate(self.row_cols()):
            if b - a == 1 and self.n >= 3:
                sites.append(DestabSite("row", r, a))
        return sites

    def destabilize(self, site: DestabSite) -> "GridDiagram":
        if site not in self.destab_sites():
            raise IllegalSite(f"not a destabilization site: {site}")
        if site.kind == "row":
            t = self.transpose()
            return t.destabilize(DestabSite("col", site.index, site.level)).transpose()
        c, r = site.index, site.level
        rows = self.row_cols()
        a0, b0 = rows[r]
        c2 = a0 if b0 == c else b0
        a1, b1 = rows[r + 1]
        c3 = a1 if b1 == c else b1
        if c2 == c3:
            raise IllegalSite("degenerate two-column component")
        markers = []
        for rr in range(self.n):
            for cc, typ in ((self.X[rr], "X"), (self.O[rr], "O")):
                if cc == c:
                    continue
                if rr == r + 1:
                    markers.append((r, cc, typ))
                else:
                    markers.append((rr, cc, typ))
        X = [None] * (self.n - 1)
        O = [None] * (self.n - 1)
        for rr, cc, typ in markers:
            rr2 = rr - 1 if rr > r + 1 else rr
            cc2 = cc - 1 if cc > c else cc
            if typ == "X":
                X[rr2] = cc2
            else:
                O[rr2] = cc2
        return GridDiagram(X, O)

    def reduce(self) -> "GridDiagram":
        """Greedy fixpoint of destabilization, first site each pass."""
        g = self
        while True:
            sites = g.destab_sites()
            if not sites:
                return g
            g = g.destabilize(sites[0])

    # -- size-preserving moves -------------------------------------------------

    def translate(self, rows=0, cols=0) -> "GridDiagram":
        """Cyclic shift of rows and columns."""
        n = self.n
        X = [None] * n
        O = [None] * n
        for r in range(n):
            X[(r + rows) % n] = (self.X[r] + cols) % n
            O[(r + rows) % n] = (self.O[r] + cols) % n
        return GridDiagram(X, O, check=False)

    def flip(self, axis: str) -> "GridDiagram":
        n = self.n
        if axis == "horizontal":
            return GridDiagram([n - 1 - x for x in self.X], [n - 1 - o for o in self.O], check=False)
        if axis == "vertical":
            return GridDiagram(list(reversed(self.X)), list(reversed(self.O)), check=False)
        if axis == "transpose":
            X = [None] * n
            O = [None] * n
            for r in range(n):
                X[self.X[r]] = r
                O[self.O[r]] = r
            return GridDiagram(X, O, check=False)
        raise UnsupportedFormat(f"unknown flip axis: {axis}")

    def transpose(self) -> "GridDiagram":
        return self.flip("transpose")

    def _flip_images(self):
        g1 = self
        g2 = self.flip("horizontal")
        g3 = self.flip("vertical")
        g4 = g2.flip("vertical")
        out = [g1, g2, g3, g4]
        out += [g.flip("transpose") for g in out[:4]]
        return out

    def commutation_sites(self):
        """Legal adjacent transpositions: ('col', c) swaps columns c, c+1."""
        sites = []
        spans = self.column_rows()
        for c in range(self.n - 1):
            if _non_interleaved(spans[c], spans[c + 1]):
                sites.append(("col", c))
        rows = self.row_cols()
        for r in range(self.n - 1):
            if _non_interleaved(rows[r], rows[r + 1]):
                sites.append(("row", r))
        return sites

    def commute(self, site) -> "GridDiagram":
        kind, i = site
        if site not in self.commutation_sites():
            raise IllegalSite(f"not a commutation site: {site}")
        if kind == "col":
            swap = {i: i + 1, i + 1: i}
            return GridDiagram(
                [swap.get(x, x) for x in self.X],
                [swap.get(o, o) for o in self.O],
                check=False,
            )
        X = list(self.X)
        O = list(self.O)
        X[i], X[i + 1] = X[i + 1], X[i]
        O[i], O[i + 1] = O[i + 1], O[i]
        return GridDiagram(X, O, check=False)

    def canonical_form(self, commutations: bool = False) -> "GridDiagram":
        """Lexicographic minimum over translations and flips.

        With commutations enabled the orbit is closed under legal adjacent
        transpositions as well (used by the enumeration stage).
        """
        if not commutations:
            return self._canon_translate_flip()
        best = self._canon_translate_flip()
        seen = {(best.X, best.O)}
        frontier = [best]
        while frontier:
            nxt = []
            for g in frontier:
                for site in g.commutation_sites():
                    img = g.commute(site)._canon_translate_flip()
                    key = (img.X, img.O)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(img)
                        if key < (best.X, best.O):
                            best = img
            frontier = nxt
        return best

    def _canon_translate_flip(self):
        n = self.n
        best = None
        for g in self._flip_images():
            for dr in range(n):
                for dc in range(n):
                    img = g.translate(dr, dc)
                    key = (img.X, img.O)
                    if best is None or key < best:
                        best = key
        return GridDiagram(best[0], best[1], check=False)

    # -- files and rendering -----------------------------------------------------

    def to_grd(self, name="grid"):
        x = " ".join(str(v + 1) for v in self.X)
        o = " ".join(str(v + 1) for v in self.O)
        return f"{name} {self.n}\n{x}\n{o}\n"

    @classmethod
    def from_grd(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        name, n = lines[0].rsplit(None, 1)
        n = int(n)
        X = [int(v) - 1 for v in lines[1].split()]
        O = [int(v) - 1 for v in lines[2].split()]
        if len(X) != n or len(O) != n:
            raise ValueError("marker row length does not match declared size")
        return name, cls(X, O)

    def render(self, format: str = "ascii") -> str:
        if format == "ascii":
            return self._render_ascii()
        if format == "svg":
            return self._render_svg()
        if format == "tikz":
            return self._render_tikz()
        raise UnsupportedFormat(f"unknown render format: {format}")

    def _render_ascii(self):
        n = self.n
        canvas = [[" "] * (2 * n - 1) for _ in range(2 * n - 1)]
        for r, (a, b) in enumerate(self.row_cols()):
            for c2 in range(2 * a, 2 * b + 1):
                canvas[2 * r][c2] = "-"
        # verticals drawn last: the '|' at a crossing is the underpass gap
        for c, (lo, hi) in enumerate(self.column_rows()):
            for r2 in range(2 * lo, 2 * hi + 1):
                canvas[r2][2 * c] = "|"
        for r in range(n):
            for c in (self.X[r], self.O[r]):
                canvas[2 * r][2 * c] = "+"
        lines = ["".join(row).rstrip() for row in reversed(canvas)]
        return "\n".join(lines) + "\n"

    def _render_svg(self):
        n = self.n
        u = 20
        gap = 4
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{(n + 1) * u}" '
            f'height="{(n + 1) * u}" viewBox="0 0 {(n + 1) * u} {(n + 1) * u}">'
        ]
        cross = self.crossings()
        by_row = {}
        for (c, r) in cross:
            by_row.setdefault(r, []).append(c)
        for r, (a, b) in enumerate(self.row_cols()):
            y = (n - r) * u
            xs = sorted(by_row.get(r, []))
            start = (a + 1) * u
            for c in xs:
                xc = (c + 1) * u
                parts.append(_svg_line(start, y, xc - gap, y))
                start = xc + gap
            parts.append(_svg_line(start, y, (b + 1) * u, y))
        for c, (lo, hi) in enumerate(self.column_rows()):
            x = (c + 1) * u
            parts.append(_svg_line(x, (n - lo) * u, x, (n - hi) * u))
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    def _render_tikz(self):
        n = self.n
        gap = 0.2
        lines = ["\\begin{tikzpicture}[scale=0.5]"]
        cross = self.crossings()
        by_row = {}
        for (c, r) in cross:
            by_row.setdefault(r, []).append(c)
        for r, (a, b) in enumerate(self.row_cols()):
            xs = sorted(by_row.get(r, []))
            start = float(a)
            for c in xs:
                lines.append(_tikz_line(start, r, c - gap, r))
                start = c + gap
            lines.append(_tikz_line(start, r, float(b), r))
        for c, (lo, hi) in enumerate(self.column_rows()):
            lines.append(_tikz_line(c, float(lo), c, float(hi)))
        lines.append("\\end{tikzpicture}")
        return "\n".join(lines) + "\n"


def _svg_line(x1, y1, x2, y2):
    return (
        f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
        'stroke="black" stroke-width="2" stroke-linecap="round"/>'
    )


def _tikz_line(x1, y1, x2, y2):
    return f"\\draw[line cap=round] ({x1:g},{y1:g}) -- ({x2:g},{y2:g});"


def _non_interleaved(p, q):
    """Closed intervals disjoint or strictly nested."""
    a1, b1 = p
    a2, b2 = q
    if b1 < a2 or b2 < a1:
        return True
    if a1 < a2 and b2 < b1:
        return True
    if a2 < a1 and b1 < b2:
        return True
    return False
