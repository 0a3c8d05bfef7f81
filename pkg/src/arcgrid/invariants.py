"""Polynomial invariants: Kauffman bracket / Jones and Kauffman F(a, z).

The bracket comes in two independent implementations: the literal state
sum over all 2^c smoothings (the oracle, capped by crossing count) and a
skein recursion with curl/bigon simplification plus memoization on
canonical diagram codes (used for large diagrams such as constructed
grids).

The two-variable polynomial is computed through the Kauffman skein

    L(s+) + L(s-) = z (L(0) + L(oo)),   L(unknot) = 1,
    L(positive curl) = a L,             L(split union) = delta L1 L2,

with delta = (a + a^-1) z^-1 - 1, by switching the first crossing met on
a descending traversal and recursing into both smoothings. F is the
writhe normalization a^(-w) L. The a-degree span of F plus 2 is the arc
index lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram
from .errors import BudgetExceeded, TooLarge
from .laurent import LaurentPoly1, LaurentPoly2

BRACKET_LIMIT = 20
F_LIMIT = 16
SKEIN_NODE_BUDGET = 2_000_000

DELTA_BRACKET = LaurentPoly1({2: -1, -2: -1}, "A")
DELTA_KAUFFMAN = LaurentPoly2({(1, -1): 1, (-1, -1): 1, (0, 0): -1})

_A = LaurentPoly1.monomial(1, var="A")
_Ainv = LaurentPoly1.monomial(-1, var="A")
_Z = LaurentPoly2.monomial(0, 1)


def _delta_power1(k):
    out = LaurentPoly1.one("A")
    for _ in range(k):
        out = out * DELTA_BRACKET
    return out


def _delta_power2(k):
    out = LaurentPoly2.one()
    for _ in range(k):
        out = out * DELTA_KAUFFMAN
    return out


# ---------------------------------------------------------------------------
# Kauffman bracket, literal state sum
# ---------------------------------------------------------------------------


def kauffman_bracket(d: Diagram, limit: int = BRACKET_LIMIT) -> LaurentPoly1:
    """Bracket polynomial by the 2^c state sum; unknot normalizes to 1."""
    n = d.n
    if n > limit:
        raise TooLarge(f"{n} crossings exceeds bracket limit {limit}")
    if n == 0:
        if d.loops == 0:
            raise ValueError("empty diagram")
        return _delta_power1(d.loops - 1)

    # Contract knot edges once: circle counting then only joins edge classes.
    edge_ids = {e: i for i, e in enumerate(d.edges())}
    m = len(edge_ids)
    slot_class = [
        [edge_ids[e] for e in cr] for cr in d.crossings
    ]

    total = LaurentPoly1.zero("A")
    for mask in range(1 << n):
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        a_count = 0
        for ci in range(n):
            sc = slot_class[ci]
            if (mask >> ci) & 1:
                pairs = ((sc[1], sc[2]), (sc[3], sc[0]))
            else:
                a_count += 1
                pairs = ((sc[0], sc[1]), (sc[2], sc[3]))
            for x, y in pairs:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
        circles = len({find(x) for x in range(m)})
        exp = 2 * a_count - n  # A-smoothings minus B-smoothings
        total = total + _delta_power1(circles + d.loops - 1).shifted(exp)
    return total


# ---------------------------------------------------------------------------
# memo caches
# ---------------------------------------------------------------------------


class PolyCache:
    """Shared memoization for the two skein engines."""

    def __init__(self):
        self.bracket = {}
        self.kauffman = {}


_GLOBAL_CACHE = PolyCache()


def global_cache() -> PolyCache:
    return _GLOBAL_CACHE


# ---------------------------------------------------------------------------
# bracket skein engine
# ---------------------------------------------------------------------------


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("skein node budget exhausted")


def bracket_skein(d: Diagram, cache: PolyCache | None = None,
                  budget: int = SKEIN_NODE_BUDGET) -> LaurentPoly1:
    """Bracket via skein recursion; handles diagrams beyond the state-sum cap."""
    cache = cache if cache is not None else _GLOBAL_CACHE
    return _bracket_rec(d, cache.bracket, _Budget(budget))


def _bracket_rec(d, memo, budget):
    d, kinks = d.simplified()
    pref = LaurentPoly1.one("A")
    for s in kinks:
        pref = pref * LaurentPoly1.monomial(3 * s, -1, "A")
    parts, loops = d.split_connected()
    k = len(parts) + loops
    if k == 0:
        raise ValueError("empty diagram")
    value = pref * _delta_power1(k - 1)
    for part in parts:
        value = value * _bracket_part(part, memo, budget)
    return value


def _bracket_part(p, memo, budget):
    key = p.canonical_code()
    hit = memo.get(key)
    if hit is not None:
        return hit
    budget.spend()
    res = _A * _bracket_rec(p.smooth(0, "A"), memo, budget) + _Ainv * _bracket_rec(
        p.smooth(0, "B"), memo, budget
    )
    memo[key] = res
    return res


def jones(d: Diagram, cache: PolyCache | None = None,
          budget: int = SKEIN_NODE_BUDGET) -> LaurentPoly1:
    """Jones polynomial in t of a knot diagram, via the normalized bracket."""
    d.knot_cycle()  # raises NotAKnot on links
    w = d.writhe() if d.n else 0
    br = bracket_skein(d, cache, budget)
    normalized = br.shifted(-3 * w) * ((-1) ** (w % 2))
    out = {}
    for e, c in normalized.terms.items():
        if e % 4 != 0:
            raise AssertionError("bracket exponent not divisible by 4 on a knot")
        out[-(e // 4)] = c
    return LaurentPoly1(out, "t")


# ---------------------------------------------------------------------------
# Kauffman polynomial skein engine
# ---------------------------------------------------------------------------


def _scan_visits(p: Diagram):
    """Crossing visits in a slot-stable order.

    The walk starts each component at its smallest edge id, heading toward
    the smaller-crossing end; switching crossings does not perturb it, so
    the descending unroll below terminates.
    """
    edges_left = set(p.edges())
    while edges_left:
        e0 = min(edges_left)
        g1, g2 = p.edge_ends(e0)
        start = min(g1, g2, key=lambda g: (g[0], g[1]))
        g = start
        while True:
            yield g
            edges_left.discard(p.edge_at(g))
            ci, s = g
            g = p.other_end((ci, (s + 2) % 4))
            if g == start:
                break


def _first_bad_crossing(p: Diagram):
    """First crossing reached as an underpass on the descending scan."""
    seen = set()
    for (ci, s) in _scan_visits(p):
        if ci not in seen:
            seen.add(ci)
            if s % 2 == 0:
                return ci
    return None


def _lambda_rec(d, memo, budget):
    d, kinks = d.simplified()
    pref = LaurentPoly2.one()
    for s in kinks:
        pref = pref.shifted(s, 0)
    parts, loops = d.split_connected()
    k = len(parts) + loops
    if k == 0:
        raise ValueError("empty diagram")
    value = pref * _delta_power2(k - 1)
    for part in parts:
        value = value * _lambda_part(part, memo, budget)
    return value


def _lambda_part(p, memo, budget):
    use_memo = memo is not None
    if use_memo:
        key = p.canonical_code()
        hit = memo.get(key)
        if hit is not None:
            return hit
    budget.spend()
    # Unroll the switching chain: L(cur) = z(L(A) + L(B)) - L(switched).
    total = LaurentPoly2.zero()
    sign = 1
    cur = p
    while True:
        bad = _first_bad_crossing(cur)
        if bad is None:
            base = _delta_power2(len(cur.components()) - 1).shifted(cur.self_writhe(), 0)
            total = total + (base if sign > 0 else -base)
            break
        term = _Z * (
            _lambda_rec(cur.smooth(bad, "A"), memo, budget)
            + _lambda_rec(cur.smooth(bad, "B"), memo, budget)
        )
        total = total + (term if sign > 0 else -term)
        cur = cur.switch_crossing(bad)
        sign = -sign
        if cur.find_kink() is not None or cur.find_reducible_bigon() is not None:
            # the switch unlocked a reduction; hand off to the general path
            rest = _lambda_rec(cur, memo, budget)
            total = total + (rest if sign > 0 else -rest)
            break
    if use_memo:
        memo[key] = total
    return total


def kauffman_lambda(d: Diagram, cache: PolyCache | None = None,
                    budget: int = SKEIN_NODE_BUDGET,
                    memoized: bool = True) -> LaurentPoly2:
    """Regular-isotopy Kauffman polynomial L(a, z)."""
    if d.n == 0:
        if d.loops == 0:
            raise ValueError("empty diagram")
        return _delta_power2(d.loops - 1)
    if memoized:
        cache = cache if cache is not None else _GLOBAL_CACHE
        memo = cache.kauffman
    else:
        memo = None
    return _lambda_rec(d, memo, _Budget(budget))


def kauffman_F(d: Diagram, limit: int = F_LIMIT, cache: PolyCache | None = None,
               budget: int = SKEIN_NODE_BUDGET, memoized: bool = True) -> LaurentPoly2:
    """Kauffman polynomial F(a, z) = a^(-w) L of a knot diagram."""
    if d.n > limit:
        raise TooLarge(f"{d.n} crossings exceeds Kauffman limit {limit}")
    w = d.writhe() if d.n else 0
    lam = kauffman_lambda(d, cache, budget, memoized)
    return lam.shifted(-w, 0)


# ---------------------------------------------------------------------------
# arc index bounds
# ---------------------------------------------------------------------------


def arc_lower_bound(d: Diagram, limit: int = F_LIMIT,
                    cache: PolyCache | None = None) -> int:
    """a-degree span of F(a, z) plus 2."""
    return kauffman_F(d, limit=limit, cache=cache).a_span() + 2


def arc_upper_bound(d: Diagram, assume_minimal: bool = False) -> int:
    """c + 2 in general; c when the caller asserts a minimal-crossing
    non-alternating prime diagram."""
    if assume_minimal and d.n > 0 and not d.is_alternating():
        return d.n
    return d.n + 2


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------


def _canon1(p: LaurentPoly1) -> LaurentPoly1:
    m = p.mirrored()
    return p if p.sorted_terms() <= m.sorted_terms() else m


def _canon2(p: LaurentPoly2) -> LaurentPoly2:
    m = p.mirrored()
    return p if p.sorted_terms() <= m.sorted_terms() else m


@dataclass(frozen=True)
class Fingerprint:
    """Mirror-canonicalized invariant tuple used as equality evidence."""

    jones: LaurentPoly1
    kauffman: LaurentPoly2 | None
    crossings: int | None = None

    def key(self):
        return (
            tuple(self.jones.sorted_terms()),
            tuple(self.kauffman.sorted_terms()) if self.kauffman is not None else None,
        )


def fingerprint(d: Diagram, crossings: int | None = None,
                f_limit: int = F_LIMIT, cache: PolyCache | None = None) -> Fingerprint:
    v = _canon1(jones(d, cache))
    try:
        f = _canon2(kauffman_F(d, limit=f_limit, cache=cache))
    except (TooLarge, BudgetExceeded):
        f = None
    return Fingerprint(v, f, crossings)


def same_knot_evidence(a: Diagram, b: Diagram, f_limit: int = F_LIMIT,
                       cache: PolyCache | None = None) -> str:
    """Compare invariants of two knot diagrams.

    Returns 'equal', 'mirror-equal', 'distinct', or 'inconclusive'.
    Equality verdicts are evidence, not proof; 'distinct' is definitive.
    """
    pairs = []
    try:
        va, vb = jones(a, cache), jones(b, cache)
        pairs.append((va == vb, va == vb.mirrored()))
    except BudgetExceeded:
        pass
    if a.n <= f_limit and b.n <= f_limit:
        try:
            fa = kauffman_F(a, limit=f_limit, cache=cache)
            fb = kauffman_F(b, limit=f_limit, cache=cache)
            pairs.append((fa == fb, fa == fb.mirrored()))
        except BudgetExceeded:
            pass
    if not pairs:
        return "inconclusive"
    if all(ident for ident, _ in pairs):
        return "equal"
    if all(mir for _, mir in pairs):
        return "mirror-equal"
    return "distinct"
