"""Sparse integer Laurent polynomials in one and two variables.

Coefficients are exact Python ints; zero coefficients are never stored.
These are the value types for the bracket/Jones polynomial (one variable)
and the Kauffman polynomial F(a, z) (two variables).
"""

from __future__ import annotations


def _clean(terms):
    return {e: c for e, c in terms.items() if c != 0}


class LaurentPoly1:
    """Laurent polynomial with integer coefficients in a single variable."""

    __slots__ = ("terms", "var")

    def __init__(self, terms=None, var="A"):
        self.terms = _clean(dict(terms or {}))
        self.var = var

    @classmethod
    def zero(cls, var="A"):
        return cls({}, var)

    @classmethod
    def one(cls, var="A"):
        return cls({0: 1}, var)

    @classmethod
    def monomial(cls, exp, coeff=1, var="A"):
        return cls({exp: coeff}, var)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly1({0: other}, self.var)
        if not isinstance(other, LaurentPoly1):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly1({0: other}, self.var)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly1(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly1({e: -c for e, c in self.terms.items()}, self.var)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly1({0: other}, self.var)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly1({e: c * other for e, c in self.terms.items()}, self.var)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly1(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("use shifted(): negative powers of polynomials are not defined")
        out = LaurentPoly1.one(self.var)
        for _ in range(k):
            out = out * self
        return out

    def shifted(self, d):
        """Multiply by var**d (d may be negative)."""
        return LaurentPoly1({e + d: c for e, c in self.terms.items()}, self.var)

    def mirrored(self):
        """Substitute var -> var**-1."""
        return LaurentPoly1({-e: c for e, c in self.terms.items()}, self.var)

    def map_exponents(self, f, var=None):
        out = {}
        for e, c in self.terms.items():
            e2 = f(e)
            out[e2] = out.get(e2, 0) + c
        return LaurentPoly1(out, var or self.var)

    def min_exp(self):
        return min(self.terms) if self.terms else 0

    def max_exp(self):
        return max(self.terms) if self.terms else 0

    def span(self):
        """Degree span (max exponent minus min exponent); 0 for constants."""
        return self.max_exp() - self.min_exp() if self.terms else 0

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            if e == 0:
                parts.append(f"{c:+d}")
            else:
                parts.append(f"{c:+d} {self.var}^{e}")
        text = " ".join(parts)
        return text[1:] if text.startswith("+") else text

    def __repr__(self):
        return f"LaurentPoly1({self.terms!r}, var={self.var!r})"


class LaurentPoly2:
    """Laurent polynomial with integer coefficients in two variables.

    Terms map (p, q) -> coefficient for monomials var1^p var2^q.
    """

    __slots__ = ("terms", "vars")

    def __init__(self, terms=None, vars=("a", "z")):
        self.terms = _clean(dict(terms or {}))
        self.vars = tuple(vars)

    @classmethod
    def zero(cls, vars=("a", "z")):
        return cls({}, vars)

    @classmethod
    def one(cls, vars=("a", "z")):
        return cls({(0, 0): 1}, vars)

    @classmethod
    def monomial(cls, p, q, coeff=1, vars=("a", "z")):
        return cls({(p, q): coeff}, vars)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly2({(0, 0): other}, self.vars)
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly2({(0, 0): other}, self.vars)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return LaurentPoly2(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly2({(0, 0): other}, self.vars)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly2({m: c * other for m, c in self.terms.items()}, self.vars)
        out = {}
        for (p1, q1), c1 in self.terms.items():
            for (p2, q2), c2 in other.terms.items():
                m = (p1 + p2, q1 + q2)
                out[m] = out.get(m, 0) + c1 * c2
        return LaurentPoly2(out, self.vars)

    __rmul__ = __mul__

    def shifted(self, dp, dq=0):
        """Multiply by var1**dp * var2**dq."""
        return LaurentPoly2({(p + dp, q + dq): c for (p, q), c in self.terms.items()}, self.vars)

    def mirrored(self):
        """Substitute var1 -> var1**-1 (the Kauffman mirror symmetry)."""
        return LaurentPoly2({(-p, q): c for (p, q), c in self.terms.items()}, self.vars)

    def a_span(self):
        """Span of the first-variable exponents; 0 for constants."""
        if not self.terms:
            return 0
        ps = [p for p, _ in self.terms]
        return max(ps) - min(ps)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        v1, v2 = self.vars
        parts = []
        for (p, q), c in self.sorted_terms():
            factors = [f"{c:+d}"]
            if p:
                factors.append(f"{v1}^{p}")
            if q:
                factors.append(f"{v2}^{q}")
            parts.append(" ".join(factors))
        text = " ".join(parts)
        return text[1:] if text.startswith("+") else text

    def __repr__(self):
        return f"LaurentPoly2({self.terms!r}, vars={self.vars!r})"


def poly1_to_pairs(p):
    """JSON-friendly [[exp, coeff], ...] form, sorted by exponent."""
    return [[e, c] for e, c in p.sorted_terms()]


def poly1_from_pairs(pairs, var="A"):
    return LaurentPoly1({int(e): int(c) for e, c in pairs}, var)


def poly2_to_pairs(p):
    """JSON-friendly [[p, q, coeff], ...] form, sorted by (p, q)."""
    return [[a, z, c] for (a, z), c in p.sorted_terms()]


def poly2_from_pairs(pairs, vars=("a", "z")):
    return LaurentPoly2({(int(a), int(z)): int(c) for a, z, c in pairs}, vars)
