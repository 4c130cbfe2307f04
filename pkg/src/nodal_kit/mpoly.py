"""Sparse multivariate polynomials over an exact coefficient ring.

Internal plumbing shared by the quotient-ring, factorization, and chart
modules; terms are stored as a dict from exponent tuples to nonzero
coefficients, so equality is structural and arithmetic stays exact.
"""

from __future__ import annotations

from .rings import RingElem


class MPoly:
    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring, nvars, terms):
        clean = {}
        for e, c in terms.items():
            if len(e) != nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent tuple {e!r} for {nvars} variables")
            if not c.is_zero:
                clean[e] = c
        self.ring = ring
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def zero(cls, ring, nvars):
        return cls(ring, nvars, {})

    @classmethod
    def const(cls, ring, nvars, c):
        return cls(ring, nvars, {(0,) * nvars: ring(c)})

    @classmethod
    def var(cls, ring, nvars, i, power=1):
        e = tuple(power if j == i else 0 for j in range(nvars))
        return cls(ring, nvars, {e: ring.one})

    @classmethod
    def monomial(cls, ring, exps, c=1):
        return cls(ring, len(exps), {tuple(exps): ring(c)})

    @property
    def is_zero(self):
        return not self.terms

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.ring.zero)

    def terms_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=None)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=None)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.ring != self.ring or other.nvars != self.nvars:
                raise ValueError("mixed polynomial rings")
            return other
        if isinstance(other, (RingElem, int)):
            return MPoly.const(self.ring, self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            c0 = out.get(e)
            c = c if c0 is None else c0 + c
            if c.is_zero:
                out.pop(e, None)
            else:
                out[e] = c
        return MPoly(self.ring, self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return MPoly(self.ring, self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (RingElem, int)):
            c = self.ring(other)
            return MPoly(self.ring, self.nvars, {e: c * a for e, a in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                c0 = out.get(e)
                c = c if c0 is None else c0 + c
                if c.is_zero:
                    out.pop(e, None)
                else:
                    out[e] = c
        return MPoly(self.ring, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = MPoly.const(self.ring, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def eval_var(self, i, value):
        """Specialize variable i to a ring element (exponent stays, set to 0)."""
        value = self.ring(value)
        out = MPoly.zero(self.ring, self.nvars)
        powers = {0: self.ring.one}
        for e, c in self.terms.items():
            k = e[i]
            if k not in powers:
                powers[k] = value**k
            e2 = tuple(0 if j == i else a for j, a in enumerate(e))
            out = out + MPoly(self.ring, self.nvars, {e2: c * powers[k]})
        return out

    def eval_all(self, values):
        """Evaluate at a full point; returns a ring element."""
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        values = [self.ring(v) for v in values]
        out = self.ring.zero
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                t = t * v**k
            out = out + t
        return out

    def subs_var(self, i, poly):
        """Substitute a polynomial for variable i."""
        poly = self._coerce(poly)
        out = MPoly.zero(self.ring, self.nvars)
        powers = {0: MPoly.const(self.ring, self.nvars, 1)}
        maxk = max((e[i] for e in self.terms), default=0)
        for k in range(1, maxk + 1):
            powers[k] = powers[k - 1] * poly
        for e, c in self.terms.items():
            e2 = tuple(0 if j == i else a for j, a in enumerate(e))
            out = out + powers[e[i]] * MPoly(self.ring, self.nvars, {e2: c})
        return out

    def derivative(self, i):
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = tuple(a - 1 if j == i else a for j, a in enumerate(e))
            out[e2] = c * k
        return MPoly(self.ring, self.nvars, out)

    def map_coeffs(self, fn, ring=None):
        """Apply fn to every coefficient (e.g. an embedding into a larger ring)."""
        ring = ring or self.ring
        out = {}
        for e, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero:
                out[e] = c2
        return MPoly(ring, self.nvars, out)

    def format(self, names):
        if len(names) != self.nvars:
            raise ValueError("wrong number of variable names")
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms_sorted():
            mono = "*".join(
                nm if k == 1 else f"{nm}^{k}" for nm, k in zip(names, e) if k
            )
            cs = str(c)
            if mono and cs == "1":
                parts.append(mono)
            elif mono and cs == "-1":
                parts.append(f"-{mono}")
            else:
                if any(ch in cs[1:] for ch in "+-"):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}" if mono else cs)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __str__(self):
        return self.format([f"x{i}" for i in range(self.nvars)])

    def __repr__(self):
        return f"MPoly({self})"


def random_poly2(ring, rng, max_deg=3, density=0.4):
    """Random sparse bivariate polynomial, for randomized identity checks."""
    terms = {}
    for i in range(max_deg + 1):
        for j in range(max_deg + 1):
            if rng.random() < density:
                c = ring.random_element(rng)
                if not c.is_zero:
                    terms[(i, j)] = c
    return MPoly(ring, 2, terms)
