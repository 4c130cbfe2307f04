"""Truncated bivariate power series stored by homogeneous components.

A `Series2` knows its components up to a precision N (``None`` means the
value is an exact polynomial); components of higher degree are treated as
unknown garbage, and arithmetic propagates precision pessimistically so an
order assertion can never become vacuously true through silent truncation.
Homogeneous components are dense coefficient vectors indexed by X-exponent.
"""

from __future__ import annotations

from .rings import RingElem


class PrecisionError(ValueError):
    """A component beyond the known precision was requested."""


class SubstitutionError(ValueError):
    """Substitution by a series with nonzero constant term."""


class HPoly:
    """Homogeneous polynomial of fixed degree n in X, Y.

    Coefficients form a vector of length n+1; index i holds the coefficient
    of X^i Y^(n-i).
    """

    __slots__ = ("ring", "degree", "coeffs")

    def __init__(self, ring, degree, coeffs):
        coeffs = tuple(coeffs)
        if degree < 0 or len(coeffs) != degree + 1:
            raise ValueError(f"degree-{degree} component needs {degree + 1} coefficients")
        self.ring = ring
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, ring, degree):
        return cls(ring, degree, (ring.zero,) * (degree + 1))

    @classmethod
    def monomial(cls, ring, i, j, coeff=1):
        n = i + j
        return cls(ring, n, tuple(ring(coeff) if k == i else ring.zero for k in range(n + 1)))

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coeffs)

    def _check(self, other):
        if not isinstance(other, HPoly) or other.degree != self.degree:
            raise ValueError("degree mismatch between homogeneous components")
        return other

    def __add__(self, other):
        other = self._check(other)
        return HPoly(self.ring, self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        other = self._check(other)
        return HPoly(self.ring, self.degree, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return HPoly(self.ring, self.degree, tuple(-a for a in self.coeffs))

    def scale(self, c):
        c = self.ring(c)
        return HPoly(self.ring, self.degree, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (RingElem, int)):
            return self.scale(other)
        n = self.degree + other.degree
        out = [self.ring.zero] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return HPoly(self.ring, n, out)

    __rmul__ = __mul__

    def times_x(self):
        return HPoly(self.ring, self.degree + 1, (self.ring.zero,) + self.coeffs)

    def times_y(self):
        return HPoly(self.ring, self.degree + 1, self.coeffs + (self.ring.zero,))

    def split_xy(self):
        """Write f = X*u + Y*v by the fixed rule: the pure-Y term feeds v,
        everything else feeds u.  Requires degree >= 1."""
        if self.degree < 1:
            raise ValueError("cannot split a constant")
        n = self.degree - 1
        u = HPoly(self.ring, n, self.coeffs[1:])
        v = HPoly(self.ring, n, (self.coeffs[0],) + (self.ring.zero,) * n)
        return u, v

    def to_series(self, precision=None):
        return Series2(self.ring, {self.degree: self.coeffs}, precision)

    def __eq__(self, other):
        return (
            isinstance(other, HPoly)
            and other.degree == self.degree
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __str__(self):
        return str(self.to_series())

    __repr__ = __str__


def _min_prec(*ps):
    finite = [p for p in ps if p is not None]
    return min(finite) if finite else None


class Series2:
    """Bivariate series known through a precision bound.

    ``parts`` maps degree -> coefficient vector; degrees without an entry are
    zero when <= precision and unknown beyond it.  ``precision=None`` marks an
    exact polynomial.
    """

    __slots__ = ("ring", "precision", "parts")

    def __init__(self, ring, parts, precision=None):
        if precision is not None and precision < 0:
            raise ValueError("precision must be >= 0")
        clean = {}
        for n, vec in parts.items():
            vec = tuple(vec)
            if len(vec) != n + 1:
                raise ValueError(f"degree-{n} component needs {n + 1} coefficients")
            if precision is not None and n > precision:
                continue
            if any(not c.is_zero for c in vec):
                clean[n] = vec
        self.ring = ring
        self.precision = precision
        self.parts = clean

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring, precision=None):
        return cls(ring, {}, precision)

    @classmethod
    def const(cls, ring, c, precision=None):
        return cls(ring, {0: (ring(c),)}, precision)

    @classmethod
    def x(cls, ring, precision=None):
        return cls(ring, {1: (ring.zero, ring.one)}, precision)

    @classmethod
    def y(cls, ring, precision=None):
        return cls(ring, {1: (ring.one, ring.zero)}, precision)

    @classmethod
    def from_terms(cls, ring, terms, precision=None):
        """Build from (i, j, coefficient) triples meaning coeff * X^i Y^j."""
        parts = {}
        for i, j, c in terms:
            n = i + j
            vec = parts.setdefault(n, [ring.zero] * (n + 1))
            vec[i] = vec[i] + ring(c)
        return cls(ring, {n: tuple(v) for n, v in parts.items()}, precision)

    @classmethod
    def from_triples(cls, ring, triples, precision=None):
        """CLI literal format: [[i, j, "coeff"], ...]."""
        return cls.from_terms(ring, [(int(i), int(j), ring.parse_elem(str(c))) for i, j, c in triples], precision)

    @classmethod
    def from_hpoly(cls, h, precision=None):
        return cls(h.ring, {h.degree: h.coeffs}, precision)

    # --- inspection ---------------------------------------------------------

    @property
    def is_zero(self):
        """Zero through the stored precision (exactly zero when precision is None)."""
        return not self.parts

    def known(self, n):
        return self.precision is None or n <= self.precision

    def homogeneous_part(self, n):
        if not self.known(n):
            raise PrecisionError(f"component {n} exceeds precision {self.precision}")
        vec = self.parts.get(n)
        return HPoly(self.ring, n, vec) if vec is not None else HPoly.zero(self.ring, n)

    def coefficient(self, i, j):
        vec = self.parts.get(i + j)
        if vec is None:
            if not self.known(i + j):
                raise PrecisionError(f"coefficient ({i},{j}) exceeds precision {self.precision}")
            return self.ring.zero
        return vec[i]

    def order(self):
        """Least degree with a nonzero component, or None when zero at precision."""
        return min(self.parts) if self.parts else None

    def order_at_least(self, k):
        """True when the series provably has no nonzero component below k."""
        o = self.order()
        if o is not None and o < k:
            return False
        if self.precision is not None and self.precision < k - 1:
            return False  # low components unknown, cannot certify
        return True

    def degree(self):
        """Top stored degree (the polynomial degree when precision is None)."""
        return max(self.parts) if self.parts else None

    # --- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Series2):
            if other.ring != self.ring:
                raise ValueError("mixed coefficient rings")
            return other
        if isinstance(other, (RingElem, int)):
            return Series2.const(self.ring, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = _min_prec(self.precision, other.precision)
        parts = {}
        for n in set(self.parts) | set(other.parts):
            a = self.parts.get(n)
            b = other.parts.get(n)
            if a is None:
                parts[n] = b
            elif b is None:
                parts[n] = a
            else:
                parts[n] = tuple(x + y for x, y in zip(a, b))
        return Series2(self.ring, parts, prec)

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
        return other - self

    def __neg__(self):
        return Series2(self.ring, {n: tuple(-c for c in v) for n, v in self.parts.items()}, self.precision)

    def scale(self, c):
        c = self.ring(c)
        return Series2(self.ring, {n: tuple(c * a for a in v) for n, v in self.parts.items()}, self.precision)

    def __mul__(self, other):
        if isinstance(other, (RingElem, int)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = _min_prec(self.precision, other.precision)
        parts = {}
        for n1, v1 in self.parts.items():
            for n2, v2 in other.parts.items():
                n = n1 + n2
                if prec is not None and n > prec:
                    continue
                vec = parts.get(n)
                if vec is None:
                    vec = [self.ring.zero] * (n + 1)
                    parts[n] = vec
                for i, a in enumerate(v1):
                    if a.is_zero:
                        continue
                    for j, b in enumerate(v2):
                        if not b.is_zero:
                            vec[i + j] = vec[i + j] + a * b
        return Series2(self.ring, {n: tuple(v) for n, v in parts.items()}, prec)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = Series2.const(self.ring, 1, self.precision)
        for _ in range(k):
            out = out * self
        return out

    def truncated(self, precision):
        prec = _min_prec(self.precision, precision)
        return Series2(self.ring, self.parts, prec)

    # --- substitution -------------------------------------------------------

    def substitute(self, xs, ys):
        """Compose: the series evaluated at X = xs, Y = ys.

        Both substituted series need order >= 1 (a nonzero constant term would
        make every output coefficient an infinite sum).  Exact through the
        minimum of the three precisions.
        """
        xs = self._coerce(xs)
        ys = self._coerce(ys)
        for g, nm in ((xs, "X"), (ys, "Y")):
            if not g.coefficient(0, 0).is_zero:
                raise SubstitutionError(f"substitution for {nm} has a constant term")
        prec = _min_prec(self.precision, xs.precision, ys.precision)

        def trunc(s):
            return s if prec is None else s.truncated(prec)

        # coefficient of X^i as a map {j: c} (only degrees that can matter)
        by_x = {}
        for n, vec in self.parts.items():
            if prec is not None and n > prec:
                continue
            for i, c in enumerate(vec):
                if not c.is_zero:
                    by_x.setdefault(i, {})[n - i] = c
        if not by_x:
            return Series2.zero(self.ring, prec)

        def eval_y(coeffs):
            # Horner in ys for sum_j coeffs[j] * Y^j
            out = Series2.zero(self.ring)
            for j in range(max(coeffs), -1, -1):
                out = trunc(out * ys)
                c = coeffs.get(j)
                if c is not None:
                    out = out + Series2.const(self.ring, c)
            return out

        # Horner in xs over the X-coefficients
        result = Series2.zero(self.ring)
        for i in range(max(by_x), -1, -1):
            result = trunc(result * xs)
            if i in by_x:
                result = result + eval_y(by_x[i])
        out = Series2(result.ring, result.parts, prec)
        return out

    # --- comparison / display ------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.precision == other.precision and self.parts == other.parts

    def __str__(self):
        if not self.parts:
            body = "0"
        else:
            terms = []
            for n in sorted(self.parts):
                for i, c in enumerate(self.parts[n]):
                    if c.is_zero:
                        continue
                    mono = "*".join(
                        ([f"X^{i}"] if i > 1 else ["X"] if i == 1 else [])
                        + ([f"Y^{n - i}"] if n - i > 1 else ["Y"] if n - i == 1 else [])
                    )
                    cs = str(c)
                    if mono and cs == "1":
                        terms.append(mono)
                        continue
                    if mono and cs == "-1":
                        terms.append(f"-{mono}")
                        continue
                    if any(ch in cs[1:] for ch in "+-"):
                        cs = f"({cs})"
                    terms.append(f"{cs}*{mono}" if mono else cs)
            body = " + ".join(terms)
        tail = "" if self.precision is None else f" + O(deg>{self.precision})"
        return body + tail

    def __repr__(self):
        return f"Series2({self})"
