"""Exact coefficient arithmetic behind one element interface.

Four kinds of rings are supported: the rationals, prime fields F_p, dual
numbers base[eps]/(eps^2), and truncated local rings base[v1..vk]/m^N.
All of them are local with a field at the bottom, so "unit" uniformly means
"nonzero residue".  Every operation is exact; inversion either succeeds
exactly or raises `NotAUnitError`.
"""

from __future__ import annotations

import re
from fractions import Fraction


class NotAUnitError(ArithmeticError):
    """Inversion was requested for an element with zero residue."""


class RingConstructionError(ValueError):
    """Invalid ring parameters (composite modulus, truncation order < 1, ...)."""


class CoeffParseError(ValueError):
    """A coefficient literal could not be parsed for the target ring."""


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class RingElem:
    """Element of a `Ring`.  Arithmetic coerces Python ints automatically."""

    __slots__ = ("ring", "val")

    def __init__(self, ring, val):
        self.ring = ring
        self.val = val

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise ValueError(f"mixed rings: {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElem(self.ring, self.ring._vadd(self.val, other.val))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElem(self.ring, self.ring._vadd(self.val, self.ring._vneg(other.val)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElem(self.ring, self.ring._vmul(self.val, other.val))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ring, self.ring._vneg(self.val))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.val == other.val

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __bool__(self):
        return not self.is_zero

    @property
    def is_zero(self):
        return self.ring._vis_zero(self.val)

    @property
    def is_unit(self):
        return not self.residue().is_zero

    def inv(self):
        """Exact multiplicative inverse; raises NotAUnitError for non-units."""
        return RingElem(self.ring, self.ring._vinv(self.val))

    def try_invert(self):
        """Inverse when the element is a unit, else None."""
        try:
            return self.inv()
        except NotAUnitError:
            return None

    def residue(self):
        """Image in the residue field (the identity on field elements)."""
        return self.ring.residue(self)

    def __str__(self):
        return self.ring.short(self)

    def __repr__(self):
        return f"<{self} in {self.ring.descriptor()}>"


class Ring:
    """Common interface of all coefficient rings.

    Instances are immutable value objects: two rings compare equal iff they
    were built from the same parameters, and elements of equal rings mix
    freely.
    """

    is_field = False

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        raise NotImplementedError

    def from_fraction(self, fr):
        raise NotImplementedError

    def __call__(self, x):
        """Coerce an int, literal string, or element of this ring."""
        if isinstance(x, RingElem):
            if x.ring != self:
                raise ValueError(f"element of {x.ring} is not in {self}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            return self.parse_elem(x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def residue_ring(self):
        return self

    def residue(self, elem):
        raise NotImplementedError

    def atoms(self):
        """Named generators usable in literals (eps, truncation variables)."""
        return {}

    def parse_elem(self, s):
        return _parse_literal(self, s)

    def random_element(self, rng):
        raise NotImplementedError

    def descriptor(self):
        raise NotImplementedError

    def short(self, elem):
        raise NotImplementedError

    def format_elem(self, elem):
        return self.short(elem)

    def __repr__(self):
        return self.descriptor()

    def __str__(self):
        return self.descriptor()


class Rationals(Ring):
    """The field of rational numbers with arbitrary-precision arithmetic."""

    is_field = True

    def from_int(self, n):
        return RingElem(self, Fraction(n))

    def from_fraction(self, fr):
        return RingElem(self, Fraction(fr))

    def _vadd(self, a, b):
        return a + b

    def _vneg(self, a):
        return -a

    def _vmul(self, a, b):
        return a * b

    def _vis_zero(self, a):
        return a == 0

    def _vinv(self, a):
        if a == 0:
            raise NotAUnitError("0 is not invertible")
        return 1 / a

    def residue(self, elem):
        return elem

    def random_element(self, rng):
        return RingElem(self, Fraction(rng.randint(-8, 8), rng.randint(1, 6)))

    def descriptor(self):
        return "q"

    def short(self, elem):
        return str(elem.val)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("q")


class PrimeField(Ring):
    """The field F_p; elements are residues in [0, p)."""

    is_field = True

    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime(p):
            raise RingConstructionError(f"modulus {p!r} is not prime")
        self.p = p

    def from_int(self, n):
        return RingElem(self, n % self.p)

    def from_fraction(self, fr):
        fr = Fraction(fr)
        den = self.from_int(fr.denominator)
        if not den.is_unit:
            raise CoeffParseError(f"denominator {fr.denominator} vanishes mod {self.p}")
        return self.from_int(fr.numerator) * den.inv()

    def _vadd(self, a, b):
        return (a + b) % self.p

    def _vneg(self, a):
        return (-a) % self.p

    def _vmul(self, a, b):
        return (a * b) % self.p

    def _vis_zero(self, a):
        return a == 0

    def _vinv(self, a):
        if a == 0:
            raise NotAUnitError(f"0 is not invertible mod {self.p}")
        return pow(a, -1, self.p)

    def residue(self, elem):
        return elem

    def random_element(self, rng):
        return RingElem(self, rng.randrange(self.p))

    def all_elements(self):
        return [self.from_int(i) for i in range(self.p)]

    def descriptor(self):
        return f"fp:{self.p}"

    def short(self, elem):
        return str(elem.val)

    def format_elem(self, elem):
        return f"{elem.val} mod {self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))


class DualNumbers(Ring):
    """base[eps]/(eps^2); values are pairs (a, b) meaning a + b*eps."""

    def __init__(self, base):
        if not isinstance(base, Ring):
            raise RingConstructionError("dual-number base must be a ring")
        self.base = base

    @property
    def eps(self):
        return RingElem(self, (self.base.zero, self.base.one))

    def embed(self, a):
        return RingElem(self, (self.base(a), self.base.zero))

    def parts(self, elem):
        """The (a, b) components of a + b*eps as base-ring elements."""
        return elem.val

    def from_int(self, n):
        return RingElem(self, (self.base.from_int(n), self.base.zero))

    def from_fraction(self, fr):
        return RingElem(self, (self.base.from_fraction(fr), self.base.zero))

    def _vadd(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def _vneg(self, x):
        return (-x[0], -x[1])

    def _vmul(self, x, y):
        # (a + b e)(c + d e) = ac + (ad + bc) e, e^2 = 0
        return (x[0] * y[0], x[0] * y[1] + x[1] * y[0])

    def _vis_zero(self, x):
        return x[0].is_zero and x[1].is_zero

    def _vinv(self, x):
        a, b = x
        ai = a.inv()
        return (ai, -(ai * b * ai))

    def residue_ring(self):
        return self.base.residue_ring()

    def residue(self, elem):
        return self.base.residue(elem.val[0])

    def atoms(self):
        out = {"e": self.eps, "eps": self.eps}
        for name, g in self.base.atoms().items():
            if name in out:
                raise RingConstructionError(f"atom name {name!r} collides with eps")
            out[name] = RingElem(self, (g, self.base.zero))
        return out

    def random_element(self, rng):
        return RingElem(self, (self.base.random_element(rng), self.base.random_element(rng)))

    def descriptor(self):
        return f"dual:{self.base.descriptor()}"

    def short(self, elem):
        a, b = elem.val
        if b.is_zero:
            return self.base.short(a)
        bs = self.base.short(b)
        if bs == "1":
            eps_term = "eps"
        elif bs == "-1":
            eps_term = "-eps"
        else:
            if any(c in bs[1:] for c in "+-"):
                bs = f"({bs})"
            eps_term = f"{bs}*eps"
        if a.is_zero:
            return eps_term
        head = self.base.short(a)
        return head + eps_term if eps_term.startswith("-") else f"{head}+{eps_term}"

    def format_elem(self, elem):
        a, b = elem.val
        bs = self.base.short(b)
        if not re.fullmatch(r"\d+(/\d+)?", bs):
            bs = f"({bs})"
        return f"{self.base.short(a)}+{bs}*eps"

    def __eq__(self, other):
        return isinstance(other, DualNumbers) and other.base == self.base

    def __hash__(self):
        return hash(("dual", self.base))


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class LocalTruncation(Ring):
    """base[v1..vk] truncated at m^N = 0, m = (v1..vk).

    Values are dicts mapping exponent tuples (total degree < N) to nonzero
    base elements; reduction happens eagerly so equality is structural.
    """

    def __init__(self, base, var_names, order):
        if not isinstance(base, Ring):
            raise RingConstructionError("truncation base must be a ring")
        var_names = tuple(var_names)
        if not var_names or len(set(var_names)) != len(var_names):
            raise RingConstructionError("variable names must be nonempty and distinct")
        for nm in var_names:
            if not _NAME_RE.fullmatch(nm):
                raise RingConstructionError(f"bad variable name {nm!r}")
            if nm in base.atoms() or nm in ("e", "eps"):
                raise RingConstructionError(f"variable {nm!r} collides with a base atom")
        if not isinstance(order, int) or order < 1:
            raise RingConstructionError(f"truncation order must be >= 1, got {order!r}")
        self.base = base
        self.var_names = var_names
        self.order = order
        self._zero_exp = (0,) * len(var_names)

    def _make(self, d):
        return {e: c for e, c in d.items() if not c.is_zero}

    def embed(self, a):
        a = self.base(a)
        return RingElem(self, self._make({self._zero_exp: a}))

    def gen(self, name):
        i = self.var_names.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(self.var_names)))
        if self.order < 2:
            return RingElem(self, {})
        return RingElem(self, {e: self.base.one})

    @property
    def gens(self):
        return tuple(self.gen(nm) for nm in self.var_names)

    def terms(self, elem):
        """Sorted (exponents, base coefficient) pairs of an element."""
        return sorted(elem.val.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def from_fraction(self, fr):
        return self.embed(self.base.from_fraction(fr))

    def _vadd(self, x, y):
        out = dict(x)
        for e, c in y.items():
            c2 = out.get(e)
            c = c if c2 is None else c2 + c
            if c.is_zero:
                out.pop(e, None)
            else:
                out[e] = c
        return out

    def _vneg(self, x):
        return {e: -c for e, c in x.items()}

    def _vmul(self, x, y):
        out = {}
        for e1, c1 in x.items():
            d1 = sum(e1)
            for e2, c2 in y.items():
                if d1 + sum(e2) >= self.order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                c2o = out.get(e)
                c = c if c2o is None else c2o + c
                if c.is_zero:
                    out.pop(e, None)
                else:
                    out[e] = c
        return out

    def _vis_zero(self, x):
        return not x

    def _vinv(self, x):
        c = x.get(self._zero_exp, self.base.zero)
        ci = c.inv()  # raises NotAUnitError when the residue vanishes
        ci_full = self.embed(ci)
        y = RingElem(self, x) * ci_full
        n = self.one - y  # nilpotent: every term has positive degree
        out = self.one
        pw = n
        for _ in range(1, self.order):
            out = out + pw
            pw = pw * n
        return (out * ci_full).val

    def residue_ring(self):
        return self.base.residue_ring()

    def residue(self, elem):
        return self.base.residue(elem.val.get(self._zero_exp, self.base.zero))

    def atoms(self):
        out = {nm: self.gen(nm) for nm in self.var_names}
        for name, g in self.base.atoms().items():
            out[name] = self.embed(g)
        return out

    def random_element(self, rng):
        out = {}
        for e in self._small_exponents():
            if rng.random() < 0.6:
                c = self.base.random_element(rng)
                if not c.is_zero:
                    out[e] = c
        return RingElem(self, out)

    def _small_exponents(self, cap=2):
        todo = [self._zero_exp]
        seen = {self._zero_exp}
        while todo:
            e = todo.pop()
            for i in range(len(e)):
                e2 = tuple(a + (1 if j == i else 0) for j, a in enumerate(e))
                if sum(e2) < min(self.order, cap + 1) and e2 not in seen:
                    seen.add(e2)
                    todo.append(e2)
        return sorted(seen)

    def descriptor(self):
        return f"loc:{self.base.descriptor()}:{','.join(self.var_names)}:{self.order}"

    def _term_str(self, e, c):
        mono = "*".join(
            nm if k == 1 else f"{nm}^{k}"
            for nm, k in zip(self.var_names, e)
            if k
        )
        cs = self.base.short(c)
        if not mono:
            return cs
        if cs == "1":
            return mono
        if cs == "-1":
            return f"-{mono}"
        if any(ch in cs[1:] for ch in "+-"):
            cs = f"({cs})"
        return f"{cs}*{mono}"

    def short(self, elem):
        if not elem.val:
            return "0"
        parts = [self._term_str(e, c) for e, c in self.terms(elem)]
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LocalTruncation)
            and other.base == self.base
            and other.var_names == self.var_names
            and other.order == self.order
        )

    def __hash__(self):
        return hash(("loc", self.base, self.var_names, self.order))


# --- literal parsing -------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*|[+\-*^()])")


def _tokenize(s):
    out, pos = [], 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m:
            raise CoeffParseError(f"bad literal {s!r} at position {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _LiteralParser:
    """Recursive-descent parser for sums of products of atoms and numbers.

    Grammar: expr := ['+'|'-'] term (('+'|'-') term)*;
    term := factor (['*'] factor)*; factor := base ['^' int];
    base := number | atom | '(' expr ')'.  Adjacency is implicit product.
    """

    def __init__(self, ring, tokens, source):
        self.ring = ring
        self.atoms = ring.atoms()
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def fail(self, why):
        raise CoeffParseError(f"{why} in {self.source!r}")

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def expr(self):
        total = self.ring.zero
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.tokens[self.pos] == "-" else 1
            self.pos += 1
        while True:
            term = self.term()
            total = total + (term if sign == 1 else -term)
            tok = self.peek()
            if tok not in ("+", "-"):
                return total
            sign = -1 if tok == "-" else 1
            self.pos += 1

    def term(self):
        out = self.factor()
        while True:
            tok = self.peek()
            if tok == "*":
                self.pos += 1
                out = out * self.factor()
            elif tok is not None and tok not in ("+", "-", ")", "^"):
                out = out * self.factor()  # implicit product, e.g. "2e"
            else:
                return out

    def factor(self):
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            tok = self.peek()
            if tok is None or not tok.isdigit():
                self.fail("bad exponent")
            self.pos += 1
            base = base ** int(tok)
        return base

    def base(self):
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of literal")
        if tok == "(":
            self.pos += 1
            out = self.expr()
            if self.peek() != ")":
                self.fail("unbalanced parentheses")
            self.pos += 1
            return out
        self.pos += 1
        if tok in self.atoms:
            return self.atoms[tok]
        try:
            return self.ring.from_fraction(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            self.fail(f"unknown atom {tok!r}")


def _parse_literal(ring, s):
    """Parse terms like '3/2', '-1+2*eps', 's^2*t-3' against the ring's atoms."""
    s = s.strip()
    m = re.fullmatch(r"(-?\d+)\s+mod\s+(\d+)", s)
    if m and isinstance(ring, PrimeField):
        if int(m.group(2)) != ring.p:
            raise CoeffParseError(f"literal {s!r} names a different modulus than {ring.p}")
        return ring.from_int(int(m.group(1)))
    tokens = _tokenize(s)
    if not tokens:
        raise CoeffParseError("empty literal")
    parser = _LiteralParser(ring, tokens, s)
    out = parser.expr()
    if parser.pos != len(tokens):
        raise CoeffParseError(f"trailing tokens in {s!r}")
    return out


# --- descriptors -----------------------------------------------------------

def make_ring(descriptor):
    """Build a ring from a descriptor string.

    Grammar: ``q`` | ``fp:<prime>`` | ``dual:<base>`` |
    ``loc:<base>:<v1,..,vk>:<order>``; e.g. ``loc:fp:7:s,t:4``.
    """
    if isinstance(descriptor, Ring):
        return descriptor
    tokens = descriptor.split(":")

    def parse(pos):
        if pos >= len(tokens):
            raise RingConstructionError(f"truncated descriptor {descriptor!r}")
        tok = tokens[pos]
        if tok in ("q", "Q", "rationals"):
            return Rationals(), pos + 1
        if tok == "fp":
            if pos + 1 >= len(tokens):
                raise RingConstructionError("fp: needs a modulus")
            try:
                p = int(tokens[pos + 1])
            except ValueError:
                raise RingConstructionError(f"bad modulus {tokens[pos + 1]!r}") from None
            return PrimeField(p), pos + 2
        if tok == "dual":
            base, nxt = parse(pos + 1)
            return DualNumbers(base), nxt
        if tok == "loc":
            base, nxt = parse(pos + 1)
            if nxt + 1 >= len(tokens):
                raise RingConstructionError("loc: needs variables and an order")
            names = tokens[nxt].split(",")
            try:
                order = int(tokens[nxt + 1])
            except ValueError:
                raise RingConstructionError(f"bad order {tokens[nxt + 1]!r}") from None
            return LocalTruncation(base, names, order), nxt + 2
        raise RingConstructionError(f"unknown ring kind {tok!r}")

    ring, pos = parse(0)
    if pos != len(tokens):
        raise RingConstructionError(f"trailing descriptor parts in {descriptor!r}")
    return ring
