"""The versal double-point ring A[X, Y]/(q(X, Y) - q(s, t)).

The relation is monic of degree 2 in X, so division gives every element a
unique canonical form f(Y) + X*g(Y); multiplication is implemented directly
on canonical pairs and cross-checked against generic division.  A recursive
decomposition of the powers X^n is kept as an independent witness for the
same canonical forms.
"""

from __future__ import annotations

from .linalg import kernel_basis
from .mpoly import MPoly
from .normal_form import QuadForm
from .rings import RingElem


class DegreeOverflowError(ArithmeticError):
    """A canonical form exceeded the configured Y-degree bound."""


class PowerIdentityError(AssertionError):
    """The power-decomposition identity X^n = f_n + X g_{n-1} + h_{n-2} * rel failed."""


# --- dense univariate helpers (coefficient tuples, ascending Y-degree) -----

def _norm(ring, coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    return tuple(coeffs)


def _uadd(ring, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else ring.zero
        y = b[i] if i < len(b) else ring.zero
        out.append(x + y)
    return _norm(ring, out)


def _uneg(ring, a):
    return tuple(-c for c in a)


def _umul(ring, a, b):
    if not a or not b:
        return ()
    out = [ring.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero:
            continue
        for j, y in enumerate(b):
            if not y.is_zero:
                out[i + j] = out[i + j] + x * y
    return _norm(ring, out)


def _uscale(ring, a, c):
    return _norm(ring, (c * x for x in a))


class DPRing:
    """Context for canonical-form arithmetic in A[X, Y]/(q(X,Y) - q(s,t)).

    `degree_bound` caps the Y-degree of canonical forms; overflow raises
    rather than truncating.  No unit discriminant is needed for bare
    division; constructions that require one check it themselves.
    """

    def __init__(self, ring, q, s, t, degree_bound=16):
        if not isinstance(q, QuadForm) or q.ring != ring:
            raise ValueError("quadratic form must live over the coefficient ring")
        if degree_bound < 0:
            raise ValueError("degree bound must be >= 0")
        self.ring = ring
        self.q = q
        self.s = ring(s)
        self.t = ring(t)
        self.degree_bound = degree_bound
        self.q_st = q.value_at(self.s, self.t)
        # q(X, Y) - q(s, t), monic of degree 2 in X
        self.relation = MPoly(
            ring,
            2,
            {
                (2, 0): ring.one,
                (1, 1): q.gamma,
                (0, 2): q.delta,
                (0, 0): -self.q_st,
            },
        )

    def __eq__(self, other):
        return (
            isinstance(other, DPRing)
            and other.ring == self.ring
            and other.q == self.q
            and other.s == self.s
            and other.t == self.t
            and other.degree_bound == self.degree_bound
        )

    def __repr__(self):
        return (
            f"DPRing({self.ring.descriptor()}, gamma={self.q.gamma}, "
            f"delta={self.q.delta}, s={self.s}, t={self.t})"
        )

    # --- element constructors ----------------------------------------------

    def element(self, f_coeffs=(), g_coeffs=()):
        fc = _norm(self.ring, (self.ring(c) for c in f_coeffs))
        gc = _norm(self.ring, (self.ring(c) for c in g_coeffs))
        return DPElem(self, fc, gc)

    def const(self, c):
        return self.element((self.ring(c),), ())

    @property
    def zero(self):
        return self.element()

    @property
    def one(self):
        return self.const(1)

    @property
    def u(self):
        """The class of X."""
        return self.element((), (self.ring.one,))

    @property
    def v(self):
        """The class of Y."""
        return self.element((self.ring.zero, self.ring.one), ())

    def y_power(self, k, times_x=False):
        coeffs = (self.ring.zero,) * k + (self.ring.one,)
        return self.element((), coeffs) if times_x else self.element(coeffs, ())

    def basis(self, bound):
        """Canonical A-module basis {Y^k, X Y^k : k <= bound}."""
        out = []
        for k in range(bound + 1):
            out.append(self.y_power(k))
        for k in range(bound + 1):
            out.append(self.y_power(k, times_x=True))
        return out

    def random_element(self, rng, degree=3):
        fc = [self.ring.random_element(rng) for _ in range(degree + 1)]
        gc = [self.ring.random_element(rng) for _ in range(degree + 1)]
        return self.element(fc, gc)

    # --- division ------------------------------------------------------------

    def reduce(self, poly):
        """Canonical form of a bivariate polynomial (variables X, Y)."""
        return self.reduce_with_multiplier(poly)[0]

    def reduce_with_multiplier(self, poly):
        """Divide by the relation: returns (elem, h) with

            poly = elem.expand() + h * relation

        verified exactly before returning.  Division is possible because the
        relation is monic of degree 2 in X.
        """
        if poly.nvars != 2 or poly.ring != self.ring:
            raise ValueError("expected a bivariate polynomial over the coefficient ring")
        rem = poly
        h = MPoly.zero(self.ring, 2)
        while True:
            top = None
            for (i, j) in rem.terms:
                if i >= 2 and (top is None or (i, j) > top):
                    top = (i, j)
            if top is None:
                break
            i, j = top
            c = rem.terms[top]
            factor = MPoly(self.ring, 2, {(i - 2, j): c})
            rem = rem - factor * self.relation
            h = h + factor
        if poly - (rem + h * self.relation) != MPoly.zero(self.ring, 2):
            raise AssertionError("division certificate failed (internal error)")
        fc = [self.ring.zero] * (self.degree_bound + 1)
        gc = [self.ring.zero] * (self.degree_bound + 1)
        for (i, j), c in rem.terms.items():
            if j > self.degree_bound:
                raise DegreeOverflowError(
                    f"canonical Y-degree {j} exceeds bound {self.degree_bound}"
                )
            (fc if i == 0 else gc)[j] = c
        return DPElem(self, _norm(self.ring, fc), _norm(self.ring, gc)), h


class DPElem:
    """Canonical form f(Y) + X*g(Y); the representation is unique."""

    __slots__ = ("dp", "fc", "gc")

    def __init__(self, dp, fc, gc):
        if max(len(fc), len(gc)) - 1 > dp.degree_bound:
            raise DegreeOverflowError(
                f"canonical Y-degree {max(len(fc), len(gc)) - 1} exceeds bound {dp.degree_bound}"
            )
        self.dp = dp
        self.fc = fc
        self.gc = gc

    def _coerce(self, other):
        if isinstance(other, DPElem):
            if other.dp != self.dp:
                raise ValueError("mixed double-point rings")
            return other
        if isinstance(other, (RingElem, int)):
            return self.dp.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ring = self.dp.ring
        return DPElem(self.dp, _uadd(ring, self.fc, other.fc), _uadd(ring, self.gc, other.gc))

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
        ring = self.dp.ring
        return DPElem(self.dp, _uneg(ring, self.fc), _uneg(ring, self.gc))

    def __mul__(self, other):
        if isinstance(other, (RingElem, int)):
            c = self.dp.ring(other)
            return DPElem(
                self.dp,
                _uscale(self.dp.ring, self.fc, c),
                _uscale(self.dp.ring, self.gc, c),
            )
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        # (f1 + X g1)(f2 + X g2), reducing X^2 = q(s,t) - gamma*X*Y - delta*Y^2:
        #   f = f1 f2 + (q(s,t) - delta Y^2) g1 g2
        #   g = f1 g2 + g1 f2 - gamma Y g1 g2
        dp, ring = self.dp, self.dp.ring
        gg = _umul(ring, self.gc, other.gc)
        f = _uadd(
            ring,
            _umul(ring, self.fc, other.fc),
            _uadd(
                ring,
                _uscale(ring, gg, dp.q_st),
                _uscale(ring, _shift2(ring, gg), -dp.q.delta),
            ),
        )
        g = _uadd(
            ring,
            _uadd(ring, _umul(ring, self.fc, other.gc), _umul(ring, self.gc, other.fc)),
            _uscale(ring, _shift1(ring, gg), -dp.q.gamma),
        )
        return DPElem(dp, f, g)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = self.dp.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.fc == other.fc and self.gc == other.gc

    @property
    def is_zero(self):
        return not self.fc and not self.gc

    def degree(self):
        """Canonical Y-degree, or None for zero."""
        d = max(len(self.fc), len(self.gc)) - 1
        return d if d >= 0 else None

    def expand(self):
        """The representative f(Y) + X*g(Y) as a bivariate polynomial."""
        terms = {}
        for j, c in enumerate(self.fc):
            if not c.is_zero:
                terms[(0, j)] = c
        for j, c in enumerate(self.gc):
            if not c.is_zero:
                terms[(1, j)] = c
        return MPoly(self.dp.ring, 2, terms)

    def apply_to_coeffs(self, fn):
        ring = self.dp.ring
        return DPElem(
            self.dp,
            _norm(ring, (fn(c) for c in self.fc)),
            _norm(ring, (fn(c) for c in self.gc)),
        )

    def constant_evaluation(self):
        """Image under X -> s, Y -> t (the marked-point evaluation)."""
        f = _ueval(self.dp.ring, self.fc, self.dp.t)
        g = _ueval(self.dp.ring, self.gc, self.dp.t)
        return f + self.dp.s * g

    def __str__(self):
        return self.expand().format(("X", "Y"))

    def __repr__(self):
        return f"DPElem({self})"


def _shift1(ring, a):
    return ((ring.zero,) + a) if a else ()


def _shift2(ring, a):
    return ((ring.zero, ring.zero) + a) if a else ()


def _ueval(ring, coeffs, at):
    out = ring.zero
    for c in reversed(coeffs):
        out = out * at + c
    return out


def x_power_decompositions(dp, n_max):
    """Triples (f_n, g_n, h_n) with X^n = f_n + X g_{n-1} + h_{n-2} * relation.

    f_n, g_n are univariate in Y (coefficient tuples), h_n bivariate.  Built
    by the recursion f_{n+1} = f_2 g_{n-1}, g_{n+1} = f_{n+1} + g_1 g_n,
    h_{n+1} = g_{n+1} + X h_n from the bases f_0 = g_0 = h_0 = 1, f_1 = 0,
    g_1 = -gamma*Y, f_2 = q(s,t) - delta*Y^2, and h_1 = X + g_1; the
    recursion is applied from n = 1 on, which pins down g_2 and h_2, and the
    h_1 base is the one the identity forces (expanding X^(n+1) = X * X^n
    gives h_{n-1} = g_{n-1} + X h_{n-2}, so h_1 = g_1 + X).  The identity is
    verified for every n up to n_max.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    ring = dp.ring
    one = (ring.one,)
    f = [one, ()]
    g = [one, (ring.zero, -dp.q.gamma)]
    h = [
        MPoly.const(ring, 2, 1),
        MPoly(ring, 2, {(1, 0): ring.one, (0, 1): -dp.q.gamma}),
    ]
    f2 = _norm(ring, (dp.q_st, ring.zero, -dp.q.delta))
    for n in range(1, n_max):
        f.append(_umul(ring, f2, g[n - 1]))
        g.append(_uadd(ring, f[n + 1], _umul(ring, g[1], g[n])))
        h.append(_y_poly_to_mpoly(ring, g[n + 1]) + MPoly.var(ring, 2, 0) * h[n])
    x = MPoly.var(ring, 2, 0)
    for n in range(2, n_max + 1):
        lhs = x**n
        rhs = (
            _y_poly_to_mpoly(ring, f[n])
            + x * _y_poly_to_mpoly(ring, g[n - 1])
            + h[n - 2] * dp.relation
        )
        if lhs != rhs:
            raise PowerIdentityError(f"power identity failed at n={n}")
    return f[: n_max + 1], g[: n_max + 1], h[: n_max + 1]


def _y_poly_to_mpoly(ring, coeffs):
    return MPoly(ring, 2, {(0, j): c for j, c in enumerate(coeffs) if not c.is_zero})


def v_shift_nonzerodivisor(dp, bound):
    """Certificate that v - t is not a zero-divisor on canonical degree <= bound.

    Builds the matrix of multiplication by v - t on the canonical basis and
    checks its kernel is trivial; field coefficients only.
    """
    ring = dp.ring
    if not ring.is_field:
        raise ValueError("the non-zero-divisor certificate needs field coefficients")
    vt = dp.v - dp.const(dp.t)
    basis = dp.basis(bound)
    target_bound = bound + 1
    cols = [vectorize(vt * b, target_bound) for b in basis]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(2 * (target_bound + 1))]
    ker = kernel_basis(ring, rows, len(cols))
    return {
        "kernel_dimension": len(ker),
        "domain_dimension": len(basis),
        "ok": not ker,
    }


def vectorize(elem, bound):
    """Coefficient vector of a canonical form in the basis {Y^k} + {X Y^k}."""
    if elem.degree() is not None and elem.degree() > bound:
        raise DegreeOverflowError(f"element degree {elem.degree()} exceeds {bound}")
    ring = elem.dp.ring
    out = [ring.zero] * (2 * (bound + 1))
    for j, c in enumerate(elem.fc):
        out[j] = c
    for j, c in enumerate(elem.gc):
        out[bound + 1 + j] = c
    return out


def unvectorize(dp, vec, bound):
    fc = vec[: bound + 1]
    gc = vec[bound + 1 :]
    return dp.element(fc, gc)
