"""Quadratic normal forms for plane singularities.

Implements the linearized update map for a binary quadratic form and its
right inverse, the successive-approximation iteration that straightens a
series with non-degenerate quadratic part into the exact form q(x', y'),
and the square-zero coordinate repairs used when lifting over a small
extension.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import DualNumbers, RingElem
from .series import Series2


class DegenerateFormError(ValueError):
    """The quadratic part has non-unit discriminant."""


@dataclass(frozen=True)
class QuadForm:
    """The binary quadratic form X^2 + gamma*X*Y + delta*Y^2."""

    ring: object
    gamma: RingElem
    delta: RingElem

    @classmethod
    def make(cls, ring, gamma, delta):
        return cls(ring, ring(gamma), ring(delta))

    @classmethod
    def nondegenerate(cls, ring, gamma, delta):
        q = cls.make(ring, gamma, delta)
        if not q.discriminant.is_unit:
            raise DegenerateFormError(
                f"discriminant {q.discriminant} is not a unit in {ring.descriptor()}"
            )
        return q

    @property
    def discriminant(self):
        return self.gamma * self.gamma - 4 * self.delta

    def value_at(self, a, b):
        a, b = self.ring(a), self.ring(b)
        return a * a + self.gamma * a * b + self.delta * b * b

    def series(self, precision=None):
        return Series2.from_terms(
            self.ring,
            [(2, 0, self.ring.one), (1, 1, self.gamma), (0, 2, self.delta)],
            precision,
        )

    def apply_series(self, xs, ys):
        """q(xs, ys) for series arguments, computed by direct multiplication."""
        return xs * xs + xs * ys * self.gamma + ys * ys * self.delta


@dataclass(frozen=True)
class CoordChange:
    """Images (xs, ys) of X and Y under a change of coordinates.

    Constant terms must vanish in the residue field (they are allowed to be
    nilpotent, as in square-zero repairs) and the linear part must be an
    invertible 2x2 matrix, so the change is invertible.
    """

    xs: Series2
    ys: Series2

    def __post_init__(self):
        for s in (self.xs, self.ys):
            c = s.coefficient(0, 0)
            if not c.residue().is_zero:
                raise ValueError("coordinate image has a non-nilpotent constant term")
        a, b = self.xs.coefficient(1, 0), self.xs.coefficient(0, 1)
        c, d = self.ys.coefficient(1, 0), self.ys.coefficient(0, 1)
        if not (a * d - b * c).is_unit:
            raise ValueError("linear part of the coordinate change is not invertible")

    @property
    def precision(self):
        ps = [p for p in (self.xs.precision, self.ys.precision) if p is not None]
        return min(ps) if ps else None

    def apply(self, f):
        """Compose a series with the change (requires zero constant terms)."""
        return f.substitute(self.xs, self.ys)

    @classmethod
    def identity(cls, ring):
        return cls(Series2.x(ring), Series2.y(ring))


def linearized_increment(q, mu, nu):
    """Degree-(n+1) part of q(X+mu, Y+nu) - q(X, Y) for homogeneous degree-n mu, nu.

    Equals (2*mu + gamma*nu)*X + (gamma*mu + 2*delta*nu)*Y.
    """
    if mu.degree != nu.degree:
        raise ValueError("mu and nu must have equal degree")
    left = (mu * 2 + nu.scale(q.gamma)).times_x()
    right = (mu.scale(q.gamma) + nu * 2 * q.delta).times_y()
    return left + right


def _raw_increment_preimage(q, f):
    """(mu, nu) with linearized_increment(q, mu, nu) = d * f, d the discriminant."""
    u, v = f.split_xy()
    mu = u.scale(-2 * q.delta) + v.scale(q.gamma)
    nu = u.scale(q.gamma) - v * 2
    return mu, nu


def solve_linearized_increment(q, f):
    """Right inverse of the linearized increment on homogeneous degree n+1.

    Needs a unit discriminant; the defining identity is re-checked on every
    call, which pins down the sign conventions of the preimage formula.
    """
    d = q.discriminant
    if not d.is_unit:
        raise DegenerateFormError("right inverse needs a unit discriminant")
    if f.degree < 1:
        raise ValueError("input must have degree >= 1")
    dinv = d.inv()
    mu_raw, nu_raw = _raw_increment_preimage(q, f)
    mu, nu = mu_raw.scale(dinv), nu_raw.scale(dinv)
    if linearized_increment(q, mu, nu) != f:
        raise AssertionError("right-inverse identity failed (internal error)")
    return mu, nu


def normalize_quadratic_part(f):
    """Linear change and unit scale bringing the degree-2 part to monic form.

    Requires field coefficients, vanishing parts of degree < 2, and a
    non-degenerate binary quadratic degree-2 part a*X^2 + b*X*Y + c*Y^2.
    Returns (change, scale, q) with scale*(f o change) having degree-2 part
    exactly X^2 + gamma*X*Y + delta*Y^2.
    """
    ring = f.ring
    if not ring.is_field:
        raise ValueError("quadratic normalization needs field coefficients")
    for n in (0, 1):
        if not f.homogeneous_part(n).is_zero:
            raise ValueError(f"degree-{n} part must vanish")
    f2 = f.homogeneous_part(2)
    c_, b, a = f2.coeffs[0], f2.coeffs[1], f2.coeffs[2]
    if (b * b - 4 * a * c_).is_zero:
        raise DegenerateFormError("degenerate quadratic part")
    X, Y = Series2.x(ring), Series2.y(ring)
    if not a.is_zero:
        change = CoordChange(X, Y)
        scale = a.inv()
        gamma, delta = b * scale, c_ * scale
    elif not c_.is_zero:
        change = CoordChange(Y, X)  # swap the variables
        scale = c_.inv()
        gamma, delta = b * scale, a * scale
    else:
        change = CoordChange(X, X + Y)  # shear: b*X*(X+Y) = b*X^2 + b*X*Y
        scale = b.inv()
        gamma, delta = ring.one, ring.zero
    q = QuadForm(ring, gamma, delta)
    check = change.apply(f).scale(scale).homogeneous_part(2)
    if check != q.series().homogeneous_part(2):
        raise AssertionError("normalization postcondition failed (internal error)")
    return change, scale, q


def normal_form_iteration(f, q, n_steps):
    """Successive coordinate corrections flattening f onto q.

    Starting from the identity, step n kills the degree-(n+2) component of
    q(x_n, y_n) - f by a homogeneous degree-(n+1) correction, so after step n
    the residual has order >= n+3.  Yields (x_n, y_n) for n = 1 .. n_steps.
    """
    if n_steps < 1:
        raise ValueError("need at least one step")
    if not q.discriminant.is_unit:
        raise DegenerateFormError("iteration needs a unit discriminant")
    if f.homogeneous_part(2) != q.series().homogeneous_part(2):
        raise ValueError("degree-2 part of the series must equal the quadratic form")
    if f.precision is not None and f.precision < n_steps + 1:
        raise ValueError(
            f"series precision {f.precision} too small for {n_steps} steps"
        )
    ring = f.ring
    xs, ys = Series2.x(ring), Series2.y(ring)
    out = [(xs, ys)]
    for n in range(1, n_steps):
        residual = q.apply_series(xs, ys) - f
        eps = residual.homogeneous_part(n + 2)
        mu, nu = solve_linearized_increment(q, eps)
        xs = xs + (-mu).to_series()
        ys = ys + (-nu).to_series()
        out.append((xs, ys))
    return out


def normal_form_coordinates(f, q, n_steps):
    """The coordinate change after `n_steps` corrections.

    Guarantees order(q(xs, ys) - f) >= n_steps + 2; the iteration always runs
    the full number of steps so the output shape is predictable.
    """
    xs, ys = normal_form_iteration(f, q, n_steps)[-1]
    return CoordChange(xs, ys)


def square_zero_change(q, tau, f):
    """Coordinates X' = X + tau*mu, Y' = Y + tau*nu absorbing tau*f into q.

    tau must square to zero and f must have zero constant term; then
    q(X', Y') = q(X, Y) + tau*f holds exactly through the precision of f,
    because the cross terms carry tau^2 = 0.
    """
    ring = f.ring
    tau = ring(tau)
    if not (tau * tau).is_zero:
        raise ValueError("tau must square to zero")
    d = q.discriminant
    if not d.is_unit:
        raise DegenerateFormError("square-zero change needs a unit discriminant")
    if not f.coefficient(0, 0).is_zero:
        raise ValueError("series must have zero constant term")
    mu, nu = _mu_nu_series(q, f)
    xs = Series2.x(ring) + mu.scale(tau)
    ys = Series2.y(ring) + nu.scale(tau)
    return CoordChange(xs, ys)


def _mu_nu_series(q, f):
    """Series (mu, nu) with (2X+gamma*Y)*mu + (gamma*X+2*delta*Y)*nu = f.

    Splits f = X*u + Y*v by the fixed rule (pure-Y monomials feed v) and
    applies the discriminant-scaled preimage formula degree by degree.
    """
    dinv = q.discriminant.inv()
    mu = Series2.zero(q.ring, f.precision)
    nu = Series2.zero(q.ring, f.precision)
    for n in sorted(f.parts):
        if n == 0:
            continue
        u, v = f.homogeneous_part(n).split_xy()
        mu_n = (u.scale(-2 * q.delta) + v.scale(q.gamma)).scale(dinv)
        nu_n = (u.scale(q.gamma) - v * 2).scale(dinv)
        mu = mu + mu_n.to_series()
        nu = nu + nu_n.to_series()
    return mu, nu


@dataclass(frozen=True)
class RepairResult:
    u: Series2
    v: Series2
    s: RingElem
    t: RingElem


def repair_small_lift(q, tau, u, v, s, t, defect):
    """Correct generator lifts so the double-point relation holds exactly.

    The data presents a flat lift whose generators (u, v) satisfy
    q(u, v) - q(s, t) = defect with defect = tau * f, tau a square-zero
    element killed by s and t.  The corrected generators u' = u - tau*mu,
    v' = v - tau*nu satisfy q(u', v') = q(u, v) - defect exactly, i.e. the
    relation q(u', v') - q(s, t) = 0 holds in the presented ring; s and t
    are unchanged.  Verified on every call.
    """
    ring = defect.ring
    tau = ring(tau)
    if not (tau * tau).is_zero:
        raise ValueError("tau must square to zero")
    for name, c in (("s", ring(s)), ("t", ring(t))):
        if not (tau * c).is_zero:
            raise ValueError(f"tau*{name} must vanish (small-extension hypothesis)")
    if not defect.coefficient(0, 0).is_zero:
        raise ValueError("defect has a constant term")
    X, Y = Series2.x(ring), Series2.y(ring)
    for name, w, var in (("u", u, X), ("v", v, Y)):
        if not _divisible_by_tau(w - var, tau):
            raise ValueError(f"generator {name} must equal its variable modulo tau")
    f = _divide_by_tau(defect, tau)
    f = f - Series2.const(ring, f.coefficient(0, 0), f.precision)
    mu, nu = _mu_nu_series(q, f)
    u2 = u - mu.scale(tau)
    v2 = v - nu.scale(tau)
    lhs = q.apply_series(u2, v2)
    rhs = q.apply_series(u, v) - defect
    if lhs != rhs:
        raise AssertionError("repair identity failed (internal error)")
    return RepairResult(u2, v2, ring(s), ring(t))


def _tau_components(ring, tau):
    if not isinstance(ring, DualNumbers):
        raise ValueError("tau-division is supported over dual numbers only")
    a, b = ring.parts(tau)
    if not a.is_zero or not b.is_unit:
        raise ValueError("tau must be a unit multiple of eps")
    return b


def _divide_coeff_by_tau(ring, c, b_inv):
    a, b = ring.parts(c)
    if not a.is_zero:
        return None
    return RingElem(ring, (b * b_inv, ring.base.zero))


def _divisible_by_tau(series, tau):
    ring = series.ring
    b = _tau_components(ring, tau)
    binv = b.inv()
    for vec in series.parts.values():
        for c in vec:
            if not c.is_zero and _divide_coeff_by_tau(ring, c, binv) is None:
                return False
    return True


def _divide_by_tau(series, tau):
    ring = series.ring
    b = _tau_components(ring, tau)
    binv = b.inv()
    parts = {}
    for n, vec in series.parts.items():
        out = []
        for c in vec:
            if c.is_zero:
                out.append(ring.zero)
                continue
            q = _divide_coeff_by_tau(ring, c, binv)
            if q is None:
                raise ValueError("defect is not divisible by tau")
            out.append(q)
        parts[n] = tuple(out)
    return Series2(ring, parts, series.precision)


def tangent_pair(dx, dy):
    """Extract (a, b) from a pair (eps*a, eps*b) of dual numbers."""
    ring = dx.ring
    if not isinstance(ring, DualNumbers) or dy.ring != ring:
        raise ValueError("tangent extraction expects dual-number inputs")
    out = []
    for w in (dx, dy):
        a, b = ring.parts(w)
        if not a.is_zero:
            raise ValueError(f"{w} has a nonzero residue part")
        out.append(b)
    return tuple(out)
