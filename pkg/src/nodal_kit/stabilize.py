"""Blow-up charts replacing a pointed node by a projective line.

The two affine charts are presented by a single relation each, obtained by
eliminating one generator from the pair of bilinear forms that present the
blow-up.  The module re-derives the chart relations by elimination and
checks them coefficient-for-coefficient against their closed forms, computes
normal forms and a monomial flatness basis in chart 0, certifies the chart
covering and gluing, decomposes the central fiber, and verifies the 4x4
determinant identity behind the ideal change of basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .mpoly import MPoly, random_poly2
from .rings import PrimeField, Rationals


class ChartMismatchError(AssertionError):
    """An eliminated relation drifted from its closed form."""


class UnsupportedConfigurationError(ValueError):
    """The requested computation is outside the supported configurations."""


@dataclass(frozen=True)
class ChartPresentation:
    """One affine chart: two variables subject to a single relation."""

    chart_id: str
    var_names: tuple
    relation: MPoly
    eliminated_var: str
    eliminated_expr: MPoly  # the solved expression for the eliminated generator

    def format_relation(self):
        return self.relation.format(self.var_names)


def _presenting_forms(ring, q, s, t):
    """The two presenting pairs, as trivariate polynomials.

    Chart 0 lives in (u, v, y), chart 1 in (u, v, x):
        f0 = (gamma*u + delta*v + delta*t) - (u - s) y
        g0 = (u + s + gamma*t) + (v - t) y
        f1 = (gamma*u + delta*v + delta*t) x - (u - s)
        g1 = (u + s + gamma*t) x + (v - t)
    """
    g, d = q.gamma, q.delta
    one = ring.one

    def P(terms):
        return MPoly(ring, 3, {e: ring(c) for e, c in terms.items()})

    f0 = P({(1, 0, 0): g, (0, 1, 0): d, (0, 0, 0): d * t, (1, 0, 1): -one, (0, 0, 1): s})
    g0 = P({(1, 0, 0): one, (0, 0, 0): s + g * t, (0, 1, 1): one, (0, 0, 1): -t})
    f1 = P({(1, 0, 1): g, (0, 1, 1): d, (0, 0, 1): d * t, (1, 0, 0): -one, (0, 0, 0): s})
    g1 = P({(1, 0, 1): one, (0, 0, 1): s + g * t, (0, 1, 0): one, (0, 0, 0): -t})
    return f0, g0, f1, g1


def _drop_var(poly, i):
    """Project a trivariate polynomial not involving variable i to 2 variables."""
    terms = {}
    for e, c in poly.terms.items():
        if e[i] != 0:
            raise ValueError("polynomial still involves the eliminated variable")
        e2 = tuple(k for j, k in enumerate(e) if j != i)
        terms[e2] = c
    return MPoly(poly.ring, 2, terms)


def _chart0_closed_form(ring, q, s, t):
    """v(y^2 - gamma*y + delta) + s(2y - gamma) + t(-y^2 + 2*gamma*y - gamma^2 + delta)."""
    g, d = q.gamma, q.delta
    v = MPoly.var(ring, 2, 0)
    y = MPoly.var(ring, 2, 1)
    return (
        v * (y * y - y * g + d)
        + (y * 2 - g) * s
        + (-(y * y) + y * (2 * g) + (d - g * g)) * t
    )


def _chart1_closed_form(ring, q, s, t):
    """u(delta*x^2 - gamma*x + 1) + s(delta*x^2 - 1) + t*delta*(gamma*x^2 - 2x)."""
    g, d = q.gamma, q.delta
    u = MPoly.var(ring, 2, 0)
    x = MPoly.var(ring, 2, 1)
    return (
        u * (x * x * d - x * g + 1)
        + (x * x * d - 1) * s
        + (x * x * g - x * 2) * (d * t)
    )


def build_charts(ring, q, s, t):
    """Derive both chart presentations by elimination and check the closed forms.

    Chart 0 eliminates u via g0 (whose u-coefficient is 1); chart 1
    eliminates v via g1 (v-coefficient 1); the chart-1 result is normalized
    by a sign so the coefficient of the bare u term is +1.  Any coefficient
    drift from the closed forms aborts with a diff.  The presenting identity

        (v - t) f0 + (u - s) g0 = q(u, v) - q(s, t)

    is verified in the trivariate ring on every call.
    """
    if not q.discriminant.is_unit:
        raise UnsupportedConfigurationError("charts need a unit discriminant")
    s, t = ring(s), ring(t)
    f0, g0, f1, g1 = _presenting_forms(ring, q, s, t)
    g_, d_ = q.gamma, q.delta

    u3 = MPoly.var(ring, 3, 0)
    v3 = MPoly.var(ring, 3, 1)
    w3 = MPoly.var(ring, 3, 2)

    ident = (v3 - t) * f0 + (u3 - s) * g0
    qq = u3 * u3 + u3 * v3 * g_ + v3 * v3 * d_ - q.value_at(s, t)
    if ident != qq:
        raise ChartMismatchError("presenting identity (v-t)f0 + (u-s)g0 = q(u,v)-q(s,t) failed")

    # chart 0: g0 solves u = -(s + gamma*t) - (v - t) y
    u_expr3 = -(w3 * (v3 - t)) - MPoly.const(ring, 3, s + g_ * t)
    rel0 = _drop_var(f0.subs_var(0, u_expr3), 0)
    closed0 = _chart0_closed_form(ring, q, s, t)
    if rel0 != closed0:
        raise ChartMismatchError(
            "chart 0 relation drifted:\n  derived: "
            f"{rel0.format(('v', 'y'))}\n  closed:  {closed0.format(('v', 'y'))}"
        )

    # chart 1: g1 solves v = t - (u + s + gamma*t) x; sign-normalize so the
    # coefficient of the bare u term is +1
    v_expr3 = MPoly.const(ring, 3, t) - w3 * (u3 + MPoly.const(ring, 3, s + g_ * t))
    rel1 = -_drop_var(f1.subs_var(1, v_expr3), 1)
    closed1 = _chart1_closed_form(ring, q, s, t)
    if rel1 != closed1:
        raise ChartMismatchError(
            "chart 1 relation drifted:\n  derived: "
            f"{rel1.format(('u', 'x'))}\n  closed:  {closed1.format(('u', 'x'))}"
        )

    chart0 = ChartPresentation("R0", ("v", "y"), rel0, "u", _drop_var(u_expr3, 0))
    chart1 = ChartPresentation("R1", ("u", "x"), rel1, "v", _drop_var(v_expr3, 1))
    return chart0, chart1


def reduce_chart0(chart, poly, rng=None):
    """Normal form in chart 0: rewrite until no monomial v^n y^m, n>=1, m>=2.

    Each step subtracts a multiple of the relation, whose v*y^2 coefficient
    is 1, so every step eliminates the selected monomial and the procedure
    terminates.  With an rng the reducible monomial is chosen at random,
    which exercises confluence; the default picks the largest one.
    """
    if chart.chart_id != "R0":
        raise ValueError("normal forms are computed in chart 0")
    rel = chart.relation
    if rel.coefficient((1, 2)) != poly.ring.one:
        raise UnsupportedConfigurationError("chart relation is not monic in v*y^2")
    out = poly
    while True:
        reducible = [e for e in out.terms if e[0] >= 1 and e[1] >= 2]
        if not reducible:
            return out
        if rng is None:
            e = max(reducible)
        else:
            e = sorted(reducible)[rng.randrange(len(reducible))]
        c = out.terms[e]
        factor = MPoly(poly.ring, 2, {(e[0] - 1, e[1] - 2): c})
        out = out - factor * rel


def chart0_basis_monomials(bound):
    """Normal-form monomials of total degree <= bound: y^m and v^n, v^n y."""
    out = [(0, m) for m in range(bound + 1)]
    out += [(n, 0) for n in range(1, bound + 1)]
    out += [(n, 1) for n in range(1, bound)]
    return sorted(out)


def flatness_basis_certificate(chart, bound, rng, trials=40):
    """Certify the normal-form monomials as a coefficient-module basis.

    Checks: the relation is monic in v*y^2 (so rewriting is division with
    unit leading coefficient and ideal members reduce to zero); random
    multiples of the relation reduce to zero; random combinations of basis
    monomials are fixed points of the rewriting.  Together these witness
    that the chart is free over the base on these monomials.
    """
    ring = chart.relation.ring
    failures = []
    if chart.relation.coefficient((1, 2)) != ring.one:
        failures.append("relation not monic in v*y^2")
    for k in range(trials):
        h = random_poly2(ring, rng, max_deg=3)
        if not reduce_chart0(chart, h * chart.relation, rng).is_zero:
            failures.append(f"relation multiple {k} did not reduce to zero")
            break
    basis = chart0_basis_monomials(bound)
    for k in range(trials):
        combo = MPoly(
            ring,
            2,
            {e: ring.random_element(rng) for e in basis if rng.random() < 0.5},
        )
        if reduce_chart0(chart, combo, rng) != combo:
            failures.append(f"basis combination {k} was not a normal form")
            break
    return {
        "ok": not failures,
        "failures": failures,
        "basis_size": len(basis),
    }


def covering_certificate(ring, q, s, t):
    """Covering and gluing of the two charts.

    (i) delta*x^2 - gamma*x + 1 has constant term 1, so x = 0 is not in its
    zero locus; (ii) the chart-1 relation is linear in u with that
    polynomial as coefficient, so inverting it solves u and exhibits the
    localized chart as a localized polynomial ring in x; (iii) under
    y*x = 1 the presenting pairs glue: x*f0|_{y=1/x} = f1 and likewise for g.
    """
    s, t = ring(s), ring(t)
    g_, d_ = q.gamma, q.delta
    _, chart1 = build_charts(ring, q, s, t)  # also re-validates both eliminations
    failures = []

    x = MPoly.var(ring, 2, 1)
    c_poly = x * x * d_ - x * g_ + 1
    if c_poly.coefficient((0, 0)) != ring.one:
        failures.append("constant term of delta*x^2-gamma*x+1 is not 1")

    d_poly = (x * x * d_ - 1) * s + (x * x * g_ - x * 2) * (d_ * t)
    u_var = MPoly.var(ring, 2, 0)
    if chart1.relation != u_var * c_poly + d_poly:
        failures.append("chart 1 relation is not linear in u with the expected coefficient")
    if chart1.relation.degree_in(0) not in (0, 1):
        failures.append("chart 1 relation has u-degree > 1")

    f0, g0, f1, g1 = _presenting_forms(ring, q, s, t)
    for name, low, high in (("f", f0, f1), ("g", g0, g1)):
        if _glue_via_reciprocal(low) != high:
            failures.append(f"gluing x*{name}0|_(y=1/x) = {name}1 failed")

    return {
        "ok": not failures,
        "failures": failures,
        "u_numerator": (-d_poly).format(("u", "x")),
        "u_denominator": c_poly.format(("u", "x")),
    }


def _glue_via_reciprocal(poly3):
    """x * poly(u, v, 1/x) for a trivariate polynomial of third-variable degree <= 1."""
    terms = {}
    for (a, b, k), c in poly3.terms.items():
        if k > 1:
            raise ValueError("gluing transform expects degree <= 1 in the chart variable")
        terms[(a, b, 1 - k)] = c
    return MPoly(poly3.ring, 3, terms)


@dataclass(frozen=True)
class FiberReport:
    """Decomposition of the central fiber of chart 0 plus smoothness data."""

    roots: tuple
    components: tuple  # formatted generators
    intersection_points: tuple
    transversal_determinants: tuple
    lines_disjoint: bool
    section_jacobian: str
    ok: bool


def split_tangent_roots(ring, q):
    """Distinct roots of y^2 - gamma*y + delta over the base field, if any."""
    g_, d_ = q.gamma, q.delta
    if isinstance(ring, PrimeField):
        roots = [
            a
            for a in ring.all_elements()
            if (a * a - g_ * a + d_).is_zero
        ]
        return roots if len(roots) == 2 else None
    if isinstance(ring, Rationals):
        disc = (g_ * g_ - d_ * 4).val
        if disc <= 0:
            return None  # repeated root, or no rational square root
        num, den = disc.numerator, disc.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn != num or rd * rd != den:
            return None
        r = ring.from_fraction(Fraction(rn, rd))
        half = ring.from_fraction(Fraction(1, 2))
        return [(g_ + r) * half, (g_ - r) * half]
    raise UnsupportedConfigurationError(
        f"root finding is supported over prime fields and rationals, not {ring.descriptor()}"
    )


def fiber_at_origin(ring, q):
    """Components and intersection geometry of the central fiber (s = t = 0).

    The chart-0 fiber ring is k[v, y]/(v(y^2 - gamma*y + delta)); when the
    quadratic splits with distinct roots a, b the components are cut out by
    v, y - a, y - b: a line (the affine part of the projective line) meeting
    two disjoint affine lines.  Transversality is certified by the unit
    Jacobian determinant of each meeting pair at its intersection point, and
    smoothness along the lifted section by the u-derivative of the chart-1
    relation being a unit at x = 0.
    """
    if not ring.is_field:
        raise UnsupportedConfigurationError("fiber decomposition needs field coefficients")
    if not q.discriminant.is_unit:
        raise UnsupportedConfigurationError("fiber decomposition needs a unit discriminant")
    roots = split_tangent_roots(ring, q)
    if roots is None:
        raise UnsupportedConfigurationError(
            "y^2 - gamma*y + delta does not split with distinct roots over the base field"
        )
    a, b = roots
    zero = ring.zero
    chart0, chart1 = build_charts(ring, q, zero, zero)

    v = MPoly.var(ring, 2, 0)
    y = MPoly.var(ring, 2, 1)
    comp_v = v
    comp_a = y - MPoly.const(ring, 2, a)
    comp_b = y - MPoly.const(ring, 2, b)

    ok = True
    # the product of all component generators is the fiber relation
    if reduce_chart0(chart0, comp_v * comp_a * comp_b).is_zero is False:
        ok = False

    points = ((zero, a), (zero, b))
    dets = []
    for comp, pt in ((comp_a, points[0]), (comp_b, points[1])):
        jac = (
            comp_v.derivative(0).eval_all(pt) * comp.derivative(1).eval_all(pt)
            - comp_v.derivative(1).eval_all(pt) * comp.derivative(0).eval_all(pt)
        )
        dets.append(jac)
        if not jac.is_unit:
            ok = False

    lines_disjoint = (a - b).is_unit
    if not lines_disjoint:
        ok = False

    section_jac = chart1.relation.derivative(0).eval_var(1, zero).eval_var(0, zero)
    section_val = section_jac.coefficient((0, 0))
    if not section_val.is_unit:
        ok = False

    return FiberReport(
        roots=(ring.format_elem(a), ring.format_elem(b)),
        components=(
            comp_v.format(("v", "y")),
            comp_a.format(("v", "y")),
            comp_b.format(("v", "y")),
        ),
        intersection_points=tuple(
            (ring.format_elem(p), ring.format_elem(r)) for p, r in points
        ),
        transversal_determinants=tuple(ring.format_elem(dd) for dd in dets),
        lines_disjoint=lines_disjoint,
        section_jacobian=ring.format_elem(section_val),
        ok=ok,
    )


def _det(ring, m):
    n = len(m)
    if n == 1:
        return m[0][0]
    out = ring.zero
    sign = ring.one
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        out = out + sign * m[0][j] * _det(ring, minor)
        sign = -sign
    return out


def determinant_and_ideal_basis(ring, q, s=None, t=None):
    """The 4x4 change-of-basis determinant and the two-generator-set identity.

    The matrix expresses (u-s, v-t, u+s+gamma*t, gamma*u+delta*v+delta*t) in
    the basis (u, v, s, t); its determinant is 4*delta - gamma^2.  When that
    value is a unit the inverse matrix (computed by adjugate, valid over any
    ring) certifies that the two quadruples generate the same ideal, each
    being a unimodular combination of the other.
    """
    g_, d_ = q.gamma, q.delta
    one, zero = ring.one, ring.zero
    m = [
        [one, zero, one, g_],
        [zero, one, zero, d_],
        [-one, zero, one, zero],
        [zero, -one, g_, d_],
    ]
    det = _det(ring, m)
    expected = d_ * 4 - g_ * g_
    record = {
        "determinant": ring.format_elem(det),
        "matches": det == expected,
        "ok": det == expected,
    }
    if s is None or t is None or not expected.is_unit:
        record["basis_certificate"] = "skipped (needs s, t and a unit determinant)"
        return record
    s, t = ring(s), ring(t)
    det_inv = det.inv()
    adj = [
        [
            (-one if (i + j) % 2 else one)
            * _det(ring, [row[:i] + row[i + 1 :] for k, row in enumerate(m) if k != j])
            for j in range(4)
        ]
        for i in range(4)
    ]
    inv = [[adj[i][j] * det_inv for j in range(4)] for i in range(4)]
    iden = [[one if i == j else zero for j in range(4)] for i in range(4)]
    prod = [
        [sum((m[i][k] * inv[k][j] for k in range(4)), zero) for j in range(4)]
        for i in range(4)
    ]
    if prod != iden:
        record["ok"] = False
        record["basis_certificate"] = "inverse verification failed"
        return record

    u = MPoly.var(ring, 2, 0)
    v = MPoly.var(ring, 2, 1)
    basis = [u, v, MPoly.const(ring, 2, s), MPoly.const(ring, 2, t)]
    gens = [
        u - s,
        v - t,
        u + (s + g_ * t),
        u * g_ + v * d_ + d_ * t,
    ]
    ok = True
    for j, gen in enumerate(gens):
        built = MPoly.zero(ring, 2)
        for i in range(4):
            built = built + basis[i] * m[i][j]
        if built != gen:
            ok = False
    for i in range(4):
        built = MPoly.zero(ring, 2)
        for j in range(4):
            built = built + gens[j] * inv[j][i]
        if built != basis[i]:
            ok = False
    record["ok"] = record["ok"] and ok
    record["basis_certificate"] = "unimodular change of generators verified" if ok else "failed"
    return record
