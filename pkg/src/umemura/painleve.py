"""High-precision residuals for Painleve VI and its sigma form.

Derivatives in ``t`` are never taken numerically.  Every quantity is
carried as a truncated Taylor jet in ``t`` (value and the first four
derivatives); polynomials in ``z, w`` are composed with the jets of
``z(t) = sqrt((v-2)/4)`` and ``w(t) = sqrt((v+2)/4)`` where
``v = (2t-1)/sqrt(t(t-1))``.  Residuals are therefore limited by the
working precision only, and doubling the precision shrinks them
accordingly.  The real branch ``t > 1`` is used throughout.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

import mpmath

from .families import READINGS, umemura_b, umemura_member
from .ring import Poly, unpack

log = logging.getLogger(__name__)

ORDER = 4  # jets keep t-derivatives up to this order


class SingularPoint(ArithmeticError):
    pass


class ZeroOfTau(SingularPoint):
    pass


def _mpf(x):
    if isinstance(x, (Fraction,)):
        return mpmath.mpf(x.numerator) / x.denominator
    if type(x).__name__ == "mpq":
        return mpmath.mpf(int(x.numerator)) / int(x.denominator)
    return mpmath.mpf(x)


class Jet:
    """Truncated Taylor series ``sum c_k (t - t0)**k``, k <= ORDER."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence):
        c = [_mpf(x) for x in coeffs][: ORDER + 1]
        self.c = c + [mpmath.mpf(0)] * (ORDER + 1 - len(c))

    @classmethod
    def const(cls, x) -> "Jet":
        return cls([x])

    @classmethod
    def variable(cls, t0) -> "Jet":
        return cls([t0, 1])

    @staticmethod
    def lift(x) -> "Jet":
        return x if isinstance(x, Jet) else Jet.const(x)

    def __add__(self, o):
        o = Jet.lift(o)
        return Jet([a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __sub__(self, o):
        return self + (-Jet.lift(o))

    def __rsub__(self, o):
        return Jet.lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, Jet):
            x = _mpf(o)
            return Jet([a * x for a in self.c])
        out = [mpmath.mpf(0)] * (ORDER + 1)
        for i, a in enumerate(self.c):
            if a:
                for j in range(ORDER + 1 - i):
                    out[i + j] += a * o.c[j]
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a0 = self.c[0]
        if a0 == 0:
            raise SingularPoint("division by a jet with zero value")
        out = [1 / a0]
        for k in range(1, ORDER + 1):
            s = sum(self.c[j] * out[k - j] for j in range(1, k + 1))
            out.append(-s / a0)
        return Jet(out)

    def __truediv__(self, o):
        if not isinstance(o, Jet):
            return self * (1 / _mpf(o))
        return self * o.reciprocal()

    def __rtruediv__(self, o):
        return Jet.lift(o) * self.reciprocal()

    def __pow__(self, e: int):
        out = Jet.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def sqrt(self) -> "Jet":
        a0 = self.c[0]
        if a0 <= 0:
            raise SingularPoint("square root of a nonpositive jet")
        out = [mpmath.sqrt(a0)]
        for k in range(1, ORDER + 1):
            s = sum(out[j] * out[k - j] for j in range(1, k))
            out.append((self.c[k] - s) / (2 * out[0]))
        return Jet(out)

    def derivative(self) -> "Jet":
        return Jet([(k + 1) * self.c[k + 1] for k in range(ORDER)])

    def stack(self) -> "DerivStack":
        return DerivStack(*(self.c[k] * factorial(k) for k in range(4)))


@dataclass(frozen=True)
class DerivStack:
    value: object
    d1: object
    d2: object
    d3: object


@dataclass(frozen=True)
class BValues:
    b1: Fraction
    b2: Fraction
    b3: Fraction
    b4: Fraction

    @classmethod
    def of(cls, *bs) -> "BValues":
        return cls(*(Fraction(str(x)) if not isinstance(x, Fraction) else x for x in bs))

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.b1, self.b2, self.b3, self.b4)


@dataclass(frozen=True)
class PVIParams:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction


RELATIONS = ("hamiltonian", "printed")


def pvi_params(b: BValues, relation: str = "hamiltonian") -> PVIParams:
    """Painleve VI parameters for ``b``, in the standard form ``alpha + beta t/q**2 + ...``.

    ``relation="hamiltonian"`` is the map obtained by eliminating ``p`` from
    the Hamiltonian system; ``delta`` depends on ``b3 + b4`` only, so the
    tuples ``(b1,b2,s,0)`` and ``(b1,b2,0,s)`` give the same equation.
    ``relation="printed"`` reproduces the alternative with
    ``delta = -(b3-b4)(b3+b4-2)/2``.
    """
    b1, b2, b3, b4 = b.as_tuple()
    alpha = (b3 - b4) ** 2 / 2
    beta = -((b1 + b2) ** 2) / 2
    gamma = (b1 - b2) ** 2 / 2
    if relation == "hamiltonian":
        s = b3 + b4
        delta = -s * (s + 2) / 2
    elif relation == "printed":
        delta = -(b3 - b4) * (b3 + b4 - 2) / 2
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return PVIParams(alpha, beta, gamma, delta)


@dataclass(frozen=True)
class NumericConfig:
    digits: int = 50
    t_grid: tuple = (Fraction(6, 5), Fraction(4, 3), Fraction(3, 2), Fraction(2), Fraction(3))
    tolerance: object = None

    def __post_init__(self):
        if self.digits < 30:
            raise ValueError("digits must be >= 30")
        for t in self.t_grid:
            if t in (0, 1):
                raise ValueError("grid must avoid t = 0 and t = 1")

    @property
    def tol(self):
        if self.tolerance is not None:
            return _mpf(self.tolerance)
        return mpmath.mpf(10) ** (-(self.digits - 15))


# -- the t <-> (v, z, w) bridge ---------------------------------------------


@dataclass(frozen=True)
class Bridge:
    t: Jet
    v: Jet
    z: Jet
    w: Jet

    def v_derivatives(self) -> tuple:
        """``(v, dv/dt, d2v/dt2, d3v/dt3)`` at the base point."""
        st = self.v.stack()
        return (st.value, st.d1, st.d2, st.d3)


def t_bridge(t) -> Bridge:
    """Jets of ``v``, ``z`` and ``w`` at ``t`` (needs ``t > 1``)."""
    t0 = _mpf(t)
    if t0 <= 1:
        raise ValueError("t must be > 1 (real branch)")
    tj = Jet.variable(t0)
    v = (tj * 2 - 1) / (tj * (tj - 1)).sqrt()
    z2 = (v - 2) / 4
    if z2.c[0] <= 0:
        raise SingularPoint("z = 0 at this t")
    return Bridge(tj, v, z2.sqrt(), ((v + 2) / 4).sqrt())


def dv_dt(t):
    """Closed form ``dv/dt = -1/(2 (t(t-1))**(3/2))``."""
    t = _mpf(t)
    return -1 / (2 * (t * (t - 1)) ** mpmath.mpf(1.5))


# -- polynomials along the bridge --------------------------------------------


def _numeric_poly(p: Poly, b1, b2):
    """``p`` as a list of (coeff, i, j) in ``z**i w**j`` at numeric ``b1, b2``."""
    b1, b2 = _mpf(b1), _mpf(b2)
    collected: dict[tuple[int, int], object] = {}
    for key, c in p.terms.items():
        e = unpack(key)
        if e[2] or e[3] or e[6]:
            raise ValueError("polynomial must be in z, w, b1, b2 only")
        val = _mpf(c) * b1 ** e[4] * b2 ** e[5]
        collected[(e[0], e[1])] = collected.get((e[0], e[1]), 0) + val
    return collected


def poly_jet(p: Poly, br: Bridge, b1=0, b2=0) -> Jet:
    terms = _numeric_poly(p, b1, b2)
    zp: dict[int, Jet] = {}
    wp: dict[int, Jet] = {}

    def zpow(i):
        if i not in zp:
            zp[i] = br.z ** i
        return zp[i]

    def wpow(j):
        if j not in wp:
            wp[j] = br.w ** j
        return wp[j]

    total = Jet.const(0)
    for (i, j), c in terms.items():
        total = total + zpow(i) * wpow(j) * c
    return total


def u_stack(p: Poly, t, b1=0, b2=0, digits: int = 50) -> DerivStack:
    """Value and first three ``t``-derivatives of ``p(z(t), w(t); b1, b2)``."""
    with mpmath.workdps(digits):
        return poly_jet(p, t_bridge(t), b1, b2).stack()


def _log_derivative(p: Poly, br: Bridge, b1, b2) -> Jet:
    u = poly_jet(p, br, b1, b2)
    if abs(u.c[0]) < mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)):
        raise ZeroOfTau("polynomial vanishes at this t; pick another point")
    return u.derivative() / u


def h0_jet(br: Bridge, b1, b2) -> Jet:
    st = Jet.variable(br.t.c[0]).sqrt()
    st1 = (br.t - 1).sqrt()
    b1, b2 = _mpf(b1), _mpf(b2)
    return ((st - st1) ** 2 * (b1 * b1) + (st + st1) ** 2 * (b2 * b2)) / 4


def h_nm_jet(p: Poly, br: Bridge, b1, b2) -> Jet:
    tt = br.t * (br.t - 1)
    return tt * _log_derivative(p, br, b1, b2) - h0_jet(br, b1, b2)


def q_m_jet(m: int, br: Bridge, b1, b2, reading: str = "family") -> Jet:
    """The rational expression for ``q_m`` in the ladder polynomials."""
    lo = umemura_member(m - 1, reading=reading)
    mid = umemura_member(m, reading=reading)
    hi = umemura_member(m + 1, reading=reading)
    tt = br.t * (br.t - 1)
    half = mpmath.mpf(1) / 2
    b1f, b2f = _mpf(b1), _mpf(b2)
    brace = (tt * _log_derivative(hi, br, b1, b2) * (m + half)
             - tt * _log_derivative(mid, br, b1, b2) * (m + 3 * half)
             - b1f * b2f / 2
             + (br.z / br.w * (b1f * b1f) + br.w / br.z * (b2f * b2f)) / 4)
    u_lo, u_mid, u_hi = (poly_jet(p, br, b1, b2) for p in (lo, mid, hi))
    den = u_hi * u_lo - u_mid * u_mid * (2 * m + 1) ** 2
    if abs(den.c[0]) < mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)):
        raise SingularPoint("q_m denominator vanishes at this t")
    return br.t + u_mid * u_mid * brace * 4 / den


def hbar_jet(m: int, br: Bridge, b1, b2, reading: str = "family") -> Jet:
    hi = umemura_member(m + 1, reading=reading)
    tt = br.t * (br.t - 1)
    b1f, b2f = _mpf(b1), _mpf(b2)
    half = mpmath.mpf(1) / 2
    return (tt * _log_derivative(hi, br, b1, b2)
            - (br.z / br.w * (b1f * b1f) + br.w / br.z * (b2f * b2f)) / 4
            + q_m_jet(m, br, b1, b2, reading) * (m + half) - (m + half) / 2)


def _h0_sqrt_plus_jet(br: Bridge, b1, b2) -> Jet:
    # the variant with sqrt(t+1) in the b2 term, kept as a control
    st = Jet.variable(br.t.c[0]).sqrt()
    b1, b2 = _mpf(b1), _mpf(b2)
    return ((st - (br.t - 1).sqrt()) ** 2 * (b1 * b1) + (st + (br.t + 1).sqrt()) ** 2 * (b2 * b2)) / 4


def h_functions(kind: str, n: int, m: int, b1, b2, t, digits: int = 50,
                h0_variant: str = "standard") -> DerivStack:
    """``h0``, ``h_nm`` (built on ``U_{n,m}(b1, b2)``) or ``hbar_1m``."""
    with mpmath.workdps(digits):
        br = t_bridge(t)
        h0 = h0_jet if h0_variant == "standard" else _h0_sqrt_plus_jet
        if kind == "h0":
            return h0(br, b1, b2).stack()
        if kind == "h_nm":
            p = umemura_b(n, m)
            tt = br.t * (br.t - 1)
            return (tt * _log_derivative(p, br, b1, b2) - h0(br, b1, b2)).stack()
        if kind == "hbar_1m":
            return hbar_jet(m, br, b1, b2).stack()
    raise ValueError(f"unknown h kind {kind!r}")


def q_m_stack(m: int, b1, b2, t, digits: int = 50, reading: str = "family") -> DerivStack:
    with mpmath.workdps(digits):
        return q_m_jet(m, t_bridge(t), b1, b2, reading).stack()


# -- residuals ---------------------------------------------------------


def evi_residual(h: DerivStack, b: BValues, t, squared: bool = True):
    """Sigma-form residual; ``squared=False`` drops the square on the second bracket."""
    t = _mpf(t)
    b1, b2, b3, b4 = (_mpf(x) for x in b.as_tuple())
    h1, h2 = h.d1, h.d2
    inner = h1 * (2 * h.value - (2 * t - 1) * h1) + b1 * b2 * b3 * b4
    second = inner ** 2 if squared else inner
    rhs = (h1 + b1 ** 2) * (h1 + b2 ** 2) * (h1 + b3 ** 2) * (h1 + b4 ** 2)
    return h1 * (t * (t - 1) * h2) ** 2 + second - rhs


def pvi_residual(q: DerivStack, p: PVIParams, t):
    """``q'' - RHS`` of Painleve VI with ``+beta t/q**2`` (standard sign)."""
    t = _mpf(t)
    q0, q1, q2 = q.value, q.d1, q.d2
    al, be, ga, de = (_mpf(x) for x in (p.alpha, p.beta, p.gamma, p.delta))
    rhs = ((1 / q0 + 1 / (q0 - 1) + 1 / (q0 - t)) * q1 ** 2 / 2
           - (1 / t + 1 / (t - 1) + 1 / (q0 - t)) * q1
           + q0 * (q0 - 1) * (q0 - t) / (t ** 2 * (t - 1) ** 2)
           * (al + be * t / q0 ** 2 + ga * (t - 1) / (q0 - 1) ** 2 + de * t * (t - 1) / (q0 - t) ** 2))
    return q2 - rhs


def central_difference(f: Callable, t, order: int, digits: int = 50):
    """Adaptive central finite difference (mpmath's Richardson scheme)."""
    with mpmath.workdps(digits):
        return mpmath.diff(f, _mpf(t), order)


# -- sweeps --------------------------------------------------------------

CHECKS = ("PROP4_I", "PROP4_II", "PROP4_III", "LEMMA8", "QM_PVI", "HBAR_EVI")


@dataclass
class NumericReport:
    check: str
    params: dict
    digits: int
    grid: list
    max_residual: object
    status: str
    residuals: list = field(default_factory=list)

    def record(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "digits": self.digits,
            "grid": [str(t) for t in self.grid],
            "max_residual": mpmath.nstr(self.max_residual, 6) if self.max_residual is not None else None,
            "status": self.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.record(), separators=(",", ":"))


def _half(x) -> Fraction:
    return Fraction(x) / 2


def point_residuals(check: str, params: dict, t, digits: int) -> list:
    """All residuals a check evaluates at one grid point."""
    b1 = Fraction(str(params.get("b1", 0)))
    b2 = Fraction(str(params.get("b2", 0)))
    m = params.get("m", 0)
    n = params.get("n", 0)
    with mpmath.workdps(digits):
        br = t_bridge(t)
        if check == "PROP4_I":
            h = h_nm_jet(umemura_b(0, m), br, b1, b2).stack()
            return [evi_residual(h, BValues(b1, b2, Fraction(2 * m + 1, 2), Fraction(0)), t)]
        if check == "PROP4_II":
            bb = Fraction(m + 1)
            h = h_nm_jet(umemura_b(1, m), br, 0, bb).stack()
            t0 = _mpf(t)
            closed = -(2 * t0 - 1) * (m + 1) ** 2 / 2
            b3 = Fraction(str(params.get("b3", "1/3")))
            b4 = Fraction(str(params.get("b4", "2/7")))
            return [h.value - closed, h.d1 + (m + 1) ** 2,
                    evi_residual(h, BValues(Fraction(0), bb, b3, b4), t)]
        if check == "PROP4_III":
            h = h_nm_jet(umemura_b(n, m), br, 0, b2).stack()
            target = BValues(Fraction(0), b2, _half(n), _half(n + 2 * m + 1))
            return [evi_residual(h, target, t)]
        if check == "LEMMA8":
            lhs = h_nm_jet(umemura_b(n, m), br, 0, b2)
            if n % 2 == 0:
                rhs = h_nm_jet(umemura_b(0, m + n // 2), br, _half(n), b2)
            else:
                rhs = h_nm_jet(umemura_b(0, (n - 1) // 2), br, Fraction(2 * m + n + 1, 2), b2)
            d = lhs - rhs
            return [d.c[0], d.c[1], d.c[2]]
        if check == "QM_PVI":
            q = q_m_jet(m, br, b1, b2, params.get("reading", "family")).stack()
            rel = params.get("relation", "hamiltonian")
            s = Fraction(2 * m + 1, 2)
            return [pvi_residual(q, pvi_params(BValues(b1, b2, s, Fraction(0)), rel), t),
                    pvi_residual(q, pvi_params(BValues(b1, b2, Fraction(0), s), rel), t)]
        if check == "HBAR_EVI":
            h = hbar_jet(m, br, b1, b2, params.get("reading", "family")).stack()
            return [evi_residual(h, BValues(b1, b2, Fraction(2 * m + 1, 2), Fraction(1)), t)]
    raise ValueError(f"unknown check {check!r}")


def _worst(values) -> object:
    return max(abs(mpmath.re(x)) + abs(mpmath.im(x)) for x in values)


def choose_reading(check: str, params: dict, t, cfg: NumericConfig) -> str:
    """Pick the ladder indexing whose residual at ``t`` is at truncation level."""
    best, best_r = None, None
    for reading in READINGS:
        try:
            r = _worst(point_residuals(check, {**params, "reading": reading}, t, cfg.digits))
        except SingularPoint:
            continue
        if best_r is None or r < best_r:
            best, best_r = reading, r
    if best is None:
        raise SingularPoint(f"{check}: every reading is singular at t={t}")
    return best


def sweep(check: str, grid: Sequence, params: dict, cfg: NumericConfig | None = None) -> NumericReport:
    """Evaluate a residual check over ``grid``; passes when every residual is below tolerance.

    For the ladder checks an absent or ``"auto"`` reading is resolved on the
    first grid point and recorded in the report's params.
    """
    cfg = cfg or NumericConfig()
    grid = list(grid)
    if not grid:
        return NumericReport(check, params, cfg.digits, [], None, "pass")
    if check in ("QM_PVI", "HBAR_EVI") and params.get("reading", "auto") == "auto":
        params = {**params, "reading": choose_reading(check, params, grid[0], cfg)}
    worst = mpmath.mpf(0)
    per_point = []
    for t in grid:
        try:
            r = _worst(point_residuals(check, params, t, cfg.digits))
        except SingularPoint as exc:
            log.warning("%s singular at t=%s: %s", check, t, exc)
            return NumericReport(check, params, cfg.digits, grid, None, "singular", per_point)
        per_point.append(r)
        worst = max(worst, r)
    status = "pass" if worst < cfg.tol else "fail"
    return NumericReport(check, params, cfg.digits, grid, worst, status, per_point)
