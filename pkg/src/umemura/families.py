"""Builders for every polynomial family: generalized Umemura polynomials by
subset sum and by determinant, the Toda recurrence, the closed subset-sum
form of Umemura polynomials, parameter shifts, the gauge ladder and the
closed forms for the ``a = b`` and ``b1 = 0`` specializations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from gmpy2 import mpq

from .combinatorics import (
    chain_product,
    chain_value,
    index_set,
    odd_square_chain,
    weight_c,
    weight_d,
)
from .ring import (
    A,
    B,
    B1,
    B2,
    ONE,
    V,
    W,
    Z,
    ZERO,
    NonExactDivision,
    Poly,
    derive,
    divmod_poly,
    det,
    poly_sum,
    substitute,
)


class GaugeSingularity(ZeroDivisionError):
    """A ladder denominator vanishes at the requested parameters."""


# -- generalized Umemura polynomials ------------------------------------


CONVENTIONS = ("printed", "reflected")


def _prefactor(subset, k: int, reflected: bool = False) -> mpq:
    out = mpq(1)
    for i in subset:
        if i > k:
            for j in range(1, k + 1):
                out *= mpq(i + j, j - i) if reflected else mpq(i + j, i - j)
    return out


def gen_umemura(
    n: int, m: int, k: int = 0, a: Poly = A, b: Poly = B, convention: str = "printed"
) -> Poly:
    """Generalized Umemura polynomial as a sum over ``[k] <= I <= [n;m]``.

    ``a`` and ``b`` may be any polynomials (e.g. constants to build a
    specialization directly).  Returns 0 when ``[k]`` is not inside ``[n;m]``.

    ``convention="reflected"`` uses ``(i+j)/(j-i)`` in the prefactor, i.e.
    multiplies each term by ``(-1)**(k*|I minus [k]|)``.  This is the
    sign choice under which the bilinear recurrence and the index-lowering
    relation between ``k`` and ``k+1`` hold; it agrees with the printed
    one for ``k = 0``.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    s = index_set(n, m)
    elems = s.elements
    if any(j not in elems for j in range(1, k + 1)):
        return ZERO
    free = [e for e in elems if e > k]
    total = sum(elems)
    parts = []
    for mask in range(1 << len(free)):
        inside = [e for i, e in enumerate(free) if mask >> i & 1]
        I = list(range(1, k + 1)) + inside
        outside = [e for e in free if e not in inside]
        coeff = _prefactor(inside, k, convention == "reflected") * weight_d(elems, I)
        if weight_c(n, I) % 2:
            coeff = -coeff
        zexp = sum(inside)
        wexp = total - sum(I)
        term = chain_product(a, inside) * chain_product(b, outside)
        parts.append(term.scale(coeff) * Poly.monomial(z=zexp, w=wexp))
    return poly_sum(parts)


def det_matrix(n: int, m: int, k: int = 0, a: Poly = A, b: Poly = B) -> list[list[Poly]]:
    elems = index_set(n, m).elements
    labels = [i for i in elems if i > k]
    rows = []
    for i in labels:
        diag_pref = mpq(1)
        for s in range(1, k + 1):
            diag_pref *= mpq(i + s, i - s)
        off = mpq(1)
        for s in elems:
            if s != i:
                off *= abs(mpq(i + s, i - s))
        ci = i if i <= n else (i - n) // 2
        sign = -1 if ci % 2 else 1
        bz = chain_value(b, i) * Poly.monomial(z=i)
        row = []
        for j in labels:
            entry = bz.scale(mpq(2 * i, i + j) * sign * off)
            if i == j:
                entry = entry + (chain_value(a, i) * Poly.monomial(w=i)).scale(diag_pref)
            row.append(entry)
        rows.append(row)
    return rows


def gen_umemura_det(n: int, m: int, k: int = 0, a: Poly = A, b: Poly = B) -> Poly:
    """Determinant of the matrix indexed by ``[n;m] minus [k]``."""
    return det(det_matrix(n, m, k, a, b))


# -- Toda recurrence and the closed subset-sum form -----------------------


@lru_cache(maxsize=None)
def toda_T(n: int) -> Poly:
    """``T_n`` in ``Q[v, b1, b2]`` by exact iteration of the Toda recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n <= 1:
        return ONE
    prev, cur = toda_T(n - 2), toda_T(n - 1)
    j = n - 1  # recurrence step producing T_{j+1}
    t1 = derive(cur, "v")
    t2 = derive(t1, "v")
    coeff = ((B1 * B1 * -2 - B2 * B2 * 2 + (B1 * B1 - B2 * B2) * V) * mpq(1, 4)) + mpq(2 * j - 1, 2) ** 2
    vv = V * V - 4
    num = coeff * cur * cur + (vv * vv * (cur * t2 - t1 * t1) + vv * V * cur * t1) * mpq(1, 4)
    quot, rem = divmod_poly(num, prev)
    if not rem.is_zero():
        raise NonExactDivision(f"T_{n}: remainder with {len(rem)} terms")
    return quot


def noou_U(n: int, z: Poly = Z, w: Poly = W, c: Poly = A, d: Poly = B) -> Poly:
    """Subset-sum form of ``U_n`` over ``[n-1]`` with odd-square chains in ``c``, ``d``."""
    elems = tuple(range(1, n))
    total = sum(elems)
    parts = []
    for mask in range(1 << len(elems)):
        I = [e for i, e in enumerate(elems) if mask >> i & 1]
        rest = [e for e in elems if e not in I]
        coef = weight_d(elems, I)
        cI = ONE
        for i in I:
            cI = cI * odd_square_chain(c, i)
        for i in rest:
            cI = cI * odd_square_chain(d, i)
        parts.append(cI.scale(coef) * z ** sum(I) * w ** (total - sum(I)))
    return poly_sum(parts)


def umemura_scale(n: int) -> int:
    return 2 ** (n * (n - 1))


def toda_substitution() -> dict[str, Poly]:
    return {
        "z": (2 - V) * mpq(1, 4),
        "w": (2 + V) * mpq(1, 4),
        "a": B1 * B1 * -4,
        "b": B2 * B2 * -4,
    }


def bridge(p: Poly) -> Poly:
    """Map the Umemura variables to the ladder ones: ``z -> -z**2``, ``w -> w**2``."""
    return substitute(p, {"z": -(Z * Z), "w": W * W})


# -- b1/b2 parametrization --------------------------------------------


def param_U(p: Poly, db1=0, db2=0) -> Poly:
    """Substitute ``a = -4(b1+db1)**2``, ``b = -4(b2+db2)**2``."""
    s1 = B1 + db1
    s2 = B2 + db2
    return substitute(p, {"a": s1 * s1 * -4, "b": s2 * s2 * -4})


@lru_cache(maxsize=None)
def gen_param(n: int, m: int, db1=0, db2=0, k: int = 0) -> Poly:
    return param_U(gen_umemura(n, m, k), db1, db2)


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


@lru_cache(maxsize=None)
def _umemura_b(n, m, k, b1, b2, convention):
    return gen_umemura(n, m, k, b1 * b1 * -4, b2 * b2 * -4, convention)


def umemura_b(n: int, m: int, b1=B1, b2=B2, db1=0, db2=0, k: int = 0,
              convention: str = "printed") -> Poly:
    """``U^{(k)}_{n,m}`` at ``a = -4(b1+db1)**2``, ``b = -4(b2+db2)**2``.

    ``b1`` and ``b2`` may be symbols or numbers; numbers give a polynomial
    in ``z, w`` only, which is how the randomized checks stay cheap.
    """
    return _umemura_b(n, m, k, _as_poly(b1) + db1, _as_poly(b2) + db2, convention)


READINGS = ("family", "umemura")


def umemura_member(m: int, b1=B1, b2=B2, db1=0, db2=0, reading: str = "family") -> Poly:
    """``U_m`` of the Umemura ladder under one of two index readings.

    ``reading="family"`` takes ``U_m = U_{0,m}``; ``reading="umemura"``
    takes Umemura's own numbering ``U_m = U_{0,m-1}``.  Members below the
    start of the ladder are 1 (``U_0 = U_1 = 1`` in Umemura's numbering).
    """
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    idx = m if reading == "family" else m - 1
    if idx < 0:
        return ONE
    return umemura_b(0, idx, b1, b2, db1, db2)


# -- rational functions and the gauge ladder ------------------------------


@dataclass(frozen=True)
class RationalFunction:
    numerator: Poly
    denominator: Poly = ONE

    def __post_init__(self):
        if self.denominator.is_zero():
            raise GaugeSingularity("zero denominator")

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.numerator * other.numerator,
                                self.denominator * other.denominator)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def cross_equal(self, other: "RationalFunction") -> bool:
        return self.numerator * other.denominator == other.numerator * self.denominator


def ybar(l: int, m: int, b2=B2) -> Poly:
    s = _as_poly(b2) + l
    return (s * s * 4 - (2 * m + 1) ** 2) * W * W


def zbar(k: int, m: int, b1=B1) -> Poly:
    s = _as_poly(b1) + k
    return (s * s * -4 + (2 * m + 1) ** 2) * Z * Z


def y_chain(l: int, m: int, n: int, b2=B2) -> Poly:
    out = ONE
    for j in range(1, n + 1):
        out = out * ybar(l, m - n - 1 + 2 * j, b2)
    return out


def z_chain(k: int, m: int, n: int, b1=B1) -> Poly:
    out = ONE
    for j in range(1, n + 1):
        out = out * zbar(k, m - n - 1 + 2 * j, b1)
    return out


def ladder_X(k: int, l: int, m: int, b1=B1, b2=B2) -> RationalFunction:
    """Explicit solution of the X recurrences with ``X = 1`` on the unit square."""
    den = ONE
    for j in range(1, k):
        den = den * y_chain(l, m, j, b2)
    for j in range(1, l):
        den = den * z_chain(k, m, j, b1)
    return RationalFunction(ONE, den)


GAUGES = ("hirota", "printed")


def ladder_T(k: int, l: int, m: int, b1=B1, b2=B2, gauge: str = "hirota") -> RationalFunction:
    """Gauge-rescaled ``U_m(b1+k, b2+l)`` on the family reading ``U_m = U_{0,m}``.

    ``gauge="printed"`` multiplies by ``X``; ``gauge="hirota"`` divides by
    it, which is the rescaling satisfying the three-term bilinear equation.
    """
    if gauge not in GAUGES:
        raise ValueError(f"unknown gauge {gauge!r}")
    u = umemura_member(m, b1, b2, k, l)
    x = ladder_X(k, l, m, b1, b2)
    if gauge == "printed":
        return RationalFunction(u, x.denominator)
    return RationalFunction(u * x.denominator, ONE)


# -- closed forms -------------------------------------------------------


def _odd_part(n: int, m: int) -> list[int]:
    return [i for i in index_set(n, m).elements if i % 2]


def closed_forms(kind: str, n: int, m: int, corrected: bool = False) -> Poly:
    """Closed-form right-hand sides for the ``a = b`` and ``b1 = 0`` slices.

    ``EQ44`` is a polynomial in ``z, w, a``; with ``corrected=True`` the
    second factor is ``(w - z)`` instead of ``(z - w)``.  ``EQ45`` (n even)
    and ``EQ46`` (n odd) are polynomials in ``z, w, b2``.
    """
    if kind == "EQ44":
        elems = index_set(n, m).elements
        second = W - Z if corrected else Z - W
        return chain_product(A, elems) * (Z + W) ** comb(n + m + 1, 2) * second ** comb(m + 1, 2)
    b = B2 * B2 * -4
    pref = chain_product(b, _odd_part(n, m))
    if kind == "EQ45":
        if n % 2:
            raise ValueError("EQ45 needs n even")
        inner = gen_umemura(0, m + n // 2, 0, Poly.const(-n * n), b)
        return pref * W ** ((n // 2) ** 2) * inner
    if kind == "EQ46":
        if n % 2 == 0:
            raise ValueError("EQ46 needs n odd")
        s = mpq(2 * m + n + 1, 2)
        inner = gen_umemura(0, (n - 1) // 2, 0, Poly.const(-4 * s * s), b)
        return pref * W ** ((n + 2 * m + 1) ** 2 // 4) * inner
    raise ValueError(f"unknown closed form {kind!r}")


def lemma1_sign(n: int, k: int, subset) -> int:
    """Per-term sign relating the determinant to the subset sum (after a<->b)."""
    return -1 if sum(i for i in subset if k < i <= n) % 2 else 1


def det_as_sum(n: int, m: int, k: int = 0, a: Poly = A, b: Poly = B) -> Poly:
    """The subset sum rewritten into the determinant's normalization.

    Swaps ``a`` and ``b`` and applies :func:`lemma1_sign` to each term, so
    it can be compared term-for-term with :func:`gen_umemura_det`.
    """
    s = index_set(n, m)
    elems = s.elements
    if any(j not in elems for j in range(1, k + 1)):
        return ZERO
    free = [e for e in elems if e > k]
    total = sum(elems)
    parts = []
    for mask in range(1 << len(free)):
        inside = [e for i, e in enumerate(free) if mask >> i & 1]
        I = list(range(1, k + 1)) + inside
        outside = [e for e in free if e not in inside]
        coeff = _prefactor(inside, k) * weight_d(elems, I) * lemma1_sign(n, k, I)
        if weight_c(n, I) % 2:
            coeff = -coeff
        term = chain_product(b, inside) * chain_product(a, outside)
        parts.append(term.scale(coeff) * Poly.monomial(z=sum(inside), w=total - sum(I)))
    return poly_sum(parts)


# -- keys -------------------------------------------------------------

FAMILIES = ("GEN_SUM", "GEN_DET", "TODA_T", "NOOU_U", "PARAM_U", "LADDER_X",
            "LADDER_T", "FACTORED_44", "SPECIAL_45_46")


@dataclass(frozen=True)
class FamilyKey:
    family: str
    indices: tuple[int, ...]
    shifts: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def text(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.family}({idx})[{self.shifts[0]},{self.shifts[1]}]"

    def __str__(self) -> str:
        return self.text()


def build(key: FamilyKey):
    """Construct the polynomial (or rational function) named by ``key``."""
    f, idx, (d1, d2) = key.family, key.indices, key.shifts
    if f == "GEN_SUM":
        return gen_umemura(*idx)
    if f == "GEN_DET":
        return gen_umemura_det(*idx)
    if f == "TODA_T":
        return toda_T(*idx)
    if f == "NOOU_U":
        return noou_U(*idx)
    if f == "PARAM_U":
        n, m, k = idx
        return param_U(gen_umemura(n, m, k), d1, d2)
    if f == "LADDER_X":
        return ladder_X(*idx)
    if f == "LADDER_T":
        return ladder_T(*idx)
    if f == "FACTORED_44":
        return closed_forms("EQ44", *idx)
    n, m = idx
    return closed_forms("EQ45" if n % 2 == 0 else "EQ46", n, m)
