"""Exact sparse polynomial arithmetic over the rationals.

Polynomials live in one flat ring over the fixed alphabet
``z, w, a, b, b1, b2, v``.  A monomial is stored as a single packed
integer (16 bits per exponent, ``z`` in the lowest field), so monomial
multiplication is integer addition and comparing packed keys is a lex
order with ``v`` most significant.

The quotient by ``w**2 - z**2 - 1`` (``z = sinh(x/2)``, ``w = cosh(x/2)``)
is handled by :func:`reduce`; :func:`derive_x` is the matching derivation.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

VARS: tuple[str, ...] = ("z", "w", "a", "b", "b1", "b2", "v")
NVARS = len(VARS)
_BITS = 16
_MASK = (1 << _BITS) - 1
_SHIFT = {name: i * _BITS for i, name in enumerate(VARS)}
_UNIT = {name: 1 << (i * _BITS) for i, name in enumerate(VARS)}
_ZW_MASK = (1 << (2 * _BITS)) - 1

Coeff = Union[int, mpq]


class BadPrime(ArithmeticError):
    """A coefficient denominator vanishes modulo the chosen prime."""


class NonExactDivision(ArithmeticError):
    """Polynomial division left a nonzero remainder."""


def pack(exps: Sequence[int]) -> int:
    if len(exps) != NVARS:
        raise ValueError(f"expected {NVARS} exponents, got {len(exps)}")
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (i * _BITS)
    return key


def unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> (i * _BITS)) & _MASK for i in range(NVARS))


def exponent(key: int, var: str) -> int:
    return (key >> _SHIFT[var]) & _MASK


def _divides(small: int, big: int) -> bool:
    for i in range(NVARS):
        s = i * _BITS
        if ((small >> s) & _MASK) > ((big >> s) & _MASK):
            return False
    return True


def _q(c) -> mpq:
    if isinstance(c, mpq):
        return c
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return mpq(int(c.numerator), int(c.denominator))
    return mpq(c)


class Poly:
    """Immutable sparse polynomial: ``terms`` maps packed monomials to ``mpq``.

    Zero coefficients are never stored, so two polynomials are equal iff
    their term maps are equal.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, Coeff] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = _q(c)
                if c:
                    clean[k] = c
        self.terms: dict[int, mpq] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, mpq]) -> "Poly":
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Coeff) -> "Poly":
        c = _q(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({_UNIT[name]: mpq(1)})

    @classmethod
    def monomial(cls, coeff: Coeff = 1, **exps: int) -> "Poly":
        key = 0
        for name, e in exps.items():
            key += e * _UNIT[name]
        return cls({key: coeff})

    # -- inspection -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def const_value(self) -> mpq:
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, mpq(0))

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(unpack(k)) for k in self.terms)
        return max(exponent(k, var) for k in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for k in self.terms:
            for name in VARS:
                if exponent(k, name):
                    used.add(name)
        return used

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coeff_of(self, **exps: int) -> mpq:
        key = sum(e * _UNIT[n] for n, e in exps.items())
        return self.terms.get(key, mpq(0))

    # -- arithmetic -------------------------------------------------

    @staticmethod
    def _lift(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other) -> "Poly":
        other = Poly._lift(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        res = dict(big)
        for k, c in small.items():
            s = res.get(k)
            if s is None:
                res[k] = c
            else:
                s = s + c
                if s:
                    res[k] = s
                else:
                    del res[k]
        return Poly._raw(res)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-Poly._lift(other))

    def __rsub__(self, other) -> "Poly":
        return Poly._lift(other) - self

    def scale(self, c: Coeff) -> "Poly":
        c = _q(c)
        if not c:
            return Poly()
        return Poly._raw({k: v * c for k, v in self.terms.items()})

    def shift(self, key: int) -> "Poly":
        """Multiply by the monomial with packed key ``key``."""
        return Poly._raw({k + key: c for k, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            return Poly._raw({k + kb: c * cb for k, c in a.items()})
        res: dict[int, mpq] = {}
        get = res.get
        bitems = list(b.items())
        for ka, ca in a.items():
            for kb, cb in bitems:
                k = ka + kb
                res[k] = get(k, 0) + ca * cb
        return Poly._raw({k: c for k, c in res.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Poly({to_text(self)})"

    def __str__(self) -> str:
        return to_text(self)


def poly_ops(op: str, lhs: Poly, rhs=None) -> Poly:
    """Dispatch ``add``/``sub``/``mul``/``neg``/``pow`` by name."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "neg":
        return -lhs
    if op == "pow":
        return lhs ** int(rhs)
    raise ValueError(f"unknown op {op!r}")


Z = Poly.var("z")
W = Poly.var("w")
A = Poly.var("a")
B = Poly.var("b")
B1 = Poly.var("b1")
B2 = Poly.var("b2")
V = Poly.var("v")
ONE = Poly.const(1)
ZERO = Poly()


def poly_sum(polys: Iterable[Poly]) -> Poly:
    res: dict[int, mpq] = {}
    get = res.get
    for p in polys:
        for k, c in p.terms.items():
            res[k] = get(k, 0) + c
    return Poly._raw({k: c for k, c in res.items() if c})


# -- substitution -----------------------------------------------------


def substitute(p: Poly, bindings: Mapping[str, Poly | Coeff]) -> Poly:
    """Simultaneous substitution of alphabet variables by polynomials."""
    bound = {name: Poly._lift(val) for name, val in bindings.items()}
    for name in bound:
        if name not in _SHIFT:
            raise KeyError(f"unknown variable {name!r}")
    if not bound:
        return p
    keep_mask = 0
    for name in VARS:
        if name not in bound:
            keep_mask |= _MASK << _SHIFT[name]
    power_cache: dict[tuple[str, int], Poly] = {}

    def power(name: str, e: int) -> Poly:
        key = (name, e)
        if key not in power_cache:
            if e == 1:
                power_cache[key] = bound[name]
            else:
                power_cache[key] = power(name, e - 1) * bound[name]
        return power_cache[key]

    # group terms by the exponents of the substituted variables
    groups: dict[tuple[int, ...], dict[int, mpq]] = {}
    names = list(bound)
    for k, c in p.terms.items():
        sig = tuple(exponent(k, n) for n in names)
        groups.setdefault(sig, {})[k & keep_mask] = c
    parts = []
    for sig, rest in groups.items():
        factor = ONE
        for n, e in zip(names, sig):
            if e:
                factor = factor * power(n, e)
        parts.append(Poly._raw(rest) * factor)
    return poly_sum(parts)


# -- quotient by w^2 = z^2 + 1 ------------------------------------------


@dataclass(frozen=True)
class ReducedPoly:
    """Canonical class ``p0 + w*p1`` modulo ``w**2 - z**2 - 1``."""

    p0: Poly
    p1: Poly

    def is_zero(self) -> bool:
        return self.p0.is_zero() and self.p1.is_zero()

    def as_poly(self) -> Poly:
        return self.p0 + self.p1 * W

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReducedPoly):
            return NotImplemented
        return self.p0 == other.p0 and self.p1 == other.p1

    def __hash__(self) -> int:
        return hash((self.p0, self.p1))


_binom_rows: dict[int, list[int]] = {}


def _binoms(k: int) -> list[int]:
    row = _binom_rows.get(k)
    if row is None:
        row = [1]
        for s in range(k):
            row.append(row[-1] * (k - s) // (s + 1))
        _binom_rows[k] = row
    return row


def reduce(p: Poly) -> ReducedPoly:
    """Rewrite ``w**2 -> z**2 + 1`` until every term has w-degree <= 1."""
    zero: dict[int, mpq] = {}
    one: dict[int, mpq] = {}
    wsh = _SHIFT["w"]
    z2 = 2 * _UNIT["z"]
    for key, c in p.terms.items():
        j = (key >> wsh) & _MASK
        base = key - (j << wsh)
        half, odd = divmod(j, 2)
        target = one if odd else zero
        k = base
        for binom in _binoms(half):
            target[k] = target.get(k, 0) + c * binom
            k += z2
    return ReducedPoly(
        Poly._raw({k: c for k, c in zero.items() if c}),
        Poly._raw({k: c for k, c in one.items() if c}),
    )


# -- derivations ------------------------------------------------------


def derive(p: Poly, var: str) -> Poly:
    """Formal partial derivative."""
    sh = _SHIFT[var]
    unit = _UNIT[var]
    res = {}
    for k, c in p.terms.items():
        e = (k >> sh) & _MASK
        if e:
            res[k - unit] = c * e
    return Poly._raw(res)


def derive_x(p: Poly) -> Poly:
    """d/dx with ``z' = w/2`` and ``w' = z/2``; every other symbol is constant."""
    zu, wu = _UNIT["z"], _UNIT["w"]
    res: dict[int, mpq] = {}
    get = res.get
    for k, c in p.terms.items():
        i = k & _MASK
        j = (k >> _BITS) & _MASK
        if i:
            t = k - zu + wu
            res[t] = get(t, 0) + c * i / 2
        if j:
            t = k + zu - wu
            res[t] = get(t, 0) + c * j / 2
    return Poly._raw({k: c for k, c in res.items() if c})


def hirota2(f: Poly, g: Poly, d: Callable[[Poly], Poly] = derive_x) -> Poly:
    """Second Hirota derivative ``f''g - 2f'g' + fg''`` for the derivation ``d``."""
    f1 = d(f)
    if f is g or f == g:
        return 2 * (d(f1) * f - f1 * f1)
    g1 = d(g)
    return d(f1) * g - 2 * (f1 * g1) + f * d(g1)


# -- division and determinants ------------------------------------------


def divmod_poly(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Multivariate division by a single divisor (lex order on packed keys).

    For one divisor the remainder is zero iff ``q`` divides ``p``.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    lk = max(q.terms)
    lc = q.terms[lk]
    qrest = [(k - lk, c) for k, c in q.terms.items() if k != lk]
    rem = dict(p.terms)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot: dict[int, mpq] = {}
    out: dict[int, mpq] = {}
    while heap:
        k = -heapq.heappop(heap)
        c = rem.pop(k, None)
        if not c:
            continue
        # drop duplicate heap entries for this key
        while heap and -heap[0] == k:
            heapq.heappop(heap)
        if _divides(lk, k):
            t = c / lc
            tk = k - lk
            quot[tk] = t
            for dk, dc in qrest:
                kk = tk + lk + dk
                old = rem.get(kk)
                if old is None:
                    rem[kk] = -t * dc
                    heapq.heappush(heap, -kk)
                else:
                    nv = old - t * dc
                    if nv:
                        rem[kk] = nv
                    else:
                        del rem[kk]
        else:
            out[k] = c
    return Poly._raw(quot), Poly._raw(out)


def divide_exact(p: Poly, q: Poly) -> Poly:
    quot, rem = divmod_poly(p, q)
    if not rem.is_zero():
        raise NonExactDivision(f"remainder with {len(rem)} terms")
    return quot


def _det_expand(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    if n == 0:
        return ONE
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ZERO
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = entry * _det_expand(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _det_bareiss(rows: list[list[Poly]]) -> Poly:
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num if prev == ONE else divide_exact(num, prev)
            m[i][k] = ZERO
        prev = pivot
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def det(matrix: Sequence[Sequence[Poly | Coeff]]) -> Poly:
    """Exact determinant; cofactor expansion up to 4x4, Bareiss above."""
    rows = [[Poly._lift(x) for x in r] for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n <= 4:
        return _det_expand(rows)
    zeros = sum(e.is_zero() for r in rows for e in r)
    if zeros * 2 > n * n:
        return _det_expand(rows)
    return _det_bareiss(rows)


@dataclass(frozen=True)
class PolyMatrix:
    labels: tuple[int, ...]
    entries: tuple[tuple[Poly, ...], ...]

    def det(self) -> Poly:
        return det(self.entries)


# -- evaluation -------------------------------------------------------


def _check_cover(p: Poly, names: Iterable[str]) -> None:
    missing = p.variables() - set(names)
    if missing:
        raise KeyError(f"assignment misses variables {sorted(missing)}")


def eval_poly(p: Poly, assignment: Mapping[str, Coeff]) -> mpq:
    """Exact rational value of ``p`` at ``assignment``."""
    _check_cover(p, assignment)
    vals = {n: _q(v) for n, v in assignment.items()}
    cache: dict[tuple[str, int], mpq] = {}
    total = mpq(0)
    for k, c in p.terms.items():
        t = c
        for i, name in enumerate(VARS):
            e = (k >> (i * _BITS)) & _MASK
            if e:
                pw = cache.get((name, e))
                if pw is None:
                    pw = vals[name] ** e
                    cache[(name, e)] = pw
                t = t * pw
        total += t
    return total


def eval_mod(p: Poly, assignment: Mapping[str, int], prime: int) -> int:
    """Value of ``p`` modulo ``prime``; raises :class:`BadPrime` on a bad denominator."""
    _check_cover(p, assignment)
    vals = {n: int(v) % prime for n, v in assignment.items()}
    cache: dict[tuple[str, int], int] = {}
    total = 0
    for k, c in p.terms.items():
        den = int(c.denominator) % prime
        if den == 0:
            raise BadPrime(prime)
        t = int(c.numerator) * pow(den, -1, prime) % prime
        for i, name in enumerate(VARS):
            e = (k >> (i * _BITS)) & _MASK
            if e:
                pw = cache.get((name, e))
                if pw is None:
                    pw = pow(vals[name], e, prime)
                    cache[(name, e)] = pw
                t = t * pw % prime
        total += t
    return total % prime


def eval_class(
    p: Poly,
    point: Mapping[str, Coeff],
    w_square=None,
    prime: int | None = None,
) -> tuple:
    """Evaluate ``p`` with ``w`` kept symbolic subject to ``w**2 = w_square``.

    ``point`` must bind ``z`` and every other variable except ``w``.  By
    default ``w_square = z**2 + 1`` (the quotient ring).  Returns the pair
    ``(v0, v1)`` meaning ``v0 + v1*w``; the class is zero iff both vanish.
    Arithmetic is exact over Q, or over GF(prime) when ``prime`` is given.
    """
    if "w" in point:
        raise KeyError("w is eliminated, do not bind it")
    _check_cover(p, set(point) | {"w"})
    if prime is None:
        vals = {n: _q(v) for n, v in point.items()}
        s = _q(w_square) if w_square is not None else vals["z"] ** 2 + 1
        norm = lambda x: x  # noqa: E731
        conv = lambda c: c  # noqa: E731
    else:
        vals = {n: int(v) % prime for n, v in point.items()}
        s = (int(w_square) % prime) if w_square is not None else (vals["z"] ** 2 + 1) % prime

        def norm(x):
            return x % prime

        def conv(c):
            den = int(c.denominator) % prime
            if den == 0:
                raise BadPrime(prime)
            return int(c.numerator) * pow(den, -1, prime) % prime

    cache: dict[tuple[str, int], object] = {}

    def power(name: str, e: int):
        val = cache.get((name, e))
        if val is None:
            base = s if name == "w" else vals[name]
            val = base ** e if prime is None else pow(base, e, prime)
            cache[(name, e)] = val
        return val

    v0 = 0
    v1 = 0
    for k, c in p.terms.items():
        t = conv(c)
        odd = False
        for i, name in enumerate(VARS):
            e = (k >> (i * _BITS)) & _MASK
            if not e:
                continue
            if name == "w":
                half, odd = divmod(e, 2)
                if half:
                    t = norm(t * power("w", half))
            else:
                t = norm(t * power(name, e))
        if odd:
            v1 += t
        else:
            v0 += t
    if prime is not None:
        return v0 % prime, v1 % prime
    return v0, v1


# -- text -------------------------------------------------------------


def _mono_text(key: int) -> str:
    parts = []
    for name, e in zip(VARS, unpack(key)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def display_order_key(key: int) -> tuple:
    """Descending w-degree, then descending z-degree, then the remaining exponents."""
    e = unpack(key)
    return (-e[1], -e[0], tuple(-x for x in e[2:]))


def to_text(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for k in sorted(p.terms, key=display_order_key):
        c = p.terms[k]
        mono = _mono_text(k)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = f"{mag}"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def graded_lex_key(key: int) -> tuple:
    e = unpack(key)
    return (sum(e), e)


def as_int(x) -> int:
    """Integer value of an integral rational; raises if not integral."""
    x = _q(x)
    if x.denominator != 1:
        raise ValueError(f"{x} is not an integer")
    return int(x.numerator)


__all__ = [
    "VARS", "Poly", "ReducedPoly", "PolyMatrix", "BadPrime", "NonExactDivision",
    "Z", "W", "A", "B", "B1", "B2", "V", "ONE", "ZERO",
    "pack", "unpack", "exponent", "poly_ops", "poly_sum", "substitute", "reduce",
    "derive", "derive_x", "hirota2", "divmod_poly", "divide_exact", "det",
    "eval_poly", "eval_mod", "eval_class", "to_text", "graded_lex_key",
    "display_order_key", "as_int",
]
