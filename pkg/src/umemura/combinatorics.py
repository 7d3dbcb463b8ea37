"""Index sets, subset weights, parameter chains, Frobenius symbols and the
partial-fraction coefficients used in the bilinear recurrence proof."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from gmpy2 import mpq

from .ring import ONE, Poly


class NonIntegralWeight(ArithmeticError):
    pass


@dataclass(frozen=True)
class IndexSet:
    n: int
    m: int
    elements: tuple[int, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def subset(self, mask: int) -> tuple[int, ...]:
        return tuple(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def subsets(self) -> Iterator[tuple[int, ...]]:
        """All subsets in increasing bitmask order."""
        for mask in range(1 << len(self.elements)):
            yield self.subset(mask)


@lru_cache(maxsize=None)
def index_set(n: int, m: int) -> IndexSet:
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    elems = tuple(range(1, n + 1)) + tuple(n + 2 * j for j in range(1, m + 1))
    return IndexSet(n, m, elems)


@dataclass(frozen=True)
class SubsetWeight:
    d: int
    c: int
    subset_mask: int


def weight_d(elements: Sequence[int], subset: Iterable[int]) -> int:
    """Integer product of |(i+j)/(i-j)| over i in the subset, j outside it."""
    inside = set(subset)
    num = 1
    den = 1
    for i in inside:
        for j in elements:
            if j in inside:
                continue
            num *= abs(i + j)
            den *= abs(i - j)
    q, r = divmod(num, den)
    if r:
        raise NonIntegralWeight(f"d({sorted(inside)}) = {num}/{den}")
    return q


def weight_c(n: int, subset: Iterable[int]) -> int:
    total = sum(i - n for i in subset if i > n)
    if total % 2:
        raise ValueError("c(I) must be an integer")
    return total // 2


def subset_weight(n: int, m: int, subset: Iterable[int]) -> SubsetWeight:
    s = index_set(n, m)
    inside = set(subset)
    if not inside <= set(s.elements):
        raise ValueError(f"{sorted(inside)} is not a subset of [{n};{m}]")
    mask = sum(1 << i for i, e in enumerate(s.elements) if e in inside)
    return SubsetWeight(weight_d(s.elements, inside), weight_c(n, inside), mask)


# -- parameter chains -------------------------------------------------


@dataclass(frozen=True)
class ParamChain:
    symbol: Poly
    k: int
    bar_value: Poly
    chain_value: Poly


def bar(symbol: Poly, k: int) -> Poly:
    """``s + (k-1)**2``."""
    return symbol + (k - 1) ** 2


@lru_cache(maxsize=None)
def chain_value(symbol: Poly, k: int) -> Poly:
    """``s_k``: product of bars over k, k-2, ... down to 1 or 2."""
    if k < 1:
        raise ValueError("chain index must be >= 1")
    if k <= 2:
        return bar(symbol, k)
    return chain_value(symbol, k - 2) * bar(symbol, k)


def chain(symbol: Poly, k: int) -> ParamChain:
    return ParamChain(symbol, k, bar(symbol, k), chain_value(symbol, k))


def chain_product(symbol: Poly, subset: Iterable[int]) -> Poly:
    out = ONE
    for i in subset:
        out = out * chain_value(symbol, i)
    return out


def odd_square_chain(symbol: Poly, k: int) -> Poly:
    """``(s+1)(s+9)...(s+(2k-1)**2)``; equals ``chain_value(symbol, 2k)``."""
    out = ONE
    for j in range(1, k + 1):
        out = out * (symbol + (2 * j - 1) ** 2)
    return out


# -- partitions and Frobenius symbols -----------------------------------


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts) or any(
            a < b for a, b in zip(self.parts, self.parts[1:])
        ):
            raise ValueError(f"not a partition: {self.parts}")

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > i) for i in range(self.parts[0])))

    @property
    def size(self) -> int:
        return sum(self.parts)


@dataclass(frozen=True)
class FrobeniusSymbol:
    arms: tuple[int, ...]
    legs: tuple[int, ...]

    def __post_init__(self):
        if len(self.arms) != len(self.legs):
            raise ValueError("arms and legs must have equal length")
        for seq in (self.arms, self.legs):
            if any(x < 0 for x in seq) or any(a <= b for a, b in zip(seq, seq[1:])):
                raise ValueError(f"not strictly decreasing nonnegative: {seq}")


def frobenius_to_partition(f: FrobeniusSymbol) -> Partition:
    r = len(f.arms)
    rows = [f.arms[i] + i + 1 for i in range(r)]
    cols = [f.legs[j] + j + 1 for j in range(r)]
    depth = max(cols, default=0)
    for i in range(r + 1, depth + 1):
        rows.append(sum(1 for c in cols if c >= i))
    return Partition(tuple(rows))


def partition_to_frobenius(p: Partition) -> FrobeniusSymbol:
    conj = p.conjugate().parts
    r = sum(1 for i, part in enumerate(p.parts) if part >= i + 1)
    return FrobeniusSymbol(
        tuple(p.parts[i] - i - 1 for i in range(r)),
        tuple(conj[i] - i - 1 for i in range(r)),
    )


def partitions(total: int, largest: int | None = None) -> Iterator[Partition]:
    if largest is None:
        largest = total
    if total == 0:
        yield Partition(())
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions(total - first, first):
            yield Partition((first,) + rest.parts)


def gl_dim(p: Partition, n: int) -> int:
    """Weyl dimension of the GL(n) irreducible with highest weight ``p``."""
    if len(p.parts) > n:
        raise ValueError(f"partition of length {len(p.parts)} exceeds n={n}")
    lam = list(p.parts) + [0] * (n - len(p.parts))
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return num // den


# -- partial-fraction coefficients ------------------------------------


def _prod(factors: Iterable[mpq]) -> mpq:
    out = mpq(1)
    for f in factors:
        out *= f
    return out


def split_b(I: Sequence[int], J: Sequence[int], lam: int) -> mpq:
    """One half of the residue coefficient at ``lam`` (``lam`` in I, ``lam != 1``)."""
    if lam not in I:
        raise ValueError(f"{lam} not in I")
    if lam == 1:
        raise ValueError("split is undefined at lambda = 1")
    try:
        first = _prod(mpq(lam + x, lam - x) for x in I if x != lam)
        second = _prod(mpq(lam - 2 - x, lam - 2 + x) for x in J)
    except ZeroDivisionError as exc:
        raise ZeroDivisionError(f"pole in split_b(I={I}, J={J}, {lam})") from exc
    return 4 * lam * (lam - 1) * first * second


def b_lambda(I: Sequence[int], J: Sequence[int], lam: int) -> mpq:
    """Coefficient of ``1/((x+2-lam)(x+lam))`` in the two-product expansion."""
    inI, inJ = lam in I, lam in J
    if not (inI or inJ):
        raise ValueError(f"{lam} not in I or J")
    if lam == 1:
        if inI and inJ:
            return -8 * _prod(mpq(1 + x, 1 - x) for x in I if x != 1) * _prod(
                mpq(1 + x, 1 - x) for x in J if x != 1
            )
        # 1 in exactly one set: the factor (lam - 1) kills the residue
        return mpq(0)
    if inI and inJ:
        return split_b(I, J, lam) + split_b(J, I, lam)
    if inI:
        return split_b(I, J, lam)
    return split_b(J, I, lam)


def two_product(I: Sequence[int], J: Sequence[int], x) -> mpq:
    """The left side of the partial-fraction identity at a rational ``x``."""
    x = mpq(x)
    p1 = _prod((x + 2 + l) / (x + 2 - l) for l in I) * _prod((x - l) / (x + l) for l in J)
    p2 = _prod((x - l) / (x + l) for l in I) * _prod((x + 2 + l) / (x + 2 - l) for l in J)
    return p1 + p2


def partial_fraction_rhs(I: Sequence[int], J: Sequence[int], x) -> mpq:
    x = mpq(x)
    return 2 + sum(
        (b_lambda(I, J, l) / ((x + 2 - l) * (x + l)) for l in sorted(set(I) | set(J))),
        mpq(0),
    )


def element_sum(s: Iterable[int]) -> int:
    return sum(s)


def lemma6_sign_exponent(n: int, lam: int) -> int:
    return 1 if lam <= n else -1


def subset_pairs(elements: Sequence[int]) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    subs = [tuple(c) for r in range(len(elements) + 1) for c in combinations(elements, r)]
    for I in subs:
        for J in subs:
            yield I, J
