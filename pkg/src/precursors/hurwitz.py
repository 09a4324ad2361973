"""
Monotone and strictly monotone disconnected double Hurwitz numbers.

A tuple (s_a, s_b, t_1, ..., t_r) is counted when s_a has cycle type alpha,
s_b has cycle type beta, each t_i = (a_i b_i) is a transposition with
a_i < b_i, s_a s_b t_1 ... t_r = id, and the b_i are weakly (monotone) or
strictly (strictly monotone) increasing.  r = 2g - 2 + l(alpha) + l(beta).

Counting is exact: the transposition sequences are enumerated layer by layer,
keeping a tally of (partial product, last b); every sequence is visited
through its prefix, so the totals equal the brute-force enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .exactnum import RatFuncN
from .symgroup import (
    Partition,
    Permutation,
    all_permutations,
    class_size,
    enumerate_partitions,
    _compose0,
    _cycle_type0,
    _inverse0,
)

__all__ = [
    "HurwitzQuery",
    "HurwitzBoundsError",
    "hurwitz_count",
    "h0_closed_form",
    "genus_count",
    "primitive_factorization",
    "generating_matrix",
    "MONOTONE",
    "STRICT",
    "MAX_DEGREE",
    "MAX_TRANSPOSITIONS",
]

MONOTONE = "monotone"
STRICT = "strictly_monotone"
FLAVORS = (MONOTONE, STRICT)

MAX_DEGREE = 6
MAX_TRANSPOSITIONS = 8

_N = RatFuncN.gen()


class HurwitzBoundsError(ValueError):
    pass


@dataclass(frozen=True)
class HurwitzQuery:
    alpha: Partition
    beta: Partition
    g: int
    flavor: str = MONOTONE

    def __post_init__(self):
        object.__setattr__(self, "alpha", Partition(self.alpha))
        object.__setattr__(self, "beta", Partition(self.beta))
        if self.flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}")

    @property
    def r(self) -> int:
        return 2 * self.g - 2 + len(self.alpha) + len(self.beta)


def _flavor(name):
    name = {"strict": STRICT, "<": STRICT, "<=": MONOTONE}.get(name, name)
    if name not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    return name


@lru_cache(maxsize=None)
def _transpositions_by_b(n):
    out = []
    for b in range(1, n):
        row = []
        for a in range(b):
            imgs = list(range(n))
            imgs[a], imgs[b] = b, a
            row.append(tuple(imgs))
        out.append((b, row))
    return out


@lru_cache(maxsize=None)
def _sequence_products(n, r, flavor):
    """{rho: number of admissible sequences t_1..t_r with t_1...t_r = rho}."""
    ident = tuple(range(n))
    layer = {(ident, 0): 1}
    strict = flavor == STRICT
    for _ in range(r):
        nxt = {}
        for (rho, last), cnt in layer.items():
            for b, row in _transpositions_by_b(n):
                if b < last or (strict and b == last):
                    continue
                for t in row:
                    key = (_compose0(rho, t), b)
                    nxt[key] = nxt.get(key, 0) + cnt
        layer = nxt
    out = {}
    for (rho, _), cnt in layer.items():
        out[rho] = out.get(rho, 0) + cnt
    return out


@lru_cache(maxsize=None)
def _counts_all(n, r, flavor):
    """{(alpha, beta): count} for all cycle types at fixed n and r."""
    prods = _sequence_products(n, r, flavor)
    inv_prods = [(_inverse0(rho), cnt) for rho, cnt in prods.items()]
    out = {}
    for s in all_permutations(n):
        sa = s.images
        a = _cycle_type0(sa)
        sa_inv = _inverse0(sa)
        for rinv, cnt in inv_prods:
            # s_a s_b rho = id  =>  s_b = s_a^-1 rho^-1
            b = _cycle_type0(_compose0(sa_inv, rinv))
            out[a, b] = out.get((a, b), 0) + cnt
    return out


def _count(alpha, beta, r, flavor):
    if r < 0:
        return 0
    n = alpha.degree
    if n == 0:
        return 1 if r == 0 else 0
    return _counts_all(n, r, flavor).get((alpha, beta), 0)


def hurwitz_count(q: HurwitzQuery | None = None, *, alpha=None, beta=None, g=None, flavor=MONOTONE) -> int:
    """Exact Hurwitz number H_g(alpha, beta) of the given flavor."""
    if q is None:
        q = HurwitzQuery(alpha, beta, g, _flavor(flavor))
    if q.alpha.degree != q.beta.degree:
        raise ValueError("alpha and beta must have the same degree")
    n, r = q.alpha.degree, q.r
    if n > MAX_DEGREE or r > MAX_TRANSPOSITIONS:
        raise HurwitzBoundsError(
            f"enumeration bounds exceeded: n={n} (max {MAX_DEGREE}), r={r} (max {MAX_TRANSPOSITIONS})"
        )
    return _count(q.alpha, q.beta, r, q.flavor)


def h0_closed_form(n: int, beta) -> int:
    """H_0^<=([n], beta) = (n + l(beta) - 2)! / prod_k beta_hat_k!."""
    beta = Partition(beta)
    if beta.degree != n:
        raise ValueError("beta must be a partition of n")
    denom = 1
    for m in beta.multiplicities().values():
        denom *= math.factorial(m)
    return math.factorial(n + len(beta) - 2) // denom


def genus_count(alpha, g: int) -> int:
    """P_g(alpha): permutations of cycle type alpha and genus g."""
    from .hciz import genus_distribution

    alpha = Partition(alpha)
    if alpha.degree > 7:
        raise HurwitzBoundsError("exhaustive genus counts are limited to n <= 7")
    return genus_distribution(alpha).get(g, 0)


def primitive_factorization(sigma: Permutation) -> list:
    """
    The unique sequence of transpositions (a_i, b_i), a_i < b_i, b strictly
    increasing, with sigma = t_1 t_2 ... t_k and k = n - l(sigma).
    """
    s = list(sigma.images)
    out = []
    for b in range(len(s) - 1, 0, -1):
        if s[b] == b:
            continue
        a = s.index(b)  # t_k = (sigma^-1(b), b); continue with sigma t_k
        out.append((a + 1, b + 1))
        s[a], s[b] = s[b], s[a]
    out.reverse()
    return out


# ---- generating matrices ----------------------------------------------------------------


def _strict_entry(alpha, beta):
    # (1/|Cl_a|) sum_g N^{2-2g-l_a-l_b} H_g^<; r = 2g-2+l_a+l_b ranges over 0..n-1
    n = alpha.degree
    s = RatFuncN.const(0)
    for r in range(n):
        c = _count(alpha, beta, r, STRICT)
        if c:
            s = s + _N ** (-r) * Fraction(c, class_size(alpha))
    return s


def _monotone_entry(alpha, beta, extra=2):
    """
    Resum the monotone series (1/|Cl_a|) sum_r (-1/N)^r H(r).

    Denominators of these entries divide N^{2(n-1)} prod_{k<n} (1 - k^2/N^2)
    for n <= 5, so multiplying the series in x = 1/N by D(x) = prod (1 - k^2 x^2)
    leaves a polynomial of degree <= 2(n-1).  ``extra`` further terms are
    enumerated and must vanish, which checks the truncation.
    """
    n = alpha.degree
    top = 2 * (n - 1)
    s = [Fraction((-1) ** r * _count(alpha, beta, r, MONOTONE), class_size(alpha)) for r in range(top + extra + 1)]
    d = [Fraction(1)]
    for k in range(1, n):
        nd = [Fraction(0)] * (len(d) + 2)
        for i, c in enumerate(d):
            nd[i] += c
            nd[i + 2] -= c * k * k
        d = nd
    prod = [sum(d[j] * s[i - j] for j in range(min(i, len(d) - 1) + 1)) for i in range(len(s))]
    if any(prod[top + 1:]):
        raise ArithmeticError(f"monotone series for {alpha!r},{beta!r} failed the resummation check")
    x = _N.inverse()
    num = RatFuncN.const(0)
    for i, c in enumerate(prod[: top + 1]):
        if c:
            num = num + x ** i * c
    den = RatFuncN.const(0)
    for i, c in enumerate(d):
        if c:
            den = den + x ** i * c
    return num / den


@lru_cache(maxsize=None)
def generating_matrix(n: int, flavor: str = MONOTONE):
    """
    Matrix {(alpha, beta): RatFuncN} over partitions of n (reverse-lex order).

    Strict entries are finite sums of enumerated counts; monotone entries are
    resummed from enumerated counts (see ``_monotone_entry``).
    """
    flavor = _flavor(flavor)
    if n > 5 or n < 1:
        raise HurwitzBoundsError("generating matrices are available for 1 <= n <= 5")
    parts = enumerate_partitions(n)
    fn = _strict_entry if flavor == STRICT else _monotone_entry
    return {(a, b): fn(a, b) for a in parts for b in parts}


def matrix_rows(mat: dict, n: int) -> list:
    parts = enumerate_partitions(n)
    return [[mat[a, b] for b in parts] for a in parts]
