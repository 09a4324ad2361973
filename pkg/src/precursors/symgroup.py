"""
Partitions, permutations and characters of the symmetric group.

Permutations compose right to left: ``(s * t)(x) = s(t(x))``.
Partitions are listed in reverse-lexicographic order everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
import io
import math

from .exactnum import RatFuncN

__all__ = [
    "Partition",
    "Permutation",
    "CharacterTable",
    "enumerate_partitions",
    "class_size",
    "hook_product",
    "contents",
    "content_polynomial",
    "character",
    "character_table",
    "littlewood_richardson",
    "cycle_type",
    "genus",
    "all_permutations",
    "class_representative",
]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers.  ``Partition()`` is the empty partition."""

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if parts and parts[-1] < 1:
            raise ValueError(f"partition parts must be positive: {parts}")
        return tuple.__new__(cls, parts)

    @classmethod
    def _trusted(cls, parts):
        return tuple.__new__(cls, parts)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicities(self) -> dict:
        m = {}
        for p in self:
            m[p] = m.get(p, 0) + 1
        return m

    def multiplicity(self, k: int) -> int:
        return self.count(k)

    def concat(self, other) -> "Partition":
        return Partition._trusted(tuple(sorted(self + tuple(other), reverse=True)))

    def remove_part(self, k: int) -> "Partition":
        i = self.index(k)
        return Partition._trusted(self[:i] + self[i + 1:])

    def without_ones(self) -> "Partition":
        return Partition._trusted(tuple(p for p in self if p > 1))

    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition._trusted(tuple(sum(1 for p in self if p > j) for j in range(self[0])))

    def __repr__(self):
        return "[" + ",".join(map(str, self)) + "]"

    __str__ = __repr__


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> tuple:
    if n == 0:
        return (Partition._trusted(()),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append(Partition._trusted((first,) + rest))
    return tuple(out)


def enumerate_partitions(n: int, max_part: int | None = None) -> list:
    """All partitions of ``n`` in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_partitions(n, n if max_part is None else max_part))


def partitions_up_to(d: int, max_part: int | None = None) -> list:
    out = []
    for n in range(d + 1):
        out.extend(enumerate_partitions(n, max_part))
    return out


@lru_cache(maxsize=None)
def class_size(alpha) -> int:
    """Number of permutations of cycle type ``alpha``."""
    n = sum(alpha)
    denom = 1
    for k, m in Partition(alpha).multiplicities().items():
        denom *= k ** m * math.factorial(m)
    return math.factorial(n) // denom


def hook_product(lam) -> int:
    lam = Partition(lam)
    conj = lam.conjugate()
    h = 1
    for i, row in enumerate(lam):
        for j in range(row):
            h *= (row - j - 1) + (conj[j] - i - 1) + 1
    return h


def contents(lam) -> list:
    return [j - i for i, row in enumerate(lam) for j in range(row)]


@lru_cache(maxsize=None)
def content_polynomial(lam) -> RatFuncN:
    """C_lam(N) = prod over boxes of (1 + c/N)."""
    N = RatFuncN.gen()
    out = RatFuncN.const(1)
    for c in contents(lam):
        out = out * (1 + Fraction(c) / N) if c else out
    return out


@lru_cache(maxsize=None)
def _mn(lam: tuple, alpha: tuple) -> int:
    # Murnaghan-Nakayama on beta-sets: removing a k-rim hook moves one bead down by k
    if not alpha:
        return 1
    k, rest = alpha[0], alpha[1:]
    L = len(lam)
    beta = [lam[i] + (L - 1 - i) for i in range(L)]
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        sign = -1 if sum(1 for x in beta if nb < x < b) % 2 else 1
        newbeta = sorted([x for x in beta if x != b] + [nb], reverse=True)
        new = tuple(x - (L - 1 - i) for i, x in enumerate(newbeta))
        new = tuple(p for p in new if p > 0)
        total += sign * _mn(new, rest)
    return total


def character(lam, alpha) -> int:
    """Irreducible character chi_lam evaluated on the class of cycle type alpha."""
    if sum(lam) != sum(alpha):
        raise ValueError(f"degree mismatch: {tuple(lam)} vs {tuple(alpha)}")
    return _mn(tuple(Partition(lam)), tuple(Partition(alpha)))


@dataclass(frozen=True)
class CharacterTable:
    n: int
    entries: dict

    @property
    def partitions(self):
        return enumerate_partitions(self.n)

    def __getitem__(self, key):
        return self.entries[key]

    def to_csv(self) -> str:
        parts = self.partitions
        buf = io.StringIO()
        buf.write("lambda\\alpha," + ",".join(_label(a) for a in parts) + "\n")
        for lam in parts:
            buf.write(_label(lam) + "," + ",".join(str(self.entries[lam, a]) for a in parts) + "\n")
        return buf.getvalue()


def _label(p) -> str:
    return '"' + "[" + ",".join(map(str, p)) + "]" + '"'


@lru_cache(maxsize=None)
def character_table(n: int) -> CharacterTable:
    parts = enumerate_partitions(n)
    return CharacterTable(n, {(lam, a): character(lam, a) for lam in parts for a in parts})


def littlewood_richardson(lam, mu, nu) -> int:
    """c^nu_{lam,mu} from the character inner product on S_a x S_b."""
    a, b = sum(lam), sum(mu)
    if sum(nu) != a + b:
        raise ValueError("degree mismatch: |nu| must equal |lam| + |mu|")
    total = Fraction(0)
    for alpha in enumerate_partitions(a):
        ca = character(lam, alpha)
        if not ca:
            continue
        wa = Fraction(class_size(alpha), math.factorial(a))
        for beta in enumerate_partitions(b):
            cb = character(mu, beta)
            if not cb:
                continue
            wb = Fraction(class_size(beta), math.factorial(b))
            total += wa * wb * ca * cb * character(nu, Partition(alpha).concat(beta))
    if total.denominator != 1 or total < 0:
        raise ArithmeticError(f"LR sum is not a nonnegative integer: {total}")
    return int(total)


# ---- permutations --------------------------------------------------------


def _cycle_type0(images) -> Partition:
    n = len(images)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            c = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = images[j]
                c += 1
            out.append(c)
    out.sort(reverse=True)
    return Partition._trusted(tuple(out))


def _n_cycles0(images) -> int:
    n = len(images)
    seen = [False] * n
    c = 0
    for i in range(n):
        if not seen[i]:
            c += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = images[j]
    return c


def _compose0(s, t):
    return tuple(s[x] for x in t)


def _inverse0(s):
    inv = [0] * len(s)
    for i, x in enumerate(s):
        inv[x] = i
    return tuple(inv)


class Permutation:
    """
    Permutation of {1..n} given by its one-line notation.

    Internally stored 0-based in ``images``.
    """

    __slots__ = ("images",)

    def __init__(self, one_line):
        imgs = tuple(int(x) - 1 for x in one_line)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {list(one_line)}")
        self.images = imgs

    @classmethod
    def from_images0(cls, imgs):
        obj = object.__new__(cls)
        obj.images = tuple(imgs)
        return obj

    @classmethod
    def identity(cls, n: int):
        return cls.from_images0(range(n))

    @classmethod
    def long_cycle(cls, n: int):
        """zeta_n = (1 2 ... n)."""
        return cls.from_images0([(i + 1) % n for i in range(n)])

    @classmethod
    def transposition(cls, n: int, a: int, b: int):
        imgs = list(range(n))
        imgs[a - 1], imgs[b - 1] = b - 1, a - 1
        return cls.from_images0(imgs)

    @classmethod
    def from_cycles(cls, n: int, cycles):
        imgs = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                imgs[x - 1] = cyc[(i + 1) % len(cyc)] - 1
        return cls.from_images0(imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    def one_line(self) -> list:
        return [x + 1 for x in self.images]

    def __call__(self, x: int) -> int:
        return self.images[x - 1] + 1

    def __mul__(self, other):
        return Permutation.from_images0(_compose0(self.images, other.images))

    def inverse(self):
        return Permutation.from_images0(_inverse0(self.images))

    def cycles(self) -> list:
        n = len(self.images)
        seen = [False] * n
        out = []
        for i in range(n):
            if not seen[i]:
                cyc = []
                j = i
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j + 1)
                    j = self.images[j]
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> Partition:
        return _cycle_type0(self.images)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({self.one_line()})"


def cycle_type(sigma: Permutation) -> Partition:
    return sigma.cycle_type()


def genus(sigma: Permutation) -> int:
    """g with 2g = n + 1 - l(sigma) - l(sigma^-1 zeta_n)."""
    n = sigma.n
    if n == 0:
        return 0
    s = sigma.images
    zeta = tuple((i + 1) % n for i in range(n))
    twice = n + 1 - _n_cycles0(s) - _n_cycles0(_compose0(_inverse0(s), zeta))
    if twice % 2 or twice < 0:
        raise ArithmeticError(f"non-integral genus for {sigma}")
    return twice // 2


def all_permutations(n: int):
    for p in permutations(range(n)):
        yield Permutation.from_images0(p)


def class_representative(alpha) -> Permutation:
    """Product of consecutive cycles with lengths alpha_1, alpha_2, ..."""
    n = sum(alpha)
    imgs = list(range(n))
    start = 0
    for k in alpha:
        for i in range(k):
            imgs[start + i] = start + (i + 1) % k
        start += k
    return Permutation.from_images0(imgs)
