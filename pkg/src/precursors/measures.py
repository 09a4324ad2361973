"""
Moment functionals of unitarily invariant random matrices.

A law is represented by its Newton-basis expectations E[p_alpha] up to a
degree cutoff.  Values may be exact rationals (fixed N), rational functions
of N (symbolic N) or polynomials in free symbols (:class:`MPoly`), which is
how identities are proved for arbitrary laws rather than spot-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math

from .exactnum import RatFuncN, as_fraction, fraction_text
from .symfunc import InvariantPoly, Spectrum, DegreeError
from .symgroup import Partition, class_size, enumerate_partitions, _n_cycles0
from .hciz import precursor_newton
from .coproduct import coproduct

__all__ = [
    "MPoly",
    "MomentFunctional",
    "from_orbit",
    "gue_functional",
    "symbolic_functional",
    "averaged_precursor",
    "convolve",
    "cgl_cumulants",
    "a11_statistics",
    "perfect_matchings",
]

_N = RatFuncN.gen()


class MPoly:
    """Sparse polynomial in named symbols with RatFuncN coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def var(cls, name) -> "MPoly":
        return cls({((name, 1),): RatFuncN.const(1)})

    @classmethod
    def const(cls, c) -> "MPoly":
        c = c if isinstance(c, RatFuncN) else RatFuncN.const(c)
        return cls({(): c})

    @staticmethod
    def _lift(x):
        if isinstance(x, MPoly):
            return x
        if isinstance(x, (int, Fraction, RatFuncN)):
            return MPoly.const(x)
        return None

    def __add__(self, other):
        o = MPoly._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.terms.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        r = MPoly()
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = MPoly()
        r.terms = {k: -v for k, v in self.terms.items()}
        return r

    def __sub__(self, other):
        o = MPoly._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFuncN)):
            if not other:
                return MPoly()
            r = MPoly()
            r.terms = {k: v * other for k, v in self.terms.items()}
            return r
        if not isinstance(other, MPoly):
            return NotImplemented
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = _merge(k1, k2)
                s = out.get(k)
                s = v1 * v2 if s is None else s + v1 * v2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        r = MPoly()
        r.terms = out
        return r

    __rmul__ = __mul__

    def __pow__(self, k):
        out = MPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        o = MPoly._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for k, v in sorted(self.terms.items(), key=lambda t: repr(t[0])):
            mono = "*".join(f"{n[0]}{list(n[1])}" + (f"^{e}" if e > 1 else "") for n, e in k) or "1"
            out.append(f"({v})*{mono}")
        return " + ".join(out)


def _merge(k1, k2):
    if not k1:
        return k2
    if not k2:
        return k1
    d = dict(k1)
    for n, e in k2:
        d[n] = d.get(n, 0) + e
    return tuple(sorted(d.items()))


# ---- moment functionals -------------------------------------------------------------


@dataclass(frozen=True)
class MomentFunctional:
    """
    Expectations E[p_alpha] for d(alpha) <= cutoff.

    ``N`` is an int, or None for a symbolic size.
    """

    N: int | None
    cutoff: int
    values: dict = field(repr=False)

    def __getitem__(self, alpha):
        alpha = Partition(alpha)
        if not alpha:
            return 1
        if alpha.degree > self.cutoff:
            raise DegreeError(f"E[p{alpha!r}] is beyond the cutoff {self.cutoff}")
        return self.values.get(alpha, 0)

    def scalar(self, c: RatFuncN):
        """A Q(N) coefficient as seen by this functional."""
        return c if self.N is None else c.eval_at(self.N)

    def to_json(self) -> dict:
        vals = []
        for a in sorted(self.values, key=lambda p: (p.degree, tuple(-x for x in p))):
            v = self.values[a]
            if isinstance(v, RatFuncN):
                enc = v.to_json()
            elif isinstance(v, (int, Fraction)):
                enc = fraction_text(v)
            else:
                raise TypeError("only numeric or RatFuncN values serialise")
            vals.append({"partition": list(a), "value": enc})
        return {"N": self.N, "cutoff": self.cutoff, "values": vals}

    @classmethod
    def from_json(cls, obj) -> "MomentFunctional":
        vals = {}
        for t in obj["values"]:
            v = t["value"]
            vals[Partition(t["partition"])] = RatFuncN.from_json(v) if isinstance(v, dict) else as_fraction(v)
        return cls(obj.get("N"), int(obj["cutoff"]), vals)


def _index_set(cutoff, N=None):
    out = []
    for d in range(1, cutoff + 1):
        out.extend(enumerate_partitions(d))
    return out


def from_orbit(A: Spectrum, n_max: int) -> MomentFunctional:
    """Point mass on the unitary orbit of A."""
    if n_max > A.N:
        raise DegreeError(f"cutoff {n_max} exceeds N={A.N}")
    ps = {k: A.power_sum(k) for k in range(1, n_max + 1)}
    vals = {}
    for a in _index_set(n_max):
        v = 1
        for k in a:
            v = v * ps[k]
        vals[a] = v
    return MomentFunctional(A.N, n_max, vals)


def symbolic_functional(name, cutoff: int, N: int | None = None) -> MomentFunctional:
    """Generic law: every E[p_alpha] is an independent symbol (name, alpha)."""
    return MomentFunctional(N, cutoff, {a: MPoly.var((name, tuple(a))) for a in _index_set(cutoff)})


@lru_cache(maxsize=None)
def perfect_matchings(m: int) -> tuple:
    """Fixed-point-free involutions of {0..m-1}, as image tuples."""
    if m % 2:
        return ()
    if m == 0:
        return ((),)
    out = []

    def rec(free, imgs):
        if not free:
            out.append(tuple(imgs))
            return
        i = free[0]
        for j in free[1:]:
            imgs[i], imgs[j] = j, i
            rec([x for x in free if x != i and x != j], imgs)

    rec(list(range(m)), [0] * m)
    return tuple(out)


@lru_cache(maxsize=None)
def _wick_exponents(alpha) -> dict:
    """{number of index cycles of gamma o pi: multiplicity} over pairings pi."""
    d = sum(alpha)
    gamma = []
    start = 0
    for k in alpha:
        gamma += [start + (i + 1) % k for i in range(k)]
        start += k
    out = {}
    for pi in perfect_matchings(d):
        c = _n_cycles0(tuple(gamma[x] for x in pi))
        out[c] = out.get(c, 0) + 1
    return out


def gue_functional(N: int | None, sigma=1, n_max: int = 6) -> MomentFunctional:
    """
    GUE with E[A_ij A_kl] = (sigma^2/N) delta_il delta_jk, so E[Tr A^2] = N sigma^2.

    E[p_alpha] = sum over pairings pi of (sigma^2/N)^{d/2} N^{c(gamma_alpha pi)}.
    """
    sigma = as_fraction(sigma)
    vals = {}
    for a in _index_set(n_max):
        d = a.degree
        if d % 2:
            continue
        h = d // 2
        if N is None:
            v = RatFuncN.const(0)
            for c, m in _wick_exponents(tuple(a)).items():
                v = v + _N ** (c - h) * m
            vals[a] = v * sigma ** d
        else:
            v = Fraction(0)
            for c, m in _wick_exponents(tuple(a)).items():
                v += Fraction(N) ** (c - h) * m
            vals[a] = v * sigma ** d
    return MomentFunctional(N, n_max, vals)


# ---- precursors of a law ------------------------------------------------------------


def _apply(mu: MomentFunctional, terms: dict):
    total = 0
    for b, c in terms.items():
        v = mu[b]
        if not v:
            continue
        total = total + mu.scalar(c) * v if not isinstance(v, MPoly) else total + v * mu.scalar(c)
    return total


def averaged_precursor(mu: MomentFunctional, alpha):
    """E_mu[K_alpha]."""
    alpha = Partition(alpha)
    if alpha.degree > mu.cutoff:
        raise DegreeError(f"degree {alpha.degree} exceeds the cutoff {mu.cutoff}")
    if mu.N is not None and alpha.degree > mu.N:
        raise DegreeError(f"K{alpha!r} is undefined for N={mu.N}")
    if not alpha:
        return 1
    return _apply(mu, precursor_newton(alpha).terms)


@lru_cache(maxsize=None)
def _delta_p(gamma):
    return coproduct(InvariantPoly.element("newton_p", gamma), "newton_p").terms


def convolve(mu: MomentFunctional, nu: MomentFunctional) -> MomentFunctional:
    """Law of A + U B U^dag for A ~ mu, B ~ nu, U Haar, all independent."""
    if mu.N != nu.N:
        raise ValueError(f"size mismatch: {mu.N} vs {nu.N}")
    if mu.cutoff != nu.cutoff:
        raise ValueError(f"cutoff mismatch: {mu.cutoff} vs {nu.cutoff}")
    if mu.N is not None and mu.cutoff > mu.N:
        raise DegreeError(f"cutoff {mu.cutoff} exceeds N={mu.N}")
    vals = {}
    for g in _index_set(mu.cutoff):
        total = 0
        for (a, b), c in _delta_p(g).items():
            x, y = mu[a], nu[b]
            if not x or not y:
                continue
            term = x * y
            total = total + (term * mu.scalar(c) if isinstance(term, MPoly) else mu.scalar(c) * term)
        vals[g] = total
    return MomentFunctional(mu.N, mu.cutoff, vals)


def _normaliser(mu, alpha, power):
    # N^power |Cl_alpha| / d!
    r = _N ** power * Fraction(class_size(alpha), math.factorial(alpha.degree))
    return mu.scalar(r)


def cgl_cumulants(mu: MomentFunctional, max_degree: int | None = None) -> dict:
    """
    Coefficients K^CGL_alpha of the formal logarithm of sum_alpha E[p*^alpha] t^alpha,
    normalised by N^{2-l} |Cl_alpha| / d!.
    """
    D = mu.cutoff if max_degree is None else max_degree
    if D > mu.cutoff:
        raise DegreeError(f"degree {D} exceeds the cutoff {mu.cutoff}")
    index = _index_set(D)
    X = {}
    for a in index:
        v = averaged_precursor(mu, a)
        if v:
            X[a] = _scale(v, _normaliser(mu, a, len(a)))
    log = {}
    power = dict(X)
    for j in range(1, D + 1):
        w = Fraction((-1) ** (j + 1), j)
        for a, v in power.items():
            log[a] = log.get(a, 0) + _scale(v, w)
        if j == D:
            break
        nxt = {}
        for a, v in power.items():
            for b, u in X.items():
                if a.degree + b.degree > D:
                    continue
                k = a.concat(b)
                nxt[k] = nxt.get(k, 0) + v * u
        power = nxt
        if not power:
            break
    out = {}
    for a in index:
        v = log.get(a, 0)
        out[a] = _scale(v, 1 / _normaliser(mu, a, 2 - len(a))) if v else 0
    return out


def _scale(v, c):
    return v * c if isinstance(v, MPoly) else c * v


def a11_statistics(mu: MomentFunctional, n: int, cgl=None):
    """(E[A_11^n], n-th classical cumulant of A_11) for A ~ mu."""
    if n > mu.cutoff:
        raise DegreeError(f"n={n} exceeds the cutoff {mu.cutoff}")
    cgl = cgl_cumulants(mu, n) if cgl is None else cgl
    moment = 0
    cumulant = 0
    for a in enumerate_partitions(n):
        kbar = averaged_precursor(mu, a)
        w_m = mu.scalar(_N ** (len(a) - n) * class_size(a))
        w_c = mu.scalar(_N ** (2 - len(a) - n) * class_size(a))
        if kbar:
            moment = moment + _scale(kbar, w_m)
        if cgl[a]:
            cumulant = cumulant + _scale(cgl[a], w_c)
    return moment, cumulant
