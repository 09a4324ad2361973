"""
The orbit coproduct  f  ->  (A, B) |-> E_U f(A + U B U^dag).

In the dual-Newton basis the structure constants are those of concatenation:
Delta p*^gamma = sum over splittings gamma = alpha u beta of p*^alpha (x) p*^beta.
Every other basis is reached by exact basis change on each tensor factor.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import itertools
import math

from .exactnum import RatFuncN
from .symfunc import (
    InvariantPoly,
    Spectrum,
    DegreeError,
    canonical_basis,
    degree_cap,
)
from .symgroup import Partition, content_polynomial, enumerate_partitions, littlewood_richardson
from .hciz import eta_lower, _eta_upper, precursor_newton

__all__ = [
    "TensorPoly",
    "coproduct",
    "newton_coproduct",
    "schur_coproduct_formula",
    "elementary_coproduct_formula",
    "precursor_coproduct_formula",
    "orbit_average",
    "delta_k_central_moment",
    "splittings",
]

_N = RatFuncN.gen()
_ONE = RatFuncN.const(1)


def splittings(gamma):
    """All ordered pairs (alpha, beta) with concat(alpha, beta) = gamma, each once."""
    gamma = Partition(gamma)
    mult = sorted(gamma.multiplicities().items(), reverse=True)
    ranges = [range(m + 1) for _, m in mult]
    for pick in itertools.product(*ranges):
        left, right = [], []
        for (k, m), i in zip(mult, pick):
            left += [k] * i
            right += [k] * (m - i)
        yield Partition._trusted(tuple(left)), Partition._trusted(tuple(right))


@lru_cache(maxsize=None)
def _change(src, dst, alpha):
    return InvariantPoly.element(src, alpha).to(dst).terms


class TensorPoly:
    """Element of A (x) A: {(alpha, beta): coeff} in a pair of bases."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis, terms=None):
        b1, b2 = basis
        self.basis = (canonical_basis(b1), canonical_basis(b2))
        out = {}
        for (a, b), c in (terms or {}).items():
            c = c if isinstance(c, RatFuncN) else RatFuncN.const(c)
            if c:
                out[Partition(a), Partition(b)] = c
        self.terms = out

    @classmethod
    def _raw(cls, basis, terms):
        obj = object.__new__(cls)
        obj.basis = basis
        obj.terms = terms
        return obj

    @classmethod
    def from_pair(cls, f: InvariantPoly, g: InvariantPoly) -> "TensorPoly":
        """f (x) g."""
        return cls._raw(
            (f.basis, g.basis),
            {(a, b): c * d for a, c in f.terms.items() for b, d in g.terms.items()},
        )

    def to(self, b1, b2=None) -> "TensorPoly":
        b2 = b1 if b2 is None else b2
        tgt = (canonical_basis(b1), canonical_basis(b2))
        if tgt == self.basis:
            return self
        out = {}
        for (a, b), c in self.terms.items():
            left = _change(self.basis[0], tgt[0], a)
            right = _change(self.basis[1], tgt[1], b)
            for x, cx in left.items():
                for y, cy in right.items():
                    _acc(out, (x, y), c * cx * cy)
        return TensorPoly._raw(tgt, out)

    def swap(self) -> "TensorPoly":
        return TensorPoly._raw(
            (self.basis[1], self.basis[0]), {(b, a): c for (a, b), c in self.terms.items()}
        )

    def __add__(self, other):
        other = other.to(*self.basis)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return TensorPoly._raw(self.basis, out)

    def __neg__(self):
        return TensorPoly._raw(self.basis, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorPoly":
        if not c:
            return TensorPoly._raw(self.basis, {})
        return TensorPoly._raw(self.basis, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        """Product in A (x) A; both operands are moved to the Newton basis."""
        if isinstance(other, (int, Fraction, RatFuncN)):
            return self.scale(other)
        x = self.to("newton_p")
        y = other.to("newton_p")
        out = {}
        for (a, b), c in x.terms.items():
            for (u, v), d in y.terms.items():
                _acc(out, (a.concat(u), b.concat(v)), c * d)
        return TensorPoly._raw(("newton_p", "newton_p"), out).to(*self.basis)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def coefficient(self, a, b) -> RatFuncN:
        return self.terms.get((Partition(a), Partition(b)), RatFuncN.const(0))

    def drop_parts_one(self) -> "TensorPoly":
        """m_1 -> 0 on both factors (moment or free-cumulant bases)."""
        return TensorPoly._raw(
            self.basis, {(a, b): c for (a, b), c in self.terms.items() if 1 not in a and 1 not in b}
        )

    def evaluate(self, A: Spectrum, B: Spectrum):
        if A.N != B.N:
            raise ValueError(f"size mismatch: {A.N} vs {B.N}")
        p = self.to("newton_p")
        N = A.N
        exact = A.is_exact() and B.is_exact()
        pa, pb = {}, {}
        total = Fraction(0) if exact else 0.0
        for (a, b), c in p.terms.items():
            for k in a:
                if k not in pa:
                    pa[k] = A.power_sum(k)
            for k in b:
                if k not in pb:
                    pb[k] = B.power_sum(k)
            v = c.eval_at(N)
            if not exact:
                v = float(v)
            for k in a:
                v = v * pa[k]
            for k in b:
                v = v * pb[k]
            total = total + v
        return total

    def sorted_terms(self):
        def key(item):
            (a, b), _ = item
            return (a.degree + b.degree, a.degree, tuple(-x for x in a), tuple(-x for x in b))

        return sorted(self.terms.items(), key=key)

    def __str__(self):
        if not self.terms:
            return "0"
        from .symfunc import _SYMBOL

        s1, s2 = _SYMBOL[self.basis[0]], _SYMBOL[self.basis[1]]
        chunks = []
        for (a, b), c in self.sorted_terms():
            label = f"{s1}{a!r}(x){s2}{b!r}"
            chunks.append(label if c == 1 else f"({c})*{label}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"TensorPoly({self.basis}: {self})"

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "terms": [
                {"left": list(a), "right": list(b), "coeff": c.to_json()}
                for (a, b), c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "TensorPoly":
        terms = {(Partition(t["left"]), Partition(t["right"])): RatFuncN.from_json(t["coeff"]) for t in obj["terms"]}
        return cls(tuple(obj["basis"]), terms)


def _acc(out, key, c):
    v = out.get(key)
    v = c if v is None else v + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def coproduct(f: InvariantPoly, basis=None) -> TensorPoly:
    """Orbit coproduct of f, returned in (basis, basis) (default: f's basis)."""
    if f.degree > degree_cap():
        raise DegreeError(f"degree {f.degree} exceeds the symbolic cap {degree_cap()}")
    basis = f.basis if basis is None else canonical_basis(basis)
    dual = f.to("dual_newton")
    out = {}
    for g, c in dual.terms.items():
        for a, b in splittings(g):
            _acc(out, (a, b), c)
    return TensorPoly._raw(("dual_newton", "dual_newton"), out).to(basis, basis)


@lru_cache(maxsize=None)
def newton_coproduct(alpha) -> TensorPoly:
    """
    Delta p_alpha from the explicit triple-eta formula

        sum eta_{alpha alpha'} eta^{beta beta'} eta^{gamma gamma'} Pi^{alpha'}_{beta' gamma'} p_beta (x) p_gamma.
    """
    alpha = Partition(alpha)
    n = alpha.degree
    low = eta_lower(n) if n else {(alpha, alpha): _ONE}
    out = {}
    for a2 in enumerate_partitions(n):
        c0 = low[alpha, a2]
        if not c0:
            continue
        for b2, g2 in splittings(a2):
            up_b = _eta_upper(b2.degree) if b2 else None
            up_g = _eta_upper(g2.degree) if g2 else None
            for b in enumerate_partitions(b2.degree):
                cb = up_b[b2, b] if b2 else _ONE
                if not cb:
                    continue
                for g in enumerate_partitions(g2.degree):
                    cg = up_g[g2, g] if g2 else _ONE
                    if cg:
                        _acc(out, (b, g), c0 * cb * cg)
    return TensorPoly._raw(("newton_p", "newton_p"), out)


def schur_coproduct_formula(nu) -> TensorPoly:
    """Delta s_nu = sum C_nu / (C_lam C_mu) c^nu_{lam mu} s_lam (x) s_mu."""
    nu = Partition(nu)
    n = nu.degree
    out = {}
    for k in range(n + 1):
        for lam in enumerate_partitions(k):
            for mu in enumerate_partitions(n - k):
                c = littlewood_richardson(lam, mu, nu)
                if c:
                    w = content_polynomial(nu) / (content_polynomial(lam) * content_polynomial(mu))
                    out[lam, mu] = w * c
    return TensorPoly(("schur_s", "schur_s"), out)


def _falling_ratio(i, j):
    # (N-i)!(N-j)! / (N!(N-i-j)!) = prod_{k<j} (N-i-k)/(N-k)
    out = _ONE
    for k in range(j):
        out = out * (_N - i - k) / (_N - k)
    return out


def elementary_coproduct_formula(n: int) -> TensorPoly:
    """Delta e_n = sum_{i+j=n} (N-i)!(N-j)!/(N!(N-i-j)!) e_i (x) e_j."""
    out = {}
    for i in range(n + 1):
        a = Partition((i,)) if i else Partition()
        b = Partition((n - i,)) if n - i else Partition()
        out[a, b] = _falling_ratio(i, n - i)
    return TensorPoly(("elementary_e", "elementary_e"), out)


def precursor_coproduct_formula(gamma) -> TensorPoly:
    """
    Delta K_gamma = sum_{alpha u beta = gamma} w K_alpha (x) K_beta with
    w = (|Cl_a|/d(a)!)(|Cl_b|/d(b)!)(d(g)!/|Cl_g|).
    """
    from .symgroup import class_size

    gamma = Partition(gamma)

    def r(p):
        return Fraction(class_size(p), math.factorial(p.degree))

    out = {}
    for a, b in splittings(gamma):
        _acc(out, (a, b), RatFuncN.const(r(a) * r(b) / r(gamma)))
    return TensorPoly._raw(("precursor_K", "precursor_K"), out)


def orbit_average(f: InvariantPoly, A: Spectrum, B: Spectrum):
    """Exact Haar average of f(A + U B U^dag)."""
    if A.N != B.N:
        raise ValueError(f"size mismatch: {A.N} vs {B.N}")
    if f.degree > A.N:
        raise DegreeError(f"degree {f.degree} exceeds N={A.N}")
    return coproduct(f, "newton_p").evaluate(A, B)


def delta_k_central_moment(n: int, k: int, A: Spectrum | None = None, B: Spectrum | None = None):
    """
    E[(K_n(A + U B U^dag) - K_n(A) - K_n(B))^k].

    With spectra: exact scalar.  Without: TensorPoly in the free-cumulant basis
    for traceless A, B (terms with kappa_1 removed).
    """
    if n * k > degree_cap():
        raise DegreeError(f"degree {n * k} exceeds the symbolic cap {degree_cap()}")
    Kp = precursor_newton((n,))
    one = InvariantPoly.one("newton_p")
    X = -(TensorPoly.from_pair(Kp, one) + TensorPoly.from_pair(one, Kp))
    powers_X = [TensorPoly._raw(("newton_p", "newton_p"), {(Partition(), Partition()): _ONE})]
    for _ in range(k):
        powers_X.append(powers_X[-1] * X)
    total = TensorPoly._raw(("newton_p", "newton_p"), {})
    Kj = one
    for j in range(k + 1):
        if j:
            Kj = Kj * Kp
        total = total + (coproduct(Kj, "newton_p") * powers_X[k - j]).scale(math.comb(k, j))
    if A is not None or B is not None:
        if n * k > A.N:
            raise DegreeError(f"degree {n * k} exceeds N={A.N}")
        return total.evaluate(A, B)
    return total.to("moment_m").drop_parts_one().to("free_cumulant").drop_parts_one()
