"""
The graded algebra of U(N)-invariant polynomials on Hermitian matrices.

An :class:`InvariantPoly` is a finite linear combination of basis elements
indexed by partitions, with coefficients in Q(N).  The Newton basis
``p_alpha = prod Tr X^alpha_i`` is the hub: every other basis converts to and
from it one basis element at a time.

Supported basis tags

==================  =======  ==============================================
tag                 short    element
==================  =======  ==============================================
``newton_p``        ``p``    prod_i Tr X^alpha_i
``moment_m``        ``m``    N^-l(alpha) p_alpha
``schur_s``         ``s``    Schur polynomial of the eigenvalues
``elementary_e``    ``e``    prod_i e_alpha_i
``free_cumulant``   ``kappa``  prod_i kappa_alpha_i, kappa_k the free cumulant
``precursor_K``     ``K``    the finite-N precursor K_alpha
``dual_newton``     ``pstar``  the eta-dual of p_alpha
==================  =======  ==============================================
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
import os

from .exactnum import RatFuncN, as_fraction, invert_matrix
from .symgroup import (
    Partition,
    character,
    class_size,
    enumerate_partitions,
)

__all__ = [
    "InvariantPoly",
    "Spectrum",
    "DegreeError",
    "degree_cap",
    "BASES",
    "canonical_basis",
    "frobenius_to_schur",
    "schur_to_newton",
    "multiply",
    "evaluate",
    "elementary_to_newton",
    "newton_to_elementary",
    "substitute_moments",
    "set_trace_zero",
]

BASES = (
    "newton_p",
    "moment_m",
    "schur_s",
    "elementary_e",
    "free_cumulant",
    "precursor_K",
    "dual_newton",
)
_ALIASES = {
    "p": "newton_p",
    "m": "moment_m",
    "s": "schur_s",
    "schur": "schur_s",
    "e": "elementary_e",
    "kappa": "free_cumulant",
    "K": "precursor_K",
    "pstar": "dual_newton",
}
_SYMBOL = {
    "newton_p": "p",
    "moment_m": "m",
    "schur_s": "s",
    "elementary_e": "e",
    "free_cumulant": "kappa",
    "precursor_K": "K",
    "dual_newton": "pstar",
}
# bases whose products are concatenations of partitions
_MULTIPLICATIVE = {"newton_p", "moment_m", "elementary_e", "free_cumulant"}

_N = RatFuncN.gen()
_ONE = RatFuncN.const(1)


class DegreeError(ValueError):
    """A degree bound (symbolic cap, or parts <= N at fixed N) was violated."""


def degree_cap() -> int:
    """Symbolic degree cap, default 8, overridable with PRECURSOR_CAP."""
    return int(os.environ.get("PRECURSOR_CAP", "8"))


def canonical_basis(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in BASES:
        raise ValueError(f"unknown basis {name!r}; expected one of {BASES}")
    return name


def _coeff(c) -> RatFuncN:
    if isinstance(c, RatFuncN):
        return c
    if isinstance(c, str):
        return RatFuncN.const(as_fraction(c))
    return RatFuncN.const(c)


class InvariantPoly:
    """
    Linear combination of basis elements with RatFuncN coefficients.

    >>> f = InvariantPoly("p", {(2,): 1})
    >>> str(f.to("schur_s"))
    's[2] + (-1)*s[1,1]'
    """

    __slots__ = ("basis", "terms")

    def __init__(self, basis, terms=None):
        self.basis = canonical_basis(basis)
        out = {}
        for a, c in (terms or {}).items():
            c = _coeff(c)
            if c:
                out[Partition(a)] = c
        self.terms = out

    @classmethod
    def _raw(cls, basis, terms):
        obj = object.__new__(cls)
        obj.basis = basis
        obj.terms = terms
        return obj

    @classmethod
    def element(cls, basis, alpha, coeff=1) -> "InvariantPoly":
        return cls(basis, {Partition(alpha): coeff})

    @classmethod
    def one(cls, basis="newton_p") -> "InvariantPoly":
        return cls(basis, {Partition(): 1})

    @classmethod
    def zero(cls, basis="newton_p") -> "InvariantPoly":
        return cls(basis)

    # ---- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        return max((a.degree for a in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({a.degree for a in self.terms}) <= 1

    def homogeneous_part(self, n: int) -> "InvariantPoly":
        return InvariantPoly._raw(self.basis, {a: c for a, c in self.terms.items() if a.degree == n})

    def coefficient(self, alpha) -> RatFuncN:
        return self.terms.get(Partition(alpha), RatFuncN.const(0))

    def __getitem__(self, alpha):
        return self.coefficient(alpha)

    def is_zero(self) -> bool:
        return not self.terms

    def map_coefficients(self, fn) -> "InvariantPoly":
        return InvariantPoly(self.basis, {a: fn(c) for a, c in self.terms.items()})

    def limit(self) -> "InvariantPoly":
        """Coefficient-wise N -> infinity limit."""
        return self.map_coefficients(lambda c: RatFuncN.const(c.limit_at_infinity()))

    # ---- linear structure ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, InvariantPoly):
            return NotImplemented
        other = other.to(self.basis)
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a)
            s = c if s is None else s + c
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return InvariantPoly._raw(self.basis, out)

    def __neg__(self):
        return InvariantPoly._raw(self.basis, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, InvariantPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "InvariantPoly":
        c = _coeff(c)
        if not c:
            return InvariantPoly._raw(self.basis, {})
        return InvariantPoly._raw(self.basis, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, InvariantPoly):
            return multiply(self, other)
        if isinstance(other, (int, Fraction, RatFuncN)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RatFuncN)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = InvariantPoly.one(self.basis)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, InvariantPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # ---- conversions ------------------------------------------------------------

    def to(self, basis) -> "InvariantPoly":
        basis = canonical_basis(basis)
        if basis == self.basis:
            return self
        return _convert(self, basis)

    def evaluate(self, spectrum, n=None):
        return evaluate(self, spectrum)

    # ---- output --------------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (t[0].degree, tuple(-x for x in t[0]), ))

    def __str__(self):
        if not self.terms:
            return "0"
        sym = _SYMBOL[self.basis]
        chunks = []
        for a, c in self.sorted_terms():
            label = sym + repr(a)
            chunks.append(label if c == 1 else f"({c})*{label}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"InvariantPoly({self.basis}: {self})"

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "terms": [{"partition": list(a), "coeff": c.to_json()} for a, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj) -> "InvariantPoly":
        return cls(obj["basis"], {tuple(t["partition"]): RatFuncN.from_json(t["coeff"]) for t in obj["terms"]})


# ---- spectra ---------------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of an N x N matrix.  Exact when given as ints/Fractions."""

    eigenvalues: tuple

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(self.eigenvalues))

    @classmethod
    def parse(cls, text: str) -> "Spectrum":
        return cls(tuple(as_fraction(t) for t in text.split(",") if t.strip()))

    @property
    def N(self) -> int:
        return len(self.eigenvalues)

    def power_sum(self, k: int):
        if k == 0:
            return self.N
        return sum(x ** k for x in self.eigenvalues)

    def moment(self, k: int):
        return self.power_sum(k) / Fraction(self.N) if self.is_exact() else self.power_sum(k) / self.N

    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self.eigenvalues)

    def shifted(self, c) -> "Spectrum":
        return Spectrum(tuple(x + c for x in self.eigenvalues))

    def traceless(self) -> "Spectrum":
        mean = sum(self.eigenvalues) / (Fraction(self.N) if self.is_exact() else self.N)
        return self.shifted(-mean)


# ---- basis changes ---------------------------------------------------------------
#
# _to_p(basis, alpha): p-expansion of one basis element (dict partition -> coeff)
# _from_p(basis, beta): expansion of p_beta in the target basis


@lru_cache(maxsize=None)
def _schur_in_p(lam):
    n = sum(lam)
    out = {}
    for a in enumerate_partitions(n):
        chi = character(lam, a)
        if chi:
            out[a] = RatFuncN.const(Fraction(class_size(a) * chi, math.factorial(n)))
    return out


@lru_cache(maxsize=None)
def _p_in_schur(alpha):
    n = sum(alpha)
    out = {}
    for lam in enumerate_partitions(n):
        chi = character(lam, alpha)
        if chi:
            out[lam] = RatFuncN.const(chi)
    return out


def _product_expansion(factors):
    """Multiply p-expansions (dicts) by concatenation."""
    acc = {Partition(): _ONE}
    for f in factors:
        new = {}
        for a, c in acc.items():
            for b, d in f.items():
                k = a.concat(b)
                v = new.get(k)
                new[k] = c * d if v is None else v + c * d
        acc = {k: v for k, v in new.items() if v}
    return acc


@lru_cache(maxsize=None)
def _elementary_single(k):
    # e_k = sum_{alpha |- k} (-1)^{k - l} |Cl_alpha| / k! p_alpha
    return {
        a: RatFuncN.const(Fraction((-1) ** (k - len(a)) * class_size(a), math.factorial(k)))
        for a in enumerate_partitions(k)
    }


@lru_cache(maxsize=None)
def _free_cumulant_single(n):
    """kappa_n in the moment basis (signed coefficients of the large-N formula)."""
    out = {}
    for b in enumerate_partitions(n):
        ell = len(b)
        denom = math.factorial(n - 1)
        for m in Partition(b).multiplicities().values():
            denom *= math.factorial(m)
        out[b] = RatFuncN.const(Fraction((-1) ** (1 + ell) * math.factorial(n + ell - 2), denom))
    return out


@lru_cache(maxsize=None)
def _kreweras_single(n):
    """m_n in the free-cumulant basis: NC(alpha) = n!/((n+1-l)! prod alpha_hat!)."""
    out = {}
    for a in enumerate_partitions(n):
        denom = math.factorial(n + 1 - len(a))
        for m in Partition(a).multiplicities().values():
            denom *= math.factorial(m)
        out[a] = RatFuncN.const(Fraction(math.factorial(n), denom))
    return out


def _moment_to_p(expansion):
    return {a: c * _N ** (-len(a)) for a, c in expansion.items()}


@lru_cache(maxsize=None)
def _to_p(basis, alpha):
    if basis == "newton_p":
        return {alpha: _ONE}
    if basis == "moment_m":
        return {alpha: _N ** (-len(alpha))}
    if basis == "schur_s":
        return _schur_in_p(alpha)
    if basis == "elementary_e":
        return _product_expansion([_elementary_single(k) for k in alpha])
    if basis == "free_cumulant":
        return _product_expansion([_moment_to_p(_free_cumulant_single(k)) for k in alpha])
    if basis == "precursor_K":
        from .hciz import precursor_newton

        return precursor_newton(alpha).terms
    if basis == "dual_newton":
        from .hciz import dual_newton

        return dual_newton(alpha).terms
    raise ValueError(basis)


@lru_cache(maxsize=None)
def _elementary_inverse(n):
    parts = enumerate_partitions(n)
    idx = {a: i for i, a in enumerate(parts)}
    rows = []
    for lam in parts:
        row = [Fraction(0)] * len(parts)
        for b, c in _to_p("elementary_e", lam).items():
            row[idx[b]] = c.constant_value()
        rows.append(row)
    inv = invert_matrix(rows)
    # p_beta = sum_lam inv[beta][lam] e_lam
    return {
        b: {lam: RatFuncN.const(inv[i][j]) for j, lam in enumerate(parts) if inv[i][j]}
        for i, b in enumerate(parts)
    }


@lru_cache(maxsize=None)
def _from_p(basis, beta):
    if basis == "newton_p":
        return {beta: _ONE}
    if basis == "moment_m":
        return {beta: _N ** len(beta)}
    if basis == "schur_s":
        return _p_in_schur(beta)
    if basis == "elementary_e":
        return _elementary_inverse(sum(beta))[beta]
    if basis == "free_cumulant":
        # p_beta = N^l prod m_{beta_i}, m_k = sum NC(alpha) kappa_alpha
        prod = _product_expansion([_kreweras_single(k) for k in beta])
        return {a: c * _N ** len(beta) for a, c in prod.items()}
    if basis == "precursor_K":
        from .hciz import newton_in_precursors

        return newton_in_precursors(beta)
    if basis == "dual_newton":
        from .hciz import newton_in_dual

        return newton_in_dual(beta)
    raise ValueError(basis)


def _accumulate(out, expansion, c):
    for b, d in expansion.items():
        v = out.get(b)
        v = c * d if v is None else v + c * d
        if v:
            out[b] = v
        else:
            out.pop(b, None)


def _convert(f: InvariantPoly, target: str) -> InvariantPoly:
    p = {}
    if f.basis == "newton_p":
        p = dict(f.terms)
    else:
        for a, c in f.terms.items():
            _accumulate(p, _to_p(f.basis, a), c)
    if target == "newton_p":
        return InvariantPoly._raw(target, p)
    out = {}
    for b, c in p.items():
        _accumulate(out, _from_p(target, b), c)
    return InvariantPoly._raw(target, out)


def frobenius_to_schur(f: InvariantPoly) -> InvariantPoly:
    return f.to("schur_s")


def schur_to_newton(f: InvariantPoly) -> InvariantPoly:
    return f.to("newton_p")


def elementary_to_newton(k: int, N: int | None = None) -> InvariantPoly:
    if N is not None and k > N:
        raise DegreeError(f"e_{k} vanishes identically for N={N}")
    return InvariantPoly.element("elementary_e", (k,)).to("newton_p")


def newton_to_elementary(k: int, N: int | None = None) -> InvariantPoly:
    if N is not None and k > N:
        raise DegreeError(f"p_{k} with k > N={N} is outside the e-basis regime")
    return InvariantPoly.element("newton_p", (k,)).to("elementary_e")


# ---- products ---------------------------------------------------------------------


def multiply(f: InvariantPoly, g: InvariantPoly, cap: int | None = None) -> InvariantPoly:
    """Product in f's basis; concatenation of partitions for multiplicative bases."""
    cap = degree_cap() if cap is None else cap
    if f.degree + g.degree > cap:
        raise DegreeError(f"product degree {f.degree + g.degree} exceeds cap {cap}")
    basis = f.basis
    work = basis if basis in _MULTIPLICATIVE else "newton_p"
    a_terms = f.to(work).terms
    b_terms = g.to(work).terms
    out = {}
    for a, c in a_terms.items():
        for b, d in b_terms.items():
            k = a.concat(b)
            v = out.get(k)
            v = c * d if v is None else v + c * d
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    res = InvariantPoly._raw(work, out)
    return res.to(basis)


# ---- evaluation --------------------------------------------------------------------


def evaluate(f: InvariantPoly, spectrum: Spectrum):
    """
    Value of f on a matrix with the given spectrum.

    Coefficients are evaluated exactly at N = len(spectrum); power sums use the
    spectrum's own number type, so Fractions give exact results.
    """
    N = spectrum.N
    if f.basis in ("newton_p", "moment_m"):
        for a in f.terms:
            if a and a[0] > N:
                raise DegreeError(f"{_SYMBOL[f.basis]}{a!r} has a part larger than N={N}")
    p = f.to("newton_p")
    exact = spectrum.is_exact()
    cache = {}

    def ps(k):
        if k not in cache:
            cache[k] = spectrum.power_sum(k)
        return cache[k]

    total = Fraction(0) if exact else 0.0
    for a, c in p.terms.items():
        v = c.eval_at(N)
        if not exact:
            v = float(v)
        for k in a:
            v = v * ps(k)
        total = total + v
    return total


# ---- moment-basis substitutions -------------------------------------------------


def substitute_moments(f: InvariantPoly, images: dict) -> InvariantPoly:
    """
    Ring homomorphism m_k -> images[k] applied to f (moment basis).

    ``images`` maps k to an InvariantPoly or scalar; missing keys are fixed.
    """
    f = f.to("moment_m")
    cap = 10 ** 6
    img = {}
    for k, v in images.items():
        img[k] = v.to("moment_m") if isinstance(v, InvariantPoly) else InvariantPoly("moment_m", {(): v})
    out = InvariantPoly.zero("moment_m")
    for a, c in f.terms.items():
        term = InvariantPoly.one("moment_m")
        for k in a:
            factor = img.get(k, InvariantPoly.element("moment_m", (k,)))
            term = multiply(term, factor, cap=cap)
        out = out + term.scale(c)
    return out


def set_trace_zero(f: InvariantPoly) -> InvariantPoly:
    """Restrict to traceless arguments: m_1 -> 0 (equivalently kappa_1 -> 0)."""
    basis = f.basis if f.basis in ("moment_m", "free_cumulant") else "moment_m"
    g = f.to(basis)
    return InvariantPoly._raw(basis, {a: c for a, c in g.terms.items() if 1 not in a})
