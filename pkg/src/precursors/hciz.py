"""
Weingarten calculus and the finite-N precursors K_alpha.

K_alpha is defined by the HCIZ expansion

    K_alpha = n! / (N^l |Cl_alpha|) [z^n p_alpha(B)] Z(A, B; z),

and is available through four independent routes (``schur``, ``newton``,
``weingarten`` and, for single rows, ``hook``).  Results are InvariantPoly in
the moment basis.  The ``newton`` route is the cached production table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .exactnum import RatFuncN, invert_matrix
from .symfunc import InvariantPoly, Spectrum, degree_cap, DegreeError, substitute_moments
from .symgroup import (
    Partition,
    Permutation,
    all_permutations,
    character,
    class_representative,
    class_size,
    content_polynomial,
    enumerate_partitions,
    genus,
    hook_product,
    _compose0,
    _cycle_type0,
    _inverse0,
)

__all__ = [
    "weingarten",
    "precursor",
    "precursor_newton",
    "precursor_table",
    "EtaPairing",
    "eta_matrices",
    "eta_lower",
    "dual_newton",
    "free_cumulant",
    "kreweras_moment",
    "nc_count",
    "moment_from_precursors",
    "moment_in_precursors",
    "singleton_reduce",
    "shift_decompose",
    "ShiftTerm",
    "a11_power_poly",
    "cyclic_product_poly",
    "cyclic_product_weingarten",
    "generating_function_coefficients",
    "ROUTES",
]

ROUTES = ("newton", "schur", "weingarten", "hook")

_N = RatFuncN.gen()
_ZERO = RatFuncN.const(0)


def _check_degree(n):
    if n > degree_cap():
        raise DegreeError(f"degree {n} exceeds the symbolic cap {degree_cap()} (set PRECURSOR_CAP)")


@lru_cache(maxsize=None)
def _inv_content(lam) -> RatFuncN:
    return content_polynomial(lam).inverse()


@lru_cache(maxsize=None)
def weingarten(alpha) -> RatFuncN:
    """Wg(alpha) = N^-n sum_lam chi_lam(alpha) / (H_lam C_lam)."""
    alpha = Partition(alpha)
    n = alpha.degree
    s = _ZERO
    for lam in enumerate_partitions(n):
        chi = character(lam, alpha)
        if chi:
            s = s + _inv_content(lam) * Fraction(chi, hook_product(lam))
    return s * _N ** (-n)


@lru_cache(maxsize=None)
def _t_matrix(n):
    """T[alpha, beta] = sum_lam chi_lam(alpha) chi_lam(beta) / C_lam."""
    parts = enumerate_partitions(n)
    chi = {(lam, a): character(lam, a) for lam in parts for a in parts}
    out = {}
    for i, a in enumerate(parts):
        for b in parts[i:]:
            s = _ZERO
            for lam in parts:
                w = chi[lam, a] * chi[lam, b]
                if w:
                    s = s + _inv_content(lam) * w
            out[a, b] = s
            out[b, a] = s
    return out


# ---- the four routes --------------------------------------------------------------


def _route_newton(alpha):
    n = alpha.degree
    t = _t_matrix(n)
    scale = _N ** (-len(alpha))
    terms = {}
    for b in enumerate_partitions(n):
        c = t[alpha, b]
        if c:
            terms[b] = c * scale * Fraction(class_size(b), math.factorial(n))
    return InvariantPoly("newton_p", terms)


def _route_schur(alpha):
    n = alpha.degree
    terms = {}
    for lam in enumerate_partitions(n):
        chi = character(lam, alpha)
        if chi:
            terms[lam] = _inv_content(lam) * chi * _N ** (-len(alpha))
    return InvariantPoly("schur_s", terms).to("newton_p")


def _route_weingarten(alpha):
    n = alpha.degree
    sigma = class_representative(alpha).images
    acc = {}
    for tau in all_permutations(n):
        t = tau.images
        key = (_cycle_type0(_compose0(sigma, _inverse0(t))), _cycle_type0(t))
        acc[key] = acc.get(key, 0) + 1
    terms = {}
    for (wt, b), cnt in acc.items():
        terms[b] = terms.get(b, _ZERO) + weingarten(wt) * cnt
    scale = _N ** (n - len(alpha))
    return InvariantPoly("newton_p", {b: c * scale for b, c in terms.items()})


def _hook_content(n, t) -> RatFuncN:
    # C of the hook [n-t, 1^t]: N^-n (N+n-t-1)!/(N-t-1)! = N^-n prod_{c=-t}^{n-t-1} (N+c)
    out = RatFuncN.const(1)
    for c in range(-t, n - t):
        out = out * (_N + c)
    return out * _N ** (-n)


def _route_hook(alpha):
    if len(alpha) != 1:
        raise ValueError(f"hook route only applies to single-row alpha, got {alpha!r}")
    n = alpha[0]
    terms = {}
    for t in range(n):
        lam = Partition((n - t,) + (1,) * t)
        terms[lam] = _hook_content(n, t).inverse() * ((-1) ** t) / _N
    return InvariantPoly("schur_s", terms).to("newton_p")


_ROUTE_FN = {
    "newton": _route_newton,
    "schur": _route_schur,
    "weingarten": _route_weingarten,
    "hook": _route_hook,
}


@lru_cache(maxsize=None)
def _precursor_p(alpha, route):
    return _ROUTE_FN[route](alpha)


def precursor(alpha, route: str = "newton") -> InvariantPoly:
    """K_alpha in the moment basis, computed through the requested route."""
    if route not in _ROUTE_FN:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    alpha = Partition(alpha)
    if not alpha:
        return InvariantPoly.one("moment_m")
    _check_degree(alpha.degree)
    return _precursor_p(alpha, route).to("moment_m")


def precursor_newton(alpha) -> InvariantPoly:
    """K_alpha in the Newton basis (production route)."""
    alpha = Partition(alpha)
    if not alpha:
        return InvariantPoly.one("newton_p")
    _check_degree(alpha.degree)
    return _precursor_p(alpha, "newton")


def precursor_table(n: int) -> dict:
    return {a: precursor(a) for a in enumerate_partitions(n)}


# ---- eta pairing ------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaPairing:
    """eta^{ab} (upper) and its inverse eta_{ab} (lower) on partitions of n."""

    n: int
    partitions: tuple
    upper: dict
    lower: dict

    def matrix(self, which="upper"):
        d = self.upper if which == "upper" else self.lower
        return [[d[a, b] for b in self.partitions] for a in self.partitions]


@lru_cache(maxsize=None)
def _eta_upper(n):
    t = _t_matrix(n)
    f2 = math.factorial(n) ** 2
    return {
        (a, b): v * Fraction(class_size(a) * class_size(b), f2) for (a, b), v in t.items()
    }


@lru_cache(maxsize=None)
def eta_lower(n):
    """eta_{ab} = sum_lam C_lam chi_lam(a) chi_lam(b) (closed form of the inverse)."""
    parts = enumerate_partitions(n)
    out = {}
    for a in parts:
        for b in parts:
            s = _ZERO
            for lam in parts:
                w = character(lam, a) * character(lam, b)
                if w:
                    s = s + content_polynomial(lam) * w
            out[a, b] = s
    return out


@lru_cache(maxsize=None)
def eta_matrices(n: int) -> EtaPairing:
    """Pairing matrices; the lower one by exact Gauss-Jordan inversion."""
    _check_degree(n)
    parts = tuple(enumerate_partitions(n))
    up = _eta_upper(n)
    inv = invert_matrix([[up[a, b] for b in parts] for a in parts])
    low = {(a, b): inv[i][j] for i, a in enumerate(parts) for j, b in enumerate(parts)}
    return EtaPairing(n, parts, up, low)


@lru_cache(maxsize=None)
def _dual_newton_p(alpha):
    up = _eta_upper(alpha.degree)
    return InvariantPoly(
        "newton_p", {b: up[alpha, b] for b in enumerate_partitions(alpha.degree) if up[alpha, b]}
    )


def dual_newton(alpha) -> InvariantPoly:
    """p*^alpha = sum_beta eta^{alpha beta} p_beta (Newton basis)."""
    alpha = Partition(alpha)
    if not alpha:
        return InvariantPoly.one("newton_p")
    _check_degree(alpha.degree)
    return _dual_newton_p(alpha)


@lru_cache(maxsize=None)
def newton_in_dual(beta) -> dict:
    """p_beta = sum_alpha eta_{beta alpha} p*^alpha."""
    beta = Partition(beta)
    if not beta:
        return {beta: RatFuncN.const(1)}
    low = eta_lower(beta.degree)
    return {a: low[beta, a] for a in enumerate_partitions(beta.degree) if low[beta, a]}


@lru_cache(maxsize=None)
def newton_in_precursors(beta) -> dict:
    """p_beta = sum_alpha eta_{beta alpha} N^l(alpha) |Cl_alpha| / n! K_alpha."""
    beta = Partition(beta)
    if not beta:
        return {beta: RatFuncN.const(1)}
    n = beta.degree
    out = {}
    for a, c in newton_in_dual(beta).items():
        out[a] = c * _N ** len(a) * Fraction(class_size(a), math.factorial(n))
    return out


# ---- free cumulants --------------------------------------------------------------------


def free_cumulant(n: int) -> InvariantPoly:
    """kappa_n as a moment polynomial."""
    return InvariantPoly.element("free_cumulant", (n,)).to("moment_m")


def kreweras_moment(n: int) -> InvariantPoly:
    """m_n in the free-cumulant basis, coefficients NC(alpha)."""
    return InvariantPoly.element("moment_m", (n,)).to("free_cumulant")


@lru_cache(maxsize=None)
def genus_distribution(alpha) -> dict:
    """{g: #{sigma in Cl_alpha : genus(sigma) = g}} by exhaustive enumeration."""
    alpha = Partition(alpha)
    out = {}
    for s in all_permutations(alpha.degree):
        if s.cycle_type() == alpha:
            g = genus(s)
            out[g] = out.get(g, 0) + 1
    return dict(sorted(out.items()))


def nc_count(alpha) -> int:
    """Number of non-crossing set partitions of block type alpha (genus-0 count)."""
    return genus_distribution(alpha).get(0, 0)


# ---- moments from precursors ---------------------------------------------------------------


@lru_cache(maxsize=None)
def moment_in_precursors(beta) -> dict:
    """m_beta = sum_alpha coeff(alpha) K_alpha."""
    beta = Partition(beta)
    return {
        a: c * _N ** (-len(beta)) for a, c in newton_in_precursors(beta).items()
    }


def moment_from_precursors(n: int) -> dict:
    """Coefficients of m_n in the precursor basis."""
    _check_degree(n)
    return moment_in_precursors(Partition((n,)))


# ---- shift identities ---------------------------------------------------------------------


def singleton_reduce(alpha) -> dict:
    """
    Express K_alpha on a traceless argument through singleton-free K_beta.

    Uses K_{(a, 1)} = -N^-2 sum_i a_i K_{(.. a_i + 1 ..)} recursively.
    """
    alpha = Partition(alpha)
    if 1 not in alpha:
        raise ValueError(f"{alpha!r} has no part equal to 1")
    out = {}
    stack = [(alpha, RatFuncN.const(1))]
    while stack:
        a, c = stack.pop()
        if 1 not in a:
            v = out.get(a, _ZERO) + c
            if v:
                out[a] = v
            else:
                out.pop(a, None)
            continue
        rest = list(a.remove_part(1))
        if not rest:
            continue  # K_1 of a traceless matrix vanishes
        f = c * (-1) / _N ** 2
        for i in range(len(rest)):
            bumped = rest[:i] + [rest[i] + 1] + rest[i + 1:]
            stack.append((Partition(bumped), f * rest[i]))
    return out


@dataclass(frozen=True)
class ShiftTerm:
    """coeff * m_1(A)^power * K_partition(A_hat)."""

    power: int
    coeff: int
    partition: Partition


def shift_decompose(alpha) -> list:
    """K_alpha(A) = sum over terms of coeff m_1^r K_beta(A - m_1 I)."""
    alpha = Partition(alpha)
    ones = alpha.count(1)
    sf = alpha.without_ones()
    return [
        ShiftTerm(r, math.comb(ones, r), sf.concat((1,) * (ones - r)))
        for r in range(ones + 1)
    ]


def traceless_part_substitution(f: InvariantPoly) -> InvariantPoly:
    """Rewrite f(A - m_1 I) as a moment polynomial in the moments of A."""
    images = {}
    for k in range(1, max(f.degree, 1) + 1):
        terms = {}
        for r in range(k + 1):
            key = Partition((k - r,) + (1,) * r) if k > r else Partition((1,) * r)
            terms[key] = terms.get(key, 0) + math.comb(k, r) * (-1) ** r
        images[k] = InvariantPoly("moment_m", terms)
    return substitute_moments(f, images)


# ---- A11 powers and cyclic products ---------------------------------------------------------


def a11_power_poly(n: int):
    """
    Three forms of the Haar average of (U A U^dag)_11^n, moment basis.

    Returns (schur_form, precursor_form, newton_form).
    """
    _check_degree(n)
    rising = RatFuncN.const(1)
    for j in range(n):
        rising = rising * (_N + j)
    schur_form = InvariantPoly("schur_s", {(n,): rising.inverse() * math.factorial(n)})
    k_form = InvariantPoly.zero("moment_m")
    for a in enumerate_partitions(n):
        k_form = k_form + precursor(a).scale(_N ** (len(a) - n) * class_size(a))
    p_form = InvariantPoly("newton_p", {a: rising.inverse() * class_size(a) for a in enumerate_partitions(n)})
    return schur_form.to("moment_m"), k_form, p_form.to("moment_m")


def cyclic_product_poly(sigma: Permutation) -> InvariantPoly:
    """Haar average of prod_i (U A U^dag)_{i, sigma(i)} as N^{l-n} K_[sigma]."""
    a = sigma.cycle_type()
    return precursor(a).scale(_N ** (len(a) - sigma.n))


def cyclic_product_weingarten(sigma: Permutation) -> InvariantPoly:
    """Same average as sum_tau Wg([sigma tau^-1]) p_[tau]."""
    s = sigma.images
    terms = {}
    for tau in all_permutations(sigma.n):
        t = tau.images
        w = weingarten(_cycle_type0(_compose0(s, _inverse0(t))))
        b = _cycle_type0(t)
        terms[b] = terms.get(b, _ZERO) + w
    return InvariantPoly("newton_p", terms).to("moment_m")


# ---- generating function ------------------------------------------------------------------


def _hook_schur_values(spectrum: Spectrum, n: int) -> list:
    """[s_(n-t, 1^t)(A) for t = 0..n-1] via s_(a,1^b) = sum_k (-1)^k h_(a+k) e_(b-k)."""
    xs = spectrum.eigenvalues
    e = [Fraction(1)] + [Fraction(0)] * n
    for x in xs:
        for j in range(n, 0, -1):
            e[j] += x * e[j - 1]
    h = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        h[k] = sum((-1) ** (j - 1) * e[j] * h[k - j] for j in range(1, k + 1))
    out = []
    for t in range(n):
        a = n - t
        out.append(sum((-1) ** k * h[a + k] * e[t - k] for k in range(t + 1)))
    return out


def generating_function_coefficients(spectrum: Spectrum, order: int) -> list:
    """
    Exact Taylor coefficients c_0..c_order of (1/N) E_U[exp(N Tr A U^dag) Tr (1 - xU)^-1].

    For n <= N, c_n = K_n(A).  For n > N the hook sum keeps only hooks of
    length <= N, the ones whose Schur polynomial survives at size N.
    """
    N = spectrum.N
    out = [Fraction(1)]
    for n in range(1, order + 1):
        s = Fraction(0)
        hooks = _hook_schur_values(spectrum, n)
        for t in range(min(n, N)):
            c = _hook_content(n, t).eval_at(N)
            s += (-1) ** t * hooks[t] / c
        out.append(s / N)
    return out
