"""
Finite free convolution of characteristic polynomials, and the analogous
"convolution" obtained by adding precursors K_n.

The MSS convolution averages characteristic polynomials over the orbit and
stays real-rooted.  Solving K_n(C) = K_n(A) + K_n(B) for n = 1..N gives a
polynomial too, but its roots need not be real, and when real they need not
be compatible with A + U B U^dag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from .exactnum import as_fraction
from .hciz import precursor
from .symfunc import Spectrum

__all__ = [
    "CharPoly",
    "mss_convolve",
    "k_convolve",
    "ap_f4",
    "realness_check",
    "weyl_check",
    "find_weyl_violations",
    "realness_survey",
    "WEYL_FIXTURE",
]


def _elementary_from_spectrum(xs):
    e = [Fraction(1) if all(isinstance(x, (int, Fraction)) for x in xs) else 1.0]
    e += [0 * e[0]] * len(xs)
    for x in xs:
        for j in range(len(xs), 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e


@dataclass(frozen=True)
class CharPoly:
    """
    Monic P(x) = sum_k (-1)^k e_k x^(N-k), stored as e_0 = 1, e_1, ..., e_N.
    """

    N: int
    e: tuple

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(self.e))
        if len(self.e) != self.N + 1:
            raise ValueError("need N+1 coefficients e_0..e_N")
        if self.e[0] != 1:
            raise ValueError("characteristic polynomial must be monic (e_0 = 1)")

    @classmethod
    def from_spectrum(cls, spectrum) -> "CharPoly":
        xs = spectrum.eigenvalues if isinstance(spectrum, Spectrum) else tuple(spectrum)
        return cls(len(xs), _elementary_from_spectrum(xs))

    def coefficients(self) -> list:
        """Coefficients in descending powers of x."""
        return [(-1) ** k * c for k, c in enumerate(self.e)]

    def __call__(self, x):
        acc = 0
        for c in self.coefficients():
            acc = acc * x + c
        return acc

    def roots(self) -> np.ndarray:
        """Companion-matrix eigenvalues, sorted by descending real part."""
        if self.N == 0:
            return np.array([], dtype=complex)
        r = np.roots([float(c) for c in self.coefficients()]).astype(complex)
        return r[np.lexsort((-r.imag, -r.real))]


def mss_convolve(pa: CharPoly, pb: CharPoly) -> CharPoly:
    """
    e_n(C) = sum_{i+j=n} (N-i)!(N-j)! / (N!(N-i-j)!) e_i(A) e_j(B).
    """
    if pa.N != pb.N:
        raise ValueError("characteristic polynomials must have the same degree")
    N = pa.N
    f = math.factorial
    out = []
    for n in range(N + 1):
        s = 0
        for i in range(n + 1):
            j = n - i
            w = Fraction(f(N - i) * f(N - j), f(N) * f(N - i - j))
            s = s + w * pa.e[i] * pb.e[j]
        out.append(s)
    return CharPoly(N, out)


@lru_cache(maxsize=None)
def _k_in_moments(n: int, N: int):
    """K_n in the moment basis with coefficients evaluated at N: (lead, rest)."""
    k = precursor((n,)).to("moment_m")
    lead = Fraction(k.coefficient((n,)).eval_at(N))
    rest = [(a, Fraction(c.eval_at(N))) for a, c in k.terms.items() if a != (n,)]
    return lead, rest


def _moments_from_targets(targets: list, N: int) -> list:
    """Solve K_n = targets[n-1], n = 1..len(targets), for moments m_1.. (exact)."""
    m = [Fraction(1)]
    for n in range(1, len(targets) + 1):
        lead, rest = _k_in_moments(n, N)
        acc = Fraction(0)
        for a, c in rest:
            v = c
            for part in a:
                v *= m[part]
            acc += v
        m.append((targets[n - 1] - acc) / lead)
    return m


def _elementary_from_power_sums(p: list, N: int) -> list:
    # Newton identities: k e_k = sum_{i=1..k} (-1)^(i-1) e_(k-i) p_i
    e = [Fraction(1)]
    for k in range(1, N + 1):
        e.append(sum((-1) ** (i - 1) * e[k - i] * p[i] for i in range(1, k + 1)) / k)
    return e


def _as_exact(s: Spectrum) -> Spectrum:
    return s if s.is_exact() else Spectrum(tuple(as_fraction(x) for x in s.eigenvalues))


def k_convolve(A: Spectrum, B: Spectrum, return_poly: bool = False):
    """
    Roots of the polynomial whose precursors are K_n(A) + K_n(B), n = 1..N.

    The moments of C are found one degree at a time (K_n is triangular in the
    moments with a nonzero leading coefficient), converted to e_k with the
    Newton identities, and the roots taken from the companion matrix.  All
    steps before root-finding are exact.
    """
    if A.N != B.N:
        raise ValueError("spectra must have equal length")
    N = A.N
    if N > 8:
        raise ValueError("k_convolve supports N <= 8")
    A, B = _as_exact(A), _as_exact(B)
    targets = [precursor((n,)).evaluate(A) + precursor((n,)).evaluate(B) for n in range(1, N + 1)]
    m = _moments_from_targets(targets, N)
    p = [N * mk for mk in m]
    poly = CharPoly(N, _elementary_from_power_sums(p, N))
    roots = poly.roots()
    return (roots, poly) if return_poly else roots


def ap_f4(A: Spectrum):
    """f_4 = m_4 - (2N-3)/(N-1) m_2^2 for a traceless spectrum."""
    N = A.N
    if A.power_sum(1) != 0 and (A.is_exact() or abs(A.power_sum(1)) > 1e-12):
        raise ValueError("f_4 is defined here for traceless spectra (m_1 = 0)")
    c = Fraction(2 * N - 3, N - 1)
    if not A.is_exact():
        c = float(c)
    return A.moment(4) - c * A.moment(2) ** 2


def realness_check(roots, tol: float = 1e-9) -> bool:
    """True when every root is real up to tol (relative to max(1, |root|))."""
    r = np.asarray(roots, dtype=complex)
    return bool(np.all(np.abs(r.imag) <= tol * np.maximum(1.0, np.abs(r))))


def weyl_check(A, B, C, tol: float = 1e-9) -> bool:
    """
    Weyl inequalities for C = A + U B U^dag, decreasing order, 1-based:
    c_(i+j-1) <= a_i + b_j and c_(i+j-N) >= a_i + b_j, plus tr C = tr A + tr B.
    """
    a = sorted((float(x) for x in _vals(A)), reverse=True)
    b = sorted((float(x) for x in _vals(B)), reverse=True)
    cr = np.asarray(_vals(C), dtype=complex)
    if not realness_check(cr, tol):
        raise ValueError("weyl_check needs a real spectrum C")
    c = sorted(cr.real.tolist(), reverse=True)
    N = len(a)
    if len(b) != N or len(c) != N:
        raise ValueError("spectra must have equal length")
    scale = tol * max(1.0, max(abs(x) for x in a + b + c))
    if abs(sum(c) - sum(a) - sum(b)) > scale * N:
        return False
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            k = i + j - 1
            if k <= N and c[k - 1] > a[i - 1] + b[j - 1] + scale:
                return False
            k = i + j - N
            if k >= 1 and c[k - 1] < a[i - 1] + b[j - 1] - scale:
                return False
    return True


def _vals(s):
    return s.eigenvalues if isinstance(s, Spectrum) else tuple(s)


# A real k_convolve output violating Weyl at N = 4, found by find_weyl_violations
# with its default seed (0) and kept as a regression fixture: (A, B).
WEYL_FIXTURE = ((-4, -5, -5, 3), (6, 6, 2, 6))


def find_weyl_violations(N: int = 4, trials: int = 2000, rng=None, lo: int = -6, hi: int = 6, stop_after: int = 1):
    """
    Random search over integer spectra for real k_convolve outputs that fail
    weyl_check.  Returns a list of (A, B, roots).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    found = []
    for _ in range(trials):
        A = Spectrum(tuple(int(v) for v in rng.integers(lo, hi + 1, N)))
        B = Spectrum(tuple(int(v) for v in rng.integers(lo, hi + 1, N)))
        roots = k_convolve(A, B)
        if not realness_check(roots, 1e-9):
            continue
        if not weyl_check(A, B, roots.real):
            found.append((A, B, roots.real))
            if len(found) >= stop_after:
                break
    return found


def realness_survey(convolve, N: int, trials: int, rng, lo: float = -1.0, hi: float = 1.0) -> float:
    """
    Fraction of random real spectra (A, B) for which ``convolve(A, B)`` returns
    real roots.  ``convolve`` maps two Spectrum objects to an array of roots, so
    any candidate convolution can be screened the same way.
    """
    ok = 0
    for _ in range(trials):
        A = Spectrum(tuple(float(v) for v in rng.uniform(lo, hi, N)))
        B = Spectrum(tuple(float(v) for v in rng.uniform(lo, hi, N)))
        if realness_check(convolve(A, B), 1e-7):
            ok += 1
    return ok / trials
