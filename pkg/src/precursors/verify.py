"""
Self-check suites used by ``precursors verify``.

Each suite returns a list of ``Check`` records; a suite passes when every
record does.  ``fast`` shrinks degrees and sample sizes so that running all
suites stays well under a few minutes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coproduct import (
    TensorPoly,
    coproduct,
    elementary_coproduct_formula,
    schur_coproduct_formula,
)
from .freeconv import CharPoly, k_convolve, mss_convolve
from .hciz import dual_newton, genus_distribution, moment_in_precursors, precursor
from .hurwitz import STRICT, MONOTONE, generating_matrix, h0_closed_form, hurwitz_count
from .measures import cgl_cumulants, convolve, gue_functional, averaged_precursor, symbolic_functional
from .montecarlo import ExperimentConfig, horn_experiment
from .symfunc import InvariantPoly, Spectrum
from .symgroup import enumerate_partitions, partitions_up_to
from .exactnum import RatFuncN

__all__ = ["Check", "SUITES", "run_suite", "random_spectrum"]


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "detail": self.detail}


def random_spectrum(N, rng, lo=-4, hi=4, den=3) -> Spectrum:
    """Exact rational spectrum with small numerators and denominators."""
    return Spectrum(tuple(Fraction(int(rng.integers(lo * den, hi * den + 1)), den) for _ in range(N)))


def _nonempty(top):
    return [a for a in partitions_up_to(top) if a]


def suite_additivity(N=4, seed=1, fast=False, samples=None):
    rng = np.random.default_rng(seed)
    A, B = random_spectrum(N, rng), random_spectrum(N, rng)
    out = []
    for n in range(1, N + 1):
        f = precursor((n,))
        avg = coproduct(f, "newton_p").evaluate(A, B)
        ok = avg == f.evaluate(A) + f.evaluate(B)
        out.append(Check(f"exact E[K{n}(A+UBU')] = K{n}(A)+K{n}(B)", ok, f"N={N}"))
    samples = samples or (20_000 if fast else 200_000)
    for n in range(2, N + 1):
        s = horn_experiment(ExperimentConfig(N, samples, seed, f"dK{n}", A, B))
        z = s.mean / s.se if s.se else 0.0
        out.append(Check(f"MC mean dK{n} within 4 SE of 0", abs(z) < 4, f"z={z:.2f}, samples={samples}"))
    return out


def suite_routes(N=None, seed=None, fast=False, **_):
    top = 5 if fast else 6
    out = []
    for d in range(1, top + 1):
        for a in enumerate_partitions(d):
            ref = precursor(a, "newton")
            for r in ("schur", "weingarten"):
                out.append(Check(f"route {r} = newton for K{a!r}", precursor(a, r) == ref))
    for n in range(1, (6 if fast else 8) + 1):
        out.append(Check(f"route hook = newton for K[{n}]", precursor((n,), "hook") == precursor((n,), "newton")))
    return out


def suite_hurwitz(fast=False, **_):
    top = 4 if fast else 5
    out = []
    for n in range(1, top + 1):
        for b in enumerate_partitions(n):
            g0 = hurwitz_count(alpha=(n,), beta=b, g=0)
            out.append(Check(f"H0([{n}],{b!r}) closed form", g0 == h0_closed_form(n, b), str(g0)))
    for n in range(1, top + 1):
        parts = enumerate_partitions(n)
        S, M = generating_matrix(n, STRICT), generating_matrix(n, MONOTONE)
        ok = True
        for a in parts:
            for b in parts:
                s = RatFuncN.const(0)
                for c in parts:
                    s = s + S[a, c] * M[c, b]
                ok &= s == RatFuncN.const(1 if a == b else 0)
        out.append(Check(f"strict x monotone = I (n={n})", ok))
    return out


def _triple(f, basis="newton_p"):
    # (Delta x 1) Delta f and (1 x Delta) Delta f as dicts over (a, b, c)
    d = coproduct(f, basis).terms
    left, right = {}, {}
    for (a, b), c in d.items():
        for (x, y), e in coproduct(InvariantPoly.element(basis, a), basis).terms.items():
            k = (x, y, b)
            left[k] = left.get(k, RatFuncN.const(0)) + c * e
        for (x, y), e in coproduct(InvariantPoly.element(basis, b), basis).terms.items():
            k = (a, x, y)
            right[k] = right.get(k, RatFuncN.const(0)) + c * e
    clean = lambda m: {k: v for k, v in m.items() if v}
    return clean(left), clean(right)


def suite_coproduct(fast=False, **_):
    top = 4 if fast else 5
    out = []
    for a in _nonempty(top):
        for basis in ("precursor_K", "schur_s"):
            f = InvariantPoly.element(basis, a)
            d = coproduct(f)
            out.append(Check(f"cocommutative {basis}{a!r}", d == d.swap()))
        l, r = _triple(InvariantPoly.element("newton_p", a))
        out.append(Check(f"coassociative p{a!r}", l == r))
    for n in range(1, (6 if fast else 8) + 1):
        f = dual_newton((n,))
        one = InvariantPoly.one("dual_newton")
        prim = TensorPoly.from_pair(f, one) + TensorPoly.from_pair(one, f)
        out.append(Check(f"primitive p*[{n}]", coproduct(f, "dual_newton") == prim))
    for a in _nonempty(top):
        out.append(Check(f"schur coproduct s{a!r}", coproduct(InvariantPoly.element("schur_s", a)) == schur_coproduct_formula(a)))
    for n in range(1, (4 if fast else 6) + 1):
        e = InvariantPoly.element("elementary_e", (n,))
        out.append(Check(f"elementary coproduct e{n}", coproduct(e) == elementary_coproduct_formula(n)))
    return out


def suite_gue(fast=False, **_):
    top = 4 if fast else 6
    mu = gue_functional(None, 1, top)
    out = []
    for a in _nonempty(top):
        v = averaged_precursor(mu, a)
        want = 1 if all(x == 2 for x in a) else 0
        out.append(Check(f"GUE E[K{a!r}] = {want}", v == RatFuncN.const(want), str(v)))
    return out


def suite_cgl(fast=False, **_):
    top = 4 if fast else 6
    mu, nu = symbolic_functional("a", top), symbolic_functional("b", top)
    cm, cn, cs = cgl_cumulants(mu), cgl_cumulants(nu), cgl_cumulants(convolve(mu, nu))
    out = []
    for a in _nonempty(top):
        diff = cs[a] - cm[a] - cn[a]
        ok = diff == 0 if isinstance(diff, (int, Fraction)) else diff.is_zero()
        out.append(Check(f"CGL additive K{a!r}", ok))
    return out


def suite_convolution(seed=1, fast=False, **_):
    rng = np.random.default_rng(seed)
    r = k_convolve(Spectrum((6, 5, 4, -15)), Spectrum((12, -3, -4, -5)))
    want = [14.72, 0.98 + 0.72j, 0.98 - 0.72j, -16.69]
    ok = all(abs(x - w) < 0.01 for x, w in zip(r, want))
    out = [Check("counterexample roots", ok, ", ".join(f"{z:.4f}" for z in r))]
    trials = 100 if fast else 1000
    worst = 0.0
    for _ in range(trials):
        a = Spectrum(tuple(float(x) for x in rng.uniform(-1, 1, 3)))
        b = Spectrum(tuple(float(x) for x in rng.uniform(-1, 1, 3)))
        r1 = k_convolve(a, b)
        r2 = mss_convolve(CharPoly.from_spectrum(a), CharPoly.from_spectrum(b)).roots()
        worst = max(worst, float(np.abs(r1 - r2).max()))
    out.append(Check("N=3 k_convolve = mss_convolve", worst < 1e-10, f"max diff {worst:.2e} over {trials}"))
    return out


def suite_limits(fast=False, **_):
    top = 4 if fast else 6
    out = []
    for a in _nonempty(top):
        lim = precursor(a).to("free_cumulant").limit()
        out.append(Check(f"lim K{a!r} = kappa{a!r}", lim == InvariantPoly.element("free_cumulant", a)))
    for n in range(1, (4 if fast else 5) + 1):
        coeffs = moment_in_precursors((n,))
        ok = True
        for a in enumerate_partitions(n):
            ser = coeffs.get(a, RatFuncN.const(0)).series_in_inverse_N(2 * n)
            dist = genus_distribution(a)
            for k, v in enumerate(ser):
                want = dist.get(k // 2, 0) if k % 2 == 0 else 0
                ok &= v == want
        out.append(Check(f"m{n}: N^-2 series gives P_g", ok))
    return out


SUITES = {
    "additivity": suite_additivity,
    "routes": suite_routes,
    "hurwitz": suite_hurwitz,
    "coproduct": suite_coproduct,
    "gue": suite_gue,
    "cgl": suite_cgl,
    "convolution": suite_convolution,
    "limits": suite_limits,
}


def run_suite(name, N=4, seed=1, fast=False, samples=None) -> list:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
        kw = {"fast": fast, "seed": seed}
        if n == "additivity":
            kw.update(N=N, samples=samples)
        for c in SUITES[n](**kw):
            c.name = f"{n}: {c.name}"
            out.append(c)
    return out
