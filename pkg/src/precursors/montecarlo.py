"""
Haar-unitary and GUE sampling, and Monte Carlo cross-checks of exact identities.

All samplers take a ``numpy.random.Generator``.  Experiments are split into
fixed-size chunks, each drawing from its own child of a master
``SeedSequence``; results are merged in chunk order, so the output does not
depend on how many worker processes were used.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .symfunc import DegreeError, InvariantPoly, Spectrum
from .symgroup import Permutation

__all__ = [
    "haar_unitary",
    "gue_sample",
    "ExperimentConfig",
    "SummaryStats",
    "Statistic",
    "statistic",
    "horn_experiment",
    "horn_samples",
    "mc_orbit_average",
    "mc_generating_function",
    "mc_cyclic_product",
    "equispaced",
    "z_score",
]

CHUNK = 20_000


def haar_unitary(N: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """
    Haar-distributed unitary matrix (or a stack of ``size`` of them).

    QR of a complex Ginibre matrix, with the phases of diag(R) moved into Q so
    that the decomposition is unique and the law is exactly Haar.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    shape = (N, N) if size is None else (size, N, N)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[..., None, :]


def gue_sample(N: int, sigma: float, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """GUE(N, sigma): Hermitian with E[A_ij A_kl] = sigma^2/N delta_il delta_jk."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    shape = (N, N) if size is None else (size, N, N)
    g = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    h = (g + np.conj(np.swapaxes(g, -1, -2))) / math.sqrt(2)
    return h * (sigma / math.sqrt(N))


def equispaced(N: int, lo=-1, hi=1) -> Spectrum:
    """N exact, regularly spaced points on [lo, hi], endpoints included."""
    lo, hi = Fraction(lo), Fraction(hi)
    if N == 1:
        return Spectrum((lo,))
    return Spectrum(tuple(lo + (hi - lo) * k / (N - 1) for k in range(N)))


def z_score(estimate, se, exact) -> float:
    if se == 0:
        return 0.0 if estimate == exact else math.inf
    return (estimate - float(exact)) / se


# ---- statistics --------------------------------------------------------------------


class Statistic:
    """
    Numerical evaluator for an invariant polynomial at fixed N.

    The polynomial is expanded in power sums once; evaluation on a batch of
    spectra is then a few vectorised products.
    """

    def __init__(self, poly: InvariantPoly, N: int, name: str | None = None):
        p = poly.to("newton_p")
        for a in p.terms:
            if a and a[0] > N:
                raise DegreeError(f"statistic needs power sums up to {a[0]} > N={N}")
        self.poly = poly
        self.N = N
        self.name = name or str(poly)
        self.terms = [(float(c.eval_at(N)), tuple(a)) for a, c in p.terms.items()]
        self.kmax = max((a[0] for _, a in self.terms if a), default=0)

    def on_eigenvalues(self, ev: np.ndarray) -> np.ndarray:
        ev = np.asarray(ev, dtype=float)
        ps = {k: np.sum(ev ** k, axis=-1) for k in range(1, self.kmax + 1)}
        out = np.zeros(ev.shape[:-1])
        for c, a in self.terms:
            v = c
            for k in a:
                v = v * ps[k]
            out = out + v
        return out

    def on_spectrum(self, s: Spectrum) -> float:
        return float(self.on_eigenvalues(np.array([float(x) for x in s.eigenvalues])))


def _f4_poly() -> InvariantPoly:
    from .exactnum import RatFuncN

    N = RatFuncN.gen()
    return InvariantPoly("moment_m", {(4,): 1, (2, 2): -(2 * N - 3) / (N - 1)})


def statistic(name, N: int) -> Statistic:
    """
    Named statistic: ``K<n>``, ``kappa<n>``, ``m<n>`` or ``f4``.

    The ``d`` prefix used on the command line (``dK4``) is accepted and ignored
    here; the horn experiment always forms the difference.
    """
    if isinstance(name, InvariantPoly):
        return Statistic(name, N)
    from .hciz import precursor

    key = name[1:] if name.startswith("d") else name
    if key == "f4":
        return Statistic(_f4_poly(), N, "f4")
    if key.startswith("kappa"):
        n = int(key[5:])
        return Statistic(InvariantPoly.element("free_cumulant", (n,)), N, key)
    if key.startswith("K"):
        n = int(key[1:])
        return Statistic(precursor((n,)), N, key)
    if key.startswith("m"):
        n = int(key[1:])
        return Statistic(InvariantPoly.element("moment_m", (n,)), N, key)
    raise ValueError(f"unknown statistic {name!r}")


# ---- experiment -------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    N: int
    samples: int
    seed: int
    statistic: object  # name or InvariantPoly
    spectrum_a: Spectrum
    spectrum_b: Spectrum
    bins: object = "fd"
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("sample count must be >= 1")
        if self.spectrum_a.N != self.N or self.spectrum_b.N != self.N:
            raise ValueError("spectra must have length N")


@dataclass
class SummaryStats:
    n: int
    mean: float
    variance: float
    skewness: float
    kurtosis: float  # excess
    se: float
    bin_edges: list = field(default_factory=list)
    counts: list = field(default_factory=list)

    @classmethod
    def from_samples(cls, x: np.ndarray, bins="fd") -> "SummaryStats":
        x = np.asarray(x, dtype=float)
        n = x.size
        mean = float(x.mean())
        c = x - mean
        var = float(np.mean(c ** 2) * n / (n - 1)) if n > 1 else 0.0
        m2 = float(np.mean(c ** 2))
        skew = float(np.mean(c ** 3) / m2 ** 1.5) if m2 > 0 else 0.0
        kurt = float(np.mean(c ** 4) / m2 ** 2 - 3) if m2 > 0 else 0.0
        se = math.sqrt(var / n) if n > 1 else 0.0
        if m2 > 0:
            counts, edges = np.histogram(x, bins=bins)
        else:
            counts, edges = np.array([n]), np.array([mean, mean])
        return cls(n, mean, var, skew, kurt, se, edges.tolist(), counts.tolist())

    def to_json(self) -> dict:
        return {
            "samples": self.n,
            "mean": self.mean,
            "var": self.variance,
            "skew": self.skewness,
            "kurtosis": self.kurtosis,
            "se": self.se,
        }

    def histogram_rows(self):
        return [(self.bin_edges[i], self.bin_edges[i + 1], self.counts[i]) for i in range(len(self.counts))]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bin_left", "bin_right", "count"])
            for row in self.histogram_rows():
                w.writerow([repr(row[0]), repr(row[1]), row[2]])

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)


def _chunk_sizes(total, chunk=CHUNK):
    sizes = [chunk] * (total // chunk)
    if total % chunk:
        sizes.append(total % chunk)
    return sizes


def _horn_chunk(args):
    N, size, seed_seq, stat_spec, a, b = args
    rng = np.random.default_rng(seed_seq)
    st = statistic(stat_spec, N) if not isinstance(stat_spec, Statistic) else stat_spec
    u = haar_unitary(N, rng, size)
    mat = np.diag(a)[None] + u @ np.diag(b).astype(complex)[None] @ np.conj(np.swapaxes(u, -1, -2))
    ev = np.linalg.eigvalsh(mat)
    return st.on_eigenvalues(ev)


def horn_samples(cfg: ExperimentConfig) -> np.ndarray:
    """Samples of s(A + U B U^dag) - s(A) - s(B) for Haar U."""
    st = statistic(cfg.statistic, cfg.N)
    a = np.array([float(x) for x in cfg.spectrum_a.eigenvalues])
    b = np.array([float(x) for x in cfg.spectrum_b.eigenvalues])
    base = st.on_spectrum(cfg.spectrum_a) + st.on_spectrum(cfg.spectrum_b)
    sizes = _chunk_sizes(cfg.samples)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    spec = cfg.statistic if isinstance(cfg.statistic, str) else st
    jobs = [(cfg.N, s, ss, spec, a, b) for s, ss in zip(sizes, seeds)]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            parts = list(ex.map(_horn_chunk, jobs))
    else:
        parts = [_horn_chunk(j) for j in jobs]
    return np.concatenate(parts) - base


def horn_experiment(cfg: ExperimentConfig) -> SummaryStats:
    return SummaryStats.from_samples(horn_samples(cfg), cfg.bins)


# ---- cross-checks --------------------------------------------------------------------


def _conj_batch(u, spec):
    d = np.array([float(x) for x in spec.eigenvalues])
    return (u * d[None, None, :]) @ np.conj(np.swapaxes(u, -1, -2))


def mc_orbit_average(f: InvariantPoly, A: Spectrum, B: Spectrum, samples: int, rng: np.random.Generator):
    """Estimate of the orbit coproduct E_U f(A + U B U^dag); returns (mean, se)."""
    if A.N != B.N:
        raise ValueError("spectra must have equal length")
    N = A.N
    st = Statistic(f, N)
    if all(v == 0 for v in B.eigenvalues):
        # A + U 0 U^dag = A for every U
        return st.on_spectrum(A), 0.0
    a = np.array([float(x) for x in A.eigenvalues])
    vals = []
    for size in _chunk_sizes(samples):
        u = haar_unitary(N, rng, size)
        ev = np.linalg.eigvalsh(np.diag(a)[None] + _conj_batch(u, B))
        vals.append(st.on_eigenvalues(ev))
    x = np.concatenate(vals)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0


def mc_generating_function(A: Spectrum, x: float, samples: int, rng: np.random.Generator, ratio: bool = True):
    """
    Estimate of (1/N) E_U[exp(N Tr A U^dag) Tr (1 - xU)^-1].

    E_U[exp(N Tr A U^dag)] = 1 exactly (only the constant term of the
    exponential survives the phase average), so by default the sample mean is
    divided by the sample mean of the weights.  This ratio estimator has the
    same limit, a much smaller variance, and is exactly 1 at x = 0.  The
    standard error comes from the delta method.  Returns (estimate, se).
    """
    if abs(x) >= 1:
        raise ValueError("need |x| < 1")
    N = A.N
    a = np.diag([float(v) for v in A.eigenvalues]).astype(complex)
    ws, ts = [], []
    for size in _chunk_sizes(samples):
        u = haar_unitary(N, rng, size)
        udag = np.conj(np.swapaxes(u, -1, -2))
        w = np.exp(N * np.trace(a[None] @ udag, axis1=-2, axis2=-1))
        ev = np.linalg.eigvals(u)
        t = np.sum(1.0 / (1.0 - x * ev), axis=-1) / N
        ws.append(w)
        ts.append(w * t)
    w = np.concatenate(ws)
    wt = np.concatenate(ts)
    if not ratio:
        est = wt.mean()
        se = float(np.sqrt(np.var(wt.real, ddof=1) / samples))
        return float(est.real), se
    mw, mt = w.mean(), wt.mean()
    est = mt / mw
    resid = ((wt - est * w) / mw).real
    se = float(np.sqrt(np.mean(np.abs(resid) ** 2) / samples))
    return complex(est).real, se


def mc_cyclic_product(sigma: Permutation, A: Spectrum, samples: int, rng: np.random.Generator):
    """Estimate of E_U prod_i (U A U^dag)_{i, sigma(i)}; returns (mean, se)."""
    n = sigma.n
    N = A.N
    if n > N:
        raise DegreeError("need n <= N")
    idx = np.arange(n)
    tgt = np.array([sigma(i + 1) - 1 for i in range(n)])
    vals = []
    for size in _chunk_sizes(samples):
        m = _conj_batch(haar_unitary(N, rng, size), A)
        vals.append(np.prod(m[:, idx, tgt], axis=-1))
    x = np.concatenate(vals).real
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
