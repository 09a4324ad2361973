from fractions import Fraction

import numpy as np
import pytest

from precursors.freeconv import (
    WEYL_FIXTURE,
    CharPoly,
    ap_f4,
    find_weyl_violations,
    k_convolve,
    mss_convolve,
    realness_check,
    realness_survey,
    weyl_check,
)
from precursors.hciz import precursor
from precursors.montecarlo import haar_unitary
from precursors.symfunc import Spectrum, evaluate


def test_charpoly_basics():
    p = CharPoly.from_spectrum(Spectrum((1, 2)))
    assert p.e == (1, 3, 2)
    assert p.coefficients() == [1, -3, 2]
    assert p(1) == 0 and p(2) == 0 and p(0) == 2
    assert np.allclose(p.roots(), [2, 1])
    with pytest.raises(ValueError):
        CharPoly(2, (2, 1, 1))
    with pytest.raises(ValueError):
        CharPoly(2, (1, 1))


def test_mss_examples():
    a = CharPoly.from_spectrum((3,))
    b = CharPoly.from_spectrum((-1,))
    assert mss_convolve(a, b).e == (1, 2)
    A = CharPoly.from_spectrum((1, 2, 3))
    zero = CharPoly.from_spectrum((0, 0, 0))
    assert mss_convolve(A, zero) == A
    # identity shift: B = c I translates every root by c
    shift = CharPoly.from_spectrum((5, 5, 5))
    assert mss_convolve(A, shift) == CharPoly.from_spectrum((6, 7, 8))
    with pytest.raises(ValueError):
        mss_convolve(A, CharPoly.from_spectrum((1, 2)))


def test_mss_is_expected_characteristic_polynomial():
    rng = np.random.default_rng(1)
    a, b = np.array([1.0, -0.5, 2.0]), np.array([0.3, 0.0, -1.2])
    u = haar_unitary(3, rng, size=40000)
    m = np.diag(a)[None] + (u * b[None, None, :]) @ np.conj(np.swapaxes(u, -1, -2))
    x = 0.7
    vals = np.linalg.det(x * np.eye(3)[None] - m).real
    exact = mss_convolve(CharPoly.from_spectrum(tuple(a)), CharPoly.from_spectrum(tuple(b)))(x)
    assert abs(vals.mean() - exact) < 4 * vals.std(ddof=1) / np.sqrt(vals.size)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_mss_preserves_real_roots(N):
    rng = np.random.default_rng(N)
    for _ in range(250):
        a = CharPoly.from_spectrum(tuple(rng.uniform(-1, 1, N)))
        b = CharPoly.from_spectrum(tuple(rng.uniform(-1, 1, N)))
        assert realness_check(mss_convolve(a, b).roots(), 1e-6)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_k_convolve_reproduces_summed_precursors(N):
    # forward check with complex power sums: K_n(C) = K_n(A) + K_n(B)
    rng = np.random.default_rng(10 + N)
    for _ in range(20):
        A = Spectrum(tuple(Fraction(int(v), 4) for v in rng.integers(-8, 9, N)))
        B = Spectrum(tuple(Fraction(int(v), 4) for v in rng.integers(-8, 9, N)))
        C = Spectrum(tuple(complex(z) for z in k_convolve(A, B)))
        for n in range(1, N + 1):
            K = precursor((n,))
            want = float(evaluate(K, A) + evaluate(K, B))
            got = evaluate(K, C)
            assert abs(got - want) <= 1e-9 * max(1.0, abs(want)), (n, A, B)


def test_k_convolve_exact_polynomial():
    roots, poly = k_convolve(Spectrum((1, -1)), Spectrum((2, 0)), return_poly=True)
    assert all(isinstance(c, Fraction) for c in poly.e)
    assert poly.e[1] == 2
    with pytest.raises(ValueError):
        k_convolve(Spectrum((1, 2)), Spectrum((1, 2, 3)))


def test_k_convolve_agrees_with_mss_at_small_n():
    rng = np.random.default_rng(3)
    for N in (1, 2, 3):
        for _ in range(100):
            a = Spectrum(tuple(rng.uniform(-1, 1, N)))
            b = Spectrum(tuple(rng.uniform(-1, 1, N)))
            r1 = k_convolve(a, b)
            r2 = mss_convolve(CharPoly.from_spectrum(a), CharPoly.from_spectrum(b)).roots()
            assert np.abs(r1 - r2).max() < 1e-10


def test_k_convolve_differs_from_mss_at_n4():
    A, B = Spectrum((6, 5, 4, -15)), Spectrum((12, -3, -4, -5))
    r = k_convolve(A, B)
    want = [14.72, 0.98 + 0.72j, 0.98 - 0.72j, -16.69]
    assert np.abs(r - np.array(want)).max() < 0.01
    assert not realness_check(r)
    m = mss_convolve(CharPoly.from_spectrum(A), CharPoly.from_spectrum(B)).roots()
    assert realness_check(m, 1e-9)


def test_weyl_fixture():
    A, B = (Spectrum(s) for s in WEYL_FIXTURE)
    r = k_convolve(A, B)
    assert realness_check(r)
    assert np.allclose(sorted(r.real, reverse=True), [8.307, 1.509, 1.232, -2.048], atol=1e-3)
    assert not weyl_check(A, B, r.real)
    found = find_weyl_violations(trials=500)
    assert found and found[0][0].eigenvalues == WEYL_FIXTURE[0]


def test_weyl_check_on_true_sums():
    rng = np.random.default_rng(2)
    a, b = np.array([3.0, 1.0, -2.0, 0.5]), np.array([1.0, 1.0, -4.0, 2.0])
    for u in haar_unitary(4, rng, size=50):
        c = np.linalg.eigvalsh(np.diag(a) + u @ np.diag(b) @ np.conj(u.T))
        assert weyl_check(a, b, c)
    assert not weyl_check(a, b, c + 1)
    with pytest.raises(ValueError):
        weyl_check(a, b, np.array([1j, -1j, 0, 0]))


def test_ap_f4():
    A = Spectrum((1, -1, 2, -2))
    assert ap_f4(A) == Fraction(17, 2) - Fraction(5, 3) * Fraction(25, 4)
    with pytest.raises(ValueError):
        ap_f4(Spectrum((1, 2, 3)))


def test_realness_survey():
    rng = np.random.default_rng(0)

    def mss(a, b):
        return mss_convolve(CharPoly.from_spectrum(a), CharPoly.from_spectrum(b)).roots()

    assert realness_survey(mss, 4, 100, rng) == 1.0
    frac = realness_survey(k_convolve, 4, 100, rng)
    assert 0.0 <= frac <= 1.0
