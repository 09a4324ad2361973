"""
Independent reference implementations used by the tests.

Nothing here imports the package's algebra: each oracle recomputes its value
from first principles (explicit permutations, determinants, index sums, set
partitions) so that agreement is a genuine cross-check.
"""

from fractions import Fraction
from itertools import combinations, permutations, product
import math


# ---- permutations --------------------------------------------------------------------


def compose(s, t):
    """(s t)(x) = s(t(x)) on 0-based image tuples."""
    return tuple(s[t[x]] for x in range(len(t)))


def cycle_type(s):
    seen, out = set(), []
    for i in range(len(s)):
        if i in seen:
            continue
        j, k = i, 0
        while j not in seen:
            seen.add(j)
            j = s[j]
            k += 1
        out.append(k)
    return tuple(sorted(out, reverse=True))


def n_cycles(s):
    return len(cycle_type(s))


def transposition(n, a, b):
    s = list(range(n))
    s[a], s[b] = b, a
    return tuple(s)


# ---- characters ----------------------------------------------------------------------


def s3_character_table():
    """
    {lambda: {alpha: chi}} for S_3 from explicit representations: trivial,
    sign, and the standard one (permutation representation minus trivial,
    whose character is #fixed points - 1).
    """
    table = {(3,): {}, (2, 1): {}, (1, 1, 1): {}}
    for s in permutations(range(3)):
        a = cycle_type(s)
        fixed = sum(1 for i in range(3) if s[i] == i)
        sign = (-1) ** (3 - n_cycles(s))
        table[(3,)][a] = 1
        table[(1, 1, 1)][a] = sign
        table[(2, 1)][a] = fixed - 1
    return table


def _poly_mul(f, g):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _vandermonde(k):
    # prod_{i<j} (x_i - x_j) as a dict of exponent tuples
    out = {tuple([0] * k): 1}
    for i, j in combinations(range(k), 2):
        e1 = [0] * k
        e1[i] = 1
        e2 = [0] * k
        e2[j] = 1
        out = _poly_mul(out, {tuple(e1): 1, tuple(e2): -1})
    return out


def _power_sum_poly(r, k):
    out = {}
    for i in range(k):
        e = [0] * k
        e[i] = r
        out[tuple(e)] = 1
    return out


def frobenius_character(lam, alpha):
    """chi_lambda(alpha) = [x^(lambda + delta)] p_alpha * Vandermonde, in n variables."""
    n = sum(lam)
    k = n
    f = _vandermonde(k)
    for r in alpha:
        f = _poly_mul(f, _power_sum_poly(r, k))
    lam = list(lam) + [0] * (k - len(lam))
    key = tuple(lam[i] + k - 1 - i for i in range(k))
    return f.get(key, 0)


# ---- Schur functions ------------------------------------------------------------------


def det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    sign, d = 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for j in range(c, n):
                m[r][j] -= f * m[c][j]
    return sign * d


def schur_bialternant(lam, xs):
    """s_lambda(x_1..x_k) = det(x_i^(lambda_j + k - j)) / det(x_i^(k - j)); distinct x."""
    k = len(xs)
    lam = list(lam) + [0] * (k - len(lam))
    if len([p for p in lam if p]) > k:
        return Fraction(0)
    num = [[Fraction(x) ** (lam[j] + k - 1 - j) for j in range(k)] for x in xs]
    den = [[Fraction(x) ** (k - 1 - j) for j in range(k)] for x in xs]
    return det(num) / det(den)


# ---- Gaussian (Wick) index sums ------------------------------------------------------


def _pairings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for p in _pairings(rest):
            yield [(a, items[i])] + p


def gue_index_sum(alpha, N, sigma2=Fraction(1)):
    """
    E[prod_c Tr A^(alpha_c)] with E[A_ab A_cd] = sigma2/N delta_ad delta_bc, by
    brute-force summation over all index assignments and Isserlis pairings.
    """
    d = sum(alpha)
    if d % 2:
        return Fraction(0)
    slots = list(range(d))
    pairings = list(_pairings(slots))
    # position p belongs to trace c; the entry at p is A_{i_p, i_next(p)}
    nxt = []
    start = 0
    for k in alpha:
        for j in range(k):
            nxt.append(start + (j + 1) % k)
        start += k
    total = Fraction(0)
    cov = Fraction(sigma2) / N
    for idx in product(range(N), repeat=d):
        for pr in pairings:
            ok = True
            for p, q in pr:
                a, b = idx[p], idx[nxt[p]]
                c, e = idx[q], idx[nxt[q]]
                if not (a == e and b == c):
                    ok = False
                    break
            if ok:
                total += cov ** (d // 2)
    return total


# ---- set partitions, free and classical cumulants ------------------------------------------


def set_partitions(elements):
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def is_noncrossing(blocks):
    for b1, b2 in combinations(blocks, 2):
        for a, c in combinations(sorted(b1), 2):
            for b, d in combinations(sorted(b2), 2):
                if a < b < c < d or b < a < d < c:
                    return False
    return True


def nc_type_counts(n):
    """{block-size type: number of non-crossing partitions of [n]}."""
    out = {}
    for p in set_partitions(list(range(n))):
        if is_noncrossing(p):
            t = tuple(sorted((len(b) for b in p), reverse=True))
            out[t] = out.get(t, 0) + 1
    return out


def moment_from_free_cumulants(n, kappa):
    """m_n = sum over non-crossing partitions of prod kappa_{|block|}."""
    return sum(c * math.prod(kappa[k] for k in t) for t, c in nc_type_counts(n).items())


def classical_cumulants(moments):
    """Classical cumulants c_1..c_n from raw moments m_0=1, m_1..m_n."""
    n = len(moments) - 1
    c = [0] * (n + 1)
    for k in range(1, n + 1):
        c[k] = moments[k] - sum(math.comb(k - 1, j - 1) * c[j] * moments[k - j] for j in range(1, k))
    return c


# ---- Hurwitz brute force ----------------------------------------------------------------


def brute_hurwitz(alpha, beta, r, strict):
    """Count (s_a, s_b, t_1..t_r) directly: s_a s_b t_1...t_r = id, monotone b's."""
    n = sum(alpha)
    trans = [(a, b) for b in range(1, n) for a in range(b)]
    perms = list(permutations(range(n)))
    by_type = [s for s in perms if cycle_type(s) == tuple(alpha)]
    ident = tuple(range(n))
    count = 0
    for seq in product(trans, repeat=r):
        bs = [b for _, b in seq]
        if any(bs[i] > bs[i + 1] or (strict and bs[i] == bs[i + 1]) for i in range(len(bs) - 1)):
            continue
        rho = ident
        for a, b in seq:
            rho = compose(rho, transposition(n, a, b))
        for sa in by_type:
            # s_b = s_a^-1 rho^-1
            inv_sa = tuple(sorted(range(n), key=lambda i: sa[i]))
            inv_rho = tuple(sorted(range(n), key=lambda i: rho[i]))
            sb = compose(inv_sa, inv_rho)
            if cycle_type(sb) == tuple(beta):
                count += 1
    return count


def kreweras_nc_count(alpha):
    """Number of non-crossing partitions of [n] with block type alpha."""
    n, l = sum(alpha), len(alpha)
    mult = {}
    for a in alpha:
        mult[a] = mult.get(a, 0) + 1
    return math.factorial(n) // (math.factorial(n - l + 1) * math.prod(math.factorial(m) for m in mult.values()))
