"""Reproduction of the low-degree precursor listings and Hurwitz generating matrices."""

from __future__ import annotations

from .hciz import moment_in_precursors, precursor
from .hurwitz import generating_matrix, matrix_rows
from .symfunc import InvariantPoly, set_trace_zero
from .symgroup import enumerate_partitions


def precursors_in_cumulants(n_max: int = 6) -> dict:
    """{n: K_n in the free-cumulant basis}."""
    return {n: precursor((n,)).to("free_cumulant") for n in range(1, n_max + 1)}


def precursors_in_traceless_moments(n_max: int = 6) -> dict:
    """{n: K_n(A-hat) in the moment basis, m_1 set to zero}; K_1 is kept as m_1."""
    out = {1: precursor((1,))}
    for n in range(2, n_max + 1):
        out[n] = set_trace_zero(precursor((n,)))
    return out


def moments_in_precursors(n_max: int = 5) -> dict:
    """{n: {alpha: coefficient}} with m_n = sum_alpha c_alpha K_alpha."""
    return {n: moment_in_precursors((n,)) for n in range(1, n_max + 1)}


def listing_lines() -> list:
    lines = ["# K_n in free cumulants"]
    for n, f in precursors_in_cumulants().items():
        lines.append(f"K{n} = {f}")
    lines.append("# K_n in traceless moments (m1 = 0)")
    for n, f in precursors_in_traceless_moments().items():
        lines.append(f"K{n} = {f}")
    lines.append("# m_n in generalised precursors")
    for n, d in moments_in_precursors().items():
        f = InvariantPoly("precursor_K", d)
        lines.append(f"m{n} = {f}")
    return lines


def hurwitz_table(n: int) -> list:
    """Rows of the weakly monotone generating matrix, as canonical text."""
    return [[str(x) for x in row] for row in matrix_rows(generating_matrix(n), n)]


def hurwitz_table_lines(n: int) -> list:
    parts = enumerate_partitions(n)
    rows = hurwitz_table(n)
    lines = ["labels: " + " ".join(repr(p) for p in parts)]
    for p, row in zip(parts, rows):
        lines.append(f"{p!r}: " + ", ".join(row))
    return lines
