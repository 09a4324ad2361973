"""
Command-line interface.

Exit codes: 0 success, 1 an identity check failed, 2 bad usage (argparse
convention, also used for degree-cap violations), 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .exactnum import RatFuncN, as_fraction, fraction_text
from .symfunc import InvariantPoly, Spectrum, canonical_basis, degree_cap
from .symgroup import Partition

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _partition(text: str) -> Partition:
    text = text.strip().strip("[]()")
    if not text:
        return Partition(())
    try:
        return Partition(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a partition: {text!r}")


def _spectrum(text: str) -> Spectrum:
    try:
        return Spectrum.parse(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma-separated list of rationals: {text!r}")


def _jsonable(x):
    if isinstance(x, RatFuncN):
        return str(x)
    if isinstance(x, Fraction):
        return fraction_text(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(args, payload, text_lines=None, csv_rows=None):
    fmt = getattr(args, "format", "text")
    if fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        out = buf.getvalue().rstrip("\n")
    elif fmt != "text" or text_lines is None:
        out = json.dumps(_jsonable(payload), indent=2)
    else:
        out = "\n".join(text_lines)
    dest = getattr(args, "out", None)
    if dest:
        with open(dest, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


# ---- subcommands ------------------------------------------------------------------------


def cmd_precursor(args):
    from .hciz import precursor

    if args.alpha is None and args.n is None:
        raise UsageError("precursor needs --n or --alpha")
    alpha = args.alpha if args.alpha is not None else Partition((args.n,))
    if alpha.degree > degree_cap():
        raise UsageError(f"degree {alpha.degree} exceeds the symbolic cap {degree_cap()} (set PRECURSOR_CAP)")
    f = precursor(alpha, args.route)
    basis = {"m": "moment_m", "mhat": "moment_m"}.get(args.basis, args.basis)
    g = f.to(canonical_basis(basis))
    if args.basis == "mhat":
        from .symfunc import set_trace_zero

        g = set_trace_zero(g) if alpha.degree > 1 or len(alpha) > 1 else g
    payload = {"alpha": list(alpha), "basis": g.basis, "poly": g.to_json(), "text": str(g)}
    lines = [f"K{alpha!r} = {g}"]
    rows = [["partition", "coefficient"]] + [[repr(a), str(c)] for a, c in g.sorted_terms()]
    if args.eval_at is not None:
        payload["at_N"] = {"N": args.eval_at, "text": str(g.map_coefficients(lambda c: RatFuncN.const(c.eval_at(args.eval_at))))}
        lines.append(f"at N={args.eval_at}: {payload['at_N']['text']}")
    if args.spectrum is not None:
        v = f.evaluate(args.spectrum)
        payload["value"] = v
        lines.append(f"value = {_jsonable(v)}")
    _emit(args, payload, lines, rows)
    return EXIT_OK


def cmd_hurwitz(args):
    from .hurwitz import generating_matrix, hurwitz_count

    if args.matrix:
        from .tables import hurwitz_table_lines, hurwitz_table

        if args.flavor == "monotone":
            payload = {"n": args.n, "rows": hurwitz_table(args.n)}
            _emit(args, payload, hurwitz_table_lines(args.n))
        else:
            from .hurwitz import matrix_rows

            rows = [[str(x) for x in r] for r in matrix_rows(generating_matrix(args.n, args.flavor), args.n)]
            _emit(args, {"n": args.n, "rows": rows}, [", ".join(r) for r in rows])
        return EXIT_OK
    if args.alpha is None and args.beta is None and args.g is not None:
        from .symgroup import enumerate_partitions

        parts = enumerate_partitions(args.n)
        table = [[hurwitz_count(alpha=a, beta=b, g=args.g, flavor=args.flavor) for b in parts] for a in parts]
        payload = {"n": args.n, "g": args.g, "flavor": args.flavor, "labels": [list(a) for a in parts], "rows": table}
        rows = [[""] + [repr(b) for b in parts]] + [[repr(a)] + r for a, r in zip(parts, table)]
        _emit(args, payload, [", ".join(map(str, r)) for r in rows], rows)
        return EXIT_OK
    if args.alpha is None or args.beta is None or args.g is None:
        raise UsageError("hurwitz needs --alpha, --beta and --genus (or --n with --genus or --matrix)")
    c = hurwitz_count(alpha=args.alpha, beta=args.beta, g=args.g, flavor=args.flavor)
    _emit(args, {"alpha": list(args.alpha), "beta": list(args.beta), "g": args.g, "flavor": args.flavor, "count": c}, [str(c)])
    return EXIT_OK


def _parse_element(text: str) -> InvariantPoly:
    # e.g. "K[2,1]", "p[3]", "s[2,1]", "e[2]", "kappa[2]", "m[4]", "pstar[2]"
    head, _, rest = text.partition("[")
    basis = canonical_basis(head)
    return InvariantPoly.element(basis, _partition(rest))


def _read_json(text: str):
    # inline JSON, or a path to a JSON file
    if text.lstrip().startswith("{"):
        return json.loads(text)
    with open(text) as fh:
        return json.load(fh)


def cmd_coproduct(args):
    from .coproduct import coproduct, delta_k_central_moment

    if args.delta_k is not None or args.moment is not None:
        if args.delta_k is None or args.moment is None:
            raise UsageError("--delta-k and --moment go together")
        args.delta_moment = (args.delta_k, args.moment)
    if args.delta_moment:
        n, k = args.delta_moment
        if args.spectrumA is not None:
            v = delta_k_central_moment(n, k, args.spectrumA, args.spectrumB)
            _emit(args, {"n": n, "k": k, "value": v}, [str(_jsonable(v))])
        else:
            t = delta_k_central_moment(n, k)
            _emit(args, {"n": n, "k": k, "tensor": t.to_json(), "text": str(t)}, [str(t)])
        return EXIT_OK
    if args.poly is not None:
        try:
            f = InvariantPoly.from_json(_read_json(args.poly))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"--poly is not an InvariantPoly encoding: {exc}")
        args.element = args.element or "poly"
    elif args.element is None:
        raise UsageError("coproduct needs --element (e.g. K[2,1]), --poly, or --delta-k n --moment k")
    else:
        f = _parse_element(args.element)
    basis = canonical_basis(args.target) if args.target else f.basis
    t = coproduct(f, basis)
    payload = {"element": args.element, "tensor": t.to_json(), "text": str(t)}
    lines = [f"Delta {args.element} = {t}"]
    if args.spectrumA is not None:
        v = t.evaluate(args.spectrumA, args.spectrumB)
        payload["value"] = v
        lines.append(f"value = {_jsonable(v)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_gue_check(args):
    from .measures import averaged_precursor, gue_functional
    from .symgroup import partitions_up_to

    mu = gue_functional(args.N, args.sigma, args.n)
    rows, ok = [], True
    for a in partitions_up_to(args.n):
        if not a or (args.N is not None and a.degree > args.N):
            continue
        v = averaged_precursor(mu, a)
        want = as_fraction(args.sigma) ** a.degree if all(x == 2 for x in a) else 0
        good = v == (RatFuncN.const(want) if isinstance(v, RatFuncN) else want)
        ok &= good
        rows.append({"alpha": list(a), "value": v, "expected": want, "ok": good})
    lines = [f"K{Partition(r['alpha'])!r}: {_jsonable(r['value'])} {'ok' if r['ok'] else 'FAIL'}" for r in rows]
    _emit(args, {"N": args.N, "sigma": args.sigma, "checks": rows, "ok": ok}, lines)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_convolve(args):
    from .freeconv import CharPoly, k_convolve, mss_convolve, realness_check, weyl_check

    A, B = args.spectrumA, args.spectrumB
    if A.N != B.N:
        raise UsageError("spectra must have equal length")
    if args.method == "mss":
        roots = mss_convolve(CharPoly.from_spectrum(A), CharPoly.from_spectrum(B)).roots()
    else:
        roots = k_convolve(A, B)
    real = bool(realness_check(roots))
    weyl = bool(weyl_check(A, B, roots.real)) if real else None
    spec = [{"re": float(z.real), "im": float(z.imag), "complex": abs(z.imag) > 1e-9 * max(1, abs(z))} for z in roots]
    payload = {"method": args.method, "spectrum": spec, "real": real, "weyl": weyl}
    lines = [" ".join(f"{z:.10g}" for z in roots), f"real: {real}", f"weyl: {weyl}"]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_convolve_measures(args):
    from .measures import MomentFunctional, averaged_precursor, cgl_cumulants, convolve, from_orbit
    from .symgroup import partitions_up_to

    if args.mu is not None and args.nu is not None:
        try:
            mu = MomentFunctional.from_json(_read_json(args.mu))
            nu = MomentFunctional.from_json(_read_json(args.nu))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"not a moment functional encoding: {exc}")
        if args.n:
            raise UsageError("--n applies to spectra; JSON functionals carry their own cutoff")
        d = mu.cutoff
    elif args.spectrumA is not None and args.spectrumB is not None:
        A, B = args.spectrumA, args.spectrumB
        if A.N != B.N:
            raise UsageError("spectra must have equal length")
        d = args.n or A.N
        mu, nu = from_orbit(A, d), from_orbit(B, d)
    else:
        raise UsageError("convolve-measures needs --mu and --nu, or --spectrumA and --spectrumB")
    conv = convolve(mu, nu)
    ca, cb, cc = cgl_cumulants(mu), cgl_cumulants(nu), cgl_cumulants(conv)
    rows, ok = [], True
    for a in partitions_up_to(d):
        if not a:
            continue
        good = cc[a] == ca[a] + cb[a]
        ok &= good
        rows.append({"alpha": list(a), "K_bar": averaged_precursor(conv, a), "cgl": cc[a], "additive": good})
    lines = [f"K{Partition(r['alpha'])!r}: Kbar={_jsonable(r['K_bar'])} cgl={_jsonable(r['cgl'])} {'ok' if r['additive'] else 'FAIL'}" for r in rows]
    _emit(args, {"N": conv.N, "moments": conv.to_json(), "cumulants": rows, "ok": ok}, lines)
    return EXIT_OK if ok else EXIT_VIOLATION


_GNUPLOT = """set datafile separator ','
set style fill solid 0.5
plot '{csv}' every ::1 using (($1+$2)/2):3:($2-$1) with boxes title '{stat}'
"""


def cmd_horn(args):
    from .montecarlo import ExperimentConfig, equispaced, horn_experiment

    A = args.spectrumA or equispaced(args.N)
    B = args.spectrumB or equispaced(args.N)
    bins = args.bins if args.bins == "fd" or not args.bins.isdigit() else int(args.bins)
    try:
        cfg = ExperimentConfig(args.N, args.samples, args.seed, args.statistic, A, B, bins, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))
    stats = horn_experiment(cfg)
    if args.out:
        stats.write_csv(args.out)
        if args.gnuplot:
            with open(args.gnuplot, "w") as fh:
                fh.write(_GNUPLOT.format(csv=args.out, stat=args.statistic))
    summary = dict(stats.to_json(), statistic=args.statistic, N=args.N, seed=args.seed)
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary, fh, indent=2)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_tables(args):
    from .tables import listing_lines, hurwitz_table_lines, hurwitz_table

    if args.appendix == "B":
        lines = listing_lines()
        _emit(args, {"lines": lines}, lines)
    else:
        ns = [args.n] if args.n else [1, 2, 3, 4]
        lines, payload = [], {}
        for n in ns:
            if len(ns) > 1:
                lines.append(f"# n = {n}")
            lines.extend(hurwitz_table_lines(n))
            payload[str(n)] = hurwitz_table(n)
        rows = [r for n in ns for r in hurwitz_table(n)]
        _emit(args, payload, lines, rows)
    return EXIT_OK


def cmd_verify(args):
    from .verify import SUITES, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    checks = run_suite(args.suite, N=args.N, seed=args.seed, fast=args.fast, samples=args.samples)
    ok = all(c.ok for c in checks)
    lines = [f"{'PASS' if c.ok else 'FAIL'} {c.name}" + (f" ({c.detail})" if c.detail else "") for c in checks]
    lines.append(f"{sum(c.ok for c in checks)}/{len(checks)} checks passed")
    rows = [["check", "ok", "detail"]] + [[c.name, c.ok, c.detail] for c in checks]
    _emit(args, {"suite": args.suite, "ok": ok, "checks": [c.to_json() for c in checks]}, lines, rows)
    return EXIT_OK if ok else EXIT_VIOLATION


# ---- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="precursors", description="Exact and Monte Carlo computations with finite-N precursors of free cumulants.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True, fmt="text"):
        sp.add_argument("--format", choices=["text", "json", "csv"], default=fmt)
        if out:
            sp.add_argument("--out", help="write output to this file")

    sp = sub.add_parser("precursor", help="K_alpha in a chosen basis")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--alpha", type=_partition, default=None, help="generalised index, e.g. 2,1")
    sp.add_argument("--basis", default="m", help="m, mhat, kappa, schur, p, K, pstar, e")
    sp.add_argument("--route", default="newton", choices=["newton", "schur", "weingarten", "hook"])
    sp.add_argument("--eval-at", type=int, default=None, help="evaluate coefficients at this N")
    sp.add_argument("--spectrum", type=_spectrum, default=None, help="evaluate K on this spectrum")
    common(sp, fmt="json")
    sp.set_defaults(func=cmd_precursor)

    sp = sub.add_parser("hurwitz", help="monotone Hurwitz numbers and generating matrices")
    sp.add_argument("--alpha", type=_partition)
    sp.add_argument("--beta", type=_partition)
    sp.add_argument("--genus", "--g", dest="g", type=int)
    sp.add_argument("--flavor", default="monotone", choices=["monotone", "strictly_monotone", "strict"])
    sp.add_argument("--matrix", action="store_true", help="print the generating matrix for --n")
    sp.add_argument("--n", type=int, default=2)
    common(sp, fmt="json")
    sp.set_defaults(func=cmd_hurwitz)

    sp = sub.add_parser("coproduct", help="orbit coproduct of a basis element")
    sp.add_argument("--element", help="e.g. K[2,1], p[3], s[2,1], e[2], pstar[2]")
    sp.add_argument("--poly", help="InvariantPoly JSON, inline or as a file path")
    sp.add_argument("--target", "--basis", dest="target", help="basis of the tensor factors (default: the element's)")
    sp.add_argument("--delta-moment", type=int, nargs=2, metavar=("n", "k"), help="E[(delta K_n)^k]")
    sp.add_argument("--delta-k", type=int, help="n in E[(delta K_n)^k]; use with --moment")
    sp.add_argument("--moment", type=int, help="k in E[(delta K_n)^k]")
    sp.add_argument("--spectrumA", type=_spectrum)
    sp.add_argument("--spectrumB", type=_spectrum)
    common(sp)
    sp.set_defaults(func=cmd_coproduct)

    sp = sub.add_parser("gue-check", help="Wick property of averaged precursors for GUE")
    sp.add_argument("--n-max", "--n", dest="n", type=int, default=6, help="maximal degree")
    sp.add_argument("--N", type=int, default=None, help="numeric N (default symbolic)")
    sp.add_argument("--sigma", default="1")
    common(sp)
    sp.set_defaults(func=cmd_gue_check)

    sp = sub.add_parser("convolve", help="MSS or precursor convolution of two spectra")
    sp.add_argument("--method", choices=["mss", "k"], default="mss")
    sp.add_argument("--spectrumA", type=_spectrum, required=True)
    sp.add_argument("--spectrumB", type=_spectrum, required=True)
    common(sp)
    sp.set_defaults(func=cmd_convolve)

    sp = sub.add_parser("convolve-measures", help="convolve two laws, check CGL additivity")
    sp.add_argument("--mu", help="moment functional JSON (inline or file)")
    sp.add_argument("--nu", help="moment functional JSON (inline or file)")
    sp.add_argument("--spectrumA", type=_spectrum, help="orbit of this spectrum instead of --mu")
    sp.add_argument("--spectrumB", type=_spectrum, help="orbit of this spectrum instead of --nu")
    sp.add_argument("--n", type=int, default=None, help="degree cutoff (default N)")
    common(sp)
    sp.set_defaults(func=cmd_convolve_measures)

    sp = sub.add_parser("horn", help="Monte Carlo histogram of delta statistics on A + U B U^dag")
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--samples", type=int, default=200_000)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--statistic", default="dK4", help="dK<n>, dkappa<n>, df4, dm<n>")
    sp.add_argument("--spectrumA", type=_spectrum)
    sp.add_argument("--spectrumB", type=_spectrum)
    sp.add_argument("--bins", default="fd", help="'fd', another numpy rule, or a bin count")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="histogram CSV")
    sp.add_argument("--summary", help="JSON summary file")
    sp.add_argument("--gnuplot", help="write a gnuplot script for the CSV")
    sp.set_defaults(func=cmd_horn)

    sp = sub.add_parser("tables", help="reproduce the low-degree listings (B) or Hurwitz matrices (C)")
    sp.add_argument("--appendix", choices=["B", "C"], required=True)
    sp.add_argument("--n", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("verify", help="run a self-check suite")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--fast", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


_VALUE_FLAGS = ("--spectrum", "--spectrumA", "--spectrumB", "--alpha", "--beta")


def _glue_values(argv):
    # argparse reads "--spectrumA -1,0,1" as two flags; glue such values on with '='
    out, it = [], iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        # DegreeError, HurwitzBoundsError and malformed JSON all land here
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
