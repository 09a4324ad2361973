import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from precursors.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main
from precursors.coproduct import TensorPoly, coproduct, delta_k_central_moment
from precursors.exactnum import RatFuncN
from precursors.hciz import precursor
from precursors.measures import MomentFunctional, convolve, from_orbit, gue_functional
from precursors.symfunc import InvariantPoly, Spectrum
from precursors.tables import hurwitz_table_lines, listing_lines


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == EXIT_OK
    return json.loads(out)


def test_precursor_json_round_trip(capsys):
    d = run_json(capsys, "precursor", "--n", "4")
    assert d["alpha"] == [4]
    assert InvariantPoly.from_json(d["poly"]) == precursor((4,)).to("moment_m")


def test_precursor_default_is_json(capsys):
    code, out, _ = run(capsys, "precursor", "--n", "2", "--basis", "kappa")
    assert code == EXIT_OK
    assert json.loads(out)["text"] == str(precursor((2,)).to("free_cumulant"))


def test_precursor_eval_and_spectrum(capsys):
    d = run_json(capsys, "precursor", "--alpha", "2,1", "--eval-at", "3", "--spectrum", "1,2,1/2")
    assert Fraction(d["value"]) == precursor((2, 1)).evaluate(Spectrum((1, 2, Fraction(1, 2))))
    assert "at_N" in d


def test_precursor_cap(capsys, monkeypatch):
    code, _, err = run(capsys, "precursor", "--n", "9")
    assert code == EXIT_USAGE and "cap" in err
    monkeypatch.setenv("PRECURSOR_CAP", "2")
    assert run(capsys, "precursor", "--n", "3")[0] == EXIT_USAGE
    monkeypatch.setenv("PRECURSOR_CAP", "3")
    assert run(capsys, "precursor", "--n", "3")[0] == EXIT_OK


def test_precursor_csv(capsys):
    code, out, _ = run(capsys, "precursor", "--n", "4", "--basis", "kappa", "--format", "csv")
    rows = list(csv.reader(out.splitlines()))
    assert code == EXIT_OK and rows[0] == ["partition", "coefficient"] and len(rows) == 3


def test_usage_errors(capsys):
    assert run(capsys, "precursor")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["convolve", "--spectrumA", "1,x", "--spectrumB", "1,2"])
    assert exc.value.code == EXIT_USAGE
    assert run(capsys, "convolve", "--spectrumA", "1,2", "--spectrumB", "1,2,3")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--suite", "nope")[0] == EXIT_USAGE
    assert run(capsys, "hurwitz", "--n", "6", "--matrix")[0] == EXIT_USAGE


def test_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "tables", "--appendix", "B", "--out", str(tmp_path / "missing" / "b.txt"))
    assert code == EXIT_IO and "I/O" in err
    assert run(capsys, "coproduct", "--poly", str(tmp_path / "absent.json"))[0] == EXIT_IO


def test_hurwitz_single_and_table(capsys):
    d = run_json(capsys, "hurwitz", "--alpha", "2", "--beta", "2", "--genus", "0")
    assert d["count"] == 1
    d = run_json(capsys, "hurwitz", "--n", "3", "--genus", "0", "--flavor", "monotone")
    assert d["labels"] == [[3], [2, 1], [1, 1, 1]] and len(d["rows"]) == 3
    code, out, _ = run(capsys, "hurwitz", "--n", "2", "--genus", "1", "--format", "csv")
    assert code == EXIT_OK and len(out.splitlines()) == 3


def test_hurwitz_matrix(capsys):
    code, out, _ = run(capsys, "hurwitz", "--n", "2", "--matrix", "--format", "text")
    assert code == EXIT_OK and out.splitlines() == hurwitz_table_lines(2)
    d = run_json(capsys, "hurwitz", "--n", "2", "--matrix", "--flavor", "strict")
    assert len(d["rows"]) == 2


def test_tables(capsys, tmp_path):
    code, out, _ = run(capsys, "tables", "--appendix", "C", "--n", "2")
    assert code == EXIT_OK
    assert out.splitlines() == ["labels: [2] [1,1]", "[2]: N^2/(N^2-1), -N/(N^2-1)", "[1,1]: -N/(N^2-1), N^2/(N^2-1)"]
    target = tmp_path / "b.txt"
    assert run(capsys, "tables", "--appendix", "B", "--out", str(target))[0] == EXIT_OK
    assert target.read_text().splitlines() == listing_lines()
    code, out, _ = run(capsys, "tables", "--appendix", "C")
    assert code == EXIT_OK and "# n = 4" in out


def test_coproduct_element_and_poly(capsys, tmp_path):
    d = run_json(capsys, "coproduct", "--element", "K[2]")
    K = precursor((2,))
    assert TensorPoly.from_json(d["tensor"]) == coproduct(K)
    f = InvariantPoly.element("newton_p", (2, 1))
    path = tmp_path / "f.json"
    path.write_text(json.dumps(f.to_json()))
    d = run_json(capsys, "coproduct", "--poly", str(path), "--basis", "p")
    assert TensorPoly.from_json(d["tensor"]) == coproduct(f, "newton_p")
    d = run_json(capsys, "coproduct", "--poly", json.dumps(f.to_json()), "--spectrumA", "1,2,3", "--spectrumB", "0,1,1")
    assert "value" in d
    assert run(capsys, "coproduct", "--poly", '{"x": 1}')[0] == EXIT_USAGE


def test_coproduct_delta_moment(capsys):
    d = run_json(capsys, "coproduct", "--delta-k", "2", "--moment", "2", "--spectrumA", "1,0,0,-1", "--spectrumB", "2,0,-1,-1")
    want = delta_k_central_moment(2, 2, Spectrum((1, 0, 0, -1)), Spectrum((2, 0, -1, -1)))
    assert Fraction(d["value"]) == want
    d = run_json(capsys, "coproduct", "--delta-moment", "2", "2")
    assert TensorPoly.from_json(d["tensor"]) == delta_k_central_moment(2, 2)
    assert run(capsys, "coproduct", "--delta-k", "2")[0] == EXIT_USAGE
    assert run(capsys, "coproduct")[0] == EXIT_USAGE


def test_gue_check(capsys):
    d = run_json(capsys, "gue-check", "--n-max", "4")
    assert d["ok"] and len(d["checks"]) == 11
    code, out, _ = run(capsys, "gue-check", "--n-max", "4", "--N", "3", "--sigma", "1/2")
    assert code == EXIT_OK and "FAIL" not in out


def test_convolve(capsys):
    d = run_json(capsys, "convolve", "--method", "k", "--spectrumA", "6,5,4,-15", "--spectrumB", "12,-3,-4,-5")
    assert not d["real"] and d["weyl"] is None
    assert sum(s["complex"] for s in d["spectrum"]) == 2
    d = run_json(capsys, "convolve", "--method", "mss", "--spectrumA", "6,5,4,-15", "--spectrumB", "12,-3,-4,-5")
    assert d["real"] and not any(s["complex"] for s in d["spectrum"])
    d = run_json(capsys, "convolve", "--method", "k", "--spectrumA", "-4,-5,-5,3", "--spectrumB", "6,6,2,6")
    assert d["real"] and d["weyl"] is False


def test_convolve_measures_from_spectra(capsys):
    d = run_json(capsys, "convolve-measures", "--spectrumA", "1,2,3", "--spectrumB", "0,1,-1")
    assert d["ok"]
    back = MomentFunctional.from_json(d["moments"])
    want = convolve(from_orbit(Spectrum((1, 2, 3)), 3), from_orbit(Spectrum((0, 1, -1)), 3))
    assert back.values == want.values


def test_convolve_measures_from_json(capsys, tmp_path):
    mu, nu = gue_functional(None, 1, 4), gue_functional(None, 2, 4)
    (tmp_path / "a.json").write_text(json.dumps(mu.to_json()))
    (tmp_path / "b.json").write_text(json.dumps(nu.to_json()))
    d = run_json(capsys, "convolve-measures", "--mu", str(tmp_path / "a.json"), "--nu", str(tmp_path / "b.json"))
    assert d["ok"]
    # GUE(1) + GUE(2) is GUE(sqrt 5), and E[p_alpha] scales as sigma^d
    back = MomentFunctional.from_json(d["moments"])
    unit = gue_functional(None, 1, 4)
    for a, v in unit.values.items():
        if a.degree % 2:
            assert back[a] == 0
        else:
            assert back[a] == RatFuncN.const(Fraction(5) ** (a.degree // 2)) * v
    assert run(capsys, "convolve-measures", "--mu", str(tmp_path / "a.json"))[0] == EXIT_USAGE


def test_horn(capsys, tmp_path):
    hist, summ, gp = tmp_path / "h.csv", tmp_path / "s.json", tmp_path / "h.gp"
    argv = ["horn", "--N", "3", "--samples", "3000", "--seed", "5", "--statistic", "dK2",
            "--out", str(hist), "--summary", str(summ), "--gnuplot", str(gp)]
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    s = json.loads(out)
    assert s == json.loads(summ.read_text()) and s["samples"] == 3000
    rows = list(csv.reader(open(hist)))
    assert rows[0] == ["bin_left", "bin_right", "count"]
    assert sum(int(r[2]) for r in rows[1:]) == 3000
    assert str(hist) in gp.read_text()
    # same seed, same numbers
    run(capsys, *argv)
    assert json.loads(summ.read_text()) == s
    assert run(capsys, "horn", "--N", "3", "--samples", "0")[0] == EXIT_USAGE


def test_verify_fast_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--fast")
    assert code == EXIT_OK
    assert out.splitlines()[-1].split()[0].split("/")[0] == out.splitlines()[-1].split()[0].split("/")[1]
    d = run_json(capsys, "verify", "--suite", "limits", "--fast")
    assert d["ok"] and all(c["ok"] for c in d["checks"])


def test_verify_failure_exit_code(capsys, monkeypatch):
    import precursors.verify as verify

    monkeypatch.setitem(verify.SUITES, "broken", lambda **kw: [verify.Check("always false", False)])
    assert run(capsys, "verify", "--suite", "broken")[0] == EXIT_VIOLATION


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "precursors", "tables", "--appendix", "C", "--n", "1"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.splitlines() == hurwitz_table_lines(1)
