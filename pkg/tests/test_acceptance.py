"""The twelve acceptance criteria at full window; one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) or under pytest; the
lines are printed with output capture disabled.
"""

import subprocess
import sys

import pytest

from cotangent_yangian.core import fixture
from cotangent_yangian.suites import (suite_borel, suite_classical, suite_hopf, suite_modules, suite_pbw,
                                      suite_quantization, suite_r, suite_rs, suite_structure, suite_twist,
                                      suite_vertex)

LIE = fixture("sl2")


def _line(n: int, name: str, ok: bool, rep=None) -> str:
    extra = ""
    if rep is not None and not ok:
        extra = " " + str(rep.get("witnesses", [])[:2])
    return f"CRITERION {n:2d} {name:<34} {'PASS' if ok else 'FAIL'}{extra}"


def _emit(capsys, text):
    if capsys is None:
        print(text, flush=True)
    else:
        with capsys.disabled():
            print("\n" + text, flush=True)


def _check(capsys, n, name, rep):
    ok = rep["status"].startswith("pass")
    _emit(capsys, _line(n, name, ok, rep))
    assert ok, rep["witnesses"][:3]


def _cli(*argv, cache=None):
    cmd = [sys.executable, "-m", "cotangent_yangian", *argv]
    if cache:
        cmd += ["--cache", str(cache)]
    p = subprocess.run(cmd, capture_output=True)
    return p.returncode, p.stdout


def determinism_report(tmp) -> dict:
    runs = [("verify", "borel"), ("coproduct", "--gen", "I^h_1", "--K", "2"),
            ("rmatrix", "--which", "R", "--K", "2", "--M", "3"), ("verify", "classical", "--N", "2")]
    bad = []
    for argv in runs:
        a, b = _cli(*argv), _cli(*argv)
        cache = tmp / ("cache_" + "_".join(x.strip("-^") for x in argv) + ".json")
        c1, c2 = _cli(*argv, cache=cache), _cli(*argv, cache=cache)
        if a[0] != 0 or not a[1]:
            bad.append({"argv": list(argv), "problem": f"exit {a[0]}"})
        if not (a == b == c1 == c2):
            bad.append({"argv": list(argv), "problem": "outputs differ"})
    return {"status": "pass" if not bad else "fail", "witnesses": bad}


CRITERIA = [
    (1, "structure (10^4 samples)", lambda: suite_structure(LIE, 10000)),
    (2, "PBW oracle (length <= 5)", lambda: suite_pbw(LIE, 5)),
    (3, "classical suite", lambda: suite_classical(LIE, order=4, loop=3)),
    (4, "quantization (loop <= 3)", lambda: suite_quantization(LIE, K=2, N=3)),
    (5, "Hopf suite (K=3, loop <= 3)", lambda: suite_hopf(LIE, K=3, N=3)),
    (6, "Borel fixture (golden)", lambda: suite_borel()),
    (7, "twist suite (K=2)", lambda: suite_twist(LIE, K=2, N=2)),
    (8, "vertex suite (depth 3)", lambda: suite_vertex(LIE, depth=3)),
    (9, "R_s suite (K=2, z-depth 4)", lambda: suite_rs(LIE, K=2, zdepth=4, loop=2)),
    (10, "R suite (QYBE K=2, weight 4)", lambda: suite_r(LIE, K=2, W=4)),
    (11, "module suite (xi=1, K=3)", lambda: suite_modules(LIE, 1, 2, 1, 3)),
]


@pytest.mark.parametrize("n,name,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(n, name, fn, capsys):
    _check(capsys, n, name, fn())


def test_criterion_12_determinism(tmp_path, capsys):
    _check(capsys, 12, "determinism (CLI, cache on/off)", determinism_report(tmp_path))


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    results = []
    for n, name, fn in CRITERIA:
        rep = fn()
        ok = rep["status"].startswith("pass")
        results.append(ok)
        print(_line(n, name, ok, rep), flush=True)
    with tempfile.TemporaryDirectory() as d:
        rep = determinism_report(Path(d))
    results.append(rep["status"] == "pass")
    print(_line(12, "determinism (CLI, cache on/off)", results[-1], rep))
    sys.exit(0 if all(results) else 1)
