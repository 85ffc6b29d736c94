import json

import pytest

from cotangent_yangian import cli
from cotangent_yangian.core import FIXTURES
from cotangent_yangian.duality import tensor_to_json
from cotangent_yangian.errors import InternalError
from cotangent_yangian.yangian import quantize


def _run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_inspect(capsys):
    code, out, _ = _run(capsys, "inspect", "--g", "sl2.json")
    data = json.loads(out)
    assert code == 0 and data["d"] == 3 and data["jacobi"] == "pass"


def test_inspect_path(capsys):
    code, out, _ = _run(capsys, "inspect", "--g", str(FIXTURES / "sl3.json"))
    assert code == 0 and json.loads(out)["d"] == 8


def test_coproduct_matches_library(capsys, sl2):
    code, out, _ = _run(capsys, "coproduct", "--gen", "I^h_1", "--K", "2")
    assert code == 0
    q = quantize(lie=sl2, K=2)
    assert json.loads(out)["coproduct"] == tensor_to_json(q.coproduct_gen((1, 2, 1)))


def test_parse_gen(sl2):
    assert cli.parse_gen("I^h_1", sl2) == (1, 2, 1)
    assert cli.parse_gen("I_e_0", sl2) == (0, 0, 0)
    assert cli.parse_gen("I_2_3", sl2) == (3, 1, 0)
    for bad in ("I^x_1", "J_h_1", "I_h_-1"):
        with pytest.raises(cli.UsageError):
            cli.parse_gen(bad, sl2)


def test_usage_errors(capsys, tmp_path):
    assert _run(capsys, "nosuch")[0] == 2
    assert _run(capsys, "coproduct")[0] == 2
    assert _run(capsys, "coproduct", "--gen", "zz")[0] == 2
    assert _run(capsys, "inspect", "--g", str(tmp_path / "missing.json"))[0] == 2
    assert _run(capsys, "verify", "hopf", "--K", "-1")[0] == 2
    broken = tmp_path / "bad.json"
    broken.write_text('{"dim": 2, "labels": ["a", "b"], "f": [["a", "b", "a", 1, 1]], "kappa0": [["a", "a", 1, 1]]}')
    assert _run(capsys, "inspect", "--g", str(broken))[0] == 2


def test_verification_failure_exit(capsys, tmp_path):
    ef = tmp_path / "ef.json"
    ef.write_text('{"tail": [["e", 0, "f", 0, 1, 1]]}')
    code, out, _ = _run(capsys, "classical", "--r", str(ef), "--N", "2")
    assert code == 1 and json.loads(out)["gcybe"]["status"] == "fail"


def test_internal_error_exit(capsys, monkeypatch):
    def boom(args, lie):
        raise InternalError("broken invariant")

    monkeypatch.setitem(cli.COMMANDS, "inspect", boom)
    assert _run(capsys, "inspect")[0] == 3


def test_verify_borel_and_out(capsys, tmp_path):
    out = tmp_path / "rep.json"
    code, text, _ = _run(capsys, "verify", "borel", "--out", str(out))
    assert code == 0 and text == ""
    assert json.loads(out.read_text())["status"] == "pass"


def test_rmatrix_series_format(capsys):
    code, out, _ = _run(capsys, "rmatrix", "--which", "r_sing", "--M", "2")
    data = json.loads(out)["series"]
    assert code == 0 and data["domain"] == "z=inf"
    assert [t["zpow"] for t in data["terms"]] == [[-1], [-2]]


def test_cache_equals_no_cache(capsys, tmp_path):
    cache = tmp_path / "c.json"
    argv = ["twist", "--r2", str(FIXTURES / "r_ee.json"), "--K", "1", "--N", "1"]
    plain = _run(capsys, *argv)
    first = _run(capsys, *argv, "--cache", str(cache))
    second = _run(capsys, *argv, "--cache", str(cache))
    assert plain == first == second
    assert len(json.loads(cache.read_text())["entries"]) == 1


def test_modules_command(capsys):
    code, out, _ = _run(capsys, "modules", "--K", "2")
    data = json.loads(out)
    assert code == 0 and data["module"] and data["R"]["finite"]["exponents"] == [-1, 0]
