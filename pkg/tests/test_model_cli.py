import copy
import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import FIXTURE_DIR
from pseudocohom import cli
from pseudocohom.model import ModelError, model_from_dict, model_to_dict, parse_model, parse_model_text
from pseudocohom.report import REPORT_SCHEMA, Report

BASE = {
    "scalars": "F5",
    "modules": {"L": ["x1", "x2"], "M": ["z"]},
    "brackets": {"L": {"module": "L", "entries": {}}, "M": {"module": "M", "entries": {}}},
    "cochains": {
        "chi": {"sources": ["L", "L"], "target": "M", "skew_complete": True, "entries": {"x1 x2": "(1 | 1) z"}},
        "psi": {"sources": ["L", "M"], "target": "M", "entries": {}},
    },
    "maps": {"a": {"source": "L", "target": "L", "images": {"x1": "2*(1) x1", "x2": "x2"}},
             "b": {"source": "M", "target": "M", "images": {"z": "2*(1) z"}},
             "sing": {"source": "L", "target": "L", "images": {"x1": "x1"}}},
    "cocycles": {"c": {"L": "L", "M": "M", "chi": "chi", "psi": "psi"}},
    "pairs": {"P": {"beta": "b", "alpha": "a"}},
}


def _with(path, value):
    data = copy.deepcopy(BASE)
    node = data
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    return data


def test_base_model_loads_and_round_trips():
    m = model_from_dict(copy.deepcopy(BASE))
    assert m.pairs["P"].L == "L" and m.pairs["P"].M == "M"
    assert model_from_dict(model_to_dict(m)) == m


@pytest.mark.parametrize(
    "path, value, match",
    [
        (("extra",), 1, "unknown top-level"),
        (("scalars",), "F4", "scalars"),
        (("hopf",), {"kind": "group", "elements": ["e", "a"], "table": [["e", "a"], ["a", "a"]]}, "hopf"),
        (("modules", "M"), "z", "list of basis"),
        (("brackets", "L", "module"), "Q", "module"),
        (("maps", "a", "images", "x9"), "x1", "x9"),
        (("maps", "a", "images", "x1"), "(1 | 1) x1", "maps.a"),
        (("pairs", "P", "alpha"), "sing", "not an automorphism"),
        (("cocycles", "c", "psi"), "chi", "psi must map"),
    ],
)
def test_model_errors(path, value, match):
    with pytest.raises(ModelError, match=match):
        model_from_dict(_with(path, value))


def test_non_skew_table_reports_locator():
    bad = {"module": "L", "skew_complete": False, "entries": {"x1 x2": "(1 | 1) x1"}}
    with pytest.raises(ModelError, match=r"\('x2', 'x1'\)"):
        model_from_dict(_with(("brackets", "L"), bad))


def test_malformed_json_reports_position():
    with pytest.raises(ModelError, match="line 2"):
        parse_model_text('{"scalars": "Q",\n  "modules": }')


def test_polynomial_fixture_round_trip():
    m = parse_model(FIXTURE_DIR / "virasoro.model")
    assert m.hopf.kind == "polynomial"
    assert parse_model_text(json.dumps(model_to_dict(m))) == m


def _run(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr()


def test_json_to_stdout_validates(capsys):
    code, out = _run(["wells", str(FIXTURE_DIR / "h3_f5.model"), "--pair", "P1", "--json", "-"], capsys)
    assert code == 1
    doc = json.loads(out.out[out.out.index("{"):])
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["verdict"] == "fail"


def test_extract_and_cohomology_options(capsys):
    code, out = _run(["extract", str(FIXTURE_DIR / "aff1_semidirect.model"), "--section", "phi"], capsys)
    assert code == 0, out
    code, out = _run(["cohomology", str(FIXTURE_DIR / "sl2.model"), "--action", "trivial", "--degree", "3"], capsys)
    assert code == 0 and "dim H^3 = 1" in out.out
    code, out = _run(["gauge", str(FIXTURE_DIR / "ab2_h3.model"), "--cocycle", "h3", "--map", "phi"], capsys)
    assert code == 0, out


def test_usage_errors(capsys):
    assert _run([], capsys)[0] == 3
    assert _run(["mc-check", str(FIXTURE_DIR / "sl2.model")], capsys)[0] == 3
    assert _run(["equiv", str(FIXTURE_DIR / "h3_f5.model"), "--cocycle", "h3"], capsys)[0] == 3


def test_report_exit_codes():
    r = Report("x")
    assert r.exit_code == 0
    r.fail(("a",), "d")
    assert r.exit_code == 1 and not r.ok
    with pytest.raises(ValueError):
        Report("x", verdict="maybe")
    jsonschema.validate(r.to_json(), REPORT_SCHEMA)


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "pseudocohom.cli", "check-algebra", str(FIXTURE_DIR / "sl2.model")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "check-algebra: pass" in proc.stdout
