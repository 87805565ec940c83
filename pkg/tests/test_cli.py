import io
import json
import shutil

import pytest

from c2m_alloc.cli import main
from c2m_alloc.model import write_instance
from c2m_alloc.report import format_gamma

from conftest import make_instance


def run(*argv):
    out = io.StringIO()
    code = main(list(map(str, argv)), out=out)
    return code, out.getvalue()


@pytest.fixture
def instance_file(tmp_path, fixture_a):
    path = tmp_path / "fixture.json"
    path.write_bytes(write_instance(fixture_a))
    return path


@pytest.fixture(scope="module")
def small_suite(tmp_path_factory):
    out = tmp_path_factory.mktemp("suite")
    assert main(["generate", "--out", str(out), "--count", "1", "--seed", "3"], out=io.StringIO()) == 0
    return out


def test_generate_default_suite(tmp_path):
    code, text = run("generate", "--out", tmp_path / "a")
    assert code == 0
    files = sorted(p.name for p in (tmp_path / "a").glob("set*.json"))
    assert len(files) == 60
    labels = {name.rsplit("_", 1)[0] for name in files}
    assert labels == {"set1_1x5", "set2_1x10", "set3_5x5", "set4_5x10", "set5_10x5", "set6_10x10"}
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert len(manifest["instances"]) == 60
    assert "60 instances" in text


def test_generate_is_reproducible(tmp_path, small_suite):
    run("generate", "--out", tmp_path, "--count", "1", "--seed", "3")
    names = sorted(p.name for p in small_suite.iterdir())
    assert names == sorted(p.name for p in tmp_path.iterdir())
    assert len(names) == 7
    for name in names:
        assert (tmp_path / name).read_bytes() == (small_suite / name).read_bytes()


def test_solve_worked_instance(instance_file):
    code, text = run("solve", instance_file)
    assert code == 0
    lines = dict(line.rsplit(None, 1) for line in text.splitlines()[1:5])
    assert lines["Post-collaboration total profit"] == "350"
    assert lines["Product shortage"] == "N"
    assert lines["The value of γ"] == "0.88"


def test_solve_json(instance_file):
    code, text = run("solve", instance_file, "--json")
    doc = json.loads(text)
    assert code == 0
    assert doc["total_profit"] == 350
    assert doc["shortage"] is False
    assert doc["allocation"]["profits"] == pytest.approx([175, 175])
    assert doc["plan"]["allocation"] == [[50, 50]]


def test_zero_capacity_instance(tmp_path):
    inst = make_instance([10, 7], [2, 3], [100, 40], [5, 5], [[4, 9], [1, 1]], [[0, 0], [0, 0]])
    path = tmp_path / "empty.json"
    path.write_bytes(write_instance(inst))
    code, text = run("solve", path)
    assert code == 2
    assert "Product shortage                    Y" in text
    assert f"Post-collaboration total profit  {-(100 * 2 + 40 * 3)}" in text


def test_scale_oq(instance_file):
    _, text = run("solve", instance_file, "--json", "--scale-oq", "1.2")
    doc = json.loads(text)
    assert doc["scale_oq"] == 1.2
    # 120 units: 50 at margin 6, 70 at margin 1
    assert doc["total_profit"] == 370


def test_dump_lp(instance_file, capsys):
    out = io.StringIO()
    assert main(["solve", str(instance_file), "--dump-lp"], out=out) == 0
    err = capsys.readouterr().err
    assert "phase 1" in err and "maximize" in err


def test_gamma_display():
    assert format_gamma(0.766666) == "0.77"
    assert format_gamma(1.0, in_core=True) == "1"
    assert format_gamma(None) == "-"


def test_suite_tables(small_suite):
    code, text = run("suite", small_suite)
    assert code == 0
    assert text.count("Post-collaboration total profit") == 6
    assert text.count("Post-collaboration profits of the manufacturers in") == 6
    assert "instances 1" in text
    assert text.splitlines()[-1].startswith("all")


def test_suite_json(small_suite):
    code, text = run("suite", small_suite, "--json")
    doc = json.loads(text)
    assert code == 0
    assert [i["label"] for i in doc["instances"]] == [
        "set1_1x5",
        "set2_1x10",
        "set3_5x5",
        "set4_5x10",
        "set5_10x5",
        "set6_10x10",
    ]
    assert sum(s["instances"] for s in doc["summary"]) == 6


def test_suite_of_one_instance(tmp_path, small_suite):
    manifest = json.loads((small_suite / "manifest.json").read_text())
    first = manifest["instances"][0]
    shutil.copy(small_suite / first["file"], tmp_path / first["file"])
    (tmp_path / "manifest.json").write_text(json.dumps({"sets": manifest["sets"][:1], "instances": [first]}))
    code, text = run("suite", tmp_path)
    assert code == 0
    results = text.split("\n\n")[0].splitlines()
    assert results[1].split() == ["Instance", "1"]


def test_suite_errors(tmp_path, capsys):
    assert run("suite", tmp_path)[0] == 1
    assert "manifest" in capsys.readouterr().err
    (tmp_path / "manifest.json").write_text('{"instances": [{"file": "gone.json", "label": "x", "index": 1}]}')
    assert run("suite", tmp_path)[0] == 1
    assert "gone.json" in capsys.readouterr().err


def test_input_errors(tmp_path, capsys):
    assert run("solve", tmp_path / "missing.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"product_count": 1,')
    assert run("solve", bad)[0] == 1
    assert "byte offset 20" in capsys.readouterr().err
    invalid = tmp_path / "invalid.json"
    invalid.write_bytes(write_instance(make_instance(10, 2, 100, 0, [[4, 9]], [[10, 20]])))
    assert run("compare", invalid)[0] == 1
    assert "order_delivery_time" in capsys.readouterr().err


def test_compare(instance_file):
    code, text = run("compare", instance_file)
    assert code == 0
    assert "Shapley value" in text and "225.00" in text
    code, text = run("compare", instance_file, "--json")
    doc = json.loads(text)
    assert doc["shapley"]["profits"] == pytest.approx([225, 125])
    assert doc["gamma_core"]["gamma"] == pytest.approx(0.875)


def test_bad_scale_factor(instance_file):
    with pytest.raises(SystemExit):
        main(["solve", str(instance_file), "--scale-oq", "0"], out=io.StringIO())
