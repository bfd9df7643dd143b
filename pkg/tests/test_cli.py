import json
import subprocess
import sys

import pytest

from intensity_lab import cli


@pytest.fixture(autouse=True)
def cache_env(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("INTENSITY_LAB_CACHE_DIR", str(d))
    return d


def spec_file(tmp_path, spec, name="g.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec))
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_analyze_yo(tmp_path, capsys):
    code, out = run(["analyze", spec_file(tmp_path, {"kind": "yo"})], capsys)
    assert code == 0
    rep = json.loads(out.out)
    assert rep["schemaVersion"] == 1 and rep["kind"] == "analyze"
    assert rep["class"] == 4 and rep["widths"] == [2, 1, 2, 1]
    assert rep["predicates"]["kappa"] is True and rep["predicates"]["regular"] is False
    assert rep["predicates"]["obelisk"] is None


def test_analyze_abelian_and_sn(tmp_path, capsys):
    code, out = run(["analyze", spec_file(tmp_path, {"kind": "abelian", "p": 3, "type": [1]})], capsys)
    assert code == 0 and json.loads(out.out)["class"] == 1
    code, out = run(["analyze", spec_file(tmp_path, {"kind": "sn_delta", "p": 5, "M": 2})], capsys)
    preds = json.loads(out.out)["predicates"]
    assert code == 0 and preds["obelisk"] is True and preds["framed"] is True


@pytest.mark.parametrize("spec,expected", [
    ({"kind": "yo"}, 2),
    ({"kind": "abelian", "p": 5, "type": [2]}, 4),
    ({"kind": "semidirect_cyclic", "n": 4, "m": 2, "u": 3}, 1),
])
def test_intensity_command(tmp_path, capsys, spec, expected):
    code, out = run(["intensity", spec_file(tmp_path, spec)], capsys)
    assert code == 0
    rep = json.loads(out.out)
    assert rep["intensity"] == expected
    assert "seconds" not in rep and len(rep["generatorWords"]) == len(rep["generators"])


def test_reports_are_byte_identical(tmp_path, capsys):
    path = spec_file(tmp_path, {"kind": "extraspecial", "p": 5})
    outs = []
    for extra in ([], ["--threads", "3"], ["--no-cache"]):
        out = tmp_path / f"r{len(outs)}.json"
        assert cli.main(["intensity", path, "-o", str(out)] + extra) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_markdown_format(tmp_path, capsys):
    code, out = run(["analyze", spec_file(tmp_path, {"kind": "extraspecial", "p": 3}),
                     "--format", "markdown"], capsys)
    assert code == 0
    assert out.out.startswith("# analyze") and "| extraspecial | true |" in out.out


def test_subgroups_command(tmp_path, capsys):
    code, out = run(["subgroups", spec_file(tmp_path, {"kind": "extraspecial", "p": 3}),
                     "--classes-only"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["subgroupCount"] == 19 and "subgroups" not in rep
    assert sum(c["size"] for c in rep["classes"]) == 19


def test_cache_roundtrip(tmp_path, capsys, cache_env):
    path = spec_file(tmp_path, {"kind": "yo"})
    assert cli.main(["analyze", path, "-o", str(tmp_path / "a.json")]) == 0
    assert len(list(cache_env.glob("*.igrp"))) == 1
    assert cli.main(["analyze", path, "-o", str(tmp_path / "b.json")]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    code, out = run(["cache", "clear"], capsys)
    assert code == 0 and "removed 1" in out.out
    assert not list(cache_env.glob("*.igrp"))


def test_corrupt_cache_is_ignored(tmp_path, capsys, cache_env):
    from intensity_lab.constructions import GroupSpec
    spec = {"kind": "extraspecial", "p": 3}
    cache_env.mkdir()
    (cache_env / f"{GroupSpec.from_dict(spec).content_hash()}.igrp").write_bytes(b"junk")
    code, out = run(["analyze", spec_file(tmp_path, spec)], capsys)
    assert code == 0 and json.loads(out.out)["order"] == 27


def test_bad_input_exit_codes(tmp_path, capsys):
    assert run(["analyze", str(tmp_path / "missing.json")], capsys)[0] == 4
    assert run(["analyze", spec_file(tmp_path, {"kind": "yo", "extra": 1})], capsys)[0] == 4
    assert run(["analyze", spec_file(tmp_path, {"kind": "abelian", "p": 6, "type": [1]})], capsys)[0] == 4
    assert run(["frobnicate"], capsys)[0] == 4
    assert run(["intensity", spec_file(tmp_path, {"kind": "yo"}), "--threads", "0"], capsys)[0] == 4


def test_capacity_exit_code(tmp_path, capsys):
    spec = spec_file(tmp_path, {"kind": "sl2_triangle", "p": 5, "M": 3})
    code, out = run(["analyze", spec, "--max-order", "1000"], capsys)
    assert code == 3 and "capacity" in out.err
    code, _ = run(["subgroups", spec_file(tmp_path, {"kind": "yo"}, "y.json"),
                   "--max-subgroups", "50"], capsys)
    assert code == 3


def test_kappa_command(tmp_path, capsys):
    code, out = run(["kappa-structures"], capsys)
    assert code == 0
    assert json.loads(out.out)["checks"]["K_V"] == 3


def test_verify_only_kappa(tmp_path, capsys):
    target = tmp_path / "rows.json"
    code, out = run(["verify-thesis", "--only", "kappa", "-o", str(target)], capsys)
    assert code == 0
    rows = json.loads(target.read_text())["rows"]
    assert rows and all(r["module"] == "kappa_structures" for r in rows)
    assert "PASS" in out.out and "citation:" in out.out


def test_verify_strict_tiny_budget_fails(capsys):
    code, out = run(["verify-thesis", "--only", "core", "--strict", "--budget-minutes", "1e-9"], capsys)
    assert code != 0 and "SKIPPED" in out.out


def test_verify_unknown_module(capsys):
    assert run(["verify-thesis", "--only", "nothing"], capsys)[0] == 4


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "intensity_lab", "kappa-structures"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and '"Lambda": 3' in res.stdout
