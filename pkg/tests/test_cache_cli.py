import json

import pytest

from symderiv import cli
from symderiv.cache import Cache, CacheKey, dumps_basis, loads_basis
from symderiv.homology import AlgebraHandle, bracket_image
from symderiv.linalg import SubspaceBasis
from symderiv.report import Report, strip_timings
from symderiv.tensors import Space, invariant_subspace


def test_dump_format():
    S = Space.symplectic(2)
    B = SubspaceBasis([{0: 2, 5: 3}, {7: -1}])
    text = dumps_basis(B, S, 2)
    assert text.splitlines()[0] == "degree=2 dim=2 space=sympl:2"
    assert "1,1:1/1" in text and "2,2:3/2" in text and "2,4:1/1" in text


@pytest.mark.parametrize("g,m", [(1, 3), (2, 3), (2, 4)])
def test_round_trip_is_byte_identical(g, m):
    S = Space.symplectic(g)
    B = invariant_subspace(S, m)
    text = dumps_basis(B, S, m)
    back, space, degree = loads_basis(text)
    assert (space, degree) == (S, m)
    assert back.rows() == B.rows() and back.pivots == B.pivots
    assert dumps_basis(back, space, degree) == text


def test_round_trip_of_bracket_image_with_fractions():
    img = bracket_image(AlgebraHandle("assoc", 2), 2).basis
    S = Space.symplectic(2)
    text = dumps_basis(img, S, 4)
    assert dumps_basis(loads_basis(text)[0], S, 4) == text


def test_plain_space_round_trip():
    S = Space.plain(3)
    B = SubspaceBasis([{0: 1, 4: -2}, {3: 5}])
    assert loads_basis(dumps_basis(B, S, 2))[0].rows() == B.rows()


def test_cache_store_load(tmp_path):
    cache = Cache(tmp_path)
    key = CacheKey("assoc", 2, 2, "bracket-image")
    assert cache.load(key) is None and cache.misses == 1
    B = SubspaceBasis([{1: 1}])
    cache.store(key, B, Space.symplectic(2), 4)
    assert cache.load(key).rows() == B.rows() and cache.hits == 1
    assert CacheKey("assoc", 3, 2, "bracket-image").filename() != key.filename()


def test_disabled_cache(tmp_path):
    cache = Cache(tmp_path, enabled=False)
    cache.store(CacheKey("a", 1, 1, "k"), SubspaceBasis(), Space.symplectic(1), 3)
    assert not list(tmp_path.iterdir())


def test_env_var_sets_cache_dir(monkeypatch, tmp_path):
    monkeypatch.setenv("SYMDERIV_CACHE", str(tmp_path / "c"))
    assert Cache().directory == tmp_path / "c"


def test_report_status_rules():
    r = Report("x", {})
    assert r.add("a", "anchor", 1, 1).status == "pass"
    assert r.add("b", "anchor", 1, 2).status == "fail"
    assert r.add("c", "anchor", 1).status == "reported"
    assert r.exit_code == 1
    d = json.loads(r.to_json())
    assert set(d) == {"command", "params", "checks", "version", "cache"}
    assert set(d["checks"][0]) == {"name", "anchor", "status", "computed", "expected", "ms"}


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_dims_examples(capsys, tmp_path):
    code, out = run(capsys, "--json-out", "-", "dims", "--genus", "2", "--max-degree", "3")
    d = json.loads(out)
    assert code == 0
    assert [c["computed"] for c in d["checks"][:3]] == [24, 70, 208]
    code, out = run(capsys, "dims", "--plain", "2", "--max-degree", "4", "--json-out", "-")
    values = [c["computed"] for c in json.loads(out)["checks"] if c["name"].startswith("dim Der")]
    assert values == [8, 16, 32, 64]
    code, out = run(capsys, "dims", "--genus", "1", "--max-degree", "1", "--json-out", "-")
    assert json.loads(out)["checks"][0]["computed"] == 4


def test_abelianize_examples(capsys, tmp_path):
    cd = str(tmp_path)
    code, out = run(capsys, "abelianize", "--plain", "2", "--weight", "2", "--cache-dir", cd, "--json-out", "-")
    c = json.loads(out)["checks"][0]
    assert code == 0 and c["status"] == "pass" and c["computed"] == 4
    code, out = run(capsys, "abelianize", "--sympl", "3", "--weight", "2", "--cache-dir", cd, "--json-out", "-")
    c = json.loads(out)["checks"][0]
    assert code == 0 and c["status"] == "reported" and c["computed"] == 14


def test_abelianize_expensive_is_gated(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["abelianize", "--sympl", "4", "--weight", "3"])
    assert e.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["dims"], ["polygon", "--k", "1..3"], ["polygon", "--k", "x"], ["decompose", "--genus", "3"],
     ["conjecture", "--n", "1"], ["--threads", "0", "decompose", "--genus", "4"]],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(argv)
    assert e.value.code == 2


def test_polygon_and_decompose(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, _ = run(capsys, "polygon", "--k", "2..8", "--disconnected", "--json-out", str(out_file))
    d = json.loads(out_file.read_text())
    assert code == 0
    assert [c["computed"] for c in d["checks"] if c["name"].endswith("value")] == [0, 0, 0, -10, 0, 0, 0]
    code, _ = run(capsys, "decompose", "--genus", "4")
    assert code == 0


def test_conjecture_is_reported(capsys):
    code, out = run(capsys, "conjecture", "--n", "3", "--json-out", "-")
    c = json.loads(out)["checks"][0]
    assert code == 0 and c["status"] == "reported" and c["computed"] == 9


def test_global_flags_after_command(capsys, tmp_path):
    code, out = run(capsys, "conjecture", "--n", "2", "--cache-dir", str(tmp_path), "--json-out", "-")
    assert json.loads(out)["checks"][0]["status"] == "pass"


def test_verify_paper_fast_is_deterministic_and_fails_on_display_conflicts(capsys, tmp_path):
    reports = []
    for _ in range(2):
        code, out = run(capsys, "verify-paper", "--cache-dir", str(tmp_path), "--json-out", "-")
        reports.append(json.loads(out))
    assert strip_timings(reports[0]) == strip_timings(reports[1])
    failed = {c["name"] for c in reports[0]["checks"] if c["status"] == "fail"}
    assert code == 1
    assert failed == {"C11(dual[xi1, eta1]) = -2 x1(x)x1", "dual[xi2, eta2] equals the stated tensor"}
