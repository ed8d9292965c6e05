import csv
import io
import json
import re
import subprocess
import sys

import pytest

from conftest import ROOT, SPEC_DIR
from rsm import cli
from rsm.specs import SUBCOMMANDS

SPEC = str(SPEC_DIR / "counterexample-p5.json")

# one small invocation per table; keys match the first column of docs/schemas.md
SMOKE = {
    "wintner": ["wintner", "--function", "sigma-over-n", "--q", "1-3", "--X", "4096"],
    "carmichael": ["carmichael", "--function", "exp:5:2", "--q", "1-5", "--X", "4096"],
    "hypotheses": ["hypotheses", "--function", "sigma-over-n", "--X", "4096", "--P", "2,3"],
    "smoothsum": ["smoothsum", "--coeff", "const:1", "--a", "1-4", "--P", "2,3,5"],
    "irr": ["irr", "--function", "sigma-over-n", "--d", "1,2", "--P", "5", "--X", "4096"],
    "decomp --form transform": ["decomp", "--function", "sigma-over-n", "--n", "1-3", "--P", "5", "--X", "65536"],
    "decomp --form function": ["decomp", "--function", "sigma-over-n", "--form", "function", "--n", "6", "--P", "7", "--X", "65536"],
    "fai": ["fai", "--function", "counterexample:5", "--a-max", "5", "--X", "4096"],
    "reef": ["reef", "--spec", SPEC, "--a-max", "5"],
    "correlate": ["correlate", "--spec", SPEC, "--a-max", "5"],
    "error": ["error", "--spec", SPEC, "--a-max", "5"],
    "singular": ["singular", "--two-k", "2,6", "--product-bound", "10000", "--series-bound", "2000"],
    "hl": ["hl", "--N", "10000", "--shifts", "2,4"],
    "chars": ["chars", "5"],
    "gauss": ["gauss", "7"],
    "theorem5": ["theorem5", "--q", "5", "--j", "2", "--l", "1,5", "--P", "11"],
    "error-chars": ["error-chars", "--spec", SPEC, "--a-max", "3", "--P", "5"],
    "counterexample": ["counterexample", "--dmax", "500", "--a-max", "5", "--X", "4096"],
}


def documented_headers():
    text = (ROOT / "docs" / "schemas.md").read_text(encoding="utf-8")
    return dict(re.findall(r"^\| `([^`]+)` \| `([^`]+)` \|$", text, flags=re.M))


def run(argv, capsys):
    status = cli.main(argv)
    out, err = capsys.readouterr()
    return status, out, err


def test_every_subcommand_documented():
    docs = documented_headers()
    assert {k.split()[0] for k in docs} == set(SUBCOMMANDS)
    assert set(SMOKE) | {"csum"} == set(docs)


@pytest.mark.parametrize("key", sorted(SMOKE))
def test_csv_header_matches_docs(key, capsys):
    status, out, _ = run(SMOKE[key], capsys)
    assert status == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert ",".join(rows[0]) == documented_headers()[key]
    assert len(rows) > 1
    assert all(len(r) == len(rows[0]) for r in rows)
    assert out.endswith("\r\n")


@pytest.mark.parametrize("key", ["wintner", "reef", "counterexample"])
def test_json_mirrors_csv(key, capsys):
    _, out, _ = run(SMOKE[key], capsys)
    _, js, _ = run(SMOKE[key] + ["--json"], capsys)
    doc = json.loads(js)
    rows = list(csv.reader(io.StringIO(out)))
    assert doc["columns"] == rows[0]
    assert len(doc["rows"]) == len(rows) - 1
    assert list(doc) == sorted(doc)


def test_csum(capsys):
    assert run(["csum", "12", "8"], capsys) == (0, "c_12(8) = -2\n", "")
    status, out, _ = run(["csum", "12", "8", "--json"], capsys)
    assert json.loads(out)["rows"] == [{"q": 12, "a": 8, "value": -2}]


def test_csum_entry_point():
    res = subprocess.run([sys.executable, "-m", "rsm.cli", "csum", "12", "8"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout == "c_12(8) = -2\n"


def test_reef_reports_nonzero_residual(capsys):
    status, out, err = run(["reef", "--spec", SPEC, "--a-max", "20"], capsys)
    assert status == 0
    assert "max |residual| = 15/4" in err
    assert out.splitlines()[1] == "1,5,5,4,1/4,15/4"


def test_exact_cutoff_marker(capsys):
    # 5-smooth multiples of 2: (1/4) times the product of p^2/(p^2 - 1) over p <= 5
    _, out, _ = run(["wintner", "--function", "sigma-over-n", "--q", "2", "--P", "5"], capsys)
    assert out.splitlines()[1] == "2,exact,25/64,0"


@pytest.mark.parametrize(
    "argv",
    [
        ["wintner", "--function", "nope", "--q", "1"],
        ["irr", "--function", "sigma-over-n", "--d", "1", "--P", "37", "--X", "1024"],
        ["reef", "--spec", "/nonexistent.json"],
        ["theorem5", "--q", "7", "--j", "1", "--l", "1", "--P", "5"],
        ["decomp", "--function", "identity", "--n", "1", "--P", "5"],
        ["frobnicate"],
        ["csum", "12"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_check_failure_exits_1(capsys):
    status, out, err = run(["decomp", "--function", "sigma-over-n", "--n", "1-3", "--P", "5", "--X", "1024", "--tol", "1e-12"], capsys)
    assert status == 1
    assert out == "" and "check failed" in err


@pytest.mark.parametrize("content", ["", "{}", "[]", '{"subcommand": "csum"}', '{"subcommand": "nope", "parameters": {}}'])
def test_bad_manifest_exits_2(content, tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(content, encoding="utf-8")
    assert cli.main(["run", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_manifest_missing_positional(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"subcommand": "csum", "parameters": {"q": 12}}), encoding="utf-8")
    assert cli.main(["run", str(path)]) == 2


def test_manifest_argv():
    doc = {"subcommand": "csum", "parameters": {"q": 12, "a": 8}}
    assert cli.manifest_argv(doc) == ["csum", "12", "8"]
    doc = {"subcommand": "fai", "parameters": {"function": "one", "a_max": 3, "json": False}, "seed": 4, "cutoffs": [8, 16, 32]}
    assert cli.manifest_argv(doc) == ["fai", "--a-max", "3", "--function", "one", "--seed", "4", "--cutoffs", "8,16,32"]


@pytest.mark.parametrize(
    "subcommand,parameters",
    [
        ("wintner", {"function": "sigma-over-n", "q": "1-6", "X": 8192}),
        ("error-chars", {"random": 3, "a_max": 4}),
        ("hl", {"N": 5000, "shifts": [2, 4, 6]}),
        ("csum", {"q": 30, "a": 12}),
    ],
)
def test_manifest_deterministic(subcommand, parameters, tmp_path):
    blobs = []
    for k in range(2):
        doc = {
            "subcommand": subcommand,
            "parameters": parameters,
            "seed": 7,
            "outputs": {"csv": str(tmp_path / f"out{k}.csv"), "json": str(tmp_path / f"out{k}.json")},
        }
        path = tmp_path / f"m{k}.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        assert cli.main(["run", str(path)]) == 0
        blobs.append(((tmp_path / f"out{k}.csv").read_bytes(), (tmp_path / f"out{k}.json").read_bytes()))
    assert blobs[0] == blobs[1]
    header = blobs[0][0].decode().split("\r\n")[0]
    docs = documented_headers()
    assert header == docs[subcommand]


def test_manifest_with_cutoffs(tmp_path):
    out = tmp_path / "w.csv"
    doc = {"subcommand": "wintner", "parameters": {"function": "sigma-over-n", "q": 2}, "cutoffs": [64, 128, 256],
           "outputs": {"csv": str(out)}}
    assert cli.run(doc) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert [r[1] for r in rows[1:]] == ["64", "128", "256"]


def test_manifest_check_failure_exits_1(tmp_path):
    doc = {"subcommand": "decomp", "parameters": {"function": "sigma-over-n", "n": "1-2", "P": 5, "X": 512, "tol": 1e-14},
           "outputs": {"csv": str(tmp_path / "d.csv")}}
    assert cli.run(doc) == 1
    assert not (tmp_path / "d.csv").exists()


def test_random_error_chars_depends_on_seed(capsys):
    a = run(["error-chars", "--random", "2", "--a-max", "2", "--seed", "1"], capsys)[1]
    b = run(["error-chars", "--random", "2", "--a-max", "2", "--seed", "1"], capsys)[1]
    c = run(["error-chars", "--random", "2", "--a-max", "2", "--seed", "2"], capsys)[1]
    assert a == b != c


def test_smoothsum_table_file(tmp_path, capsys):
    table = tmp_path / "g.csv"
    table.write_text("q,value\n1,1\n2,1/2\n", encoding="utf-8")
    status, out, _ = run(["smoothsum", "--coeff", f"table:{table}", "--a", "1,2", "--P", "2"], capsys)
    assert status == 0
    # G(1) c_1(a) + G(2) c_2(a): 1 + 1/2 * (-1) at a = 1, 1 + 1/2 at a = 2
    assert out.splitlines()[1:] == ["1,2,1/2", "2,2,3/2"]


def test_out_flag(tmp_path, capsys):
    path = tmp_path / "c.csv"
    assert cli.main(["chars", "3", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert path.read_text().startswith("chi,exponents,n,re,im")


def test_version(capsys):
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["--version"])
    assert "rsm" in capsys.readouterr().out


def test_cache_dir_round_trip(tmp_path, monkeypatch):
    from rsm import arith

    monkeypatch.setenv("RSM_CACHE_DIR", str(tmp_path / "cache"))
    tables = arith.SieveTables.build(1000)
    arith._store_cached(tables)
    assert (tmp_path / "cache" / "sieve-1000.npz").exists()
    loaded = arith._load_cached(1000)
    for k in ("spf", "mu", "phi", "primes"):
        assert (getattr(loaded, k) == getattr(tables, k)).all()
    assert arith._load_cached(2000) is None


@pytest.mark.parametrize("script", sorted(p.name for p in (ROOT / "demos").glob("*.py")))
def test_demo_scripts_run(script):
    res = subprocess.run([sys.executable, str(ROOT / "demos" / script)], capture_output=True, text=True, check=False)
    assert res.returncode == 0, res.stderr


@pytest.mark.parametrize("manifest", sorted(p.name for p in (ROOT / "demos" / "manifests").glob("*.json")))
def test_demo_manifests_run(manifest, tmp_path, monkeypatch):
    doc = json.loads((ROOT / "demos" / "manifests" / manifest).read_text(encoding="utf-8"))
    doc["outputs"] = {k: str(tmp_path / v) for k, v in doc["outputs"].items()}
    monkeypatch.chdir(ROOT)
    assert cli.run(doc) == 0
