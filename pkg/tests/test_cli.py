import json

import jsonschema
import pytest

from agreement_forest import schemas
from agreement_forest.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def crossing_files(tmp_path):
    a, b = tmp_path / "t1.nwk", tmp_path / "t2.nwk"
    a.write_text("((a,b),(c,d));\n")
    b.write_text("((a,c),(b,d));\n")
    return str(a), str(b)


@pytest.fixture
def cyclic_files(tmp_path):
    a, b = tmp_path / "c1.nwk", tmp_path / "c2.nwk"
    a.write_text("(((a,b),c),d);\n")
    b.write_text("(((c,d),a),b);\n")
    return str(a), str(b)


def test_maf_identical(capsys, tmp_path):
    p = tmp_path / "t.nwk"
    p.write_text("((a,b),c);")
    code, out, _ = run(capsys, "maf", "--t1", str(p), "--t2", str(p))
    assert code == 0 and "k: 0" in out


def test_maf_exact_json(capsys, crossing_files):
    t1, t2 = crossing_files
    code, out, _ = run(capsys, "maf", "--t1", t1, "--t2", t2, "--mode", "exact", "--json")
    report = json.loads(out)
    jsonschema.validate(report, schemas.MAF_SCHEMA)
    assert code == 0 and report["k"] == 2 and report["valid"]
    assert report["stats"]["nodes"] >= 1


def test_maf_approx_json(capsys, crossing_files):
    t1, t2 = crossing_files
    code, out, _ = run(capsys, "maf", "--t1", t1, "--t2", t2, "--json")
    report = json.loads(out)
    jsonschema.validate(report, schemas.MAF_SCHEMA)
    assert report["stats"] is None and report["cutCount"] == report["k"]


def test_maf_infeasible(capsys, crossing_files):
    t1, t2 = crossing_files
    code, out, _ = run(capsys, "maf", "--t1", t1, "--t2", t2, "--mode", "exact", "--max-k", "1")
    assert code == 1 and "infeasible" in out


def test_parse_error_exit_code(capsys, tmp_path, crossing_files):
    bad = tmp_path / "bad.nwk"
    bad.write_text("((a,b),c;\n")
    code, _, err = run(capsys, "maf", "--t1", str(bad), "--t2", crossing_files[1])
    assert code == 2 and "position" in err


def test_missing_file_and_mismatch(capsys, tmp_path, crossing_files):
    code, _, err = run(capsys, "maf", "--t1", str(tmp_path / "none"), "--t2", crossing_files[1])
    assert code == 2
    code, _, err = run(capsys, "maf", "--t1", "(a,b);", "--t2", "(a,c);")
    assert code == 2 and "leaf sets" in err


def test_bad_flag_value(capsys, crossing_files):
    with pytest.raises(SystemExit) as exc:
        main(["maf", "--t1", crossing_files[0], "--t2", crossing_files[1], "--mode", "fast"])
    assert exc.value.code == 2


def test_maaf_cyclic(capsys, cyclic_files, tmp_path):
    t1, t2 = cyclic_files
    dump = tmp_path / "d.txt"
    code, out, _ = run(capsys, "maaf", "--t1", t1, "--t2", t2, "--json", "--dump-dfvs", str(dump))
    report = json.loads(out)
    jsonschema.validate(report, schemas.MAAF_SCHEMA)
    assert code == 0 and report["k"] == 2 and report["hybridizationUpperBound"] == 2
    assert report["acyclic"] and report["identityHolds"]
    assert dump.read_text().startswith("# 6 vertices")


def test_maaf_text(capsys, cyclic_files):
    code, out, _ = run(capsys, "maaf", "--t1", cyclic_files[0], "--t2", cyclic_files[1],
                       "--mode", "approx", "--dfvs", "greedy")
    assert code == 0 and "acyclic: true" in out


def test_gen_deterministic(capsys):
    first = run(capsys, "gen", "--n", "12", "--moves", "3", "--seed", "7")
    second = run(capsys, "gen", "--n", "12", "--moves", "3", "--seed", "7")
    assert first == second and first[0] == 0
    assert len(first[1].splitlines()) == 2
    default1 = run(capsys, "gen", "--n", "12", "--moves", "3")
    default2 = run(capsys, "gen", "--n", "12", "--moves", "3")
    assert default1 == default2


def test_gen_files_and_json(capsys, tmp_path):
    a, b = tmp_path / "a.nwk", tmp_path / "b.nwk"
    code, out, _ = run(capsys, "gen", "--n", "6", "--moves", "0", "--t1", str(a), "--t2", str(b), "--json")
    report = json.loads(out)
    jsonschema.validate(report, schemas.GEN_SCHEMA)
    assert a.read_text() == b.read_text() == report["t1"] + "\n"
    code, out, _ = run(capsys, "oracle", "--t1", str(a), "--t2", str(b))
    assert code == 0 and out.strip().endswith("k: 0")


def test_gen_invalid(capsys):
    assert run(capsys, "gen", "--n", "1")[0] == 2
    assert run(capsys, "gen", "--n", "5", "--moves", "-1")[0] == 2


def test_gen_one_move_bound(capsys, tmp_path):
    a, b = tmp_path / "a.nwk", tmp_path / "b.nwk"
    for seed in range(5):
        run(capsys, "gen", "--n", "6", "--moves", "1", "--seed", str(seed), "--t1", str(a), "--t2", str(b))
        code, out, _ = run(capsys, "oracle", "--t1", str(a), "--t2", str(b), "--json")
        assert json.loads(out)["k"] <= 1


def test_validate(capsys, crossing_files, tmp_path):
    t1, t2 = crossing_files
    good = tmp_path / "good.nwk"
    good.write_text("(a,b);\nc;\nd;\n")
    code, out, _ = run(capsys, "validate", "--t1", t1, "--t2", t2, "--forest", str(good), "--json")
    report = json.loads(out)
    jsonschema.validate(report, schemas.VALIDATE_SCHEMA)
    assert code == 0 and report["agreementForest"] and report["acyclic"] is True
    bad = tmp_path / "bad.nwk"
    bad.write_text("(a,b);\n(c,d);\n")
    code, out, _ = run(capsys, "validate", "--t1", t1, "--t2", t2, "--forest", str(bad))
    assert code == 1 and "overlap" in out and "edge=" in out


def test_validate_reports_cycle(capsys, cyclic_files, tmp_path):
    f = tmp_path / "f.nwk"
    f.write_text("(a,b);\n(c,d);\n")
    code, out, _ = run(capsys, "validate", "--t1", cyclic_files[0], "--t2", cyclic_files[1],
                       "--forest", str(f), "--json")
    report = json.loads(out)
    assert code == 0 and report["acyclic"] is False
    assert sorted(map(tuple, report["inheritanceGraph"])) == [(0, 1), (1, 0)]


def test_validate_shared_labels(capsys, crossing_files, tmp_path):
    f = tmp_path / "f.nwk"
    f.write_text("(a,b);\n(b,c,d);\n")
    code, out, _ = run(capsys, "validate", "--t1", crossing_files[0], "--t2", crossing_files[1],
                       "--forest", str(f))
    assert code == 1


def test_oracle_maaf_and_guard(capsys, cyclic_files, tmp_path):
    code, out, _ = run(capsys, "oracle", "--t1", cyclic_files[0], "--t2", cyclic_files[1],
                       "--problem", "maaf", "--json")
    report = json.loads(out)
    jsonschema.validate(report, schemas.ORACLE_SCHEMA)
    assert report["k"] == 2
    big = "(" + ",".join(f"x{i}" for i in range(9)) + ");"
    assert run(capsys, "oracle", "--t1", big, "--t2", big)[0] == 2


def test_output_is_deterministic(capsys, crossing_files):
    t1, t2 = crossing_files
    outs = {run(capsys, "maaf", "--t1", t1, "--t2", t2, "--json")[1] for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "agreement_forest", "maf", "--t1", "(a,b);", "--t2", "(b,a);"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "k: 0" in res.stdout
