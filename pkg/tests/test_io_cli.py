import json

import pytest

from graftlab import foresty_cat as fc
from graftlab import io
from graftlab.cli import main
from graftlab.gradedalg import INT, RATIONAL, compare_maps
from graftlab.monoid_morse import corpus, corpus_homomorphisms, morse_fbialgebra, morse_pushforward, morse_simplex
from graftlab.suites import run_suites

ML = 2


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    H = {h.name: h for h in corpus_homomorphisms()}
    f, g = H["Z4->Z2"], H["Z2->S3"]
    obj = {M.name: morse_fbialgebra(M, INT, ML)[1] for M in (f.src, f.dst, g.dst)}
    paths = {}

    def write(name, data):
        p = tmp_path / name
        p.write_text(io.dumps(data))
        paths[name] = str(p)

    write("f.json", io.morphism_to_json(morse_pushforward(f, INT, ML), obj["Z4"], obj["Z2"]))
    write("g.json", io.morphism_to_json(morse_pushforward(g, INT, ML), obj["Z2"], obj["S3"]))
    sx = morse_simplex([f, g], INT, ML)
    write("sx.json", io.simplex_to_json(sx))
    del sx.maps[(0, 2)], sx.maps[(0, 1, 2)]
    write("horn.json", io.simplex_to_json(sx))
    write("z2.json", io.object_to_json(obj["Z2"]))
    (tmp_path / "bad.json").write_text("{not json")
    paths["bad.json"] = str(tmp_path / "bad.json")
    paths["dir"] = tmp_path
    return paths


def test_heartsuit(capsys):
    assert run(capsys, "heartsuit", "--k1", "2,1", "--k0", "2")[:2] == (0, "1\n")
    assert run(capsys, "heartsuit", "--k1", "2", "--k0", "2")[0] == 2


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2


def test_malformed_json(capsys, files):
    code, _, err = run(capsys, "check-simplex", files["bad.json"])
    assert code == 2 and "invalid JSON" in err
    assert run(capsys, "check-object", str(files["dir"] / "missing.json"))[0] == 2


def test_wrong_schema(capsys, tmp_path):
    p = tmp_path / "o.json"
    p.write_text(json.dumps({"category": "ud", "ring": "Z"}))
    assert run(capsys, "check-object", str(p))[0] == 2


def test_ddzero(capsys):
    code, out, _ = run(capsys, "ddzero", "--max-dim", "4")
    assert code == 0 and out.splitlines()[-1].startswith("PASS")


def test_strata(capsys):
    code, out, _ = run(capsys, "strata", "--n", "2", "--k", "1", "--l", "1")
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "PASS"
    assert all(line.split(" ", 1)[0] in "+-" for line in lines[:-1])
    assert run(capsys, "strata", "--n", "0", "--k", "1", "--l", "1")[0] == 2


def test_rho_and_splittings(capsys):
    assert run(capsys, "rho", "--n0", "0", "--k0", "2", "--l0", "1", "--n1", "1", "--k1", "1,1", "--l1", "1",
               "--oracle")[:2] == (0, "1 oracle 1\n")
    code, out, _ = run(capsys, "splittings", "--k", "3")
    assert code == 0 and len(out.splitlines()) == 4


def test_object_round_trip_and_fault(capsys, files):
    assert run(capsys, "check-object", files["z2.json"])[0] == 0
    data = json.loads(open(files["z2.json"]).read())
    for comp in data["alphaComponents"]:
        if comp["k"] == [3] and comp["l"] == [1]:
            raise AssertionError("emitted object exceeds maxLeaves")
        if comp["k"] == [2] and comp["l"] == [1]:
            comp["entries"][0]["coeff"] = 5
    p = files["dir"] / "z2bad.json"
    p.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check-object", str(p))
    assert code == 1 and out.splitlines()[-1].startswith("FAIL")


def test_morphisms_and_simplices(capsys, files):
    d = files["dir"]
    assert run(capsys, "check-morphism", files["f.json"])[0] == 0
    assert run(capsys, "compose", files["f.json"], files["g.json"], "--out", str(d / "gf.json"))[0] == 0
    assert run(capsys, "check-morphism", str(d / "gf.json"))[0] == 0
    assert run(capsys, "compose", files["g.json"], files["f.json"])[0] == 2
    assert run(capsys, "check-simplex", files["sx.json"])[0] == 0
    assert run(capsys, "fill-horn", files["horn.json"], "--out", str(d / "filled.json"))[0] == 0
    code, out, _ = run(capsys, "check-simplex", str(d / "filled.json"), "--json")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, _, _ = run(capsys, "check-simplex", files["horn.json"], "--skip-objects")
    assert code == 1


def test_monoid_morse_and_triples(capsys, tmp_path):
    out = tmp_path / "obj.json"
    assert run(capsys, "monoid-morse", "LZ2", "--max-leaves", "3", "--emit-object", str(out))[0] == 0
    assert run(capsys, "check-object", str(out))[0] == 0
    sg = tmp_path / "bad_sg.json"
    sg.write_text(json.dumps({"elements": ["a", "b"], "table": [[1, 1], [1, 0]]}))
    code, _, err = run(capsys, "monoid-morse", str(sg), "--max-leaves", "2")
    assert code == 2 and "associative" in err
    code, out, _ = run(capsys, "triple-blocks", "translation", "--max-leaves", "2", "--json")
    assert code == 0 and any(r["eps"] == 1 for r in json.loads(out))


def test_io_round_trip_over_q():
    M = corpus()["S3"]
    _, alpha = morse_fbialgebra(M, RATIONAL, 2)
    mods, back = io.object_from_json(json.loads(io.dumps(io.object_to_json(alpha))))
    assert back.ring == RATIONAL
    for idx in alpha.support():
        assert compare_maps(alpha.component(idx), back.component(idx)).equal
    assert fc.check_fbialgebra(back, 2).passed


def test_selftest_is_deterministic(capsys, monkeypatch):
    args = ["selftest", "--suite", "golden", "--suite", "heartsuit-oracle", "--json"]
    first = run(capsys, *args)
    monkeypatch.setenv("GRAFTLAB_THREADS", "2")
    second = run(capsys, *args)
    assert first[0] == 0 and first == second


def test_run_suites_orders_by_name():
    reps = run_suites("quick", names=["golden", "heartsuit-oracle"])
    assert [r.suite for r in reps] == ["golden", "heartsuit-oracle"]
    with pytest.raises(KeyError):
        run_suites("quick", names=["nope"])
