"""Instance files and the command line."""

import copy
import json

import pytest

from relhom import cli
from relhom.corpus import all_corpora
from relhom.io import (
    InstanceError,
    corpus_instance,
    dumps,
    instance_from_json,
    load_instance,
    shipped_corpus_path,
)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_shipped_corpus_matches_constructors():
    shipped = json.loads(shipped_corpus_path().read_text())
    assert shipped == json.loads(dumps(corpus_instance()))
    inst = load_instance(shipped_corpus_path())
    for cname, corp in all_corpora().items():
        assert inst.algebras[cname] == corp.algebra
        for mname, m in corp.modules.items():
            assert inst.module(mname, cname) == m


def test_algebra_level_prime_override():
    inst = load_instance(shipped_corpus_path())
    assert inst.algebras["F3"].p == 3 and inst.p == 2


@pytest.mark.parametrize(
    "mutate, pointer",
    [
        (lambda d: d.__setitem__("p", 4), "/p"),
        (lambda d: d["algebras"]["R1"].__setitem__("unit", [1]), "/algebras/R1/unit"),
        (lambda d: d["algebras"]["R1"]["structure_constants"].__setitem__(3, "x"), "/algebras/R1/structure_constants/3"),
        (lambda d: d["modules"]["R1/k"].__setitem__("algebra", "nope"), "/modules/R1~1k/algebra"),
        (lambda d: d["modules"]["R1/k"]["action"][1][0].__setitem__(0, 1), "/modules/R1~1k"),
        (lambda d: d["classes"].__setitem__("bad", {"kind": "sum", "witness": "R3/k"}), "/classes/bad/kind"),
        (lambda d: d["algebras"]["R2"].pop("dim"), "/algebras/R2/dim"),
    ],
)
def test_schema_errors_carry_pointers(mutate, pointer):
    doc = copy.deepcopy(corpus_instance())
    mutate(doc)
    with pytest.raises(InstanceError) as exc:
        instance_from_json(doc)
    assert exc.value.pointer == pointer


def test_non_associative_algebra_is_rejected():
    doc = copy.deepcopy(corpus_instance())
    sc = doc["algebras"]["R1"]["structure_constants"]
    sc[7] = 1  # x * x = x, while x * 1 = x keeps the unit laws
    with pytest.raises(InstanceError):
        instance_from_json(doc)


def test_validate_command(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "--format", "json")
    assert code == 0 and json.loads(out)["status"] == "pass"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "invalid JSON" in err
    bad.write_text(json.dumps({"p": 2, "algebras": {}, "modules": {"m": {"algebra": "A", "dim": 1, "action": []}}}))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "/modules/m/algebra" in err


def test_dim_command(capsys):
    code, out, _ = run(capsys, "dim", "--class", "add:omega", "--module", "k", "--cutoff", "6", "--format", "json")
    res = json.loads(out)
    assert code == 0
    assert res["l_dim"] == "above_cutoff" and res["e_l_dim"] == "above_cutoff"
    code, out, _ = run(capsys, "dim", "--algebra", "UT2", "--class", "proj", "--module", "S2", "--format", "json")
    res = json.loads(out)
    assert (res["l_dim"], res["e_l_dim"]) == (1, 1)


def test_ext_and_relext_commands(capsys):
    code, out, _ = run(capsys, "ext", "--algebra", "R1", "--M", "k", "--N", "k", "--upto", "6", "--format", "json")
    assert code == 0 and json.loads(out)["dims"] == [1] * 7
    code, out, _ = run(capsys, "relext", "--class", "add:omega", "--M", "omega", "--N", "k", "--format", "json")
    assert code == 0 and json.loads(out)["dims"][1:] == [0, 0, 0, 0]


def test_verify_cor_3_5_command(capsys):
    code, out, _ = run(capsys, "verify", "cor-3-5", "--C", "omega", "--M", "k")
    assert code == 0
    assert out.count("above_cutoff") == 8  # four rows, both sides


def test_verify_global_dim_command_flags_caveat(capsys):
    code, out, _ = run(capsys, "verify", "global-dim", "--algebra", "F2xF2", "--class", "add:S1", "--format", "json")
    res = json.loads(out)
    assert code == 1 and res["generator_caveat"] is True and res["sup"] == 0


def test_check_commands(capsys):
    assert run(capsys, "check", "semidualizing", "--C", "omega")[0] == 0
    assert run(capsys, "check", "self-orthogonal", "--algebra", "R1", "--C", "k")[0] == 1
    assert run(capsys, "check", "hom-faithful", "--algebra", "F2xF2", "--class", "add:S1")[0] == 1
    assert run(capsys, "check", "purity", "--C", "omega", "--N", "omega")[0] == 0


def test_uncertified_class_is_reported(capsys):
    code, out, _ = run(capsys, "verify", "prop-2-6", "--algebra", "R1", "--class", "add:k", "--M", "R", "--format", "json")
    res = json.loads(out)
    assert code == 1 and res["status"] == "fail" and "not self-orthogonal" in res["findings"][0]


def test_unknown_module_is_an_input_error(capsys):
    code, _, err = run(capsys, "dim", "--class", "add:omega", "--module", "nope")
    assert code == 2 and "/modules/nope" in err


def test_violated_precondition_is_an_input_error(capsys):
    code, _, err = run(capsys, "check", "purity", "--C", "omega", "--N", "omega+R")
    assert code == 2 and "add(C)" in err


def test_readme_instance_runs(capsys, tmp_path):
    doc = {
        "p": 2,
        "algebras": {"R1": {"dim": 2, "structure_constants": [1, 0, 0, 1, 0, 1, 0, 0], "unit": [1, 0]}},
        "modules": {
            "R": {"algebra": "R1", "dim": 2, "action": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]},
            "k": {"algebra": "R1", "dim": 1, "action": [[[1]], [[0]]]},
        },
        "classes": {"addR": {"kind": "add", "witness": "R"}},
        "tasks": [{"command": "dim", "class": "addR", "module": "k"}],
    }
    path = tmp_path / "r1.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "report", str(path), "--canonical", "--format", "json")
    res = json.loads(out)["results"][0]
    assert code == 0 and res["l_dim"] == "above_cutoff"


def test_report_from_task_file(capsys, tmp_path):
    doc = corpus_instance()
    doc["tasks"] = [
        {"command": "ext", "algebra": "R1", "M": "k", "N": "k", "upto": 2},
        {"command": "verify", "target": "thm-5-2", "algebra": "UT2", "class": "proj", "M": "S2"},
    ]
    path = tmp_path / "tasks.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "report", str(path), "--canonical", "--format", "json")
    res = json.loads(out)
    assert code == 0 and [r["status"] for r in res["results"]] == ["pass", "pass"]


def test_numbers_in_reports_are_dimensions(capsys, tmp_path):
    doc = corpus_instance()
    doc["tasks"] = [{"command": "dim", "algebra": "R3", "class": "add:omega", "module": "k"}]
    path = tmp_path / "t.json"
    path.write_text(json.dumps(doc))
    _, out, _ = run(capsys, "report", str(path), "--canonical", "--format", "json")

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from walk(v)
        elif isinstance(x, list):
            for v in x:
                yield from walk(v)
        else:
            yield x

    for v in walk(json.loads(out)):
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            assert isinstance(v, int) and v >= 0
