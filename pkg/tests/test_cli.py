"""Command-line interface: exit codes, file outputs, stdout shapes."""

import json

import pytest

from auctionlab import Instance, gap_instance, opt_2paa
from auctionlab.cli import main
from auctionlab.formats import dump_instance, instance_from_doc


@pytest.fixture
def instance_file(tmp_path):
    inst = Instance(
        ("u1", "u2"),
        (("A", 4), ("B", 3)),
        {("u1", "A"): 4, ("u1", "B"): 3, ("u2", "A"): 4, ("u2", "B"): 3},
    )
    path = tmp_path / "instance.json"
    with open(path, "w") as fp:
        dump_instance(inst, fp)
    return path


@pytest.fixture
def unit_file(tmp_path):
    inst = Instance(
        ("u1", "u2", "u3"),
        (("a", 1), ("b", 1), ("c", 1)),
        {
            ("u1", "a"): 1, ("u1", "b"): 1,
            ("u2", "b"): 1, ("u2", "c"): 1,
            ("u3", "c"): 1, ("u3", "a"): 1,
        },
    )
    path = tmp_path / "unit.json"
    with open(path, "w") as fp:
        dump_instance(inst, fp)
    return path


# ----------------------------------------------------------------------
# solve


def test_solve_greedy_prints_trace_doc(unit_file, capsys):
    assert main(["solve", "--algorithm", "greedy", "--input", str(unit_file)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["total"] == 2
    assert len(doc["steps"]) == 3


def test_solve_top_c_needs_c(instance_file, capsys):
    with pytest.raises(SystemExit) as err:
        main(["solve", "--algorithm", "top-c", "--input", str(instance_file)])
    assert err.value.code == 2

    assert main(
        ["solve", "--algorithm", "top-c", "--input", str(instance_file), "--c", "1"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["total"] == 3


def test_solve_ranking_requires_seed(unit_file):
    with pytest.raises(SystemExit) as err:
        main(["solve", "--algorithm", "ranking", "--input", str(unit_file)])
    assert err.value.code == 2


def test_solve_ranking_emits_matching(unit_file, capsys):
    code = main(
        ["solve", "--algorithm", "ranking", "--input", str(unit_file), "--seed", "3"]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"pairs", "size"}
    assert doc["size"] >= 2


def test_solve_ranking_simulate_with_k_copy(unit_file, tmp_path, capsys):
    out = tmp_path / "trace.json"
    code = main(
        [
            "solve", "--algorithm", "ranking-simulate",
            "--input", str(unit_file), "--seed", "0", "--k", "2",
            "--out", str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["steps"]) == 6  # three keywords, two copies each


def test_solve_reverse_match(unit_file, capsys):
    assert main(["solve", "--algorithm", "reverse-match", "--input", str(unit_file)]) == 0
    assert json.loads(capsys.readouterr().out)["total"] == 2


def test_solve_missing_input_file(tmp_path, capsys):
    code = main(["solve", "--algorithm", "greedy", "--input", str(tmp_path / "nope.json")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


# ----------------------------------------------------------------------
# oracle


def test_oracle_values_match_library(instance_file, unit_file, capsys):
    assert main(["oracle", "--problem", "2paa", "--input", str(instance_file)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == 4
    assert doc["trace"]["total"] == 4

    assert main(["oracle", "--problem", "2pm", "--input", str(unit_file)]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 2

    assert main(["oracle", "--problem", "1paa", "--input", str(instance_file)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == 7
    assert doc["winners"] == {"u1": "A", "u2": "B"}


def test_oracle_node_limit_failure_is_exit_one(unit_file, capsys):
    code = main(
        ["oracle", "--problem", "2pm", "--input", str(unit_file), "--node-limit", "1"]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


# ----------------------------------------------------------------------
# generate


def test_generate_gap_writes_instance(tmp_path):
    out = tmp_path / "gap.json"
    code = main(
        ["generate", "--family", "gap", "--params", "c=2,k=3", "--out", str(out)]
    )
    assert code == 0
    inst = instance_from_doc(json.loads(out.read_text()))
    assert inst == gap_instance(2, 3)


def test_generate_randomized_families_require_seed(capsys):
    for family in ("chain", "random-2pm", "random-2paa"):
        with pytest.raises(SystemExit) as err:
            main(["generate", "--family", family])
        assert err.value.code == 2


def test_generate_chain_to_stdout(capsys):
    assert main(["generate", "--family", "chain", "--seed", "6"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["keywords"]) == 9


def test_generate_adversary_needs_no_seed(capsys):
    assert main(["generate", "--family", "adversary", "--params", "m=4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["keywords"]) == 4


def test_generate_rejects_unknown_or_malformed_params():
    with pytest.raises(SystemExit) as err:
        main(["generate", "--family", "gap", "--params", "c=two"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["generate", "--family", "gap", "--params", "zzz=1"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["generate", "--family", "gap", "--params", "c"])
    assert err.value.code == 2


# ----------------------------------------------------------------------
# reduce


def test_reduce_partition_writes_gadget_and_roles(tmp_path):
    out = tmp_path / "gadget.json"
    code = main(
        ["reduce", "--from", "partition", "--weights", "1,1", "--c", "1", "--out", str(out)]
    )
    assert code == 0
    inst = instance_from_doc(json.loads(out.read_text()))
    roles = json.loads((tmp_path / "gadget.json.roles.json").read_text())
    assert roles["kind"] == "partition"
    assert roles["yes_value"] == 72
    assert roles["no_threshold"] == 32
    assert opt_2paa(inst).value == 72


def test_reduce_partition_requires_weights():
    with pytest.raises(SystemExit) as err:
        main(["reduce", "--from", "partition", "--out", "x.json"])
    assert err.value.code == 2


def test_reduce_vertex_cover_from_edge_list(tmp_path):
    graph = tmp_path / "graph.txt"
    graph.write_text("a b\nb c\na c\n")
    out = tmp_path / "vc.json"
    code = main(["reduce", "--from", "vertex-cover", "--graph", str(graph), "--out", str(out)])
    assert code == 0
    roles = json.loads((tmp_path / "vc.json.roles.json").read_text())
    assert roles["kind"] == "vertex-cover"
    assert set(roles["edge_keywords"]) == {"a b", "b c", "a c"}
    inst = instance_from_doc(json.loads(out.read_text()))
    assert inst.m == 9


def test_reduce_vertex_cover_requires_graph():
    with pytest.raises(SystemExit) as err:
        main(["reduce", "--from", "vertex-cover", "--out", "x.json"])
    assert err.value.code == 2


# ----------------------------------------------------------------------
# experiment


def test_experiment_pass_writes_csv_and_exits_zero(tmp_path, capsys):
    out = tmp_path / "records.csv"
    code = main(
        [
            "experiment", "--suite", "greedy-chain",
            "--trials", "50", "--seed", "42", "--out", str(out),
        ]
    )
    assert code == 0
    line = capsys.readouterr().out.strip().splitlines()[-1]
    assert line.startswith("PASS greedy-chain:")
    rows = out.read_text().splitlines()
    assert rows[0] == "suite,trial,seed,instance,value,reference,ratio"
    assert len(rows) == 51


def test_experiment_failed_verdict_exits_one(capsys):
    code = main(["experiment", "--suite", "greedy-chain", "--trials", "1", "--seed", "4"])
    assert code == 1
    assert capsys.readouterr().out.startswith("FAIL")


def test_experiment_requires_seed():
    with pytest.raises(SystemExit) as err:
        main(["experiment", "--suite", "greedy-chain", "--trials", "5"])
    assert err.value.code == 2


def test_experiment_rejects_unknown_params():
    with pytest.raises(SystemExit) as err:
        main(
            [
                "experiment", "--suite", "greedy-chain",
                "--trials", "5", "--seed", "0", "--params", "width=2",
            ]
        )
    assert err.value.code == 2


def test_experiment_structured_output(tmp_path, capsys):
    out = tmp_path / "records.json"
    code = main(
        [
            "experiment", "--suite", "adversary", "--seed", "0",
            "--params", "m_max=2", "--format", "structured", "--out", str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["suite"] == "adversary"
    assert doc["report"]["violations"] == 0
    assert len(doc["records"]) == 6


# ----------------------------------------------------------------------
# validate


def test_validate_ok(instance_file, capsys):
    assert main(["validate", "--input", str(instance_file)]) == 0
    assert "ok: 2 keywords, 2 bidders" in capsys.readouterr().out


def test_validate_bad_instance(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {
                "keywords": ["u"],
                "bidders": [{"id": "A", "budget": 2}],
                "bids": [{"keyword": "u", "bidder": "A", "amount": 5}],
            }
        )
    )
    assert main(["validate", "--input", str(path)]) == 1
    assert "error:" in capsys.readouterr().out


def test_validate_warning_still_ok(tmp_path, capsys):
    path = tmp_path / "thin.json"
    path.write_text(
        json.dumps(
            {
                "keywords": ["u1", "u2"],
                "bidders": [{"id": "a", "budget": 1}, {"id": "b", "budget": 1}],
                "bids": [
                    {"keyword": "u1", "bidder": "a", "amount": 1},
                    {"keyword": "u2", "bidder": "a", "amount": 1},
                    {"keyword": "u2", "bidder": "b", "amount": 1},
                ],
            }
        )
    )
    assert main(["validate", "--input", str(path)]) == 0
    out = capsys.readouterr().out
    assert "warning:" in out
    assert "ok:" in out
