"""End-to-end command-line behaviour via main(argv)."""
from __future__ import annotations

import json

import pytest

from rainbowmatch import cyclic_square, dumps_square, latin_to_graph
from rainbowmatch.cli import main
from rainbowmatch.multigraph import dumps as dumps_graph


@pytest.fixture
def z4_path(tmp_path):
    path = tmp_path / "z4.txt"
    path.write_text(dumps_graph(latin_to_graph(cyclic_square(4))))
    return str(path)


@pytest.fixture
def z5_path(tmp_path):
    path = tmp_path / "z5.txt"
    path.write_text(dumps_graph(latin_to_graph(cyclic_square(5))))
    return str(path)


class TestSolve:
    def test_target_reached_json(self, z4_path, capsys):
        code = main(["solve", "--input", z4_path, "--target-deficit", "1",
                     "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["status"] == "target_reached"
        assert doc["size"] >= 3
        assert doc["target"] == 3
        assert "wall_ms" not in doc
        assert doc["matching"]["size"] == doc["size"]

    def test_stalled_exit_code(self, z4_path, capsys):
        code = main(["solve", "--input", z4_path, "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 2
        assert doc["status"] == "stalled"
        assert doc["size"] == 3  # the optimum; the target of 4 is unattainable

    def test_iteration_cap_exit_code(self, z4_path, capsys):
        code = main(["solve", "--input", z4_path, "--max-iterations", "0"])
        capsys.readouterr()
        assert code == 3

    def test_human_output(self, z5_path, capsys):
        code = main(["solve", "--input", z5_path])
        out = capsys.readouterr().out
        assert code == 0
        assert "status: target_reached" in out
        assert "size: 5 (target 5, n 5)" in out
        assert out.count("edge ") == 5

    def test_timing_flag(self, z4_path, capsys):
        main(["solve", "--input", z4_path, "--target-deficit", "1", "--json",
              "--timing"])
        doc = json.loads(capsys.readouterr().out)
        assert "wall_ms" in doc and doc["wall_ms"] >= 0

    def test_json_is_byte_identical_across_runs(self, z5_path, capsys):
        main(["solve", "--input", z5_path, "--json"])
        first = capsys.readouterr().out
        main(["solve", "--input", z5_path, "--json"])
        second = capsys.readouterr().out
        assert first == second


class TestPipeline:
    def test_generate_solve_verify(self, tmp_path, capsys):
        instance = str(tmp_path / "inst.txt")
        matching = str(tmp_path / "m.json")
        assert main(["generate", "latin", "--cyclic", "5",
                     "--output", instance]) == 0
        assert main(["solve", "--input", instance, "--save-matching", matching,
                     "--json"]) == 0
        capsys.readouterr()
        assert main(["verify", "--input", instance, "--matching", matching,
                     "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["ok"] is True and doc["size"] == 5

    def test_verify_flags_corrupt_document(self, tmp_path, z4_path, capsys):
        matching = tmp_path / "bad.json"
        matching.write_text(json.dumps({"size": 2, "edges": [
            {"u": 0, "v": 4, "colour": 0, "edge_id": 0},
            {"u": 0, "v": 5, "colour": 1, "edge_id": 1},
        ]}))
        code = main(["verify", "--input", z4_path, "--matching", str(matching),
                     "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 2
        assert doc["ok"] is False
        assert doc["issues"][0]["kind"] == "vertex_clash"

    def test_generate_random_then_check(self, tmp_path, capsys):
        instance = str(tmp_path / "r.txt")
        assert main(["generate", "random", "--colours", "6", "--seed", "3",
                     "--output", instance]) == 0
        assert main(["check", "--input", instance, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["ok"] is True

    def test_generate_latin_square_format(self, tmp_path, capsys):
        out = str(tmp_path / "sq.txt")
        assert main(["generate", "latin", "--cyclic", "3", "--format", "square",
                     "--output", out]) == 0
        with open(out, encoding="utf-8") as fh:
            assert fh.read() == dumps_square(cyclic_square(3))


class TestOracle:
    def test_graph_oracle_json(self, z4_path, capsys):
        code = main(["oracle", "--input", z4_path, "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["size"] == 3
        assert doc["exact"] is True
        assert len(doc["witness"]) == 3

    def test_latin_oracle(self, tmp_path, capsys):
        path = tmp_path / "sq.txt"
        path.write_text(dumps_square(cyclic_square(6)))
        code = main(["oracle", "--input", str(path), "--latin", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["size"] == 5
        assert all(len(cell) == 2 for cell in doc["witness"])

    def test_cap_exceeded_exit_code(self, z4_path, capsys):
        code = main(["oracle", "--input", z4_path, "--max-nodes", "3", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 2
        assert doc["exact"] is False
        assert doc["size"] <= 3


class TestStats:
    def test_schema(self, z5_path, capsys):
        assert main(["stats", "--input", z5_path]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert sorted(doc) == ["F_size", "R_size", "counting", "levels", "m"]
        assert doc["m"] == len(doc["levels"])
        for entry in doc["levels"]:
            assert sorted(entry) == ["colours", "i", "size"]
        assert "contradiction" in doc["counting"]

    def test_with_supplied_matching(self, tmp_path, z5_path, capsys):
        matching = str(tmp_path / "m.json")
        main(["solve", "--input", z5_path, "--save-matching", matching])
        capsys.readouterr()
        assert main(["stats", "--input", z5_path, "--matching", matching]) == 0
        doc = json.loads(capsys.readouterr().out)
        # a full transversal uses every colour: nothing is flexible
        assert doc["F_size"] == 0 and doc["m"] == 0


class TestBench:
    def test_csv_shape(self, capsys):
        assert main(["bench", "--seeds", "0..2", "--colours", "5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "seed,n,found,optimum,iterations,switches,ms"
        assert len(lines) == 4
        for line in lines[1:]:
            seed, n, found, optimum, iters, switches, ms = line.split(",")
            assert int(n) == 5
            assert int(found) <= int(optimum)
            float(ms)

    def test_no_oracle_leaves_column_empty(self, capsys):
        assert main(["bench", "--seeds", "7", "--colours", "4",
                     "--no-oracle"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert lines[1].split(",")[3] == ""

    def test_unplaceable_seed_skipped_not_fatal(self, capsys, monkeypatch):
        from rainbowmatch import PlacementError
        from rainbowmatch.instances import generate_random
        import rainbowmatch.cli as cli

        def flaky(colours, count, vertices, cap, seed):
            if seed == 1:
                raise PlacementError("could not place all colour classes")
            return generate_random(colours, count, vertices, cap, seed)

        monkeypatch.setattr(cli, "generate_random", flaky)
        assert main(["bench", "--seeds", "0..2", "--colours", "4",
                     "--no-oracle"]) == 0
        out, err = capsys.readouterr()
        lines = out.strip().splitlines()
        assert [line.split(",")[0] for line in lines[1:]] == ["0", "2"]
        assert "seed 1 skipped" in err

    def test_bad_parameters_still_fatal(self, capsys):
        # count beyond a perfect matching is a usage error, not a skip
        assert main(["bench", "--seeds", "0..2", "--colours", "4",
                     "--count", "9", "--vertices", "10"]) == 1
        assert "error:" in capsys.readouterr().err


class TestErrors:
    def test_missing_file(self, capsys):
        code = main(["solve", "--input", "/nonexistent/path.txt"])
        err = capsys.readouterr().err
        assert code == 1
        assert "error:" in err

    def test_missing_required_argument(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["solve"])
        assert info.value.code == 1

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["conquer"])
        assert info.value.code == 1

    def test_malformed_instance(self, tmp_path, capsys):
        path = tmp_path / "broken.txt"
        path.write_text("4 2\n0 1\n")
        code = main(["solve", "--input", str(path)])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_impossible_generate(self, capsys):
        code = main(["generate", "random", "--colours", "4", "--count", "10",
                     "--vertices", "6"])
        assert code == 1
        assert "error:" in capsys.readouterr().err
