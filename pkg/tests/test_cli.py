"""Command line behavior: parsing, exit codes, determinism."""

import json

import pytest

from platkit.cli import main
from platkit.moves import HildenWord, MoveRecord, pocket_move
from platkit.plat import PlatPresentation, plat_from_json, plat_to_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDetect:
    def test_split(self, capsys):
        code, out, _ = run(capsys, "detect", "--n", "2", "--word", "s1 s3'")
        assert code == 0 and out.strip() == "split at i=1"

    def test_none(self, capsys):
        code, out, _ = run(capsys, "detect", "--n", "1", "--word", "")
        assert code == 0 and out.strip() == "none"

    def test_composite(self, capsys):
        code, out, _ = run(capsys, "detect", "--n", "3", "--word", "s1 s2 s4 s5")
        assert code == 0 and "composite at i=1" in out

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "detect", "--n", "2", "--word", "s0")
        assert code == 1 and "token 1" in err

    def test_json_input(self, capsys):
        blob = plat_to_json(PlatPresentation.from_ints(2, [1, -3]))
        code, out, _ = run(capsys, "detect", "--json", blob)
        assert code == 0 and "split at i=1" in out


class TestApply:
    def test_identity_double_coset(self, capsys):
        move = json.dumps(
            {"kind": "double_coset", "params": {"side": "top",
                                                "hilden": {"n": 2, "factors": []}}}
        )
        code, out, _ = run(capsys, "apply", "--n", "2", "--word", "s2", "--move", move)
        assert code == 0
        assert plat_from_json(out) == PlatPresentation.from_ints(2, [2])

    def test_flip_case_iv(self, capsys):
        move = json.dumps(
            {"kind": "flip",
             "params": {"case": "iv", "k": None, "end": "bottom", "split_at": 1}}
        )
        code, out, _ = run(capsys, "apply", "--n", "2", "--word", "s2",
                           "--move", move, "--verify")
        assert code == 0
        assert plat_from_json(out).word.to_ints() == (2, 2, 3, 2, 3, 2, 3)

    def test_log_replay_with_verify(self, capsys, tmp_path):
        p = PlatPresentation.from_ints(2, [2])
        out_plat, log = pocket_move(p, "bottom", HildenWord(2, ((2, 1), (0, -1))))
        path = tmp_path / "log.json"
        path.write_text(log.to_json())
        code, out, _ = run(capsys, "apply", "--log", str(path), "--verify")
        assert code == 0
        assert plat_from_json(out) == out_plat

    def test_corrupt_log_fails_verification(self, capsys, tmp_path):
        p = PlatPresentation.from_ints(2, [2])
        _out, log = pocket_move(p, "bottom", HildenWord(2, ((2, 1),)))
        log.records.append(MoveRecord.make("destabilize"))
        path = tmp_path / "bad.json"
        path.write_text(log.to_json())
        code, _, err = run(capsys, "apply", "--log", str(path), "--verify")
        assert code == 3 and "step" in err


class TestInvariant:
    def test_unknot(self, capsys):
        code, out, _ = run(capsys, "invariant", "--n", "1", "--word", "")
        assert code == 0 and out.strip() == "{1}"

    def test_two_unlink(self, capsys):
        code, out, _ = run(capsys, "invariant", "--n", "2", "--word", "")
        assert code == 0 and out.strip() == "{-A^2 - A^-2}"

    def test_hopf_two_classes(self, capsys):
        code, out, _ = run(capsys, "invariant", "--n", "2", "--word", "s2 s2")
        assert code == 0
        assert out.strip() == "{-A^-2 - A^-10, -A^10 - A^2}"

    def test_resource_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("PLATKIT_ORACLE_CAP", "1")
        code, _, err = run(capsys, "invariant", "--n", "2", "--word", "s2 s2")
        assert code == 4 and "cap" in err


class TestSimplify:
    def test_solved_exit_zero(self, capsys):
        code, out, _ = run(capsys, "simplify", "--n", "2", "--word", "s1 s3")
        assert code == 0
        assert json.loads(out)["outcome"] == "solved"

    def test_exhausted_exit_two(self, capsys):
        code, out, _ = run(capsys, "simplify", "--n", "2", "--word", "s2",
                           "--beam", "2", "--depth", "1", "--time", "5")
        assert code == 2
        assert json.loads(out)["outcome"] == "exhausted"


class TestTiling:
    def test_random_then_validate(self, capsys):
        code, out, _ = run(capsys, "tiling", "random", "--kind", "sphere",
                           "--size", "4", "--seed", "2")
        assert code == 0
        code, out2, _ = run(capsys, "tiling", "validate", "--json", out.strip())
        assert code == 0 and out2.strip() == "valid"

    def test_reduce_standard_is_empty_trace(self, capsys):
        code, out, _ = run(capsys, "tiling", "random", "--kind", "sphere",
                           "--size", "0", "--seed", "1")
        assert code == 0
        code, out2, _ = run(capsys, "tiling", "reduce", "--json", out.strip())
        assert code == 0
        assert json.loads(out2)["steps"] == []

    def test_reduce_counts_steps(self, capsys):
        code, out, _ = run(capsys, "tiling", "random", "--kind", "twice_punctured",
                           "--size", "3", "--seed", "8")
        assert code == 0
        code, out2, _ = run(capsys, "tiling", "reduce", "--json", out.strip())
        assert code == 0
        assert len(json.loads(out2)["steps"]) == 3

    def test_invalid_graph(self, capsys):
        blob = json.dumps({"kind": "sphere", "vertices": [
            {"id": 0, "type": "T1max", "h": "1", "nested": False},
            {"id": 1, "type": "T1max", "h": "0", "nested": False}],
            "edges": [[0, 1]]})
        code, out, _ = run(capsys, "tiling", "validate", "--json", blob)
        assert code == 1 and out.startswith("invalid")


class TestRender:
    def test_glyph_census(self, capsys, tmp_path):
        out_file = tmp_path / "plat.svg"
        code, _, _ = run(capsys, "render", "--n", "2", "--word", "s2 s2",
                         "--out", str(out_file))
        assert code == 0
        svg = out_file.read_text()
        assert svg.count('class="crossing"') == 2
        assert svg.count('class="cap"') == 4

    def test_deterministic_bytes(self, capsys, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        run(capsys, "render", "--n", "3", "--word", "s2 s4' s1", "--out", str(a))
        run(capsys, "render", "--n", "3", "--word", "s2 s4' s1", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestRoundTrips:
    def test_plat_json_round_trip_via_cli(self, capsys):
        p = PlatPresentation.from_ints(3, [1, -4, 5])
        move = json.dumps(
            {"kind": "double_coset", "params": {"side": "top",
                                                "hilden": {"n": 3, "factors": []}}}
        )
        code, out, _ = run(capsys, "apply", "--json", plat_to_json(p), "--move", move)
        assert code == 0
        assert plat_from_json(out) == p
