import json

import pytest

from scottgroups import cli
from scottgroups import formula as F


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, (code, err)
    lines = [json.loads(line) for line in out.strip().splitlines()]
    return lines[-1] if len(lines) == 1 else lines


class TestWordsCommands:
    def test_primitive(self, capsys):
        assert run_json(capsys, "words", "primitive", "--rank", "2", "ab", "b") == \
            {"primitive": True}

    def test_reduce(self, capsys):
        payload = run_json(capsys, "words", "reduce", "--rank", "2", "a*a^-1*b")
        assert payload["word"] == "b"

    def test_nielsen_reduce(self, capsys):
        payload = run_json(capsys, "words", "nielsen-reduce", "--rank", "2", "a", "ab")
        assert payload["tuple"] == ["a", "b"]
        assert payload["primitive"] is True

    def test_bad_word_is_domain_error(self, capsys):
        code, out, err = run(capsys, "words", "reduce", "--rank", "2", "zz")
        assert code == 1 and "error" in err


class TestDinfCommands:
    def test_genpair(self, capsys):
        assert run_json(capsys, "dinf", "genpair", "aba", "bab") == {"generating": False}

    def test_normalize(self, capsys):
        assert run_json(capsys, "dinf", "normalize", "baaba") == {"word": "a"}

    def test_primitive(self, capsys):
        assert run_json(capsys, "dinf", "primitive", "b", "a") == {"primitive": True}

    def test_scott_round_trip(self, capsys):
        payload = run_json(capsys, "dinf", "scott", "--family-bound", "2")
        assert payload["class"] == "d-Sigma(2)"
        rebuilt = F.from_json_dict(payload["formula"])
        got = F.classify(rebuilt)
        assert (got.kind, got.level) == ("DSigma", 2)


class TestFgabCommands:
    def test_normalize(self, capsys):
        assert run_json(capsys, "fgab", "normalize", "4", "6") == \
            {"invariant_factors": [2, 12]}

    def test_scott(self, capsys):
        payload = run_json(capsys, "fgab", "scott", "--rank", "2", "--torsion", "2")
        assert payload["kind"] == "DSigma" and payload["level"] == 2

    def test_scott_finite(self, capsys):
        table = json.dumps({"order": 2, "table": [[0, 1], [1, 0]]})
        payload = run_json(capsys, "fgab", "scott-finite", "--table", table)
        rebuilt = F.from_json_dict(payload["formula"])
        assert F.classify(rebuilt).kind == "DSigma"


class TestQCommands:
    CASE2 = json.dumps({"exceptions": {}, "default": {"linear": [1, 0]}})

    def test_classify_row_two(self, capsys):
        payload = run_json(capsys, "q", "classify", self.CASE2)
        assert payload["row"] == 2
        assert payload["lower"] == "Sigma03" and payload["upper"] == "Sigma03"

    def test_member(self, capsys):
        dyadic = json.dumps({"exceptions": {"2": "inf"}, "default": "zero"})
        assert run_json(capsys, "q", "member", dyadic, "5/8") == {"contains": True}
        assert run_json(capsys, "q", "member", dyadic, "1/3") == {"contains": False}

    def test_iso(self, capsys):
        z = json.dumps({"exceptions": {}, "default": "zero"})
        z_shift = json.dumps({"exceptions": {"2": 5}, "default": "zero"})
        assert run_json(capsys, "q", "iso", z, z_shift) == {"isomorphic": True}

    def test_scott_round_trip(self, capsys):
        payload = run_json(capsys, "q", "scott", self.CASE2)
        rebuilt = F.from_json_dict(payload["formula"])
        got = F.classify(rebuilt)
        assert (got.kind, got.level) == ("Sigma", 3)

    def test_malformed_char(self, capsys):
        code, _, err = run(capsys, "q", "classify", '{"default": "wat"}')
        assert code == 1 and "error" in err


class TestFormulaCommands:
    def test_classify_eval_render(self, capsys):
        payload = run_json(capsys, "dinf", "scott", "--family-bound", "2")
        ast = json.dumps(payload["formula"])
        assert run_json(capsys, "formula", "classify", ast)["class"] == "d-Sigma(2)"
        rendered = run_json(capsys, "formula", "render", ast, "--format", "latex")
        assert rendered["rendered"].startswith("\\[")
        table = json.dumps({"table": [[0, 1], [1, 0]]})
        verdict = run_json(capsys, "formula", "eval", ast, "--table", table,
                           "--family-bound", "4")
        assert verdict["truth"] is False  # Z/2 is not the infinite dihedral group


class TestSimCommands:
    def test_abelian_stream(self, capsys):
        lines = run_json(capsys, "sim", "abelian", "--k", "2",
                         "--trace", "00,10,00", "--growth", "1")
        assert lines[-1]["final"] == "Z1"
        assert lines[-1]["verification"]["ok"] is True
        assert all("stage" in line for line in lines[:-1])

    def test_dihedral_depth(self, capsys):
        lines = run_json(capsys, "sim", "dihedral",
                         "--trace", "10,00,10,00", "--growth", "1")
        assert lines[-1]["final"] == "H" and lines[-1]["tower_depth"] == 2

    def test_rank1(self, capsys):
        char = json.dumps({"exceptions": {"2": "inf"}, "default": "zero"})
        lines = run_json(capsys, "sim", "rank1", "--char", char, "--p", "3",
                         "--q", "2", "--trace", "00,10,11", "--growth", "1")
        assert lines[-1]["final_char"] == {"exceptions": {}, "default": "zero"}

    def test_cof(self, capsys):
        char = json.dumps({"exceptions": {}, "default": {"linear": [1, 1]}})
        payload = run_json(capsys, "sim", "cof", "--char", char, "--m", "6",
                           "--w", "0,1,2,3,4,5", "--bound", "60")
        assert payload["verdict"] == "isomorphic" and payload["multiplier"] == 1

    def test_trace_parse_error(self, capsys):
        code, _, err = run(capsys, "sim", "dihedral", "--trace", "102")
        assert code == 1 and "error" in err


class TestExitCodes:
    def test_unknown_subcommand_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["no-such-command"])
        assert exc.value.code == 2

    def test_no_command_prints_usage(self, capsys):
        assert cli.main([]) == 2

    @pytest.mark.parametrize("argv", [
        ["words", "reduce", "--rank", "2", "x9"],          # index out of range
        ["words", "primitive", "--rank", "2", "ab"],       # arity != rank
        ["dinf", "normalize", "abc"],                      # bad letter
        ["q", "member", '{"default":"zero"}', "1/0"],      # zero denominator
        ["q", "classify", "not json"],
        ["q", "iso", '{"default":"zero"}', '{"default":{"linear":[-1,0]}}'],
        ["fgab", "normalize", "1"],                        # order below 2
        ["fgab", "scott-finite", "--table", '{"order":2,"table":[[0,1],[1,1]]}'],
        ["formula", "classify", '{"t":"mystery"}'],
        ["sim", "abelian", "--k", "1", "--trace", "00"],
        ["sim", "rank1", "--char", '{"default":"zero"}', "--p", "2", "--q", "2",
         "--trace", "00"],
        ["sim", "cof", "--char", '{"default":"zero"}', "--m", "3", "--bound", "50"],
    ])
    def test_malformed_inputs_are_domain_errors(self, capsys, argv):
        code = cli.main(argv)
        out, err = capsys.readouterr()
        assert code == 1
        assert err.startswith("error:")
        assert out == ""  # payload stream stays clean on failure
