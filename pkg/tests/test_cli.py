import json

import pytest

from alignkit import parse_conll, parse_model, parse_pharaoh
from alignkit.cli import build_parser, main

TOY_BITEXT = "a b ||| x y\na ||| x\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def toy_file(tmp_path):
    path = tmp_path / "toy.bitext"
    path.write_text(TOY_BITEXT, encoding="utf-8")
    return path


class TestTrainCommand:
    def test_trains_and_persists(self, tmp_path, toy_file, capsys):
        out = tmp_path / "model"
        code, stdout, _ = run(
            capsys, "train", str(toy_file), "--model", "ibm1", "--direction", "fwd",
            "--iters", "20", "--alpha", "0", "--p0", "0", "--out", str(out),
        )
        assert code == 0
        assert stdout.startswith("# alignkit")
        table, params = parse_model(out.read_text(encoding="utf-8"))
        assert table.prob("a", "x") >= 0.99

    def test_both_writes_two_files(self, tmp_path, toy_file, capsys):
        out = tmp_path / "model"
        code, _, _ = run(capsys, "train", str(toy_file), "--out", str(out))
        assert code == 0
        assert (tmp_path / "model.fwd").exists() and (tmp_path / "model.rev").exists()

    def test_data_error_exits_1_with_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.bitext"
        bad.write_text("a ||| x\nbroken line\n", encoding="utf-8")
        code, _, stderr = run(capsys, "train", str(bad), "--out", str(tmp_path / "m"))
        assert code == 1
        assert "line 2" in stderr

    def test_zero_iterations_exits_2(self, toy_file, tmp_path, capsys):
        code, _, stderr = run(
            capsys, "train", str(toy_file), "--iters", "0", "--out", str(tmp_path / "m")
        )
        assert code == 2
        assert "usage error" in stderr

    def test_missing_input_exits_1(self, tmp_path, capsys):
        code, _, _ = run(capsys, "train", str(tmp_path / "nope"), "--out", str(tmp_path / "m"))
        assert code == 1


class TestAlignAndSymmetrize:
    @pytest.fixture
    def trained(self, tmp_path, toy_file, capsys):
        out = tmp_path / "model"
        run(capsys, "train", str(toy_file), "--out", str(out), "--iters", "10")
        return out

    def test_align_both_then_symmetrize_union(self, tmp_path, toy_file, trained, capsys):
        aligned = tmp_path / "aligned"
        code, _, _ = run(
            capsys, "align", str(toy_file), "--model", str(trained), "--out", str(aligned)
        )
        assert code == 0
        fwd_text = (tmp_path / "aligned.fwd").read_text(encoding="utf-8")
        assert fwd_text.startswith("# alignkit")
        parse_pharaoh(fwd_text, n_pairs=2)

        code, stdout, _ = run(
            capsys, "symmetrize", str(tmp_path / "aligned.fwd"), str(tmp_path / "aligned.rev"),
            "--heuristic", "union", "--bitext", str(toy_file),
        )
        assert code == 0
        merged = parse_pharaoh(stdout, n_pairs=2)
        assert merged[0].sure  # union of two non-empty decodes

    def test_align_single_direction_stdout(self, toy_file, trained, capsys):
        code, stdout, _ = run(
            capsys, "align", str(toy_file), "--model", str(trained) + ".fwd",
            "--direction", "fwd",
        )
        assert code == 0
        assert parse_pharaoh(stdout, n_pairs=2)[0].sure == {(0, 0), (1, 1)}

    def test_symmetrize_example_has_three_links(self, tmp_path, capsys):
        (tmp_path / "f.al").write_text("0-0 1-1\n", encoding="utf-8")
        (tmp_path / "r.al").write_text("1-1 2-1\n", encoding="utf-8")
        code, stdout, _ = run(
            capsys, "symmetrize", str(tmp_path / "f.al"), str(tmp_path / "r.al"),
            "--heuristic", "union",
        )
        assert code == 0
        assert stdout.splitlines()[-1] == "0-0 1-1 2-1"


class TestEvaluateCommand:
    def test_identical_files_give_zero_aer(self, tmp_path, capsys):
        al = tmp_path / "a.al"
        al.write_text("0-0 1-1\n0-0\n", encoding="utf-8")
        code, stdout, _ = run(capsys, "evaluate", "--pred", str(al), "--gold", str(al))
        assert code == 0
        assert "AER\t0.00" in stdout

    def test_json_report(self, tmp_path, capsys):
        al = tmp_path / "a.al"
        al.write_text("0-0\n", encoding="utf-8")
        out = tmp_path / "report.json"
        code, _, _ = run(
            capsys, "evaluate", "--pred", str(al), "--gold", str(al), "--json", str(out)
        )
        assert code == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["aer"] == 0.0

    def test_pair_count_mismatch_is_data_error(self, tmp_path, capsys):
        a = tmp_path / "a.al"
        b = tmp_path / "b.al"
        a.write_text("0-0\n", encoding="utf-8")
        b.write_text("0-0\n1-1\n", encoding="utf-8")
        code, _, stderr = run(capsys, "evaluate", "--pred", str(a), "--gold", str(b))
        assert code == 1

    def test_one_based_gold(self, tmp_path, capsys):
        pred = tmp_path / "p.al"
        gold = tmp_path / "g.al"
        pred.write_text("0-0\n", encoding="utf-8")
        gold.write_text("1-1\n", encoding="utf-8")
        code, stdout, _ = run(
            capsys, "evaluate", "--pred", str(pred), "--gold", str(gold), "--one-based"
        )
        # pred is also shifted, so this errors on the 0 index
        assert code == 1
        gold.write_text("1-1\n", encoding="utf-8")
        pred.write_text("1-1\n", encoding="utf-8")
        code, stdout, _ = run(
            capsys, "evaluate", "--pred", str(pred), "--gold", str(gold), "--one-based"
        )
        assert code == 0
        assert "AER\t0.00" in stdout


class TestEmbedAlignCommand:
    def test_extracts_diagonal(self, tmp_path, capsys):
        emb = tmp_path / "pairs.emb"
        emb.write_text(
            "EMB1 8 3\n"
            "#pair 0 2 2\n"
            "S 0 a 1 0 0\nS 1 b 0 1 0\n"
            "T 0 x 1 0 0\nT 1 y 0 1 0\n",
            encoding="utf-8",
        )
        code, stdout, _ = run(capsys, "embed-align", str(emb), "--threshold", "0.5")
        assert code == 0
        assert parse_pharaoh(stdout, n_pairs=1)[0].sure == {(0, 0), (1, 1)}

    def test_layer_check(self, tmp_path, capsys):
        emb = tmp_path / "pairs.emb"
        emb.write_text("EMB1 8 2\n#pair 0 1 1\nS 0 a 1 0\nT 0 x 1 0\n", encoding="utf-8")
        code, _, stderr = run(capsys, "embed-align", str(emb), "--layer", "3")
        assert code == 1
        assert "layer" in stderr

    def test_bad_threshold_is_usage_error(self, tmp_path, capsys):
        emb = tmp_path / "pairs.emb"
        emb.write_text("EMB1 8 2\n#pair 0 1 1\nS 0 a 1 0\nT 0 x 1 0\n", encoding="utf-8")
        code, _, _ = run(capsys, "embed-align", str(emb), "--threshold", "2.0")
        assert code == 2


class TestProjectCommand:
    def test_projects_identity(self, tmp_path, capsys):
        (tmp_path / "b.txt").write_text("el perro ||| le chien\n", encoding="utf-8")
        (tmp_path / "t.conll").write_text("el\tDET\nperro\tNOUN\n\n", encoding="utf-8")
        (tmp_path / "a.al").write_text("0-0 1-1\n", encoding="utf-8")
        stats_path = tmp_path / "stats.json"
        code, stdout, _ = run(
            capsys, "project", "--bitext", str(tmp_path / "b.txt"),
            "--src-tags", str(tmp_path / "t.conll"), "--alignment", str(tmp_path / "a.al"),
            "--rho", "0", "--stats-out", str(stats_path),
        )
        assert code == 0
        projected = parse_conll(stdout)
        assert projected[0].tags == ("DET", "NOUN")
        stats = json.loads(stats_path.read_text(encoding="utf-8"))
        assert stats["sentences_kept"] == 1

    def test_token_mismatch_is_data_error(self, tmp_path, capsys):
        (tmp_path / "b.txt").write_text("el perro ||| le chien\n", encoding="utf-8")
        (tmp_path / "t.conll").write_text("la\tDET\nperro\tNOUN\n\n", encoding="utf-8")
        (tmp_path / "a.al").write_text("0-0\n", encoding="utf-8")
        code, _, stderr = run(
            capsys, "project", "--bitext", str(tmp_path / "b.txt"),
            "--src-tags", str(tmp_path / "t.conll"), "--alignment", str(tmp_path / "a.al"),
        )
        assert code == 1
        assert "do not match" in stderr


class TestAnalyzeCommands:
    def test_bootstrap_report(self, tmp_path, capsys):
        al = tmp_path / "a.al"
        al.write_text("0-0\n" * 10, encoding="utf-8")
        code, stdout, _ = run(
            capsys, "analyze", "bootstrap", "--pred", str(al), "--gold", str(al),
            "--n-samples", "5", "--sample-size", "4", "--seed", "3",
        )
        assert code == 0
        lines = stdout.splitlines()
        assert lines[0].startswith("# alignkit")
        assert lines[1].split("\t")[0] == "whole_set_aer"
        assert lines[2].split("\t")[0] == "0.00"

    def test_subset_requires_sizes(self, tmp_path, toy_paths, capsys):
        code, _, stderr = run(
            capsys, "analyze", "subset",
            "--bitext", str(toy_paths["bitext"]),
            "--eval-bitext", str(toy_paths["bitext"]),
            "--gold", str(toy_paths["gold"]),
        )
        assert code == 2

    def test_subset_end_to_end(self, toy_paths, capsys):
        code, stdout, _ = run(
            capsys, "analyze", "subset",
            "--bitext", str(toy_paths["bitext"]),
            "--eval-bitext", str(toy_paths["bitext"]),
            "--gold", str(toy_paths["gold"]),
            "--sizes", "4,12", "--iters", "3", "--models", "ibm1,diag", "--seed", "1",
        )
        assert code == 0
        lines = [l for l in stdout.splitlines() if not l.startswith("#")]
        assert lines[0] == "size\tibm1\tdiag"
        assert len(lines) == 3

    def test_length_end_to_end(self, toy_paths, capsys):
        code, stdout, _ = run(
            capsys, "analyze", "length",
            "--bitext", str(toy_paths["bitext"]),
            "--eval-bitext", str(toy_paths["bitext"]),
            "--gold", str(toy_paths["gold"]),
            "--group-size", "6", "--iters", "2",
        )
        assert code == 0
        lines = [l for l in stdout.splitlines() if not l.startswith("#")]
        assert lines[0].startswith("group\tavg_chars\tn_examples\tpartial")
        assert len(lines) == 3


class TestConfigFile:
    def test_config_supplies_defaults_flags_override(self, tmp_path, toy_file, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("iters=7\nmodel=ibm1\n", encoding="utf-8")
        out = tmp_path / "m"
        code, _, stderr = run(
            capsys, "train", str(toy_file), "--config", str(cfg),
            "--model", "diag", "--direction", "fwd", "--out", str(out),
        )
        assert code == 0
        _, params = parse_model(out.read_text(encoding="utf-8"))
        assert params.kind.value == "diag"  # flag wins over config file

    def test_unknown_config_key_is_usage_error(self, tmp_path, toy_file, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus=1\n", encoding="utf-8")
        code, _, stderr = run(
            capsys, "train", str(toy_file), "--config", str(cfg), "--out", str(tmp_path / "m")
        )
        assert code == 2
        assert "bogus" in stderr


class TestParserSurface:
    def test_help_exists_for_every_subcommand(self, capsys):
        parser = build_parser()
        for argv in (
            ["train", "--help"], ["align", "--help"], ["symmetrize", "--help"],
            ["embed-align", "--help"], ["evaluate", "--help"], ["project", "--help"],
            ["analyze", "subset", "--help"], ["analyze", "length", "--help"],
            ["analyze", "bootstrap", "--help"],
        ):
            with pytest.raises(SystemExit) as exc:
                parser.parse_args(argv)
            assert exc.value.code == 0
            assert capsys.readouterr().out

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["train", "x", "--frobnicate"])
        assert exc.value.code == 2

    def test_provenance_is_deterministic(self, tmp_path, capsys):
        al = tmp_path / "a.al"
        al.write_text("0-0\n", encoding="utf-8")
        _, first, _ = run(capsys, "evaluate", "--pred", str(al), "--gold", str(al))
        _, second, _ = run(capsys, "evaluate", "--pred", str(al), "--gold", str(al))
        assert first == second
