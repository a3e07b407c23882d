import pytest

from kvote import OwaWeights, brute_force, read_instance, read_results_csv, solve_bottom_h
from kvote.cli import EXIT_IO, EXIT_OK, main, parse_plan
from kvote.errors import ParseError


def run(argv):
    return main(argv)


@pytest.fixture
def t1_file(tmp_path):
    path = tmp_path / "t1.txt"
    path.write_text("3 3\n110\n101\n011\n")
    return path


class TestGen:
    def test_basic(self, tmp_path):
        out = tmp_path / "inst.txt"
        assert run(["gen", "--n", "3", "--m", "3", "--seed", "7", "--out", str(out)]) == EXIT_OK
        inst = read_instance(out)
        assert inst.n == 3 and inst.m == 3

    def test_biased_default_p_recorded(self, tmp_path):
        out = tmp_path / "inst.txt"
        run(["gen", "--n", "4", "--m", "4", "--mode", "biased", "--seed", "1", "--out", str(out)])
        assert "mode=biased:0.25" in out.read_text()

    def test_deterministic_files(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        args = ["gen", "--n", "10", "--m", "8", "--seed", "5"]
        run(args + ["--out", str(a)])
        run(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_zero_n_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as e:
            run(["gen", "--n", "0", "--m", "3", "--out", str(tmp_path / "x")])
        assert e.value.code == 2


class TestSolve:
    def test_k2(self, t1_file, capsys):
        assert run(["solve", "--in", str(t1_file), "--k", "2"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "objective 2" in out

    def test_bottom_h(self, t1_file, capsys):
        assert run(["solve", "--in", str(t1_file), "--bottom-h", "2"]) == EXIT_OK
        assert "objective 2" in capsys.readouterr().out

    def test_k3_solved_at_root(self, t1_file, capsys):
        run(["solve", "--in", str(t1_file), "--k", "3"])
        out = capsys.readouterr().out
        assert "objective 3" in out
        assert "solved_at_root 1" in out

    def test_both_objectives_rejected(self, t1_file):
        with pytest.raises(SystemExit) as e:
            run(["solve", "--in", str(t1_file), "--k", "2", "--bottom-h", "1"])
        assert e.value.code == 2

    def test_missing_file(self, tmp_path):
        assert run(["solve", "--in", str(tmp_path / "nope"), "--k", "1"]) == EXIT_IO

    def test_csv_row(self, t1_file, tmp_path):
        out = tmp_path / "row.csv"
        run(["solve", "--in", str(t1_file), "--k", "2", "--csv", str(out)])
        rows = read_results_csv(out)
        assert len(rows) == 1 and rows[0].objective == 2 and rows[0].k == 2

    def test_export(self, t1_file, tmp_path):
        lp = tmp_path / "model.lp"
        run(["solve", "--in", str(t1_file), "--k", "2", "--export", "k_centrum",
             "--export-out", str(lp)])
        assert lp.read_text().startswith("Minimize")

    def test_matches_library(self, t1_file, capsys):
        inst = read_instance(t1_file)
        run(["solve", "--in", str(t1_file), "--bottom-h", "2"])
        out = capsys.readouterr().out
        assert f"objective {solve_bottom_h(inst, 2).value}" in out


class TestSweep:
    def test_t1(self, t1_file, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run(["sweep", "--in", str(t1_file), "--out", str(out)]) == EXIT_OK
        rows = read_results_csv(out)
        assert [(r.k, r.objective) for r in rows] == [(3, 3), (2, 2), (1, 1)]

    def test_rows_match_brute_force(self, tmp_path):
        inst_path = tmp_path / "i.txt"
        run(["gen", "--n", "6", "--m", "6", "--seed", "9", "--out", str(inst_path)])
        out = tmp_path / "s.csv"
        run(["sweep", "--in", str(inst_path), "--out", str(out)])
        inst = read_instance(inst_path)
        for r in read_results_csv(out):
            assert r.objective == brute_force(inst, OwaWeights.top_k(r.k)).value


class TestBench:
    def test_plan_parse_errors(self, tmp_path):
        plan = tmp_path / "plan.txt"
        plan.write_text("n=3 m=3 mode=uniform\n")
        with pytest.raises(ParseError) as e:
            parse_plan(plan)
        assert e.value.line == 1  # missing seeds

        plan.write_text("")
        with pytest.raises(ParseError):
            parse_plan(plan)

        plan.write_text("# comment\nn=3 m=3 mode=weird seeds=1\n")
        with pytest.raises(ParseError) as e:
            parse_plan(plan)
        assert e.value.line == 2

    def test_small_campaign(self, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text("# tiny campaign\nn=5 m=5 mode=uniform seeds=1,2\nn=5 m=5 mode=biased seeds=1,2\n")
        out = tmp_path / "bench.csv"
        assert run(["bench", str(plan), "--out", str(out)]) == EXIT_OK
        rows = read_results_csv(out)
        assert len(rows) == 2 * 2 * 5  # entries x seeds x k values
        printed = capsys.readouterr().out
        assert "uniform" in printed and "biased" in printed

    def test_k_subset(self, tmp_path):
        plan = tmp_path / "plan.txt"
        plan.write_text("n=5 m=4 mode=uniform seeds=3 ks=1,5\n")
        out = tmp_path / "bench.csv"
        run(["bench", str(plan), "--out", str(out)])
        assert sorted(r.k for r in read_results_csv(out)) == [1, 5]

    def test_empty_plan_error(self, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text("\n")
        assert run(["bench", str(plan), "--out", str(tmp_path / "o.csv")]) == EXIT_IO
