from sfa_simulation import simulation
from sfa_simulation.cli import main
from sfa_simulation.generate import independent_bits_family
from sfa_simulation.simulation import Relation
from sfa_simulation.textformat import load_sfa, save_sfa


def test_check_on_samples(samples_dir):
    for path in sorted(samples_dir.glob("*.sfa")):
        assert main(["check", "--in", str(path)]) == 0, path.name


def test_sim_writes_relation(tmp_path, samples_dir):
    out = tmp_path / "rel.csv"
    code = main(["sim", "--algo", "local", "--complete", "--in", str(samples_dir / "little_brothers.sfa"), "--out", str(out)])
    assert code == 0
    relation = Relation.from_csv(out.read_text())
    assert relation.n == 5
    assert (1, 2) in relation
    assert out.read_text().startswith("# states=5 pairs=")


def test_sim_on_incomplete_input_needs_complete_flag(tmp_path, samples_dir, caplog):
    path = str(samples_dir / "incomplete.sfa")
    assert main(["sim", "--algo", "local", "--in", path]) == 1
    assert "complete" in caplog.text
    assert main(["sim", "--algo", "local", "--in", path, "--complete", "--out", str(tmp_path / "r.csv")]) == 0


def test_sim_output_is_deterministic(tmp_path, samples_dir):
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        main(["sim", "--algo", "nocount", "--in", str(samples_dir / "explicit.sfa"), "--out", str(out)])
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_reduce(tmp_path, samples_dir):
    out = tmp_path / "small.sfa"
    report = tmp_path / "report.csv"
    code = main(
        [
            "reduce",
            "--method",
            "sim",
            "--iterative",
            "--max-iters",
            "4",
            "--in",
            str(samples_dir / "little_brothers.sfa"),
            "--out",
            str(out),
            "--report",
            str(report),
        ]
    )
    assert code == 0
    assert load_sfa(out).n == 3
    assert report.read_text().startswith("iter,direction")


def test_minterms(samples_dir, capsys):
    assert main(["minterms", "--scope", "global", "--in", str(samples_dir / "bits4.sfa")]) == 0
    assert "minterms: 16" in capsys.readouterr().out


def test_minterm_cap_exit_code(samples_dir):
    assert main(["minterms", "--scope", "global", "--cap", "4", "--in", str(samples_dir / "bits4.sfa")]) == 2


def test_regex_and_gen(tmp_path):
    regex_out = tmp_path / "re.sfa"
    assert main(["regex", "--pattern", "(ab|cd)+", "--out", str(regex_out)]) == 0
    assert load_sfa(regex_out).final
    assert main(["regex", "--pattern", "(ab", "--out", str(regex_out)]) == 1

    gen_out = tmp_path / "gen.sfa"
    args = ["gen", "--seed", "4", "--n", "5", "--density", "2.5", "--algebra", "bitvector:3", "--pool", "3", "--out", str(gen_out)]
    assert main(args) == 0
    first = gen_out.read_text()
    assert main(args) == 0
    assert gen_out.read_text() == first


def test_bench_marks_capped_global(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    save_sfa(independent_bits_family(12), corpus / "bits_12.sfa")
    out = tmp_path / "bench.csv"
    summary = tmp_path / "summary.csv"
    code = main(
        [
            "bench",
            "--dir",
            str(corpus),
            "--algos",
            "global,nocount",
            "--cap",
            "4095",
            "--out",
            str(out),
            "--summary",
            str(summary),
        ]
    )
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0].startswith("id,n,m,maxoutdeg")
    assert any(",global," in row and row.endswith(",minterm-cap,") for row in rows[1:])
    assert summary.read_text().splitlines()[0] == "algo,total_ms,wins,fails"


def test_compare_and_corpus(tmp_path):
    corpus = tmp_path / "corpus"
    assert main(["corpus", "--out", str(corpus), "--count", "1", "--n", "4"]) == 0
    small = tmp_path / "small"
    small.mkdir()
    for path in sorted(corpus.glob("random_*.sfa")):
        (small / path.name).write_text(path.read_text())
    out = tmp_path / "compare.csv"
    assert main(["compare", "--dir", str(small), "--out", str(out), "--max-iters", "3"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("id,states,trans,sim1_states")
    assert len(lines) == 3


def test_usage_errors(tmp_path):
    assert main([]) == 1
    assert main(["sim", "--algo", "bogus", "--in", "x.sfa"]) == 1
    assert main(["sim", "--in", str(tmp_path / "missing.sfa")]) == 1
    assert main(["bench", "--dir", str(tmp_path / "missing")]) == 1


def test_check_reports_disagreement(monkeypatch, samples_dir):
    monkeypatch.setitem(simulation.ALGORITHMS, "nocount", lambda m, deadline=None: Relation.full(m.n))
    assert main(["check", "--in", str(samples_dir / "little_brothers.sfa")]) == 3
