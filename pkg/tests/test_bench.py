import time

import pytest

from sfa_simulation.bench import (
    BENCH_HEADER,
    BenchRecord,
    bench,
    filter_min_ms,
    parse_algorithms,
    records_to_csv,
    summarise,
    summary_to_csv,
)
from sfa_simulation.errors import UsageError
from sfa_simulation.generate import independent_bits_family, random_sfa
from sfa_simulation.textformat import save_sfa


def record(automaton_id, algo, ms, outcome="ok"):
    return BenchRecord(id=automaton_id, n=3, m=4, maxoutdeg=2, algo=algo, ms=ms, outcome=outcome)


def test_empty_corpus_gives_header_only(tmp_path):
    records = bench(tmp_path, ["nocount"])
    assert records == []
    assert records_to_csv(records) == BENCH_HEADER + "\n"


def test_missing_corpus_dir(tmp_path):
    with pytest.raises(UsageError):
        bench(tmp_path / "nope", ["nocount"])


def test_parse_algorithms():
    assert parse_algorithms("local, nocount") == ["local", "nocount"]
    with pytest.raises(UsageError):
        parse_algorithms("local,quick")
    with pytest.raises(UsageError):
        parse_algorithms("")


def test_random_corpus_digests_agree(tmp_path):
    for seed in range(4):
        save_sfa(random_sfa(seed, 5), tmp_path / f"r{seed}.sfa")
    (tmp_path / "broken.sfa").write_text("not an automaton\n")
    records = bench(tmp_path, ["oracle", "iny", "global", "local", "nocount"], timeout_ms=60_000)
    assert {r.id for r in records} == {"r0", "r1", "r2", "r3"}
    assert all(r.ok for r in records)
    by_id = {}
    for r in records:
        if r.algo != "iny":
            by_id.setdefault(r.id, set()).add(r.digest)
    assert all(len(digests) == 1 for digests in by_id.values())
    assert all(r.ms <= 60_000 for r in records)
    assert all(r.blowup is None or r.blowup >= 1 for r in records)


def test_records_are_ordered_with_parallel_jobs(tmp_path):
    for seed in range(3):
        save_sfa(random_sfa(seed, 4), tmp_path / f"r{seed}.sfa")
    serial = bench(tmp_path, ["local", "nocount"], jobs=1)
    parallel = bench(tmp_path, ["local", "nocount"], jobs=3)
    assert [(r.id, r.algo, r.digest) for r in serial] == [(r.id, r.algo, r.digest) for r in parallel]


def test_adversarial_family_hits_minterm_cap(tmp_path):
    # The cap is exceeded only when the count is strictly larger.
    save_sfa(independent_bits_family(13), tmp_path / "bits_13.sfa")
    records = bench(tmp_path, ["global", "nocount"], minterm_cap=2**12)
    outcomes = {r.algo: r for r in records}
    assert outcomes["global"].outcome == "minterm-cap"
    assert outcomes["global"].ms == 100_000
    assert outcomes["global"].minterms is None
    assert outcomes["nocount"].ok
    assert outcomes["nocount"].ops_sat > 0


def test_minterm_count_equal_to_cap_is_allowed(tmp_path):
    save_sfa(independent_bits_family(12), tmp_path / "bits_12.sfa")
    (record,) = bench(tmp_path, ["global"], minterm_cap=2**12)
    assert record.ok
    assert record.minterms == 2**12


def test_shape_minterms_are_bounded_by_the_timeout(tmp_path):
    save_sfa(independent_bits_family(16), tmp_path / "bits_16.sfa")
    started = time.perf_counter()
    (record,) = bench(tmp_path, ["global"], timeout_ms=20)
    assert time.perf_counter() - started < 10
    assert record.minterms is None
    assert record.outcome == "timeout"
    assert record.ms == 20


def test_csv_row_layout():
    r = BenchRecord(id="x", n=2, m=3, maxoutdeg=2, minterms=4, blowup=1.5, algo="local", ms=1.25, ops_sat=7, digest="ab")
    assert r.csv_row() == "x,2,3,2,4,1.500,local,1.250,0,0,0,7,ok,ab"
    assert len(r.csv_row().split(",")) == len(BENCH_HEADER.split(","))


def test_summarise_charges_timeouts_and_shares_ties():
    records = [
        record("a", "global", 5.0),
        record("a", "nocount", 5.0),
        record("b", "global", 1000.0, "timeout"),
        record("b", "nocount", 20.0),
    ]
    rows = {row.algo: row for row in summarise(records, timeout_ms=1000.0)}
    assert rows["global"].total_ms == 1005.0
    assert rows["global"].fails == 1
    assert rows["global"].wins == 1
    assert rows["nocount"].wins == 2
    assert rows["nocount"].fails == 0
    assert summary_to_csv(rows.values()).splitlines()[0] == "algo,total_ms,wins,fails"


def test_filter_min_ms():
    records = [
        record("fast", "local", 1.0),
        record("fast", "nocount", 2.0),
        record("slow", "local", 50.0),
        record("slow", "nocount", 3.0),
        record("failed", "local", 1.0, "timeout"),
    ]
    assert {r.id for r in filter_min_ms(records, 10.0)} == {"slow", "failed"}
