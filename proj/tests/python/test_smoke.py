import math
import pickle

import pytest

import countminlog as cml


def test_counter_values():
    sem = cml.CounterSemantics.logarithmic(1.08, 8)
    assert sem.max_cell == 255
    assert cml.point_value(0, sem) == 0.0
    assert cml.cell_value(3, sem) == pytest.approx(3.2464, rel=1e-12)
    with pytest.raises(ValueError):
        cml.CounterSemantics.logarithmic(1.0, 8)


def test_sketch_update_query_roundtrip():
    cfg = cml.SketchConfig.from_budget(cml.variant_semantics("CMLS8-CU"), 2, 4096, seed=3)
    assert cfg.width == 2048
    sk = cml.Sketch(cfg)
    assert sk.query("x") == 0.0
    sk.update_many(["a"] * 100 + ["b"] * 3)
    assert sk.query("b") >= 1.0
    assert sk.update_count == 103

    blob = sk.serialize()
    assert blob[:4] == b"CMLS"
    copy = cml.Sketch.deserialize(blob)
    assert copy == sk
    assert pickle.loads(pickle.dumps(sk)) == sk
    with pytest.raises(cml.DecodeError):
        cml.Sketch.deserialize(b"XXXX" + blob[4:])
    with pytest.raises(cml.DecodeError):
        cml.Sketch.deserialize(blob[:-1])


def test_linear_single_cell_counts_exactly():
    sk = cml.Sketch(cml.SketchConfig(cml.CounterSemantics.linear(), 1, 1))
    for _ in range(5):
        sk.update("a")
    assert sk.query("a") == 5.0


def test_corpus_and_metrics():
    assert cml.tokenize("The cat, the CAT.") == ["the", "cat", "the", "cat"]
    with pytest.raises(cml.EncodingError):
        cml.tokenize(b"ab\xff")
    events = cml.ngram_stream(["a", "b", "c"])
    assert [e.key for e in events] == ["a", "a\x1fb", "b", "b\x1fc", "c"]
    table = cml.count_exact(events)
    assert table.distinct == 5
    assert cml.perfect_storage_bytes(table.distinct) == 20

    assert cml.pmi(4, 4, 4, 16, 16) == pytest.approx(math.log(4))
    assert cml.pmi(0, 4, 4, 16, 16) is None
    rmse, evaluated, skipped = cml.pmi_rmse(table, lambda k: float(table.count(k)))
    assert (rmse, evaluated, skipped) == (0.0, 2, 0)
    assert cml.average_relative_error(table, lambda k: float(table.count(k))) == 0.0

    hist = cml.pmi_histogram([0.5, 1.5], 2, 0.0, 2.0)
    assert hist.counts == [1, 1]


def test_run_experiment_is_deterministic():
    kwargs = dict(zipf=(300, 1.1, 3000), budgets=[256, 1024], seed=5, threads=2)
    a = cml.run_experiment(**kwargs)
    b = cml.run_experiment(**kwargs)
    assert cml.metrics_csv(a) == cml.metrics_csv(b)
    assert [r.variant for r in a.rows] == ["CMS-CU"] * 2 + ["CMLS16-CU"] * 2 + ["CMLS8-CU"] * 2
    assert cml.parse_metrics_csv(cml.metrics_csv(a)) == a.rows
    assert a.histograms[0].label == "exact"
    with pytest.raises(ValueError):
        cml.run_experiment(zipf=(300, 1.1, 3000), budgets=[1])
