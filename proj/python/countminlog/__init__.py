"""Count-Min sketches with linear or logarithmic (Morris) cells and conservative update."""

from ._cmls import (
    CounterMode,
    CounterSemantics,
    DecodeError,
    EncodingError,
    ExperimentReport,
    MetricRow,
    NgramKind,
    PmiHistogram,
    Sketch,
    SketchConfig,
    average_relative_error,
    bigram_key,
    cell_value,
    count_exact,
    default_budgets,
    metrics_csv,
    histogram_csv,
    ngram_stream,
    parse_metrics_csv,
    perfect_storage_bytes,
    pmi,
    pmi_histogram,
    pmi_rmse,
    point_value,
    run_experiment,
    tokenize,
    variant_semantics,
    zipf_generate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
