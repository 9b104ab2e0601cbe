"""HOC-based detection of non-Gaussian vibrations in phase-sensitive OTDR traces."""

from ._core import (
    HocError,
    analyze,
    asymmetrize,
    config_digest,
    config_keys,
    gen_square_wave,
    gen_truncated_gaussian,
    hoc_profile,
    bench_config,
    read_traces,
    run_experiment,
    snr_db,
    synth_traces,
    third_cumulant_lagged,
    third_cumulant_zero_lag,
    write_traces,
)

__all__ = [
    "HocError",
    "analyze",
    "asymmetrize",
    "config_digest",
    "config_keys",
    "gen_square_wave",
    "gen_truncated_gaussian",
    "hoc_profile",
    "bench_config",
    "read_traces",
    "run_experiment",
    "snr_db",
    "synth_traces",
    "third_cumulant_lagged",
    "third_cumulant_zero_lag",
    "write_traces",
]
