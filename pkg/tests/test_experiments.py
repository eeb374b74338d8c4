"""Tests for the Monte-Carlo sweep harness."""

import math
from dataclasses import replace

import numpy as np
import pytest

from subnyq.experiments import (
    ExperimentConfig,
    SummaryRow,
    SweepSummary,
    ToneRow,
    TrialRecord,
    compare_report,
    generate_scenario,
    match_tones,
    read_summary_csv,
    render_compare_text,
    run_sweep,
    run_trial,
    summarize_point,
    trial_seed_sequence,
    write_summary_csv,
)
from subnyq.signal_core import SamplingScheme, wrap_phase
from subnyq.sngem import alias_frequency


def small_config(**overrides):
    base = dict(
        tone_count_range=(2, 2),
        compression_grid=(16.0,),
        snr_db_grid=(30.0,),
        trials_per_point=3,
        n_samples=256,
        master_seed=7,
        fixed_frequencies=(150e6, 440e6),
        omp={"grid_size": 256, "max_iters": 4},
    )
    base.update(overrides)
    return ExperimentConfig.from_dict(base)


def test_trial_seeds_distinct():
    combos = [
        (snr, comp, t)
        for snr in (None, 10.0, 10.000001, 30.0)
        for comp in (8.0, 16.0)
        for t in (0, 1, 7)
    ]
    states = {
        tuple(trial_seed_sequence(99, snr, comp, t).generate_state(2))
        for snr, comp, t in combos
    }
    assert len(states) == len(combos)
    # and the master seed itself separates streams
    a = trial_seed_sequence(1, 10.0, 8.0, 0).generate_state(2)
    b = trial_seed_sequence(2, 10.0, 8.0, 0).generate_state(2)
    assert tuple(a) != tuple(b)


def test_match_tones_greedy_one_to_one():
    assigned, spurious = match_tones([100.0, 200.0, 300.0], [299.0, 101.0])
    assert assigned == [1, None, 0]
    assert spurious == []
    assigned, spurious = match_tones([100.0, 200.0], [101.0, 199.0, 555.0])
    assert assigned == [0, 1]
    assert spurious == [2]
    assigned, spurious = match_tones([100.0], [])
    assert assigned == [None]
    assert spurious == []


def test_config_round_trip_and_unknown_keys():
    cfg = small_config()
    again = ExperimentConfig.from_dict(cfg.to_dict())
    assert again == cfg
    with pytest.raises(ValueError, match="experiment config"):
        ExperimentConfig.from_dict({"bogus": 1})
    with pytest.raises(ValueError, match="estimator"):
        ExperimentConfig.from_dict({"estimator": {"bogus": 1}})
    with pytest.raises(ValueError, match="omp"):
        ExperimentConfig.from_dict({"omp": {"bogus": 1}})
    with pytest.raises(ValueError, match="methods"):
        ExperimentConfig.from_dict({"methods": ["fft"]})
    with pytest.raises(ValueError, match="snr_db_grid"):
        ExperimentConfig.from_dict({"snr_db_grid": []})


def test_generate_scenario_constraints():
    cfg = ExperimentConfig()
    scheme = SamplingScheme(variant="uniform", num_samples=1024, sample_rate=125e6)
    min_sep = 4.0 / scheme.duration()
    fs = scheme.sample_rate
    for seed in range(10):
        scenario = generate_scenario(np.random.default_rng(seed), cfg, scheme)
        k = len(scenario.tones)
        assert cfg.tone_count_range[0] <= k <= cfg.tone_count_range[1]
        freqs = np.array(scenario.frequencies)
        assert np.all(freqs > 0.02 * cfg.band_limit)
        assert np.all(freqs < 0.98 * cfg.band_limit)
        assert np.all(np.diff(freqs) >= min_sep)
        aliases = np.sort([alias_frequency(f, fs) for f in freqs])
        assert aliases[0] >= min_sep
        assert aliases[-1] <= fs / 2.0 - min_sep
        assert np.all(np.diff(aliases) >= min_sep)
        assert np.allclose(scenario.amplitudes, 1.0)


def test_fixed_frequencies_pin_the_tones():
    cfg = small_config()
    scheme = SamplingScheme(variant="uniform", num_samples=256, sample_rate=125e6)
    s1 = generate_scenario(np.random.default_rng(0), cfg, scheme)
    s2 = generate_scenario(np.random.default_rng(1), cfg, scheme)
    assert list(s1.frequencies) == [150e6, 440e6]
    assert list(s2.frequencies) == [150e6, 440e6]
    # phases stay random draw to draw
    assert list(s1.phases) != list(s2.phases)


def test_run_trial_reproducible():
    cfg = small_config()
    first = run_trial(cfg, 30.0, 16.0, trial_index=1)
    second = run_trial(cfg, 30.0, 16.0, trial_index=1)
    stripped = [replace(r, wall_time=0.0) for r in first]
    assert stripped == [replace(r, wall_time=0.0) for r in second]
    assert {r.method for r in first} == {"sngem", "omp"}
    # a different trial index draws different noise and phases
    third = run_trial(cfg, 30.0, 16.0, trial_index=2)
    assert stripped != [replace(r, wall_time=0.0) for r in third]


def test_run_trial_noiseless_matches_truth():
    cfg = small_config(methods=("sngem",))
    (record,) = run_trial(cfg, None, 16.0, trial_index=0)
    assert record.snr_db is None
    assert len(record.rows) == 2
    for row in record.rows:
        assert row.matched
        assert abs(row.f_hat - row.f_true) / row.f_true < 1e-8
        assert abs(row.a_hat - row.a_true) < 1e-8
    (summary_row,) = summarize_point([record], cfg.n_samples)
    assert summary_row.crb_rel is None
    assert summary_row.rmse_over_crb is None
    assert summary_row.miss_rate == 0.0
    assert summary_row.rmse_f_rel < 1e-8


def test_summarize_point_arithmetic():
    rows_a = (
        ToneRow(0, 100.0, 1.0, -3.1, 101.0, 1.1, 3.1, True),
        ToneRow(1, 200.0, 1.0, 0.5, 202.0, 0.9, 0.5, True),
        ToneRow(2, 300.0, 1.0, 0.0, None, None, None, False),
        ToneRow(-1, None, None, None, 555.0, 0.3, 0.1, False),
    )
    rec = TrialRecord(30.0, 16.0, "sngem", 0, 123, rows_a, 0.01)
    (row,) = summarize_point([rec], n_samples=64)
    assert row.rmse_f_rel == pytest.approx(0.01)
    assert row.rmse_a_rel == pytest.approx(0.1)
    wrapped = float(wrap_phase(3.1 - (-3.1)))
    assert row.rmse_phi_rad == pytest.approx(abs(wrapped) / math.sqrt(2.0))
    assert row.miss_rate == pytest.approx(1.0 / 3.0)
    crb = math.sqrt(2.0 / (64 * 10.0 ** 3.0))
    assert row.crb_rel == pytest.approx(crb)
    assert row.rmse_over_crb == pytest.approx(0.01 / crb)


def test_summarize_point_all_missed():
    rows = (ToneRow(0, 100.0, 1.0, 0.0, None, None, None, False),)
    rec = TrialRecord(20.0, 8.0, "omp", 0, 1, rows, 0.0)
    (row,) = summarize_point([rec], n_samples=64)
    assert row.rmse_f_rel is None
    assert row.rmse_over_crb is None
    assert row.miss_rate == 1.0


def test_run_sweep_outputs_deterministic(tmp_path):
    cfg = small_config()
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    s1 = run_sweep(cfg, out_dir=out1, workers=1)
    s2 = run_sweep(cfg, out_dir=out2, workers=1)
    for name in ("trials.csv", "summary.csv", "config_echo.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    assert len(s1.rows) == 2  # one point, two methods
    assert [r.method for r in s1.rows] == [r.method for r in s2.rows]
    header = (out1 / "trials.csv").read_text().splitlines()[0]
    assert header == "snr_db,compression,method,trial,tone_idx,f_true_hz,f_hat_hz,a_true,a_hat,phi_true_rad,phi_hat_rad,matched"


def test_summary_csv_round_trip(tmp_path):
    summary = SweepSummary(
        rows=[
            SummaryRow(30.0, 16.0, "sngem", 1.234e-4, 2e-3, 3e-3, 0.0, 1e-4, 1.234),
            SummaryRow(None, 8.0, "omp", None, None, None, 1.0, None, None),
        ]
    )
    path = tmp_path / "summary.csv"
    write_summary_csv(summary, path)
    again = read_summary_csv(path)
    assert again.rows == summary.rows

    bad = tmp_path / "bad.csv"
    lines = path.read_text().splitlines()
    cols = lines[0].split(",")
    drop = cols.index("crb_rel")
    trimmed = [",".join(line.split(",")[:drop] + line.split(",")[drop + 1 :]) for line in lines]
    bad.write_text("\n".join(trimmed) + "\n")
    with pytest.raises(ValueError, match="crb_rel"):
        read_summary_csv(bad)


def test_compare_report_flags_error_floor():
    rows = []
    for snr in (30.0, 40.0, 50.0):
        snr_lin = 10.0 ** (snr / 10.0)
        crb = math.sqrt(2.0 / (1024 * snr_lin))
        rows.append(SummaryRow(snr, 16.0, "sngem", crb, crb, crb, 0.0, crb, 1.0))
        rows.append(SummaryRow(snr, 16.0, "omp", 4.0e-3, 1e-2, 1e-2, 0.1, crb, None))
    summary = SweepSummary(rows=rows)
    report = compare_report(summary)
    assert report["error_floor_flags"]["omp"] == {"16.0": True}
    assert report["error_floor_flags"]["sngem"] == {"16.0": False}
    first = report["table"][0]
    assert first["rmse_ratio_omp_over_sngem"] == pytest.approx(
        4.0e-3 / math.sqrt(2.0 / (1024 * 1e3))
    )
    text = render_compare_text(report)
    assert "error floor: omp" in text
    assert "sngem" in text.splitlines()[0]

    with pytest.raises(ValueError, match="no rows"):
        compare_report(SweepSummary())


def test_compare_report_notes_absent_method():
    rows = [SummaryRow(30.0, 8.0, "sngem", 1e-3, 1e-3, 1e-3, 0.0, 1e-4, 10.0)]
    report = compare_report(SweepSummary(rows=rows))
    assert any("omp" in note for note in report["notes"])
    assert "omp" not in report["error_floor_flags"]
