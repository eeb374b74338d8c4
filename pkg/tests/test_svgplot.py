"""Tests for the SVG chart renderer."""

import math

import pytest

from subnyq.experiments import SummaryRow, SweepSummary
from subnyq.svgplot import PlotSpec, plot_spec_from_dict, render_chart, save_chart


def sweep_rows(snrs=(30.0, 40.0, 50.0), compressions=(16.0,), methods=("sngem", "omp")):
    rows = []
    for comp in compressions:
        for snr in snrs:
            snr_lin = 10.0 ** (snr / 10.0)
            crb = math.sqrt(2.0 / (1024 * snr_lin))
            for m in methods:
                rmse = crb * 1.05 if m == "sngem" else 4e-3
                rows.append(SummaryRow(snr, comp, m, rmse, rmse, rmse, 0.0, crb, rmse / crb))
    return rows


def test_plot_spec_validation():
    spec = PlotSpec()
    assert (spec.x, spec.y, spec.series) == ("snr_db", "rmse_f_rel", "method")
    assert spec.reference_curve == "crb_rel"
    with pytest.raises(ValueError, match="x"):
        PlotSpec(x="method")
    with pytest.raises(ValueError, match="y"):
        PlotSpec(y="nope")
    with pytest.raises(ValueError, match="series"):
        PlotSpec(x="snr_db", series="snr_db")
    with pytest.raises(ValueError, match="reference_curve"):
        PlotSpec(reference_curve="nope")


def test_plot_spec_from_dict():
    spec = plot_spec_from_dict({"y": "miss_rate", "reference_curve": None, "title": "t"})
    assert spec.y == "miss_rate"
    assert spec.reference_curve is None
    with pytest.raises(ValueError, match="unknown"):
        plot_spec_from_dict({"why": "rmse_f_rel"})
    with pytest.raises(ValueError, match="JSON object"):
        plot_spec_from_dict(["rmse_f_rel"])


def test_render_chart_basic():
    summary = SweepSummary(rows=sweep_rows())
    svg = render_chart(summary, PlotSpec(title="sweep"))
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    # one polyline per method plus the dashed reference curve
    assert svg.count("<polyline") == 3
    assert "#1f77b4" in svg and "#d62728" in svg
    assert "stroke-dasharray" in svg
    assert ">sngem<" in svg and ">omp<" in svg
    assert "sweep" in svg
    # log axis renders decade labels
    assert "1e-" in svg
    # byte-for-byte reproducible
    assert render_chart(summary, PlotSpec(title="sweep")) == svg


def test_render_chart_held_dimension():
    summary = SweepSummary(rows=sweep_rows(compressions=(8.0, 16.0)))
    with pytest.raises(ValueError, match="fixed_value"):
        render_chart(summary, PlotSpec())
    svg = render_chart(summary, PlotSpec(fixed_value=16.0))
    assert svg.count("<polyline") == 3


def test_render_chart_compression_axis():
    summary = SweepSummary(rows=sweep_rows(snrs=(30.0,), compressions=(8.0, 12.0, 16.0)))
    svg = render_chart(summary, PlotSpec(x="compression", reference_curve=None))
    assert svg.count("<polyline") == 2


def test_render_chart_rejects_nonpositive():
    rows = [SummaryRow(30.0, 16.0, "sngem", 0.0, 1e-3, 1e-3, 0.0, 1e-4, 0.0)]
    with pytest.raises(ValueError, match="positive"):
        render_chart(SweepSummary(rows=rows), PlotSpec())
    with pytest.raises(ValueError, match="no rows"):
        render_chart(SweepSummary(), PlotSpec())


def test_render_chart_single_point():
    rows = [SummaryRow(30.0, 16.0, "sngem", 1e-3, 1e-3, 1e-3, 0.0, 1e-4, 10.0)]
    svg = render_chart(SweepSummary(rows=rows), PlotSpec())
    assert "<circle" in svg
    assert "<polyline" not in svg


def test_save_chart(tmp_path):
    summary = SweepSummary(rows=sweep_rows())
    out = tmp_path / "chart.svg"
    save_chart(summary, PlotSpec(), out)
    assert out.read_text().startswith("<svg")
