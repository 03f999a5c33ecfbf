import xml.etree.ElementTree as ET

import numpy as np
import pytest

from fdband.basis import FourierBasis
from fdband.bootstrap import bootstrap_band
from fdband.smoother import CurveEnsemble
from fdband.svg import FigureBundle, Panel, Series, emit_svg, load_bundle

NS = {"s": "http://www.w3.org/2000/svg"}


def polylines(svg_text):
    root = ET.fromstring(svg_text.encode())
    return root.findall(".//s:polyline", NS)


def test_empty_bundle_is_valid_axes_only_svg():
    svg = emit_svg(FigureBundle("lines", "empty", "x", "y"))
    root = ET.fromstring(svg.encode())
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    assert polylines(svg) == []
    assert root.findall(".//s:rect[@class='frame']", NS)


def test_single_series_vertex_count():
    grid = np.arange(1, 366)
    bundle = FigureBundle("lines", "one", panels=[Panel("p", [Series("f", grid, np.sin(grid / 50))])])
    lines = polylines(emit_svg(bundle))
    assert len(lines) == 1
    assert len(lines[0].get("points").split()) == 365


def test_band_bundle_styles():
    rng = np.random.default_rng(0)
    ens = CurveEnsemble(FourierBasis(3), rng.normal(10, 1, (5, 3)), tuple(range(2000, 2005)),
                        np.arange(1, 366, 5.0))
    band = bootstrap_band(ens, 100, seed=1)
    series = [Series("lo", band.grid, band.lower, "red", "dotted", "lower"),
              Series("mid", band.grid, band.center, "red", "solid", "center"),
              Series("hi", band.grid, band.upper, "red", "dotted", "upper")]
    lines = polylines(emit_svg(FigureBundle("band", "b", panels=[Panel("", series)])))
    dotted = [l for l in lines if l.get("stroke-dasharray")]
    solid = [l for l in lines if not l.get("stroke-dasharray")]
    assert len(dotted) == 2 and len(solid) == 1
    assert {l.get("stroke") for l in lines} == {"red"}


def test_unknown_kind():
    with pytest.raises(ValueError):
        emit_svg(FigureBundle("pie", "x"))


def test_escaping_and_nan_points():
    s = Series("a<b", [1, 2, 3], [1.0, np.nan, 2.0])
    svg = emit_svg(FigureBundle("lines", "t & u", panels=[Panel("<p>", [s])]))
    (line,) = polylines(svg)
    assert len(line.get("points").split()) == 2


def test_bundle_json_roundtrip(tmp_path):
    grid = np.arange(1, 6, dtype=float)
    (tmp_path / "data.csv").write_text("# c\nday,value\n" + "".join(f"{int(d)},{d * 2}\n" for d in grid))
    b = FigureBundle("lines", "t", "x", "y", [Panel("p", [
        Series("from file", grid, grid * 2, source={"file": "data.csv", "x": "day", "y": "value"}),
        Series("inline", [1, 2], [3, 4], "blue", "dashed")])], figure=5)
    (tmp_path / "b.json").write_text(b.to_json())
    again = load_bundle(tmp_path / "b.json")
    assert again.figure == 5 and again.kind == "lines"
    np.testing.assert_array_equal(again.panels[0].series[0].y, grid * 2)
    np.testing.assert_array_equal(again.panels[0].series[1].x, [1, 2])
    assert emit_svg(again) == emit_svg(b)
