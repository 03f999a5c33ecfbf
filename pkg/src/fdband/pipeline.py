"""End-to-end run: ingest, smooth, summarize, bootstrap, phase planes, change.

Every figure is written as data first (CSV plus a JSON bundle descriptor);
SVG rendering is optional. ``manifest.json`` lists every other file in the
output directory with the operation and parameters that produced it.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
from dataclasses import asdict, dataclass, field, fields
from typing import Callable

import numpy as np

from . import __version__
from .basis import DEFAULT_PERIOD, FourierBasis
from .bootstrap import DEFAULT_B, DEFAULT_LEVEL, DEFAULT_SEED, band_overlap, bootstrap_summary
from .change import DEFAULT_EPSILON, percentage_change
from .ingest import REGIONS, Dataset, read_canonical_csv
from .phase import MONTH_STARTS, phase_curve, zero_crossings
from .smoother import (DEFAULT_FLATNESS_TOL, DEFAULT_P_VALUES, CurveEnsemble, mse_profile,
                       select_basis_count, smooth_dataset)
from .stats import (BlockPartition, GridFunction, extrema_summary, group_by_blocks,
                    mean_difference, mean_function, preset_partition, variance_function)
from .svg import BLOCK_COLORS, FigureBundle, Panel, Series, emit_svg

log = logging.getLogger(__name__)

FAMILIES = ("raw", "smooth", "mse_profile", "means", "mean_diff", "variance",
            "bands", "phase", "change", "summary")
DEFAULT_BAND_PARTITIONS = ("t2", "t3-bands", "t4", "t5")
MANIFEST = "manifest.json"
OUTPUT_DIR_ENV = "FDBAND_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunConfig:
    inputs: dict = field(default_factory=dict)  # region -> canonical CSV path
    basis_count: int | str = 21  # odd integer, or "auto" to use the selected value
    p_values: list = field(default_factory=lambda: list(DEFAULT_P_VALUES))
    flatness_tol: float = DEFAULT_FLATNESS_TOL
    period: float = DEFAULT_PERIOD
    decade_partition: str | list = "decades"
    band_partitions: list = field(default_factory=lambda: list(DEFAULT_BAND_PARTITIONS))
    b_samples: int = DEFAULT_B
    level: float = DEFAULT_LEVEL
    seed: int = DEFAULT_SEED
    output_dir: str = ""
    emit: list = field(default_factory=lambda: list(FAMILIES))
    svg: bool = True
    workers: int = 1
    epsilon: float = DEFAULT_EPSILON
    percent: bool = False

    def __post_init__(self):
        if not self.output_dir:
            self.output_dir = os.environ.get(OUTPUT_DIR_ENV, "fdband-out")

    def validate(self) -> "RunConfig":
        if not self.inputs:
            raise ConfigError("no inputs given")
        for region in self.inputs:
            if region not in REGIONS:
                raise ConfigError(f"unknown region {region!r}; expected one of {REGIONS}")
        if self.basis_count != "auto":
            if not isinstance(self.basis_count, int) or self.basis_count < 1 or self.basis_count % 2 == 0:
                raise ConfigError(f"basis_count must be an odd positive integer or 'auto', got {self.basis_count!r}")
        if not self.p_values or any(int(p) % 2 == 0 or p < 1 for p in self.p_values):
            raise ConfigError("p_values must be odd positive integers")
        if not isinstance(self.b_samples, int) or self.b_samples < 1:
            raise ConfigError(f"b_samples must be >= 1, got {self.b_samples!r}")
        if not 0 < self.level < 1:
            raise ConfigError(f"level must lie in (0, 1), got {self.level}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        unknown = set(self.emit) - set(FAMILIES)
        if unknown:
            raise ConfigError(f"unknown emit families {sorted(unknown)}; known: {FAMILIES}")
        for spec in [self.decade_partition, *self.band_partitions]:
            if not isinstance(spec, str):
                try:
                    BlockPartition(tuple(tuple(b) for b in spec))
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"invalid explicit partition {spec!r}: {exc}") from None
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)


def resolve_partition(spec, years: list[int]) -> tuple[str, BlockPartition]:
    try:
        if isinstance(spec, str):
            return spec, preset_partition(years[0], len(years), spec)
        part = BlockPartition(tuple(tuple(b) for b in spec))
    except ValueError as exc:
        raise ConfigError(f"partition {spec!r}: {exc}") from None
    if part.span != (years[0], years[-1]):
        raise ConfigError(f"partition {part.labels()} does not cover {years[0]}-{years[-1]}")
    return "explicit-" + "_".join(part.labels()), part


class _Writer:
    """Writes files into the output directory and records them for the manifest."""

    def __init__(self, root: str):
        self.root = root
        self.entries: list[dict] = []

    def write(self, name: str, text: str, operation: str, params: dict | None = None):
        path = os.path.join(self.root, name)
        data = text.encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(data)
        self.entries.append({
            "path": name, "operation": operation, "params": params or {},
            "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data),
        })

    def bundle(self, name: str, bundle: FigureBundle, operation: str, params: dict, svg: bool):
        self.write(name + ".json", bundle.to_json(), operation, params)
        if svg:
            self.write(name + ".svg", emit_svg(bundle), "emit_svg", {"bundle": name + ".json"})


def _fmt(v) -> str:
    v = float(v)
    if not np.isfinite(v):
        return "NA"
    return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


def _table_csv(columns: dict[str, np.ndarray], comments: list[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in zip(*columns.values()):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _slug(region: str) -> str:
    return region.lower()


def _src(file, x, y):
    return {"file": file, "x": x, "y": y}


@dataclass
class _RegionState:
    region: str
    dataset: Dataset
    ensemble: CurveEnsemble | None = None
    profile: object = None
    selected_p: int | None = None
    selection_converged: bool = True
    decades: list = field(default_factory=list)
    decade_means: list = field(default_factory=list)
    overall_mean: GridFunction | None = None


def run_pipeline(config: RunConfig) -> dict:
    """Run the configured analysis and return the manifest (also written to disk).

    Raises :class:`StageError` naming the failed stage; the partial output
    directory then holds a manifest with ``status: incomplete``.
    """
    config.validate()
    root = config.output_dir
    if os.path.isdir(root):
        for name in os.listdir(root):
            path = os.path.join(root, name)
            if os.path.isdir(path) and not os.path.islink(path):
                shutil.rmtree(path)
            else:
                os.remove(path)
    os.makedirs(root, exist_ok=True)
    out = _Writer(root)
    emit = set(config.emit)
    manifest = {
        "tool": "fdband", "version": __version__, "status": "running",
        "config": config.to_dict(), "files": out.entries,
    }
    regions = [r for r in REGIONS if r in config.inputs]
    states: dict[str, _RegionState] = {}
    stage = "ingest"

    def run_stage(name: str, fn: Callable[[], None]):
        nonlocal stage
        stage = name
        log.info("stage %s", name)
        fn()

    try:
        def ingest():
            for r in regions:
                states[r] = _RegionState(r, read_canonical_csv(config.inputs[r], region=r))
        run_stage("ingest", ingest)
        if "raw" in emit:
            run_stage("raw", lambda: _emit_raw(out, states, config))

        def select():
            for st in states.values():
                if config.basis_count == "auto" or "mse_profile" in emit or "summary" in emit:
                    import warnings
                    with warnings.catch_warnings(record=True) as caught:
                        warnings.simplefilter("always")
                        st.profile = mse_profile(st.dataset, config.p_values, config.period, config.workers)
                        st.selected_p = select_basis_count(st.profile, config.flatness_tol)
                    st.selection_converged = not any(
                        w.category.__name__ == "BasisSelectionWarning" for w in caught)
        run_stage("select-basis", select)
        if "mse_profile" in emit:
            run_stage("mse_profile", lambda: _emit_mse(out, states, config))

        needs_curves = emit & {"smooth", "means", "mean_diff", "variance", "bands", "phase", "change", "summary"}
        if needs_curves:
            def smooth():
                for st in states.values():
                    p = st.selected_p if config.basis_count == "auto" else config.basis_count
                    basis = FourierBasis.with_period(p, config.period)
                    st.ensemble = smooth_dataset(st.dataset, basis, workers=config.workers)
                    _, part = resolve_partition(config.decade_partition, list(st.ensemble.years))
                    st.decades = group_by_blocks(st.ensemble, part)
                    st.decade_means = [mean_function(b, f"{b.years[0]}-{b.years[-1]}") for b in st.decades]
                    st.overall_mean = mean_function(st.ensemble, "all years")
            run_stage("smooth", smooth)
        if "smooth" in emit:
            run_stage("smooth-emit", lambda: _emit_smooth(out, states, config))
        if "means" in emit:
            run_stage("means", lambda: _emit_means(out, states, config))
        if "mean_diff" in emit:
            run_stage("mean_diff", lambda: _emit_mean_diff(out, states, config))
        if "variance" in emit:
            run_stage("variance", lambda: _emit_variance(out, states, config))
        overlaps: dict = {}
        if "bands" in emit:
            run_stage("bands", lambda: overlaps.update(_emit_bands(out, states, config)))
        if "phase" in emit:
            run_stage("phase", lambda: _emit_phase(out, states, config))
        if "change" in emit:
            run_stage("change", lambda: _emit_change(out, states, config))
        if "summary" in emit:
            run_stage("summary", lambda: _emit_summary(out, states, config, overlaps))
    except Exception as exc:
        manifest["status"] = "incomplete"
        manifest["failed_stage"] = stage
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        _write_manifest(root, manifest)
        raise StageError(stage, exc) from exc

    manifest["status"] = "complete"
    _write_manifest(root, manifest)
    return manifest


def _write_manifest(root, manifest):
    with open(os.path.join(root, MANIFEST), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# figure emitters ---------------------------------------------------------

def _emit_raw(out: _Writer, states, config):
    bundle = FigureBundle("lines", "Observed sea ice area", "day of year",
                          "area (million sq km)", figure=1)
    for st in states.values():
        name = f"fig01_raw_{_slug(st.region)}.csv"
        lines = ["year,day,area"]
        panel = Panel(st.region)
        for s in st.dataset.years:
            lines.extend(f"{s.year},{int(d)},{_fmt(a)}" for d, a in zip(s.days, s.area))
            panel.series.append(Series(str(s.year), s.days, s.area, "gray"))
        out.write(name, "\n".join(lines) + "\n", "parse_canonical_csv",
                  {"region": st.region, "input": config.inputs[st.region]})
        bundle.panels.append(panel)
    # raw series are long-format; the bundle keeps its data inline
    out.bundle("fig01_raw", bundle, "figure", {"figure": 1}, config.svg)


def _emit_smooth(out: _Writer, states, config):
    bundle = FigureBundle("lines", "Smoothed sea ice area", "day of year",
                          "area (million sq km)", figure=2)
    for st in states.values():
        ens = st.ensemble
        name = f"fig02_smooth_{_slug(st.region)}.csv"
        values = ens.values()
        cols = {"day": ens.grid, **{str(y): v for y, v in zip(ens.years, values)}}
        out.write(name, _table_csv(cols, [f"region: {st.region}", f"basis_count: {ens.basis.p}"]),
                  "fit_year", {"region": st.region, "p": ens.basis.p, "period": config.period})
        coef_cols = {"year": np.array(ens.years, dtype=float),
                     **{f"c{k + 1}": ens.coeffs[:, k] for k in range(ens.basis.p)}}
        out.write(f"coeffs_{_slug(st.region)}.csv", _table_csv(coef_cols, [f"omega: {ens.basis.omega!r}"]),
                  "fit_year", {"region": st.region, "p": ens.basis.p, "period": config.period})
        bundle.panels.append(Panel(st.region, [
            Series(str(y), ens.grid, v, "gray", source=_src(name, "day", str(y)))
            for y, v in zip(ens.years, values)]))
    out.bundle("fig02_smooth", bundle, "figure", {"figure": 2}, config.svg)


def _emit_mse(out: _Writer, states, config):
    prof_bundle = FigureBundle("lines", "MSE vs number of Fourier basis functions",
                               "number of basis functions", "MSE", figure=3)
    diff_bundle = FigureBundle("lines", "First difference of MSE",
                               "number of basis functions", "first difference", figure=4)
    for st in states.values():
        prof = st.profile
        name = f"fig03_mse_{_slug(st.region)}.csv"
        out.write(name, _table_csv({"p": np.array(prof.p_values, dtype=float),
                                    "mse_hat": np.array(prof.mse_hat)},
                                   [f"region: {st.region}", f"selected_p: {st.selected_p}",
                                    f"converged: {st.selection_converged}"]),
                  "mse_profile", {"region": st.region, "p_values": list(prof.p_values),
                                  "flatness_tol": config.flatness_tol})
        dname = f"fig04_mse_diff_{_slug(st.region)}.csv"
        p = np.array(prof.p_values, dtype=float)
        out.write(dname, _table_csv({"p_from": p[:-1], "p_to": p[1:],
                                     "first_diff": np.array(prof.first_diff)}),
                  "mse_profile", {"region": st.region})
        prof_bundle.panels.append(Panel(st.region, [
            Series("MSE", p, prof.mse_hat, "black", source=_src(name, "p", "mse_hat"))]))
        diff_bundle.panels.append(Panel(st.region, [
            Series("first difference", p[1:], prof.first_diff, "black",
                   source=_src(dname, "p_to", "first_diff"))]))
    out.bundle("fig03_mse", prof_bundle, "figure", {"figure": 3}, config.svg)
    out.bundle("fig04_mse_diff", diff_bundle, "figure", {"figure": 4}, config.svg)


def _emit_means(out: _Writer, states, config):
    bundle = FigureBundle("lines", "Mean curves by block", "day of year",
                          "area (million sq km)", figure=5)
    for st in states.values():
        name = f"fig05_means_{_slug(st.region)}.csv"
        cols = {"day": st.overall_mean.grid, "all_years": st.overall_mean.values}
        cols.update({m.label: m.values for m in st.decade_means})
        out.write(name, _table_csv(cols, [f"region: {st.region}"]), "mean_function",
                  {"region": st.region, "partition": config.decade_partition})
        panel = Panel(st.region, [Series("all years", cols["day"], cols["all_years"], "black", "dashed",
                                         source=_src(name, "day", "all_years"))])
        for i, m in enumerate(st.decade_means):
            panel.series.append(Series(m.label, m.grid, m.values, BLOCK_COLORS[i % len(BLOCK_COLORS)],
                                       source=_src(name, "day", m.label)))
        bundle.panels.append(panel)
    out.bundle("fig05_means", bundle, "figure", {"figure": 5}, config.svg)


def _consecutive_diffs(means):
    # earlier block minus later block, positive when the later block is lower
    return [mean_difference(a, b, f"{a.label} minus {b.label}") for a, b in zip(means, means[1:])]


def _emit_mean_diff(out: _Writer, states, config):
    bundle = FigureBundle("lines", "Differences of consecutive block means", "day of year",
                          "difference (million sq km)", figure=6)
    colors = ("black", "red", "blue", "green")
    for st in states.values():
        diffs = _consecutive_diffs(st.decade_means)
        name = f"fig06_mean_diff_{_slug(st.region)}.csv"
        cols = {"day": st.overall_mean.grid, **{d.label: d.values for d in diffs}}
        out.write(name, _table_csv(cols, [f"region: {st.region}"]), "mean_difference",
                  {"region": st.region, "partition": config.decade_partition})
        bundle.panels.append(Panel(st.region, [
            Series(d.label, d.grid, d.values, colors[i % len(colors)], source=_src(name, "day", d.label))
            for i, d in enumerate(diffs)]))
    out.bundle("fig06_mean_diff", bundle, "figure", {"figure": 6}, config.svg)


def _emit_variance(out: _Writer, states, config):
    bundle = FigureBundle("lines", "Variance curves by block", "day of year",
                          "variance", figure=7)
    for st in states.values():
        variances = [variance_function(b, f"{b.years[0]}-{b.years[-1]}") for b in st.decades
                     if len(b) >= 2]
        name = f"fig07_variance_{_slug(st.region)}.csv"
        cols = {"day": st.overall_mean.grid, **{v.label: v.values for v in variances}}
        out.write(name, _table_csv(cols, [f"region: {st.region}"]), "variance_function",
                  {"region": st.region, "partition": config.decade_partition})
        bundle.panels.append(Panel(st.region, [
            Series(v.label, v.grid, v.values, BLOCK_COLORS[i % len(BLOCK_COLORS)],
                   source=_src(name, "day", v.label)) for i, v in enumerate(variances)]))
    out.bundle("fig07_variance", bundle, "figure", {"figure": 7}, config.svg)


def _band_figure_number(region_index: int, part_index: int, n_parts: int):
    if n_parts > 4:
        return None
    return 8 + 4 * region_index + part_index


def _emit_bands(out: _Writer, states, config) -> dict:
    overlaps = {}
    parts = config.band_partitions
    for ri, region in enumerate(REGIONS):
        st = states.get(region)
        if st is None:
            continue
        for pi, spec in enumerate(parts):
            pname, part = resolve_partition(spec, list(st.ensemble.years))
            blocks = group_by_blocks(st.ensemble, part)
            fig = _band_figure_number(ri, pi, len(parts))
            stem = (f"fig{fig:02d}_bands_{_slug(region)}_{pname}" if fig is not None
                    else f"bands_{_slug(region)}_{pname}")
            bundle = FigureBundle("band", f"{region}: {config.level:.0%} bootstrap bands ({pname})",
                                  "day of year", "area (million sq km)", figure=fig)
            panel = Panel(f"{region}, t={len(part.blocks)}")
            bands = []
            for bi, block in enumerate(blocks):
                stream = (REGIONS.index(region), pi, bi)
                band, bvar = bootstrap_summary(block, config.b_samples, config.level, config.seed,
                                               stream, config.workers)
                bands.append(band)
                fname = f"{stem}_block{bi + 1}.csv"
                params = {"region": region, "partition": pname, "block": list(band.years),
                          "b_samples": config.b_samples, "level": config.level,
                          "seed": config.seed, "stream": list(stream)}
                out.write(fname, band.to_csv(), "bootstrap_band", params)
                out.write(f"{stem}_block{bi + 1}_variance.csv", bvar.to_csv(), "bootstrap_variance", params)
                color = BLOCK_COLORS[bi % len(BLOCK_COLORS)]
                panel.series += [
                    Series(f"{band.label} (lower)", band.grid, band.lower, color, "dotted", "lower",
                           _src(fname, "day", "lower")),
                    Series(band.label, band.grid, band.center, color, "solid", "center",
                           _src(fname, "day", "center")),
                    Series(f"{band.label} (upper)", band.grid, band.upper, color, "dotted", "upper",
                           _src(fname, "day", "upper")),
                ]
            bundle.panels.append(panel)
            ov_stats = []
            if len(bands) > 1:
                cols = {"day": bands[0].grid}
                for a, b in zip(bands, bands[1:]):
                    ov = band_overlap(a, b)
                    cols[f"{a.label}|{b.label}"] = ov.values
                    ov_stats.append({"blocks": [a.label, b.label],
                                     "overlap_fraction": float(np.mean(ov.values > 0)),
                                     "disjoint_fraction": float(np.mean(ov.values <= 0))})
                out.write(f"{stem}_overlap.csv", _table_csv(cols, ["positive: overlap length, "
                                                                   "non-positive: minus gap"]),
                          "band_overlap", {"region": region, "partition": pname})
            overlaps[f"{region}/{pname}"] = ov_stats
            out.bundle(stem, bundle, "figure", {"figure": fig, "region": region, "partition": pname},
                       config.svg)
    return overlaps


_PHASE_AXES = (("area", "velocity", 16), ("area", "acceleration", 18), ("velocity", "acceleration", 20))
_UNITS = {"area": "area (million sq km)", "velocity": "velocity (million sq km/day)",
          "acceleration": "acceleration (million sq km/day^2)"}


def _emit_phase(out: _Writer, states, config):
    for ri, region in enumerate(REGIONS):
        st = states.get(region)
        if st is None:
            continue
        curves = []
        for bi, block in enumerate(st.decades):
            pc = phase_curve(block)
            curves.append(pc)
            stem = f"phase_{_slug(region)}_block{bi + 1}"
            out.write(stem + ".csv", pc.to_csv(), "phase_curve",
                      {"region": region, "block": pc.label})
            out.write(stem + "_anchors.json", pc.anchors_json(), "phase_curve",
                      {"region": region, "block": pc.label})
        for xa, ya, base in _PHASE_AXES:
            fig = base + ri
            bundle = FigureBundle("phase", f"{xa.capitalize()} vs {ya} ({region})",
                                  _UNITS[xa], _UNITS[ya], figure=fig)
            panel = Panel(region)
            for bi, pc in enumerate(curves):
                color = BLOCK_COLORS[bi % len(BLOCK_COLORS)]
                x, y = getattr(pc, xa), getattr(pc, ya)
                panel.series.append(Series(pc.label, x, y, color,
                                           source=_src(f"phase_{_slug(region)}_block{bi + 1}.csv", xa, ya)))
                for month, idx in pc.month_anchors.items():
                    panel.markers.append({"x": float(x[idx]), "y": float(y[idx]), "text": month[:1]})
            bundle.panels.append(panel)
            out.bundle(f"fig{fig:02d}_phase_{xa}_{ya}_{_slug(region)}", bundle, "figure",
                       {"figure": fig, "region": region}, config.svg)


def _emit_change(out: _Writer, states, config):
    bundle = FigureBundle("lines", "Relative change against the first block", "day of year",
                          "change (percent)" if config.percent else "change (fraction)", figure=22)
    colors = ("black", "red", "blue", "green")
    for st in states.values():
        base = st.decade_means[0]
        panel = Panel(st.region)
        for j, target in enumerate(st.decade_means[1:], start=2):
            ch = percentage_change(base, target, config.epsilon)
            name = f"fig22_change_{_slug(st.region)}_1_{j}.csv"
            out.write(name, ch.to_csv(percent=config.percent), "percentage_change",
                      {"region": st.region, "baseline": base.label, "target": target.label,
                       "epsilon": config.epsilon})
            vals = ch.as_percent() if config.percent else ch.values
            col = "change_percent" if config.percent else "change_fraction"
            panel.series.append(Series(f"{target.label} vs {base.label}", ch.grid, vals,
                                       colors[(j - 2) % len(colors)], source=_src(name, "day", col)))
        bundle.panels.append(panel)
    out.bundle("fig22_change", bundle, "figure", {"figure": 22}, config.svg)


def _extrema_dict(f: GridFunction, radius: int = 2) -> dict:
    e = extrema_summary(f, radius)
    return {"label": f.label, "min_value": e.min_value, "min_day": e.min_day,
            "min_day_window": list(e.min_day_window), "max_value": e.max_value,
            "max_day": e.max_day, "max_day_window": list(e.max_day_window),
            "mean_level": e.mean_level}


def _emit_summary(out: _Writer, states, config, overlaps):
    doc = {"regions": {}, "band_overlap": overlaps}
    for st in states.values():
        ens = st.ensemble
        mean_curve = ens.mean_curve("all years")
        doc["regions"][st.region] = {
            "years": [ens.years[0], ens.years[-1]],
            "basis_count": ens.basis.p,
            "selected_basis_count": st.selected_p,
            "selection_converged": st.selection_converged,
            "all_years": _extrema_dict(st.overall_mean),
            "blocks": [_extrema_dict(m) for m in st.decade_means],
            "all_years_extrema_days": zero_crossings(mean_curve, 1, ens.grid),
            "month_starts": MONTH_STARTS,
        }
    out.write("summary.json", json.dumps(doc, indent=2, sort_keys=True) + "\n", "extrema_summary",
              {"window_radius": 2})
