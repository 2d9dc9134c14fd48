"""End-to-end imaging runs: scene through point cloud and deviation report.

One run per (algorithm, SNR) pair shares the expensive front end per SNR:
echo synthesis, grid division, integrated RDM and its detector run exactly
once, and both estimators consume the identical detected cells. Outputs are
deterministic for a fixed (config, seed).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .arrays import UpaLayout, build_virtual_array
from .cfar import CfarConfig, DetectionMask
from .channel import DEFAULT_TENSOR_CAP_BYTES, SnrSpec, synthesize_rx
from .errors import ConfigError, SceneError
from .fft4d import DEFAULT_PAD, cell_detections_fft
from .metrics import DeviationReport, deviation_report
from .music import (
    EIGEN_CFAR_DEFAULT,
    SPECTRUM_CFAR_DEFAULT,
    PseudoSpectrum,
    SmoothingConfig,
    estimate_doas,
    export_spectrum_csv,
    scan_grid,
)
from .pointcloud import Detection, PointCloud4D, export_cloud_csv, export_cloud_ply, reconstruct
from .rangedoppler import (
    Rdm,
    bin_to_physical,
    detect_rdm_cells,
    divide_grid,
    export_rdm_csv,
    extract_cell_manifold,
    integrate_elements,
)
from .scene import Scene, generate_demo_scene, load_scene, save_scene, scatterer_truth
from .waveform import OfdmConfig, build_resource_grid

RDM_CFAR_DEFAULT = CfarConfig(window=9, guard=0, p_fa=1e-4, os_fraction=0.75)

ALGORITHMS = ("music", "fft4d")

METRICS_COLUMNS = (
    "algorithm",
    "snr_db",
    "n_points",
    "hausdorff_xy_m",
    "hausdorff_xz_m",
    "hausdorff_yz_m",
    "density_diff",
    "velocity_nmse",
    "spatial_deviation",
    "kinematic_deviation",
    "overall_deviation",
)


@dataclass(frozen=True)
class Profile:
    """Named dimension bundle; test shrinks the grid and array for CI speed."""

    name: str
    ofdm: OfdmConfig
    tx: UpaLayout
    rx: UpaLayout

    @property
    def virtual(self) -> UpaLayout:
        return build_virtual_array(self.tx, self.rx)


def profile(name: str) -> Profile:
    if name == "full":
        return Profile(
            "full",
            OfdmConfig(),
            UpaLayout(2, 2, spacing=8.0, role="tx"),
            UpaLayout(8, 8, spacing=1.0, role="rx"),
        )
    if name == "test":
        return Profile(
            "test",
            OfdmConfig(n_subcarriers=256, n_slots=4),
            UpaLayout(2, 2, spacing=4.0, role="tx"),
            UpaLayout(4, 4, spacing=1.0, role="rx"),
        )
    raise ConfigError("unknown profile %r (expected 'full' or 'test')" % (name,))


@dataclass(frozen=True)
class RunConfig:
    profile: str = "full"
    scene_path: str | None = None  # None runs the built-in demo scene
    algorithm: str = "music"  # music | fft4d | both
    snr_db: tuple = (10.0,)
    seed: int = 0
    out_dir: str | None = None
    dump_intermediates: bool = False
    gain_mode: str = "fixed"
    grid_step_deg: float = 0.5
    fft_pad: int = DEFAULT_PAD
    ofdm: OfdmConfig | None = None  # overrides the profile default
    rdm_window: str | None = "hann"  # detection-statistic taper; raw map stays rectangular
    rdm_cfar: CfarConfig = RDM_CFAR_DEFAULT
    spectrum_cfar: CfarConfig = SPECTRUM_CFAR_DEFAULT
    eigen_cfar: CfarConfig = EIGEN_CFAR_DEFAULT
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    max_tensor_bytes: int = DEFAULT_TENSOR_CAP_BYTES

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS + ("both",):
            raise ConfigError("algorithm must be music, fft4d or both")
        if len(self.snr_db) == 0:
            raise ConfigError("need at least one SNR point")

    def algorithms(self) -> tuple:
        return ALGORITHMS if self.algorithm == "both" else (self.algorithm,)


@dataclass(frozen=True)
class RunResult:
    algorithm: str
    snr_db: float
    cloud: PointCloud4D
    report: DeviationReport


@dataclass(frozen=True)
class FrontEnd:
    """Shared per-SNR products consumed by both estimators."""

    s_g: np.ndarray
    rdm: Rdm
    mask: DetectionMask
    cells: tuple


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ConfigError, SceneError, FileNotFoundError):
        raise  # bad input, not a stage failure; callers map these to usage errors
    except Exception as exc:
        raise RuntimeError("pipeline stage %r failed: %s" % (name, exc)) from exc


def detect_cells(
    s_g, cfg: OfdmConfig, rdm_cfar: CfarConfig, rdm_window: str | None = "hann"
) -> FrontEnd:
    """Integrated RDM plus its Doppler-centred detection (DC range bin
    dropped: zero range is the transmitter itself).

    The returned rdm is always the plain rectangular transform. The detector
    runs on a windowed copy by default: a target straddling bins leaks
    rectangular sidelobes across the whole reference window, inflating the
    threshold above its own peak, while a Hann taper confines the leakage to
    the immediate neighbors and leaves the references at noise level.
    """
    rdm = integrate_elements(s_g, cfg)
    det_mag = rdm.magnitude
    if rdm_window is not None:
        det_mag = integrate_elements(s_g, cfg, window=rdm_window).magnitude
    mask, cells = detect_rdm_cells(det_mag, rdm_cfar)
    return FrontEnd(s_g, rdm, mask, cells)


def music_cell_detections(front: FrontEnd, cfg, layout, run_cfg, scan):
    """MUSIC angle estimates for every detected cell, plus spectra for dumps."""
    detections = []
    spectra = []
    for alpha, beta in front.cells:
        cell = extract_cell_manifold(front.s_g, alpha, beta)
        result = estimate_doas(
            cell, run_cfg.smoothing, scan, run_cfg.spectrum_cfar, run_cfg.eigen_cfar
        )
        spectra.append(((alpha, beta), result.spectrum))
        range_m, velocity_ms = bin_to_physical(alpha, beta, cfg)
        for angles, peak in zip(result.angles, result.peaks):
            detections.append(Detection(range_m, velocity_ms, angles, alpha, beta, peak))
    return detections, spectra


def fft_cell_detections(front: FrontEnd, cfg, layout, run_cfg):
    detections = []
    for alpha, beta in front.cells:
        cell = extract_cell_manifold(front.s_g, alpha, beta)
        detections.extend(
            cell_detections_fft(
                cell, alpha, beta, cfg, layout.spacing, run_cfg.fft_pad, run_cfg.spectrum_cfar
            )
        )
    return detections


def _load_run_scene(run_cfg: RunConfig) -> Scene:
    if run_cfg.scene_path is None:
        return generate_demo_scene()
    return load_scene(run_cfg.scene_path)


def _snr_tag(snr_db: float) -> str:
    return ("%+g" % snr_db).replace("+", "p").replace("-", "m")


def _write_manifest(run_cfg: RunConfig, prof: Profile, out_dir: str) -> None:
    try:
        from importlib.metadata import version

        pkg_version = version("isac4d")
    except Exception:
        pkg_version = "unknown"
    manifest = {
        "package_version": pkg_version,
        "numpy_version": np.__version__,
        "profile": prof.name,
        "seed": run_cfg.seed,
        "algorithm": run_cfg.algorithm,
        "snr_db": list(run_cfg.snr_db),
        "scene": run_cfg.scene_path or "demo",
        "gain_mode": run_cfg.gain_mode,
        "grid_step_deg": run_cfg.grid_step_deg,
        "fft_pad": run_cfg.fft_pad,
        "ofdm": asdict(run_cfg.ofdm or prof.ofdm),
        "virtual_array": asdict(prof.virtual),
        "rdm_window": run_cfg.rdm_window,
        "rdm_cfar": asdict(run_cfg.rdm_cfar),
        "spectrum_cfar": asdict(run_cfg.spectrum_cfar),
        "eigen_cfar": asdict(run_cfg.eigen_cfar),
        "smoothing": asdict(run_cfg.smoothing),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _metrics_row(result: RunResult) -> dict:
    row = {"algorithm": result.algorithm, "snr_db": result.snr_db, "n_points": len(result.cloud)}
    row.update(result.report.as_dict())
    return row


def _write_metrics_csv(rows, path) -> None:
    rows = sorted(rows, key=lambda r: (r["algorithm"], r["snr_db"]))
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=METRICS_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def _dump_intermediates(front: FrontEnd, spectra, cfg, out_dir, tag) -> None:
    export_rdm_csv(front.rdm, os.path.join(out_dir, "rdm_%s.csv" % tag))
    thresholds = Rdm(front.mask.threshold, None, cfg.range_bin_m, cfg.velocity_bin_ms)
    export_rdm_csv(thresholds, os.path.join(out_dir, "rdm_threshold_%s.csv" % tag))
    if spectra:
        # strongest cell only; full per-cell spectra are large and redundant
        (alpha, beta), spectrum = spectra[0]
        export_spectrum_csv(
            spectrum, os.path.join(out_dir, "spectrum_%s_cell%d_%d.csv" % (tag, alpha, beta))
        )


def run_point(run_cfg: RunConfig, scene, truths, grid, cfg, prof, snr_db, scan):
    """All requested algorithms at one SNR; front end computed once."""
    layout = prof.virtual
    rx = _stage(
        "channel",
        synthesize_rx,
        grid,
        truths,
        layout,
        cfg,
        SnrSpec(snr_db),
        run_cfg.seed,
        run_cfg.max_tensor_bytes,
    )
    s_g = _stage("divide", divide_grid, rx, grid)
    front = _stage("rdm-detect", detect_cells, s_g, cfg, run_cfg.rdm_cfar, run_cfg.rdm_window)

    results = []
    spectra_by_alg = {}
    for algorithm in run_cfg.algorithms():
        if algorithm == "music":
            detections, spectra = _stage(
                "doa-music", music_cell_detections, front, cfg, layout, run_cfg, scan
            )
            spectra_by_alg[algorithm] = spectra
        else:
            detections = _stage("doa-fft", fft_cell_detections, front, cfg, layout, run_cfg)
        cloud = _stage("reconstruct", reconstruct, detections, scene.bs_position)
        report = _stage("metrics", deviation_report, cloud, scene)
        results.append(RunResult(algorithm, snr_db, cloud, report))
    return results, front, spectra_by_alg


def _prepare(run_cfg: RunConfig):
    prof = profile(run_cfg.profile)
    cfg = run_cfg.ofdm or prof.ofdm
    scene = _stage("scene", _load_run_scene, run_cfg)
    truths = _stage(
        "scene", scatterer_truth, scene, run_cfg.gain_mode, cfg.max_range_m
    )
    grid = _stage("waveform", build_resource_grid, cfg, run_cfg.seed)
    scan = None
    if run_cfg.algorithm in ("music", "both"):
        scan = scan_grid(
            run_cfg.smoothing.subarray_len, prof.virtual.spacing, run_cfg.grid_step_deg
        )
    return prof, cfg, scene, truths, grid, scan


def _write_point_outputs(results, front, spectra_by_alg, run_cfg, cfg, snr_db) -> None:
    out_dir = run_cfg.out_dir
    tag = "snr%sdB" % _snr_tag(snr_db)
    for result in results:
        base = os.path.join(out_dir, "cloud_%s_%s" % (result.algorithm, tag))
        export_cloud_csv(result.cloud, base + ".csv")
        export_cloud_ply(result.cloud, base + ".ply")
    if run_cfg.dump_intermediates:
        _dump_intermediates(front, spectra_by_alg.get("music", []), cfg, out_dir, tag)


def run_pipeline(run_cfg: RunConfig):
    """Execute every (algorithm, SNR) pair; returns RunResult list.

    With out_dir set, writes scene.csv, per-pair cloud CSV/PLY, metrics.csv,
    manifest.json, and (optionally) intermediate dumps.
    """
    prof, cfg, scene, truths, grid, scan = _prepare(run_cfg)
    if run_cfg.out_dir:
        os.makedirs(run_cfg.out_dir, exist_ok=True)
        _write_manifest(run_cfg, prof, run_cfg.out_dir)
        save_scene(scene, os.path.join(run_cfg.out_dir, "scene.csv"))

    all_results = []
    for snr_db in run_cfg.snr_db:
        results, front, spectra = run_point(run_cfg, scene, truths, grid, cfg, prof, snr_db, scan)
        all_results.extend(results)
        if run_cfg.out_dir:
            _write_point_outputs(results, front, spectra, run_cfg, cfg, snr_db)
    if run_cfg.out_dir:
        _write_metrics_csv(
            [_metrics_row(r) for r in all_results], os.path.join(run_cfg.out_dir, "metrics.csv")
        )
    return all_results


def run_sweep(run_cfg: RunConfig):
    """SNR sweep that keeps going when a point fails; returns (results, failures).

    Writes sweep.csv (same columns as metrics.csv) when out_dir is set.
    Failed points are recorded as (algorithm, snr_db, message) and skipped.
    """
    if len(run_cfg.snr_db) < 2:
        raise ConfigError("a sweep needs at least two SNR points")
    prof, cfg, scene, truths, grid, scan = _prepare(run_cfg)
    if run_cfg.out_dir:
        os.makedirs(run_cfg.out_dir, exist_ok=True)
        _write_manifest(run_cfg, prof, run_cfg.out_dir)
        save_scene(scene, os.path.join(run_cfg.out_dir, "scene.csv"))

    results = []
    failures = []
    for snr_db in run_cfg.snr_db:
        try:
            point_results, front, spectra = run_point(
                run_cfg, scene, truths, grid, cfg, prof, snr_db, scan
            )
        except Exception as exc:
            failures.append((run_cfg.algorithm, snr_db, str(exc)))
            continue
        results.extend(point_results)
        if run_cfg.out_dir:
            _write_point_outputs(point_results, front, spectra, run_cfg, cfg, snr_db)
    if run_cfg.out_dir:
        _write_metrics_csv(
            [_metrics_row(r) for r in results], os.path.join(run_cfg.out_dir, "sweep.csv")
        )
    return results, failures
