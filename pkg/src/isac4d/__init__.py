"""Downlink OFDM integrated sensing: 4D point-cloud imaging simulator.

The pipeline runs scene -> PRS/OFDM grid -> virtual-aperture echoes ->
range-Doppler detection -> per-cell DoA (smoothed 2D MUSIC or spatial FFT)
-> world-frame 4D point cloud -> deviation metrics. See the README for the
file formats and the CLI.
"""

from .arrays import (
    SteeringAngles,
    UpaLayout,
    angles_from_direction,
    build_virtual_array,
    look_direction,
    row_col_manifolds,
    steering_matrix,
    steering_phase,
)
from .cfar import (
    CfarConfig,
    DetectionMask,
    ca_cfar_1d,
    ca_cfar_2d,
    osca_cfar_2d,
    peak_cells,
    threshold_factor,
)
from .channel import SnrSpec, VirtualArraySnapshot, doppler_shift_hz, synthesize_rx
from .constants import C0
from .errors import CapacityError, ConfigError, SceneError
from .fft4d import AngleSpectrumFft, angles_from_cosines, fft4d_image, fft_angle_spectrum
from .metrics import (
    DeviationReport,
    deviation_report,
    hausdorff_2d,
    overall_deviation,
    spatial_deviation,
    velocity_nmse,
)
from .music import (
    DoaResult,
    PseudoSpectrum,
    ScanGrid,
    SmoothingConfig,
    estimate_doas,
    noise_subspace,
    pseudo_spectrum,
    scan_grid,
    smooth_covariance,
)
from .pipeline import Profile, RunConfig, RunResult, profile, run_pipeline, run_sweep
from .pointcloud import (
    Detection,
    PointCloud4D,
    export_cloud_csv,
    export_cloud_ply,
    import_cloud_csv,
    reconstruct,
)
from .rangedoppler import (
    Rdm,
    bin_to_physical,
    compute_rdm,
    detect_rdm_cells,
    divide_grid,
    extract_cell_manifold,
    integrate_elements,
    range_peak_bin,
    velocity_peak_bin,
)
from .scene import (
    DEFAULT_BS_POSITION,
    Scatterer,
    ScattererTruth,
    Scene,
    generate_demo_scene,
    load_scene,
    save_scene,
    scatterer_truth,
)
from .waveform import (
    OfdmConfig,
    SymbolGrid,
    build_resource_grid,
    gold_sequence,
    load_ofdm_config,
    pilot_values,
    prs_subcarrier_offset,
    prs_subcarrier_set,
    prs_symbol_indices,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
