"""Command-line front end.

    isac4d run   --demo --profile test --algorithm both --snr=10 --out out/
    isac4d sweep --demo --profile test --algorithm both --snr=-20,-5,10 --out sweep/
    isac4d scene --out scene.csv

`run` executes each SNR point strictly; `sweep` needs two or more SNR points
and keeps going when one fails. `scene` writes the built-in demo scene CSV.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, SceneError
from .pipeline import RunConfig, profile, run_pipeline, run_sweep
from .scene import generate_demo_scene, save_scene
from .waveform import load_ofdm_config


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--scene", metavar="CSV", help="scene file (x,y,z,velocity[,gain] rows)")
    src.add_argument("--demo", action="store_true", help="use the built-in demo scene (default)")
    parser.add_argument("--profile", choices=("full", "test"), default="full")
    parser.add_argument("--algorithm", choices=("music", "fft4d", "both"), default="music")
    parser.add_argument(
        "--snr",
        action="append",
        default=None,
        metavar="DB[,DB...]",
        help="SNR points in dB; repeat or comma-separate (use --snr=-20 for negatives)",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", metavar="DIR", default=None, help="output directory")
    parser.add_argument(
        "--config", metavar="FILE", default=None, help="key=value OFDM overrides for the profile"
    )
    parser.add_argument("--gain-mode", choices=("fixed", "inverse_square"), default="fixed")
    parser.add_argument("--grid-step", type=float, default=0.5, help="angle grid step in degrees")
    parser.add_argument("--fft-pad", type=int, default=4, help="zero-pad factor of the FFT baseline")
    parser.add_argument(
        "--dump-intermediates",
        action="store_true",
        help="also write RDM, threshold and pseudo-spectrum CSV dumps",
    )


def _parse_snrs(raw, default=(10.0,)):
    if not raw:
        return tuple(default)
    values = []
    for chunk in raw:
        for tok in chunk.split(","):
            tok = tok.strip()
            if tok:
                values.append(float(tok))
    if not values:
        raise ConfigError("no SNR values given")
    return tuple(values)


def _run_config(args) -> RunConfig:
    ofdm = None
    if args.config:
        ofdm = load_ofdm_config(args.config, base=profile(args.profile).ofdm)
    return RunConfig(
        profile=args.profile,
        scene_path=args.scene,
        algorithm=args.algorithm,
        snr_db=_parse_snrs(args.snr),
        seed=args.seed,
        out_dir=args.out,
        dump_intermediates=args.dump_intermediates,
        gain_mode=args.gain_mode,
        grid_step_deg=args.grid_step,
        fft_pad=args.fft_pad,
        ofdm=ofdm,
    )


def _print_results(results, out_dir) -> None:
    for r in results:
        print(
            "%s @ %+g dB: %d points, overall deviation %.4f"
            % (r.algorithm, r.snr_db, len(r.cloud), r.report.overall)
        )
    if out_dir:
        print("outputs written to %s" % out_dir)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="isac4d", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the imaging pipeline")
    _add_run_flags(run_p)
    sweep_p = sub.add_parser("sweep", help="SNR sweep (two or more --snr points)")
    _add_run_flags(sweep_p)
    scene_p = sub.add_parser("scene", help="write the demo scene CSV")
    scene_p.add_argument("--out", metavar="CSV", default="scene.csv")

    args = parser.parse_args(argv)
    try:
        if args.command == "scene":
            save_scene(generate_demo_scene(), args.out)
            print("demo scene written to %s" % args.out)
            return 0
        cfg = _run_config(args)
        if args.command == "run":
            results = run_pipeline(cfg)
            _print_results(results, cfg.out_dir)
            return 0
        results, failures = run_sweep(cfg)
        _print_results(results, cfg.out_dir)
        for algorithm, snr_db, message in failures:
            print("FAILED %s @ %+g dB: %s" % (algorithm, snr_db, message), file=sys.stderr)
        return 1 if failures else 0
    except (ConfigError, SceneError, FileNotFoundError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
