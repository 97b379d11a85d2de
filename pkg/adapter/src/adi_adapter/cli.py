"""Adapter command line: run one model over one image and export its files."""

from __future__ import annotations

import argparse
import sys

from .config import CategoryMappingError, ConfigError, load_adapter_config
from .export import infer_and_export, validate_export
from .pgm import PgmError, read_pgm
from .stub import CheckpointLoadError, InferenceError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adi-adapter",
        description="Export model predictions as exchange-format mask/detection files",
    )
    parser.add_argument("--image", required=True, help="input image (P5 PGM)")
    parser.add_argument("--config", required=True, help="adapter config JSON")
    parser.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_adapter_config(args.config)
        image = read_pgm(args.image)
        paths = infer_and_export(args.image, config, args.out)
    except (ConfigError, CategoryMappingError, CheckpointLoadError, InferenceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (PgmError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    height, width = image.shape
    findings = validate_export(
        paths.get("mask"), paths.get("detections"), (width, height)
    )
    for role, path in sorted(paths.items()):
        print(f"{role}: {path}")
    if findings:
        for finding in findings:
            print(f"finding: {finding.code}: {finding.detail}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
