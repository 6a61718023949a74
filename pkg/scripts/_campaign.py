"""Shared argument handling for the sweep scripts."""

import argparse
import os
from pathlib import Path

from adaptive_osd.codes import get_code
from adaptive_osd.simbench import CampaignConfig, run_campaign


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out-dir", type=Path, default=Path("results"))
    p.add_argument("--workers", type=int, default=int(os.environ.get("DECODE_BENCH_WORKERS", "1")))
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--target-errors", type=int, default=500)
    p.add_argument("--max-frames", type=int, default=200_000)
    p.add_argument("--deep", action="store_true", help="extend grids to the low-BLER points (days of CPU)")
    return p


def run(args, tag: str, code: str, kind: str, order: int, grid, lam: float = 0.05, tau: float = 0.95,
        max_frames: int | None = None, target: int | None = None):
    args.out_dir.mkdir(parents=True, exist_ok=True)
    target = target or args.target_errors
    cfg = CampaignConfig(
        code=get_code(code),
        decoder_kind=kind,
        order=order,
        lam=lam,
        tau=tau,
        snr_grid_db=tuple(grid),
        target_errors=target,
        max_frames=max(max_frames or args.max_frames, target),
        master_seed=args.seed,
        workers=args.workers,
        output=args.out_dir / f"{tag}.csv",
    )
    return run_campaign(cfg)
