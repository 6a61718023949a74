"""Monte-Carlo BLER campaigns and the ``decode-bench`` command line tool.

Frames are processed in fixed-size chunks keyed by frame index.  Each frame
draws from its own ``(seed, index)`` stream and chunks are consumed strictly
in index order, so a point stops at exactly the same frame whatever the
number of workers.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .channel import NoiseModel, frame_rng, modulate, transmit
from .codes import CodeFileError, CodeSpec, get_code, load_generator
from .decoder import adaptive_decode, ml_oracle, original_osd, standard_osd
from .gf2 import unpack_bits
from .reliability import ConditionParams

DECODER_KINDS = ("original-osd", "standard-osd", "adaptive", "ml-oracle")
CHUNK_FRAMES = 256

CSV_COLUMNS = (
    "snr_db",
    "frames",
    "block_errors",
    "bler",
    "avg_teps",
    "ge_skip_rate",
    "condition1_rate",
    "condition2_rate",
    "avg_decode_time_ns",
    "censored",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CampaignConfig:
    code: CodeSpec
    decoder_kind: str = "adaptive"
    order: int = 3
    lam: float = 0.05
    tau: float = 0.95
    snr_grid_db: tuple[float, ...] = ()
    target_errors: int = 500
    max_frames: int = 20_000_000
    master_seed: int = 0
    workers: int = 1
    output: Path | None = None
    output_format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        if self.decoder_kind not in DECODER_KINDS:
            raise ConfigError(f"decoder must be one of {DECODER_KINDS}, got {self.decoder_kind!r}")
        if self.target_errors < 1:
            raise ConfigError("target_errors must be >= 1")
        if not self.snr_grid_db:
            raise ConfigError("snr grid is empty")
        if self.max_frames < self.target_errors:
            raise ConfigError("max_frames must be >= target_errors")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not 0 <= self.order <= self.code.k:
            raise ConfigError(f"order {self.order} outside [0, {self.code.k}]")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.output_format!r}")
        try:
            self.params()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def params(self) -> ConditionParams:
        return ConditionParams(self.order, lam=self.lam, tau=self.tau)


@dataclass(frozen=True)
class SnrPointResult:
    snr_db: float
    frames: int
    block_errors: int
    bler: float
    avg_teps: float
    ge_skip_rate: float
    condition1_rate: float
    condition2_rate: float
    avg_decode_time_ns: float
    censored: bool


# per-frame record columns
_ERR, _TEPS, _GE, _C1, _C2, _NS = range(6)


def _decode_frames(cfg: CampaignConfig, snr_db: float, start: int, stop: int) -> np.ndarray:
    """Simulate frames ``[start, stop)``; returns an int64 (frames, 6) record array."""
    spec = cfg.code
    noise = NoiseModel.from_snr_db(snr_db)
    params = cfg.params()
    out = np.zeros((stop - start, 6), dtype=np.int64)
    for row, idx in enumerate(range(start, stop)):
        rng = frame_rng(cfg.master_seed, idx)
        info = rng.integers(0, 2, spec.k, dtype=np.uint8)
        sent = spec.encode(info)
        sw = transmit(modulate(unpack_bits(sent, spec.n)), noise, rng)
        if cfg.decoder_kind == "ml-oracle":
            t0 = time.perf_counter_ns()
            word = ml_oracle(sw, spec).words
            out[row] = (0, 1 << spec.k, 0, 0, 0, time.perf_counter_ns() - t0)
        else:
            if cfg.decoder_kind == "adaptive":
                res = adaptive_decode(sw, spec, params)
            elif cfg.decoder_kind == "standard-osd":
                res = standard_osd(sw, spec, params)
            else:
                res = original_osd(sw, spec, cfg.order)
            word = res.codeword.words
            out[row] = (
                0,
                res.teps_reencoded,
                res.ge_performed,
                res.condition1_fired,
                res.condition2_fired,
                res.elapsed_ns,
            )
        out[row, _ERR] = not np.array_equal(word, sent)
    return out


_WORKER_CFG: CampaignConfig | None = None


def _init_worker(cfg: CampaignConfig) -> None:
    global _WORKER_CFG
    _WORKER_CFG = cfg


def _worker_chunk(snr_db: float, start: int, stop: int) -> np.ndarray:
    return _decode_frames(_WORKER_CFG, snr_db, start, stop)


def _chunks(max_frames: int):
    for start in range(0, max_frames, CHUNK_FRAMES):
        yield start, min(start + CHUNK_FRAMES, max_frames)


def _summarize(snr_db: float, rec: np.ndarray, censored: bool) -> SnrPointResult:
    frames = len(rec)
    errors = int(rec[:, _ERR].sum())
    return SnrPointResult(
        snr_db=snr_db,
        frames=frames,
        block_errors=errors,
        bler=errors / frames,
        avg_teps=float(rec[:, _TEPS].sum()) / frames,
        ge_skip_rate=float(frames - rec[:, _GE].sum()) / frames,
        condition1_rate=float(rec[:, _C1].sum()) / frames,
        condition2_rate=float(rec[:, _C2].sum()) / frames,
        avg_decode_time_ns=float(rec[:, _NS].sum()) / frames,
        censored=censored,
    )


def _consume(stream, target: int) -> tuple[np.ndarray, bool]:
    """Concatenate in-order chunks up to the frame carrying the target-th error."""
    parts, errors = [], 0
    for rec in stream:
        cum = errors + np.cumsum(rec[:, _ERR])
        hit = np.flatnonzero(cum >= target)
        if hit.size:
            parts.append(rec[: hit[0] + 1])
            return np.concatenate(parts), False
        parts.append(rec)
        errors = int(cum[-1]) if len(cum) else errors
    rec = np.concatenate(parts) if parts else np.zeros((0, 6), dtype=np.int64)
    return rec, True


def run_point(cfg: CampaignConfig, snr_db: float, pool: ProcessPoolExecutor | None = None) -> SnrPointResult:
    """Simulate one SNR until ``target_errors`` block errors or ``max_frames`` frames."""
    if pool is None and cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(cfg,)) as own:
            return run_point(cfg, snr_db, own)
    if pool is None:
        stream = (_decode_frames(cfg, snr_db, a, b) for a, b in _chunks(cfg.max_frames))
        rec, censored = _consume(stream, cfg.target_errors)
    else:
        rec, censored = _consume(_pooled(pool, cfg, snr_db), cfg.target_errors)
    return _summarize(snr_db, rec, censored)


def _pooled(pool: ProcessPoolExecutor, cfg: CampaignConfig, snr_db: float):
    # keep a bounded window of chunks in flight, yield them in index order
    window = 4 * cfg.workers
    pending = []
    chunks = _chunks(cfg.max_frames)
    try:
        for a, b in chunks:
            pending.append(pool.submit(_worker_chunk, snr_db, a, b))
            if len(pending) >= window:
                yield pending.pop(0).result()
        while pending:
            yield pending.pop(0).result()
    finally:
        for fut in pending:
            fut.cancel()


def run_campaign(cfg: CampaignConfig, quiet: bool = False) -> list[SnrPointResult]:
    """Run every grid point in order and write the results if an output path is set.

    One progress line per point goes to standard error unless ``quiet``.
    """
    results = []
    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(cfg,))
    try:
        for snr in cfg.snr_grid_db:
            t0 = time.monotonic()
            res = run_point(cfg, snr, pool)
            results.append(res)
            if not quiet:
                flag = " (censored)" if res.censored else ""
                print(
                    f"[{cfg.code.name} {cfg.decoder_kind}] {snr:.2f} dB: "
                    f"{res.block_errors}/{res.frames} errors, bler={res.bler:.4g}, "
                    f"teps={res.avg_teps:.4g}, ge_skip={res.ge_skip_rate:.4f}, "
                    f"{time.monotonic() - t0:.1f}s{flag}",
                    file=sys.stderr,
                    flush=True,
                )
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    if cfg.output is not None:
        emit_results(results, cfg.output_format, cfg.output)
    return results


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return format(value, ".17g")


def emit_results(results: list[SnrPointResult], fmt: str, path: str | Path) -> Path:
    if not results:
        raise ValueError("no results to write")
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            if fmt == "csv":
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(CSV_COLUMNS)
                for r in results:
                    w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
            elif fmt == "json":
                json.dump([asdict(r) for r in results], fh, indent=2)
                fh.write("\n")
            else:
                raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc
    return path


def read_results_csv(path: str | Path) -> list[SnrPointResult]:
    """Parse a file written by :func:`emit_results`."""
    types = {f.name: f.type for f in fields(SnrPointResult)}
    out = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            vals = {}
            for name, text in row.items():
                t = types[name]
                if t == "bool":
                    vals[name] = text == "1"
                elif t == "int":
                    vals[name] = int(text)
                else:
                    vals[name] = float(text)
            out.append(SnrPointResult(**vals))
    return out


def parse_snr_grid(text: str) -> tuple[float, ...]:
    """``"a:step:b"`` (inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad SNR range {text!r}, expected start:step:stop")
        a, step, b = map(float, parts)
        if step <= 0 or b < a:
            raise ConfigError(f"bad SNR range {text!r}")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return tuple(round(a + i * step, 10) for i in range(count))
    return tuple(float(s) for s in text.split(",") if s.strip())


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="decode-bench", description="Monte-Carlo BLER benchmark for OSD decoders.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--code", help="bundled code name, e.g. ebch-64-36")
    src.add_argument("--code-file", type=Path, help="generator matrix file")
    p.add_argument("--decoder", choices=DECODER_KINDS, default="adaptive", help="decoder kind (default: adaptive)")
    p.add_argument("--order", type=int, default=3, help="OSD order m (default: 3)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.05, help="GE-skip slack lambda (default: 0.05)")
    p.add_argument("--tau", type=float, default=0.95, help="early-stop threshold; >= 1 disables (default: 0.95)")
    p.add_argument("--snr", required=True, help="start:step:stop or comma list, in dB")
    p.add_argument("--target-errors", type=int, default=500, help="block errors per SNR point")
    p.add_argument("--max-frames", type=int, default=20_000_000, help="frame cap per SNR point; hitting it marks the point censored")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--workers", type=int, default=None, help="worker processes (env DECODE_BENCH_WORKERS, else 1)")
    p.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        workers = args.workers
        if workers is None:
            workers = int(os.environ.get("DECODE_BENCH_WORKERS", "1"))
        spec = get_code(args.code) if args.code else load_generator(args.code_file)
        cfg = CampaignConfig(
            code=spec,
            decoder_kind=args.decoder,
            order=args.order,
            lam=args.lam,
            tau=args.tau,
            snr_grid_db=parse_snr_grid(args.snr),
            target_errors=args.target_errors,
            max_frames=args.max_frames,
            master_seed=args.seed,
            workers=workers,
            output=args.out,
            output_format=args.format,
        )
        results = run_campaign(cfg)
    except (ConfigError, CodeFileError, KeyError, OSError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"decode-bench: error: {msg}", file=sys.stderr)
        return 2
    if args.out is None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in results:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return 0


if __name__ == "__main__":
    sys.exit(main())
