"""Regenerate the bundled eBCH generator files under src/adaptive_osd/data."""

from pathlib import Path

from adaptive_osd.codes import EBCH_PARAMS, ebch_code, min_distance, save_generator

DATA = Path(__file__).resolve().parents[1] / "src" / "adaptive_osd" / "data"


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for name, (m, t) in EBCH_PARAMS.items():
        spec = ebch_code(m, t, name)
        if spec.k <= 24:
            assert min_distance(spec.generator) == spec.d_h, name
        save_generator(spec, DATA / f"{name}.txt")
        print(f"{name}: n={spec.n} k={spec.k} d_h={spec.d_h}")


if __name__ == "__main__":
    main()
