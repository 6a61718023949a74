"""BLER of original OSD vs the adaptive decoder on the four eBCH codes."""

from _campaign import parser, run

# code -> (order, desk grid, extra deep points)
CODES = {
    "ebch-64-24": (3, [1.0, 1.5, 2.0, 2.5], [3.0, 3.5, 4.0]),
    "ebch-64-36": (3, [2.0, 2.51, 3.01], [3.5, 4.0, 4.5, 5.01]),
    "ebch-64-45": (2, [2.5, 3.0, 3.5], [4.0, 4.5, 5.0]),
    "ebch-128-106": (2, [3.5, 4.0], [4.5, 5.0, 5.5]),
}


def main():
    args = parser(__doc__).parse_args()
    for code, (order, grid, deep) in CODES.items():
        snrs = grid + (deep if args.deep else [])
        for kind in ("original-osd", "adaptive"):
            max_frames = 40_000_000 if args.deep else args.max_frames
            run(args, f"bler_{code}_{kind}", code, kind, order, snrs, max_frames=max_frames)


if __name__ == "__main__":
    main()
