"""Average TEPs and decoding time for eBCH(64,36), order 3: original, standard, adaptive."""

from _campaign import parser, run

GRID = [2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5]


def main():
    args = parser(__doc__).parse_args()
    # TEP averages converge long before 500 errors at high SNR, so the
    # frame budget rather than the error quota usually ends a point
    frames = 40_000_000 if args.deep else 20_000
    for kind in ("original-osd", "standard-osd", "adaptive"):
        budget = 2_000 if kind == "original-osd" and not args.deep else frames
        run(args, f"teps_ebch-64-36_{kind}", "ebch-64-36", kind, 3, GRID, max_frames=budget)


if __name__ == "__main__":
    main()
