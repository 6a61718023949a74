"""GE-skip probability and average TEPs of the adaptive decoder over lambda."""

from _campaign import parser, run

GRID = [2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5]
LAMBDAS = [0.01, 0.05, 0.2]
CODES = {"ebch-64-36": 3, "ebch-128-106": 2}


def main():
    args = parser(__doc__).parse_args()
    frames = 100_000 if args.deep else 10_000
    for code, order in CODES.items():
        for lam in LAMBDAS:
            run(args, f"ge_{code}_lambda{lam}", code, "adaptive", order, GRID, lam=lam,
                max_frames=frames, target=frames)


if __name__ == "__main__":
    main()
