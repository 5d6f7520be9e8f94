"""Generate tests/data/moments_oracle.csv: U(t) = E[Y(t)] and E[Y(t)^2].

Both come from numerical Laplace inversion (Talbot contour, mpmath) of the
transforms 1 / (s phi(s)) and 2 / (s phi(s)^2), phi(s) = c1 s^a1 + c2 s^a2,
without going through Mittag-Leffler functions. Each value is computed at two
working precisions that must agree to 1e-20.

Run from the crate root:  python3 tests/oracles/gen_moments.py
"""
import csv

import mpmath as mp

PARAMS = [
    (0.9, 0.5, 0.5, 0.5),
    (0.7, 0.3, 0.2, 0.8),
    (0.6, 0.55, 0.5, 0.5),
]
TIMES = [0.5, 1.0, 2.0, 5.0, 10.0, 100.0]


def invert(f, t, digits):
    with mp.workdps(digits):
        return mp.invertlaplace(f, mp.mpf(t), method="talbot")


def moments(a1, a2, c1, c2, t):
    def phi(s):
        return c1 * s ** mp.mpf(a1) + c2 * s ** mp.mpf(a2)

    out = []
    for f in (lambda s: 1 / (s * phi(s)), lambda s: 2 / (s * phi(s) ** 2)):
        lo = invert(f, t, 40)
        hi = invert(f, t, 60)
        assert abs(lo - hi) <= mp.mpf(10) ** -20 * abs(hi), (a1, a2, t, lo, hi)
        out.append(hi)
    return out


def main():
    with open("tests/data/moments_oracle.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha1", "alpha2", "c1", "c2", "t", "u", "second_moment"])
        for a1, a2, c1, c2 in PARAMS:
            for t in TIMES:
                u, m2 = moments(a1, a2, c1, c2, t)
                w.writerow([a1, a2, c1, c2, t, mp.nstr(u, 20), mp.nstr(m2, 20)])


if __name__ == "__main__":
    main()
