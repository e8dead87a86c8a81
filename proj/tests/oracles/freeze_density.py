"""Print the density/CDF reference values frozen into tests/unit/test_density.cpp.

    python3 tests/oracles/freeze_density.py
"""
import mpmath as mp

import stable_cf

# (alpha, beta, gamma, delta, x), S1.
S1_CASES = [
    (1.5, 0.5, 1, 0, 0.7),
    (1.5, 0.5, 1, 0, -2.0),
    (0.8, -0.3, 1, 0, 1.5),
    (1.2, 0.9, 1, 0, 0.0),
    (1.9, 0.0, 1, 0, 3.0),
    (1.0, 0.5, 1, 0, 0.5),
    (1.3, -0.9, 2, 1, 2.0),
    (0.6, 0.9, 1, 0, 5.0),
    (1.7, -0.5, 0.5, -1, -1.2),
]

# (alpha, beta, x), standard S0, close to alpha = 1.
NEAR_ONE_CASES = [
    (0.999, 0.5, 0.3),
    (1.001, 0.5, -0.7),
    (1.000001, 1.0, 0.2),
    (0.9995, -1.0, 1.5),
]

if __name__ == "__main__":
    for a, b, g, d, x in S1_CASES:
        p = stable_cf.pdf(x, a, b, g, d, s1=True)
        c = stable_cf.cdf(x, a, b, g, d, s1=True)
        print(f"{{{a}, {b}, {g}, {d}, {x}, {mp.nstr(p, 17)}, {mp.nstr(c, 17)}}},")
    for a, b, x in NEAR_ONE_CASES:
        p = stable_cf.pdf(x, a, b)
        c = stable_cf.cdf(x, a, b)
        print(f"{{{a}, {b}, {x}, {mp.nstr(p, 17)}, {mp.nstr(c, 17)}}},")
