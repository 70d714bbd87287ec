"""Published reference values used by the verify harness.

All entries are weight 12 unless stated.  Keys name the coefficient they
belong to; values are copied at their printed precision.
"""

from __future__ import annotations

REFERENCE_VERSION = 1

# λ_m = c_∞(1; P_{∞,m}) for m = 1..4
LAMBDA = {1: 2.840287, 2: -0.0332846, 3: 0.004040443, 4: -0.0009968}

# P_{∞,-1} = (j + 264)E₆² + λ₋₁Δ, where (j + 264)E₆² = q⁻¹ − 598428q + …
RANKIN_Q1 = -598428
LAMBDA_MINUS_1 = 600270.8947

# P_{∞,-2} = (j² − 480j + 205128)E₆² + λ₋₂Δ
LAMBDA_MINUS_2 = 321214058.075

# c_∞(1; P_{η,m}) for η = (−√D, √D), keyed by (D, m)
PARABOLIC_OF_HYPERBOLIC = {
    (2, 2): 23.43, (3, 2): 7.93, (5, 2): -130.37,
    (2, 1): 252.41, (3, 1): 114.79, (5, 1): -311.81,
    (2, 0): 1529.46, (3, 0): -1665.07, (5, 0): 1857.25,
    (2, -1): -68190.34, (3, -1): 78417.86, (5, -1): 9515.95,
    (2, -2): 1709726.97, (3, -2): -12443941.21, (5, -2): -121422.56,
}

# c_η(n; P_{∞,m}) for η = (−√2, √2), keyed by (m, n)
HYPERBOLIC_OF_PARABOLIC = {
    (1, 3): -0.0039, (0, 3): -10417.11, (-1, 3): -798957.50,
    (1, 2): 0.2114, (0, 2): 445.10, (-1, 2): 3632.46,
    (1, 1): 0.0418, (0, 1): -7.88, (-1, 1): -4.4001,
    (1, 0): 0.00165, (0, 0): 0.106, (-1, 0): 0.0017,
    (1, -1): -0.000155, (0, -1): 0.0292, (-1, -1): 0.0163,
    (1, -2): 0.00000290, (0, -2): 0.00610, (-1, -2): 0.0498,
    (1, -3): 0.000000000198, (0, -3): 0.000528, (-1, -3): 0.0405,
}

# the smallest printed digit of each HYPERBOLIC_OF_PARABOLIC entry
HYPERBOLIC_OF_PARABOLIC_RESOLUTION = {
    (1, 3): 1e-4, (0, 3): 1e-2, (-1, 3): 1e-2,
    (1, 2): 1e-4, (0, 2): 1e-2, (-1, 2): 1e-2,
    (1, 1): 1e-4, (0, 1): 1e-2, (-1, 1): 1e-4,
    (1, 0): 1e-5, (0, 0): 1e-3, (-1, 0): 1e-4,
    (1, -1): 1e-6, (0, -1): 1e-4, (-1, -1): 1e-4,
    (1, -2): 1e-8, (0, -2): 1e-5, (-1, -2): 1e-4,
    (1, -3): 1e-12, (0, -3): 1e-6, (-1, -3): 1e-4,
}

# c_η(n; P_{η,0}) for η = (−√2, √2), summed over |C − 1/2| ≤ 20
HYPERBOLIC_OF_HYPERBOLIC = {
    -3: 1.0677e-7, -2: 0.0015600, -1: -0.083234, 0: 0.88859, 1: 22.4859, 2: 113.849, 3: -2.105,
}
HYPERBOLIC_OF_HYPERBOLIC_WINDOW = 20

# hyperbolic expansion of Δ at η = (−√2, √2), normalised so that c(0) = 1
DELTA_HYPERBOLIC = {
    -4: -3.47e-7, -3: 1.20e-7, -2: 0.00176, -1: -0.0937, 0: 1.0, 1: 25.31, 2: 128.12, 3: -2.37, 4: -1849.07,
}

# Φ(D) (weight 10, m = n = 0) over |C − 1/2| ≤ 2
PHI = {2: 0.0, 3: -0.99998, 5: 0.0, 7: -1.00005, 11: -0.99997, 13: 0.0}
PHI_WINDOW = 2
NEGATIVE_PELL = {2: (1, 1), 3: None, 5: (2, 1), 7: None, 11: None, 13: (18, 5)}
FUNDAMENTAL_UNIT = {2: (3, 2), 3: (2, 1), 5: (9, 4), 7: (8, 3), 11: (10, 3), 13: (649, 180)}
