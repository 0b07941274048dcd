"""
Torus experiments: exact lattice counts and heat traces for linear foliations.
"""

# alpha = sqrt(2), count against lambda / (4 pi eps)
irrational_counting = {
    "name": "torus irrational counting",
    "geometry": "torus",
    "mode": "counting",
    "alpha_name": "sqrt2",
    "eps": [0.01],
    "lambda": [1e4],
}

# alpha = 1/1, only the k = 0 leaf term survives at lambda = 10
rational_counting = {
    "name": "torus rational counting",
    "geometry": "torus",
    "mode": "counting",
    "rational": [1, 1],
    "eps": [0.01],
    "lambda": [10.0],
}

heat_vs_weyl = {
    "name": "torus heat trace vs noncommutative Weyl",
    "geometry": "torus",
    "mode": "compare",
    "alpha_name": "sqrt2",
    "eps": [0.04, 0.02, 0.01],
    "t": [1.0],
    "lambda": [],
}

criteria = [
    ("Torus irrational counting: alpha=sqrt2, lambda=1e4, eps=0.01 within 3% of lambda/(4 pi eps)", [irrational_counting]),
    ("Torus rational counting: alpha=1, lambda=10, eps=0.01 within 5% of 71.18", [rational_counting]),
    ("Torus heat trace: ratio to 1/(4 pi t eps) within 3%, fitted exponent 1 +- 0.05", [heat_vs_weyl]),
]
