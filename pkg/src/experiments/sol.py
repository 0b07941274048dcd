"""
Sol experiments: the modified Mathieu Weyl law and the failure of the
noncommutative Weyl formula for alpha != 0.
"""

mathieu_counting = {
    "name": "modified Mathieu Weyl law",
    "geometry": "sol",
    "mode": "counting",
    "alpha": 1.0,
    "a": 1.0,
    "mu": 1.0,
    "eps": [0.01],
    "lambda": [5.0],
}


def mismatch(alpha: float) -> dict:
    return {
        "name": f"Sol mismatch alpha={alpha:g}",
        "geometry": "sol",
        "mode": "mismatch",
        "alpha": alpha,
        "eps": [0.1],
        "t": [0.5, 1.0, 2.0],
        "mismatch_margin": 0.01,
    }


near_riemannian = {
    "name": "Sol mismatch near alpha = 0",
    "geometry": "sol",
    "mode": "mismatch",
    "alpha": 1e-3,
    "eps": [0.1],
    "t": [1.0],
}

riemannian_identity = {
    "name": "Sol alpha = 0 coefficient identity",
    "geometry": "sol",
    "mode": "compare",
    "alpha": 0.0,
    "eps": [0.1],
    "t": [0.5, 1.0, 2.0],
}

criteria = [
    ("Modified Mathieu: a=mu=1, lambda=5, count within 3% at eps=0.01, truncation certificate 1e-6", [mathieu_counting]),
    (
        "Sol: mismatch ratio < 2/3 - 0.01 for alpha in {0.5, 1, 2}; 2/3 limit at alpha=1e-3; alpha=0 identity",
        [mismatch(0.5), mismatch(1.0), mismatch(2.0), near_riemannian, riemannian_identity],
    ),
]
