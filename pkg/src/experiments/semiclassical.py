"""
Semiclassical reference experiments: the flat circle, the product model and
the leafwise counting evaluator.
"""

flat_circle_counting = {
    "name": "flat circle Weyl law",
    "geometry": "weyl-ref",
    "mode": "counting",
    "potential": "flat",
    "eps": [0.01],
    "lambda": [1.0],
    "n_points": 1000,
}

product_heat = {
    "name": "product model heat trace",
    "geometry": "weyl-ref",
    "mode": "heat",
    "potential": "flat",
    "eps": [0.01],
    "t": [1.0],
    "n_points": 1000,
}

leafwise_evaluator = {
    "name": "leafwise counting evaluator",
    "geometry": "weyl-ref",
    "mode": "compare",
    "lambda": [1.0, 10.0, 100.0],
}

criteria = [
    ("Semiclassical references: flat circle within 4% at h=0.01, product model within 2% at eps=0.01", [flat_circle_counting, product_heat]),
    ("Leafwise evaluator: q=1, N_F = sqrt(tau)/pi gives lambda/(4 pi) to 1e-12", [leafwise_evaluator]),
]
