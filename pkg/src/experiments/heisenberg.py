"""
Heisenberg experiments: three routes to the symbol trace and the Mehler trace identity.
"""

consistency = {
    "name": "Heisenberg internal consistency",
    "geometry": "heisenberg",
    "mode": "compare",
    "eps": [0.1],
    "t": [0.1, 0.5, 1.0, 2.0, 5.0],
}

mehler_trace = {
    "name": "Mehler trace identity",
    "geometry": "heisenberg",
    "mode": "heat",
    "omega": [0.5, 1.0, 2.0],
    "t": [0.5, 1.0, 2.0],
}

criteria = [
    ("Heisenberg: 2d, reduced and explicit traces agree to 1e-7; Mehler trace identity to 1e-8", [consistency, mehler_trace]),
]
