"""Named, ready-to-run configurations.

Each preset is a complete config document (pure JSON types) for one
scenario; ``get_preset`` hands out deep copies so callers can edit freely.
The worked examples share a small second-order system with an odd
exponential convolution kernel; the remaining entries cover the blow-up
demonstration, scalar resolvent sampling, and norm reporting.
"""

from __future__ import annotations

import copy

from .errors import InvalidArgumentError

HALF_PI = 1.5707963267948966

_SECOND_ORDER_PROBLEM = {
    "symbols": {
        "l": 2,
        "b": [0.0, 0.0, -1.0],
        "nu": 1.0,
        "a_kernels": {
            "2": {"kind": "exponential-paper", "rate": 1.0, "amplitude": 1.0}
        },
    },
    "operator": {"kind": "dense-matrix", "matrix": [[1.0, 0.0], [0.0, 2.0]]},
    "grid": {"half_width": 16.0, "n": 256},
    "p": 2.0,
}

_FOURTH_ORDER_PROBLEM = {
    "symbols": {
        "l": 4,
        "b": [0.0, 0.0, 0.0, 0.0, 1.0],
        "nu": 1.0,
        "a_kernels": {
            "4": {"kind": "exponential-paper", "rate": 1.0, "amplitude": 1.0}
        },
    },
    "operator": {"kind": "dense-matrix", "matrix": [[1.0, 0.0], [0.0, 2.0]]},
    "grid": {"half_width": 8.0, "n": 64},
    "p": 2.0,
}

PRESETS = {
    # Second-order system with the odd exponential kernel: linear heat-type
    # evolution of a two-component gaussian.
    "example-4.3": {
        "scenario": "solve-parabolic",
        "problem": _SECOND_ORDER_PROBLEM,
        "solve-parabolic": {
            "t_final": 1.0,
            "dt": 0.01,
            "initial": {
                "type": "gaussian",
                "width": 2.0,
                "weights": [1.0, 0.5],
            },
            "store_every": 10,
        },
    },
    # Admissibility audit of the same symbols inside the right half-plane.
    "example-4.3-condition": {
        "scenario": "check-condition",
        "problem": _SECOND_ORDER_PROBLEM,
        "check-condition": {"sector_angle": HALF_PI},
    },
    # Resolvent sweep over four decades of real shifts.
    "example-4.3-sweep": {
        "scenario": "lambda-sweep",
        "problem": _SECOND_ORDER_PROBLEM,
        "lambda-sweep": {
            "forcing": {"type": "gaussian", "width": 2.0, "weights": [1.0, 0.5]},
            "lambdas": [1.0, 10.0, 100.0, 1000.0],
        },
    },
    # Mikhlin-style bound for the whole multiplier ladder on the same shifts.
    "example-4.3-mikhlin": {
        "scenario": "mikhlin",
        "problem": _SECOND_ORDER_PROBLEM,
        "mikhlin": {
            "lambdas": [1.0, 10.0, 100.0, 1000.0],
            "families": [0, 1, 2, 3, 4, "sigma"],
        },
    },
    # Randomized-sum bound for the scaled resolvents on a frequency/shift mesh.
    "example-4.3-rbound": {
        "scenario": "rbound",
        "problem": _SECOND_ORDER_PROBLEM,
        "rbound": {
            "xi_samples": [0.01, 0.1, 1.0, 10.0, 100.0],
            "lambdas": [1.0, 10.0, 100.0, 1000.0],
            "trials": 200,
        },
    },
    # Fourth-order dissipative evolution on a 6x6 interior Dirichlet grid
    # with a cubic damping term; the small initial mode decays.
    "example-4.4": {
        "scenario": "solve-parabolic",
        "problem": {
            "symbols": {"l": 4, "b": [0.0, 0.0, 0.0, 0.0, 1.0], "nu": 1.0},
            "operator": {
                "kind": "dirichlet-laplacian-2d",
                "n_y": 6,
                "n_z": 6,
                "c": 1.0,
            },
            "grid": {"half_width": 8.0, "n": 64},
            "p": 2.0,
        },
        "solve-parabolic": {
            "t_final": 0.5,
            "dt": 0.01,
            "initial": {
                "type": "gaussian",
                "width": 2.0,
                "amplitude": 0.1,
                "weights": {"type": "operator-mode", "index": 0},
            },
            "nonlinearity": {
                "kind": "polynomial",
                "arity": 0,
                "terms": [{"powers": [3], "coeff": -1.0}],
            },
            "store_every": 10,
        },
    },
    # Stationary solve of the shifted linear equation at lambda = 10.
    "problem-3.7": {
        "scenario": "solve-linear",
        "problem": _SECOND_ORDER_PROBLEM,
        "solve-linear": {
            "lambda": 10.0,
            "forcing": {"type": "gaussian", "width": 2.0, "weights": [1.0, 0.5]},
        },
    },
    # Two-point boundary problem for the fourth-order system with a cubic
    # absorption term, solved by successive substitutions.
    "problem-4.6": {
        "scenario": "solve-elliptic",
        "problem": _FOURTH_ORDER_PROBLEM,
        "solve-elliptic": {
            "t_final": 0.5,
            "m": 48,
            "bc": {
                "alpha1": 1.0,
                "beta1": 0.0,
                "alpha2": 0.0,
                "beta2": 1.0,
                "f1": {
                    "type": "gaussian",
                    "width": 2.0,
                    "amplitude": 0.5,
                    "weights": [1.0, 0.5],
                },
                "f2": {
                    "type": "gaussian",
                    "width": 2.0,
                    "amplitude": 0.25,
                    "weights": [0.5, 1.0],
                },
            },
            "nonlinearity": {
                "kind": "polynomial",
                "arity": 0,
                "terms": [{"powers": [3], "coeff": -1.0}],
            },
            "max_iter": 30,
            "tol": 1e-08,
        },
    },
    # Spatially constant data turns the semilinear flow into u' = u^2 + eps;
    # the run must halt near the t = 1 blow-up instead of completing.
    "blowup-ode": {
        "scenario": "solve-parabolic",
        "problem": {
            "symbols": {"l": 2, "b": [0.0, 0.0, -1.0], "nu": 1.0},
            "operator": {"kind": "dense-matrix", "matrix": [[1e-12]]},
            "grid": {"half_width": 4.0, "n": 8},
            "p": 2.0,
        },
        "solve-parabolic": {
            "t_final": 1.2,
            "dt": 0.0001,
            "initial": {"type": "constant", "value": 1.0},
            "nonlinearity": {
                "kind": "polynomial",
                "arity": 0,
                "terms": [{"powers": [2], "coeff": 1.0}],
            },
            "blowup_threshold": 100000000.0,
            "step_tol": 0.001,
            "store_every": 1000,
        },
    },
    # Scalar zeroth-order symbols: randomized bound for (1+lambda)/(2+lambda).
    "scalar-resolvent": {
        "scenario": "rbound",
        "problem": {
            "symbols": {"l": 0, "b": [1.0], "nu": 1.0},
            "operator": {"kind": "dense-matrix", "matrix": [[1.0]]},
            "grid": {"half_width": 8.0, "n": 32},
            "p": 2.0,
        },
        "rbound": {
            "xi_samples": [0.01, 0.1, 1.0, 10.0, 100.0],
            "lambdas": [1.0, 10.0, 100.0, 1000.0],
            "trials": 200,
        },
    },
    # Catalogue of norms of a unit gaussian on a fine grid.
    "norms-gaussian": {
        "scenario": "norms-report",
        "problem": {
            "symbols": {"l": 2, "b": [0.0, 0.0, -1.0], "nu": 1.0},
            "operator": {"kind": "dense-matrix", "matrix": [[1.0]]},
            "grid": {"half_width": 16.0, "n": 512},
            "p": 2.0,
        },
        "norms-report": {
            "field": {"type": "gaussian", "width": 1.0},
            "norms": [
                {"kind": "lp", "p": 2.0},
                {"kind": "sobolev", "l": 2, "p": 2.0},
                {"kind": "besov", "s": 1.5, "q": 2.0, "p": 2.0},
                {"kind": "trace", "l": 2, "p": 2.0, "q": 2.0},
                {"kind": "mixed", "p": 2.0, "q": 2.0, "time_points": 64},
            ],
        },
    },
}


def preset_names():
    return sorted(PRESETS)


def get_preset(name: str) -> dict:
    """Deep copy of the named preset config."""
    if name not in PRESETS:
        raise InvalidArgumentError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        )
    return copy.deepcopy(PRESETS[name])
