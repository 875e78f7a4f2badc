"""Strict schema validation and object construction for scenario configs.

Configs are JSON documents.  Unknown keys are rejected with the dotted path
of the offender; complex scalars are written either as plain numbers or as
[re, im] pairs.  Randomized constructs (band-limited fields, R-bound
trials) draw from a generator seeded by the run seed only.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .evolution import Nonlinearity
from .grids import Field, Grid, band_limited_random
from .kernels import KERNEL_KINDS, Kernel
from .operators import OperatorRealization, make_operator
from .solver import DiscretizedProblem
from .symbols import Sector, SymbolSet

SCENARIOS = (
    "check-condition",
    "solve-linear",
    "lambda-sweep",
    "mikhlin",
    "rbound",
    "solve-parabolic",
    "solve-elliptic",
    "norms-report",
)


def _check_keys(d, path, required, optional=()):
    if not isinstance(d, dict):
        raise ConfigError("expected an object", path)
    for key in d:
        if key not in required and key not in optional:
            raise ConfigError(f"unknown key {key!r}", f"{path}.{key}" if path else key)
    for key in required:
        if key not in d:
            raise ConfigError(f"missing required key {key!r}", path)


def _num(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("expected a number", path)
    return float(v)


def _int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError("expected an integer", path)
    return v


def _cnum(v, path) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (
        isinstance(v, (list, tuple))
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        return complex(v[0], v[1])
    raise ConfigError("expected a number or [re, im] pair", path)


def _cnum_list(v, path):
    if not isinstance(v, list) or not v:
        raise ConfigError("expected a nonempty list", path)
    return [_cnum(x, f"{path}[{i}]") for i, x in enumerate(v)]


def build_kernel(spec, path) -> Kernel:
    _check_keys(spec, path, required=("kind",), optional=("rate", "amplitude"))
    kind = spec["kind"]
    if kind not in KERNEL_KINDS or kind == "custom-closed-form":
        raise ConfigError(f"unsupported kernel kind {kind!r}", f"{path}.kind")
    return Kernel(
        kind=kind,
        rate=_num(spec.get("rate", 1.0), f"{path}.rate"),
        amplitude=_cnum(spec.get("amplitude", 1.0), f"{path}.amplitude"),
    )


def build_symbols(spec, path) -> SymbolSet:
    _check_keys(
        spec, path, required=("l", "b", "nu"), optional=("a_kernels", "mu_kernel")
    )
    l = _int(spec["l"], f"{path}.l")
    b = _cnum_list(spec["b"], f"{path}.b")
    kernels = {}
    for key, ker in (spec.get("a_kernels") or {}).items():
        try:
            order = int(key)
        except (TypeError, ValueError):
            raise ConfigError("kernel orders must be integer keys", f"{path}.a_kernels")
        kernels[order] = build_kernel(ker, f"{path}.a_kernels.{key}")
    mu = spec.get("mu_kernel")
    mu_kernel = build_kernel(mu, f"{path}.mu_kernel") if mu is not None else None
    try:
        return SymbolSet(
            l=l, b=tuple(b), a_kernels=kernels, mu_kernel=mu_kernel,
            nu=_cnum(spec["nu"], f"{path}.nu"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), path)


def build_operator(spec, path) -> OperatorRealization:
    _check_keys(
        spec,
        path,
        required=("kind",),
        optional=("matrix", "csv", "b", "n", "n_y", "n_z", "c"),
    )
    kind = spec.get("kind")
    try:
        if kind == "dense-matrix":
            if "csv" in spec:
                return make_operator(kind, csv=spec["csv"])
            rows = spec.get("matrix")
            if not isinstance(rows, list) or not rows:
                raise ConfigError("dense-matrix needs a matrix", f"{path}.matrix")
            matrix = [
                [_cnum(v, f"{path}.matrix[{i}][{j}]") for j, v in enumerate(row)]
                for i, row in enumerate(rows)
            ]
            return make_operator(kind, matrix=matrix)
        if kind == "periodic-sturm-liouville":
            return make_operator(
                kind,
                b=_num(spec.get("b", 1.0), f"{path}.b"),
                n=_int(spec.get("n", 128), f"{path}.n"),
            )
        if kind == "dirichlet-laplacian-2d":
            return make_operator(
                kind,
                n_y=_int(spec.get("n_y", 32), f"{path}.n_y"),
                n_z=_int(spec.get("n_z", 32), f"{path}.n_z"),
                c=_num(spec.get("c", 0.0), f"{path}.c"),
            )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), path)
    raise ConfigError(f"unknown operator kind {kind!r}", f"{path}.kind")


def build_grid(spec, path) -> Grid:
    _check_keys(spec, path, required=("half_width", "n"))
    try:
        return Grid(
            half_width=_num(spec["half_width"], f"{path}.half_width"),
            n=_int(spec["n"], f"{path}.n"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), path)


def build_problem(spec, path) -> DiscretizedProblem:
    _check_keys(
        spec, path, required=("symbols", "operator", "grid"), optional=("p",)
    )
    try:
        return DiscretizedProblem(
            symbols=build_symbols(spec["symbols"], f"{path}.symbols"),
            operator=build_operator(spec["operator"], f"{path}.operator"),
            grid=build_grid(spec["grid"], f"{path}.grid"),
            p=_num(spec.get("p", 2.0), f"{path}.p"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), path)


def _component_weights(spec, path, operator, rng):
    if spec is None:
        return np.ones(operator.dim)
    if isinstance(spec, list):
        w = [_cnum(v, f"{path}[{i}]") for i, v in enumerate(spec)]
        if len(w) != operator.dim:
            raise ConfigError(
                f"expected {operator.dim} component weights, got {len(w)}", path
            )
        return np.asarray(w, dtype=complex)
    if isinstance(spec, dict):
        _check_keys(spec, path, required=("type", "index"))
        if spec["type"] != "operator-mode":
            raise ConfigError("weights object must have type operator-mode", path)
        idx = _int(spec["index"], f"{path}.index")
        eigvals, eigvecs = np.linalg.eig(operator.as_dense())
        order = np.argsort(eigvals.real)
        if not 0 <= idx < operator.dim:
            raise ConfigError("operator-mode index out of range", f"{path}.index")
        vec = eigvecs[:, order[idx]]
        vec = vec / np.max(np.abs(vec))
        if np.max(np.abs(vec.imag)) < 1e-12:
            vec = vec.real
        return vec
    raise ConfigError("weights must be a list or operator-mode object", path)


def build_field(spec, path, grid: Grid, operator: OperatorRealization, rng) -> Field:
    _check_keys(
        spec,
        path,
        required=("type",),
        optional=(
            "value", "weights", "amplitude", "wavenumber", "center", "width",
            "max_mode", "decay",
        ),
    )
    ftype = spec["type"]
    weights = _component_weights(spec.get("weights"), f"{path}.weights", operator, rng)
    weights = weights * _num(spec.get("amplitude", 1.0), f"{path}.amplitude")
    if ftype == "zero":
        return Field(grid, np.zeros((grid.n, operator.dim), dtype=complex))
    if ftype == "constant":
        value = _cnum(spec.get("value", 1.0), f"{path}.value")
        return Field(grid, np.full((grid.n, 1), value) * weights[None, :])
    if ftype == "cos":
        w = _num(spec.get("wavenumber", 1.0), f"{path}.wavenumber")
        return Field.from_function(grid, lambda x: np.cos(w * x), weights)
    if ftype == "gaussian":
        c = _num(spec.get("center", 0.0), f"{path}.center")
        s = _num(spec.get("width", 1.0), f"{path}.width")
        if s <= 0:
            raise ConfigError("width must be positive", f"{path}.width")
        return Field.from_function(
            grid, lambda x: np.exp(-(((x - c) / s) ** 2)), weights
        )
    if ftype == "band-limited-random":
        base = band_limited_random(
            grid,
            rng,
            max_mode=_int(spec.get("max_mode", 8), f"{path}.max_mode"),
            dim=1,
            decay=_num(spec.get("decay", 1.0), f"{path}.decay"),
        )
        return Field(grid, base.values * weights[None, :])
    raise ConfigError(f"unknown field type {ftype!r}", f"{path}.type")


def build_nonlinearity(spec, path) -> Nonlinearity:
    _check_keys(spec, path, required=("kind",), optional=("arity", "terms"))
    kind = spec["kind"]
    if kind == "none":
        return Nonlinearity()
    if kind != "polynomial":
        raise ConfigError(f"unknown nonlinearity kind {kind!r}", f"{path}.kind")
    arity = _int(spec.get("arity", 0), f"{path}.arity")
    raw = spec.get("terms")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("polynomial nonlinearity needs terms", f"{path}.terms")
    terms = []
    for i, term in enumerate(raw):
        tpath = f"{path}.terms[{i}]"
        _check_keys(term, tpath, required=("powers", "coeff"))
        powers = term["powers"]
        if not isinstance(powers, list) or not all(
            isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in powers
        ):
            raise ConfigError("powers must be nonnegative integers", f"{tpath}.powers")
        terms.append((tuple(powers), _cnum(term["coeff"], f"{tpath}.coeff")))
    try:
        return Nonlinearity(kind="pointwise-polynomial", arity=arity, terms=tuple(terms))
    except ValueError as exc:
        raise ConfigError(str(exc), path)


def build_sector(value, path) -> Sector:
    try:
        return Sector(_num(value, path))
    except ValueError as exc:
        raise ConfigError(str(exc), path)


_SECTION_KEYS = {
    "check-condition": ((), ("sector_angle", "xi_points_per_side")),
    "solve-linear": (("forcing",), ("lambda",)),
    "lambda-sweep": (("forcing", "lambdas"), ()),
    "mikhlin": (("lambdas",), ("families",)),
    "rbound": (("xi_samples", "lambdas"), ("trials",)),
    "solve-parabolic": (
        ("t_final", "dt", "initial"),
        ("forcing", "nonlinearity", "store_every", "blowup_threshold", "step_tol"),
    ),
    "solve-elliptic": (
        ("t_final", "m", "bc"),
        ("forcing", "nonlinearity", "max_iter", "tol", "max_t_halvings"),
    ),
    "norms-report": (("field", "norms"), ()),
}


def validate_config(config) -> dict:
    """Validate the full document; returns it unchanged on success."""
    _check_keys(
        config,
        "",
        required=("scenario", "problem"),
        optional=("seed",) + tuple(k for k in _SECTION_KEYS),
    )
    scenario = config["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}", "scenario")
    if "seed" in config:
        _int(config["seed"], "seed")
    section_name = scenario
    required, optional = _SECTION_KEYS[scenario]
    for name in _SECTION_KEYS:
        if name in config and name != section_name:
            raise ConfigError(
                f"section {name!r} does not belong to scenario {scenario!r}", name
            )
    section = config.get(section_name)
    if section is None:
        if required:
            raise ConfigError(f"missing section {section_name!r}", section_name)
        section = {}
    _check_keys(section, section_name, required=required, optional=optional)
    build_problem(config["problem"], "problem")  # structural validation
    return config
