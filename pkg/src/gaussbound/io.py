"""State files and sweep specifications (JSON documents, ``schema_version`` "1").

A state file holds either an explicit state::

    {"schema_version": "1", "n": 1, "mean": [0.0, 0.0], "cov": [[1.0, 0.0], [0.0, 1.0]]}

or a builder::

    {"schema_version": "1", "builder": {"kind": "thermal", "params": {"nu": [3.0]}}}
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import states
from .bounds import BOUND_NAMES, parse_bound_names
from .errors import GaussboundError, InvalidArgumentError

SCHEMA_VERSION = "1"


class StateFileError(GaussboundError):
    """A document could not be parsed or does not follow the schema."""

    def __init__(self, message, path=None, line=None, column=None):
        where = str(path) if path else "<input>"
        if line is not None:
            where += f":{line}:{column}"
        super().__init__(f"{where}: {message}")
        self.path, self.line, self.column = path, line, column


def read_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read file ({exc.strerror})", path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(exc.msg, path, exc.lineno, exc.colno) from exc


def _real_array(value, what, ndim, path):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"'{what}' must be an array of numbers", path) from exc
    if arr.ndim != ndim:
        raise StateFileError(f"'{what}' must be a {ndim}-dimensional array", path)
    return arr


def _builder_state(spec, path):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise StateFileError("'builder' must be an object with a 'kind'", path)
    kind = spec["kind"]
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise StateFileError("'builder.params' must be an object", path)
    try:
        if kind == "vacuum":
            return states.vacuum(int(params.get("n", 1)))
        if kind == "thermal":
            nu = np.atleast_1d(np.asarray(params["nu"], dtype=float))
            n = int(params.get("n", nu.size))
            return states.thermal(n, nu)
        if kind == "coherent":
            if "alpha" in params:
                # one entry per mode: a real number or [re, im]
                alpha = [complex(*a) if isinstance(a, list) else complex(a) for a in params["alpha"]]
                return states.coherent(states.amplitude_to_mean(alpha))
            return states.coherent(params["mean"])
        if kind == "squeezed":
            return states.squeezed(float(params["r"]))
        if kind == "two_mode_squeezed":
            return states.two_mode_squeezed(float(params["r"]))
    except KeyError as exc:
        raise StateFileError(f"builder '{kind}' is missing parameter {exc}", path) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GaussboundError):
            raise
        raise StateFileError(f"builder '{kind}' has malformed parameters: {exc}", path) from exc
    raise StateFileError(
        f"unknown builder kind {kind!r}; expected vacuum, thermal, coherent, squeezed, two_mode_squeezed",
        path,
    )


def parse_state_document(doc, path=None):
    """Mean and covariance arrays from a state document, without physics checks.

    Returns:
        tuple[array, array]: ``(mean, cov)``
    """
    if not isinstance(doc, dict):
        raise StateFileError("state document must be a JSON object", path)
    version = doc.get("schema_version")
    if str(version) != SCHEMA_VERSION:
        raise StateFileError(f"unsupported schema_version {version!r} (expected \"1\")", path)
    explicit = "mean" in doc or "cov" in doc
    if explicit == ("builder" in doc):
        raise StateFileError("exactly one of 'mean'+'cov' or 'builder' must be present", path)
    if "builder" in doc:
        st = _builder_state(doc["builder"], path)
        mean, cov = np.array(st.mean), np.array(st.cov)
    else:
        if "mean" not in doc or "cov" not in doc:
            raise StateFileError("explicit states need both 'mean' and 'cov'", path)
        mean = _real_array(doc["mean"], "mean", 1, path)
        cov = _real_array(doc["cov"], "cov", 2, path)
        if cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 or cov.shape[0] == 0:
            raise StateFileError(f"'cov' must be 2n x 2n, got {cov.shape}", path)
        if mean.shape[0] != cov.shape[0]:
            raise StateFileError(
                f"'mean' has length {mean.shape[0]} but 'cov' is {cov.shape[0]} x {cov.shape[0]}", path
            )
    if "n" in doc and doc["n"] != cov.shape[0] // 2:
        raise StateFileError(f"'n' = {doc['n']!r} does not match the {cov.shape[0] // 2}-mode state", path)
    return mean, cov


def read_state_arrays(path):
    return parse_state_document(read_json(path), path)


def load_state(path):
    """Read a state file into a validated :class:`GaussianState`."""
    mean, cov = read_state_arrays(path)
    return states.GaussianState(mean, cov)


def state_to_document(state):
    return {
        "schema_version": SCHEMA_VERSION,
        "n": state.n,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
    }


def dump_state(state, path):
    Path(path).write_text(json.dumps(state_to_document(state), indent=2) + "\n")


# -- sweeps ---------------------------------------------------------------------


def _vacuum_vs_thermal(beta, fixed):
    return states.vacuum(1), states.thermal(1, beta)


def _thermal_vs_thermal(beta, fixed):
    return states.thermal(1, float(fixed.get("nu_a", 1.5))), states.thermal(1, beta)


def _vacuum_vs_coherent(amplitude, fixed):
    return states.vacuum(1), states.coherent(states.amplitude_to_mean(amplitude))


FAMILIES = {
    "vacuum_vs_thermal": _vacuum_vs_thermal,
    "thermal_vs_thermal": _thermal_vs_thermal,
    "vacuum_vs_coherent": _vacuum_vs_coherent,
}


@dataclass
class SweepSpec:
    """A one-parameter family of state pairs to tabulate."""

    family: str
    name: str
    start: float
    stop: float
    steps: int
    copies: int = 1
    bounds: set = field(default_factory=lambda: set(BOUND_NAMES))
    oracle: bool = False
    grid: int = None
    output: str = None
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownFamilyError(self.family)
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidArgumentError(f"steps must be an integer >= 2, got {self.steps!r}")
        if not self.start < self.stop:
            raise InvalidArgumentError(f"start must be below stop, got {self.start} >= {self.stop}")

    def values(self):
        return np.linspace(self.start, self.stop, int(self.steps))

    def pair(self, value):
        return FAMILIES[self.family](float(value), self.fixed)


class UnknownFamilyError(StateFileError):
    def __init__(self, family):
        super().__init__(f"unknown family {family!r}; available: {', '.join(sorted(FAMILIES))}")


def parse_sweep_document(doc, path=None):
    if not isinstance(doc, dict):
        raise StateFileError("sweep document must be a JSON object", path)
    try:
        param = doc["parameter"]
        return SweepSpec(
            family=doc["family"],
            name=str(param.get("name", "param")),
            start=float(param["start"]),
            stop=float(param["stop"]),
            steps=param["steps"],
            copies=int(doc.get("copies", 1)),
            bounds=parse_bound_names(doc.get("bounds")),
            oracle=bool(doc.get("oracle", False)),
            grid=doc.get("grid"),
            output=doc.get("output"),
            fixed=dict(doc.get("fixed", {})),
        )
    except KeyError as exc:
        raise StateFileError(f"sweep spec is missing key {exc}", path) from exc
    except UnknownFamilyError:
        raise
    except (TypeError, AttributeError, ValueError) as exc:
        raise StateFileError(f"malformed sweep spec: {exc}", path) from exc


def read_sweep(path):
    return parse_sweep_document(read_json(path), path)
