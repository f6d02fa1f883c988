"""Suite configuration: JSON parsing, schema validation, and semantic checks.

Every error message is prefixed with ``line N:`` pointing into the config
text, so a bad field can be found without counting braces.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field
from importlib import resources

import jsonschema

from ..errors import ConfigError, DivergenceError
from ..stability import Scheme

KINDS = ("axioms", "induce", "stability_hilbert", "stability_nip")
MAX_N = 4
MAX_DIM = 6
SCHEMA_VERSION = 1


def load_schema() -> dict:
    return json.loads(resources.files("nipstab.data").joinpath("config.schema.json").read_text())


@dataclass
class ExperimentConfig:
    experiment_id: str
    kind: str
    scheme: str | None = None
    theta: float = 1.0
    p: float = 0.5
    n: int = 2
    dim_X: int = 3
    dim_Y: int | None = None
    seed: int = 0
    l_max: int | None = None
    samples: int = 100
    pairs: int | None = None
    linearity_samples: int | None = None
    maps: int = 1
    tol: float | None = None
    bound_slack: float = 1e-6
    preservation_max: float | None = None
    complement: bool = False
    radii: list | None = None
    anchors: object = "random"
    k: float = 1.0
    max_condition: float = 1e6
    recovery_tol: float = 1e-10

    @property
    def order(self) -> int:
        return self.n if self.kind == "stability_nip" else 1

    @property
    def scheme_enum(self) -> Scheme:
        return Scheme.parse(self.scheme)

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class SuiteConfig:
    experiments: list[ExperimentConfig]
    threads: int = 1
    schema_version: int = SCHEMA_VERSION
    source: str = field(default="", repr=False)


def _line_of(text: str, exp_id: str | None, key: str | None) -> int:
    start = 0
    if exp_id is not None:
        m = re.search(r'"experiment_id"\s*:\s*"' + re.escape(exp_id) + '"', text)
        if m:
            start = text.rfind("{", 0, m.start())
            start = max(start, 0)
    pos = start
    if key is not None:
        m = re.compile(r'"' + re.escape(key) + r'"\s*:').search(text, start)
        if m:
            pos = m.start()
    return text.count("\n", 0, pos) + 1


def validate_experiment(exp: ExperimentConfig) -> None:
    """Semantic checks beyond the schema. Raises ``ConfigError(field, message)``."""
    def fail(key, msg):
        raise ConfigError(key, msg)

    if exp.kind not in KINDS:
        fail("kind", f"unknown kind {exp.kind!r}")
    if not 2 <= exp.n <= MAX_N:
        fail("n", f"n={exp.n} outside supported range 2..{MAX_N}")
    needs_n = exp.kind in ("axioms", "induce", "stability_nip")
    if needs_n and exp.dim_X < exp.n:
        fail("dim_X", f"dim_X={exp.dim_X} < n={exp.n}; an n-inner product needs dim >= n >= 2")
    if exp.dim_X > MAX_DIM or (exp.dim_Y or 0) > MAX_DIM:
        fail("dim_X", f"dimensions are capped at {MAX_DIM}")
    if exp.kind.startswith("stability"):
        if exp.scheme is None:
            fail("scheme", "stability experiments need a scheme")
        try:
            scheme = Scheme.parse(exp.scheme)
        except ValueError as err:
            fail("scheme", str(err))
        try:
            scheme.check_p(exp.p, exp.order)
        except DivergenceError as err:
            fail("p", str(err))
        dim_y = exp.dim_X if exp.dim_Y is None else exp.dim_Y
        if dim_y < exp.dim_X:
            fail("dim_Y", "dim_Y must be >= dim_X (the linear part is an isometry)")
        if exp.kind == "stability_nip" and dim_y < exp.n:
            fail("dim_Y", f"dim_Y={dim_y} < n={exp.n}")
        if exp.complement and dim_y <= exp.dim_X:
            fail("complement", "complement perturbations need dim_Y > dim_X")
    if exp.radii is not None and not 0 < exp.radii[0] <= exp.radii[1]:
        fail("radii", "radii must satisfy 0 < r_min <= r_max")


def parse_config(text: str) -> SuiteConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"line {err.lineno}: invalid JSON: {err.msg}") from None
    try:
        jsonschema.validate(raw, load_schema())
    except jsonschema.ValidationError as err:
        path = list(err.absolute_path)
        exp_id, key = None, None
        if len(path) >= 2 and path[0] == "experiments":
            exp = raw["experiments"][path[1]]
            exp_id = exp.get("experiment_id") if isinstance(exp, dict) else None
            key = path[2] if len(path) > 2 else None
        elif path:
            key = str(path[0])
        where = "/".join(map(str, path)) or "<root>"
        raise ConfigError(f"line {_line_of(text, exp_id, key)}: {where}: {err.message}") from None

    experiments = []
    seen = set()
    for item in raw["experiments"]:
        item = dict(item)
        item["kind"] = item["kind"].lower()
        exp = ExperimentConfig(**item)
        if exp.experiment_id in seen:
            raise ConfigError(f"line {_line_of(text, exp.experiment_id, None)}: "
                              f"duplicate experiment_id {exp.experiment_id!r}")
        seen.add(exp.experiment_id)
        try:
            validate_experiment(exp)
        except ConfigError as err:
            key, msg = err.args
            raise ConfigError(f"line {_line_of(text, exp.experiment_id, key)}: "
                              f"experiment {exp.experiment_id!r}: {msg}") from None
        experiments.append(exp)
    return SuiteConfig(experiments, threads=raw.get("threads", 1),
                       schema_version=raw.get("schema_version", SCHEMA_VERSION), source=text)


def load_config(path) -> SuiteConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def default_suite_text() -> str:
    return resources.files("nipstab.data").joinpath("default_suite.json").read_text()
