import configparser
import logging
import re
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from dacite import Config, from_dict
from dacite.exceptions import DaciteError, MissingValueError, UnexpectedDataError, WrongTypeError

from gl11.errors import ConfigError, DomainError
from gl11.model.types import Boundary, ModelParameters, random_theta
from gl11.utils import parse_complex

logger = logging.getLogger(__name__)

JOB_NAMES = ("verify-rk", "verify-fusion", "verify-identities", "spectrum", "reproduce-tables")
SECTIONS = ("model", "job", "tolerances")


class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-9
    spectral: float = 1e-6
    membership: float = 1e-8
    table: float = 1e-4
    hamiltonian: float = 1e-5

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ConfigError(f"tolerance must be positive, got {value}", key=f.name)


@dataclass(frozen=True)
class JobConfig:
    job: str
    model: ModelParameters
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON
    record_time: bool = False

    def __post_init__(self) -> None:
        if self.job not in JOB_NAMES:
            raise ConfigError(f"Unknown job: {self.job}", key="name")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}", key="seed")


PRESETS: Dict[str, JobConfig] = {
    "table1": JobConfig(job="spectrum", model=ModelParameters(n=3, eta=1.0)),
    "table2": JobConfig(job="spectrum", model=ModelParameters(n=4, eta=1.0)),
    "table3": JobConfig(
        job="spectrum",
        model=ModelParameters(n=3, eta=1.0, a_plus=0.5, a_minus=1.2, boundary=Boundary.OPEN),
    ),
}


class _ParseFailure(ValueError):
    def __init__(self, value: Any, kind: str) -> None:
        self.value = value
        super().__init__(f"cannot parse {value!r} as {kind}")


def _hook(kind: str, parse: Any) -> Any:
    def hook(value: Any) -> Any:
        try:
            return parse(value)
        except (TypeError, ValueError) as e:
            raise _ParseFailure(value, kind) from e

    return hook


def _parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    lowered = str(value).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(value)


_DACITE_CONFIG = Config(
    cast=[tuple],
    strict=True,
    type_hooks={
        complex: _hook("complex", parse_complex),
        int: _hook("integer", lambda v: int(str(v).strip(), 0)),
        float: _hook("float", float),
        bool: _hook("boolean", _parse_bool),
        Boundary: _hook("boundary", lambda v: Boundary(str(v).strip())),
        OutputFormat: _hook("format", lambda v: OutputFormat(str(v).strip())),
    },
)


def _line_of(text: str, section: Optional[str], key: Optional[str]) -> Optional[int]:
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        header = re.fullmatch(r"\[(.+)\]", line)
        if header:
            current = header.group(1).strip()
            if key is None and current == section:
                return number
            continue
        if key is not None and (section is None or current == section):
            name = re.split(r"[=:]", line, maxsplit=1)[0].strip()
            if name == key:
                return number
    return None


def _section_of(raw: Dict[str, Dict[str, str]], key: str) -> Optional[str]:
    for section, values in raw.items():
        if key in values:
            return section
    return None


def _theta(value: str, n: Any, seed: int) -> Any:
    if value.strip().lower() == "random":
        count = int(str(n), 0)
        rng = np.random.default_rng(seed)
        return tuple(str(t) for t in random_theta(count, rng))
    return tuple(v.strip() for v in value.split(",") if v.strip())


def parse_config(text: str) -> JobConfig:
    """
    Build a JobConfig from INI text with sections [model], [job], [tolerances].

    Unknown sections or keys and unparsable values raise ConfigError with the
    offending key and its line.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"malformed configuration: {e}", line=getattr(e, "lineno", None)) from e
    if not parser.sections():
        raise ConfigError("empty configuration: expected [model] and [job] sections")
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]", key=section, line=_line_of(text, section, None))
    raw = {s: dict(parser[s]) for s in parser.sections()}

    job = dict(raw.get("job", {}))
    data: Dict[str, Any] = {}
    if "name" in job:
        data["job"] = job.pop("name")
    data.update(job)
    seed_text = data.get("seed", "0")
    model: Dict[str, Any] = dict(raw.get("model", {}))
    if "theta" in model:
        try:
            seed = int(str(seed_text), 0)
        except ValueError as e:
            raise ConfigError(f"cannot parse {seed_text!r} as integer", key="seed", line=_line_of(text, "job", "seed")) from e
        model["theta"] = _theta(model["theta"], model.get("n", "0"), seed)
    data["model"] = model
    data["tolerances"] = dict(raw.get("tolerances", {}))

    try:
        config = from_dict(data_class=JobConfig, data=data, config=_DACITE_CONFIG)
    except _ParseFailure as e:
        key = next(
            (k for values in raw.values() for k, v in values.items() if str(e.value).strip() in [x.strip() for x in v.split(",")]),
            None,
        )
        section = _section_of(raw, key) if key else None
        raise ConfigError(str(e), key=key, line=_line_of(text, section, key)) from e
    except UnexpectedDataError as e:
        key = sorted(e.keys)[0]
        section = _section_of(raw, key)
        raise ConfigError(f"unknown key '{key}'", key=key, line=_line_of(text, section, key)) from e
    except MissingValueError as e:
        key = "name" if e.field_path == "job" else str(e.field_path).split(".")[-1]
        raise ConfigError(f"missing required value '{e.field_path}'", key=key) from e
    except WrongTypeError as e:
        key = str(e.field_path).split(".")[-1]
        raise ConfigError(f"wrong type for '{e.field_path}'", key=key, line=_line_of(text, _section_of(raw, key), key)) from e
    except DaciteError as e:
        raise ConfigError(f"invalid configuration: {e}") from e
    except ConfigError as e:
        if e.key is not None and e.line is None:
            line = _line_of(text, _section_of(raw, e.key), e.key)
            raise ConfigError(str(e).split(" (key")[0], key=e.key, line=line) from e
        raise
    except DomainError as e:
        raise ConfigError(f"invalid model: {e}", key="model", line=_line_of(text, "model", None)) from e
    logger.debug(f"parsed configuration for job {config.job}")
    return config


def load_config(path: str) -> JobConfig:
    with open(path, encoding="utf-8") as f:
        return parse_config(f.read())


def with_overrides(
    config: JobConfig,
    job: Optional[str] = None,
    n: Optional[int] = None,
    eta: Optional[complex] = None,
    boundary: Optional[Boundary] = None,
    seed: Optional[int] = None,
    out: Optional[str] = None,
    output_format: Optional[OutputFormat] = None,
    record_time: bool = False,
) -> JobConfig:
    """Command-line values take precedence over the file or preset."""
    model = config.model
    try:
        if n is not None and n != model.n:
            theta = () if model.is_homogeneous() else model.theta
            model = replace(model, n=n, theta=theta)
        if eta is not None:
            model = replace(model, eta=eta)
        if boundary is not None:
            model = replace(model, boundary=boundary)
    except DomainError as e:
        raise ConfigError(f"invalid model: {e}", key="model") from e
    return replace(
        config,
        job=job if job is not None else config.job,
        model=model,
        seed=seed if seed is not None else config.seed,
        out=out if out is not None else config.out,
        format=output_format if output_format is not None else config.format,
        record_time=record_time or config.record_time,
    )
