import textwrap
from pathlib import Path

import pytest

from gl11.config import PRESETS, JobConfig, OutputFormat, Tolerances, load_config, parse_config, with_overrides
from gl11.errors import ConfigError
from gl11.model.types import Boundary, ModelParameters

VALID = textwrap.dedent(
    """\
    [model]
    n = 3
    eta = 0.9+0.1i
    boundary = open
    theta = 0.1, 0.2i, -0.3
    a_minus = 0.7

    [job]
    name = spectrum
    seed = 5
    format = csv

    [tolerances]
    spectral = 1e-7
    """
)


def test_parse_valid_config() -> None:
    config = parse_config(VALID)
    assert config.job == "spectrum"
    assert config.seed == 5
    assert config.format == OutputFormat.CSV
    assert config.model.n == 3
    assert config.model.eta == 0.9 + 0.1j
    assert config.model.boundary == Boundary.OPEN
    assert config.model.theta == (0.1, 0.2j, -0.3)
    assert config.model.a_minus == 0.7
    assert config.tolerances.spectral == 1e-7
    assert config.tolerances.identity == Tolerances().identity


def test_load_config(tmp_path: Path) -> None:
    path = tmp_path / "job.ini"
    path.write_text(VALID, encoding="utf-8")
    assert load_config(str(path)) == parse_config(VALID)


def test_random_theta_is_seeded() -> None:
    text = VALID.replace("theta = 0.1, 0.2i, -0.3", "theta = random")
    first, second = parse_config(text), parse_config(text)
    assert len(first.model.theta) == 3
    assert not first.model.is_homogeneous()
    assert first.model.theta == second.model.theta
    assert parse_config(text.replace("seed = 5", "seed = 6")).model.theta != first.model.theta


def test_empty_config() -> None:
    with pytest.raises(ConfigError):
        parse_config("")


def test_unknown_section() -> None:
    with pytest.raises(ConfigError) as e:
        parse_config(VALID + "[extra]\nx = 1\n")
    assert e.value.key == "extra"
    assert e.value.line == 15


def test_unknown_key() -> None:
    with pytest.raises(ConfigError) as e:
        parse_config(VALID.replace("a_minus = 0.7", "a_minsu = 0.7"))
    assert e.value.key == "a_minsu"
    assert e.value.line == 6


@pytest.mark.parametrize(
    "old, new, key, line",
    [
        ("n = 3", "n = three", "n", 2),
        ("eta = 0.9+0.1i", "eta = 0.9+", "eta", 3),
        ("boundary = open", "boundary = twisted", "boundary", 4),
        ("seed = 5", "seed = five", "seed", 10),
    ],
)
def test_unparsable_values(old: str, new: str, key: str, line: int) -> None:
    with pytest.raises(ConfigError) as e:
        parse_config(VALID.replace(old, new))
    assert e.value.key == key
    assert e.value.line == line
    assert f"line {line}" in str(e.value)


def test_unknown_job() -> None:
    with pytest.raises(ConfigError) as e:
        parse_config(VALID.replace("name = spectrum", "name = solve"))
    assert e.value.key == "name"
    assert e.value.line == 9


def test_missing_job() -> None:
    with pytest.raises(ConfigError) as e:
        parse_config(VALID.replace("name = spectrum\n", ""))
    assert e.value.key == "name"


def test_nonpositive_tolerance() -> None:
    with pytest.raises(ConfigError) as e:
        parse_config(VALID.replace("spectral = 1e-7", "spectral = -1"))
    assert e.value.key == "spectral"


def test_invalid_model() -> None:
    with pytest.raises(ConfigError) as e:
        parse_config(VALID.replace("n = 3", "n = 2"))
    assert e.value.key == "model"


def test_seed_range() -> None:
    with pytest.raises(ConfigError):
        JobConfig(job="spectrum", model=ModelParameters(n=2), seed=-1)


def test_overrides() -> None:
    config = with_overrides(PRESETS["table1"], job="verify-rk", n=5, seed=9, record_time=True)
    assert config.job == "verify-rk"
    assert config.model.n == 5
    assert config.model.theta == (0j,) * 5
    assert config.seed == 9
    assert config.record_time
    assert PRESETS["table1"].model.n == 3


def test_overrides_keep_explicit_theta() -> None:
    config = parse_config(VALID)
    with pytest.raises(ConfigError):
        with_overrides(config, n=4)
    assert with_overrides(config, boundary=Boundary.PERIODIC).model.theta == config.model.theta
