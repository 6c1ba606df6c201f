import json
from pathlib import Path

import pandas as pd
import pytest

from gl11.run import EXIT_CONFIG, EXIT_OK, main, parse_arguments


def test_verify_rk_writes_report(tmp_path: Path) -> None:
    out = tmp_path / "rk.json"
    assert main("verify-rk", n=2, seed=4, out=str(out)) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["job"] == "verify-rk"
    assert report["seed"] == 4
    assert report["schema"] == 1
    assert "wall_time" not in report
    assert all(c["passed"] for c in report["checks"])


def test_reports_are_reproducible(tmp_path: Path) -> None:
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    main("verify-fusion", n=1, seed=11, out=str(first))
    main("verify-fusion", n=1, seed=11, out=str(second))
    assert first.read_bytes() == second.read_bytes()


def test_record_time(tmp_path: Path) -> None:
    out = tmp_path / "rk.json"
    main("verify-rk", n=2, out=str(out), record_time=True)
    assert "wall_time" in json.loads(out.read_text(encoding="utf-8"))


def test_spectrum_preset_as_csv(tmp_path: Path) -> None:
    out = tmp_path / "table1.csv"
    assert main("spectrum", preset="table1", out=str(out), output_format="csv") == EXIT_OK
    table = pd.read_csv(out, dtype=str, keep_default_na=False)
    assert list(table.columns) == ["mu_1", "mu_2", "mu_3", "E"]
    assert len(table) == 8
    assert (tmp_path / "table1.json").exists()


def test_spectrum_json_with_table(tmp_path: Path) -> None:
    out = tmp_path / "open.json"
    assert main("spectrum", n=2, boundary="open", out=str(out)) == EXIT_OK
    assert (tmp_path / "open.csv").exists()


def test_empty_config_exits_with_2(tmp_path: Path) -> None:
    config = tmp_path / "empty.ini"
    config.write_text("", encoding="utf-8")
    assert main("spectrum", config_path=str(config)) == EXIT_CONFIG


def test_missing_config_file(tmp_path: Path) -> None:
    assert main("spectrum", config_path=str(tmp_path / "nope.ini")) == EXIT_CONFIG


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eta": "0"},
        {"eta": "one"},
        {"preset": "table9"},
        {"n": 0},
    ],
)
def test_bad_arguments_exit_with_2(kwargs: dict, tmp_path: Path) -> None:
    assert main("verify-rk", out=str(tmp_path / "x.json"), **kwargs) == EXIT_CONFIG


def test_parse_arguments() -> None:
    args = parse_arguments(["spectrum", "--n", "4", "--eta", "0.8+0.1i", "--format", "csv", "-v"])
    assert args.job == "spectrum"
    assert args.n == 4
    assert args.eta == "0.8+0.1i"
    assert args.format == "csv"
    assert args.verbose
    with pytest.raises(SystemExit):
        parse_arguments(["unknown-job"])


def test_verify_identities_example(tmp_path: Path) -> None:
    out = tmp_path / "identities.json"
    assert main("verify-identities", n=3, seed=7, out=str(out)) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["seed"] == 7
    assert report["checks"]


def test_config_and_preset_are_exclusive(tmp_path: Path) -> None:
    config = tmp_path / "job.ini"
    config.write_text("[model]\nn = 2\n\n[job]\nname = spectrum\n", encoding="utf-8")
    assert main("spectrum", config_path=str(config), preset="table1", out=str(tmp_path / "x.json")) == EXIT_CONFIG
    assert not (tmp_path / "x.json").exists()
