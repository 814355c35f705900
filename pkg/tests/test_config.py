import pytest

from lexcluster.core.config import Settings
from lexcluster.core.errors import UsageError
from lexcluster.main import build_config, build_parser
from lexcluster.services.quality_service import DiameterMode


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("LEXCLUSTER_RUNS", "7")
    monkeypatch.setenv("LEXCLUSTER_WINDOWS", " 0, 5 ,2%,")
    settings = Settings(_env_file=None)
    assert settings.runs == 7
    assert settings.window_list == ["0", "5", "2%"]


def test_flags_override_settings(monkeypatch):
    monkeypatch.setenv("LEXCLUSTER_RUNS", "7")
    monkeypatch.setenv("LEXCLUSTER_DIAMETER_MODE", "approx")
    settings = Settings(_env_file=None)
    args = build_parser().parse_args(["cluster", "--input", "g.txt", "--runs", "3"])
    config = build_config(args, settings)
    assert config.runs == 3
    assert config.trials == 20
    assert config.diameter_mode == DiameterMode.APPROX
    assert config.windows == ["0", "20", "1%"]


@pytest.mark.parametrize("flags", [["--seed", "-1"], ["--seed", str(2**64)], ["--workers", "0"]])
def test_out_of_range_values_are_usage_errors(flags):
    args = build_parser().parse_args(["cluster", "--input", "g.txt", *flags])
    with pytest.raises(UsageError):
        build_config(args, Settings(_env_file=None))
