import warnings

import pytest
from pydantic import ValidationError

from src.config import Caps, RunConfig, Settings


def test_settings_read_thread_count(monkeypatch):
    monkeypatch.setenv("CENSUS_THREADS", "3")
    with warnings.catch_warnings():
        warnings.simplefilter("error", DeprecationWarning)
        assert Settings().threads == 3
    assert Settings.model_config["env_file"] == ".env"


def test_caps_must_be_positive():
    assert Caps().truncation_cap == 8
    with pytest.raises(ValidationError):
        Caps(fiber_cap=0)


def test_run_config_checks():
    with pytest.raises(ValidationError):
        RunConfig(subcommand="constants")
    with pytest.raises(ValidationError):
        RunConfig(subcommand="bogus")
    one = RunConfig(subcommand="census", n=3, x=2, threads=1)
    two = RunConfig(subcommand="census", n=3, x=2, threads=4)
    assert one.config_hash() == two.config_hash()
