import time

import pytest
from pydantic import ValidationError

from sfa_simulation.config import Deadline, Settings, get_settings
from sfa_simulation.errors import DeadlineExceeded


def test_defaults():
    settings = Settings()
    assert settings.minterm_cap == 2**20
    assert settings.timeout_ms == 100_000
    assert settings.reduction_max_iters == 10
    assert not settings.debug_invariants


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("SFASIM_MINTERM_CAP", "4096")
    monkeypatch.setenv("SFASIM_BENCH_JOBS", "3")
    settings = get_settings()
    assert settings.minterm_cap == 4096
    assert settings.bench_jobs == 3
    assert get_settings() is settings


def test_invalid_values_are_rejected(monkeypatch):
    monkeypatch.setenv("SFASIM_MINTERM_CAP", "0")
    with pytest.raises(ValidationError):
        Settings()


def test_deadline():
    Deadline.none().check()
    Deadline(60_000).check()
    expired = Deadline(1)
    time.sleep(0.01)
    with pytest.raises(DeadlineExceeded) as info:
        expired.check()
    assert info.value.outcome == "timeout"
    assert info.value.exit_code == 2
