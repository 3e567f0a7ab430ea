import pytest
from pydantic import ValidationError
from weilforge.core.config import Settings
from weilforge.utils.checks import failed, first_failure, passed


def test_settings_defaults(monkeypatch):
    for name in ("WEILFORGE_TOL", "WEILFORGE_EXACT", "WEILFORGE_ORDER", "WEILFORGE_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings(_env_file=None)
    assert settings.app_name == "weilforge"
    assert settings.tolerance == 1e-10
    assert settings.exact is True
    assert settings.default_order == 4
    assert settings.brute_force_max_order == 3


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("WEILFORGE_TOL", "1e-6")
    monkeypatch.setenv("WEILFORGE_EXACT", "false")
    monkeypatch.setenv("WEILFORGE_ORDER", "6")
    monkeypatch.setenv("WEILFORGE_LOG_LEVEL", "DEBUG")
    settings = Settings(_env_file=None)
    assert settings.tolerance == 1e-6
    assert settings.exact is False
    assert settings.default_order == 6
    assert settings.log_level == "DEBUG"


def test_settings_reject_non_positive_tolerance(monkeypatch):
    monkeypatch.setenv("WEILFORGE_TOL", "0")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)


def test_validation_result_helpers():
    results = {"first": passed(value=1), "second": failed("broken", value=2)}
    assert results["first"].as_dict() == {"ok": True, "details": {"value": 1}}
    assert results["second"].as_dict() == {
        "ok": False,
        "reason": "broken",
        "details": {"value": 2},
    }
    assert first_failure(results) == "second"
    assert first_failure({"first": passed()}) is None
