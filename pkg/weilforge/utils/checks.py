from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    reason: str | None = None
    details: dict[str, Any] | None = None

    def as_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"ok": self.ok}
        if self.reason:
            payload["reason"] = self.reason
        if self.details:
            payload["details"] = self.details
        return payload


def passed(**details: Any) -> ValidationResult:
    return ValidationResult(ok=True, details=details or None)


def failed(reason: str, **details: Any) -> ValidationResult:
    return ValidationResult(ok=False, reason=reason, details=details or None)


def first_failure(results: dict[str, ValidationResult]) -> str | None:
    for name, result in results.items():
        if not result.ok:
            return name
    return None
