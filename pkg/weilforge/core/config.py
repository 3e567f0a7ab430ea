from functools import lru_cache

from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    app_name: str = "weilforge"
    app_env: str = Field(default="dev", alias="ENV")
    log_level: str = Field(
        default="INFO",
        validation_alias=AliasChoices("WEILFORGE_LOG_LEVEL", "LOG_LEVEL"),
    )

    # Float-mode zero threshold; also the residual tolerance of every check.
    tolerance: float = Field(default=1e-10, gt=0, alias="WEILFORGE_TOL")
    exact: bool = Field(default=True, alias="WEILFORGE_EXACT")
    default_order: int = Field(default=4, ge=0, alias="WEILFORGE_ORDER")

    brute_force_max_order: int = Field(
        default=3, ge=2, alias="WEILFORGE_BRUTE_FORCE_MAX_ORDER"
    )
    generating_bounds_limit: int = Field(
        default=16, ge=1, alias="WEILFORGE_BOUNDS_LIMIT"
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
