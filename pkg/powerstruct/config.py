from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Engine settings loaded from environment variables (prefix POWERSTRUCT_)."""
    model_config = SettingsConfigDict(
        env_prefix="POWERSTRUCT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

    LOG_LEVEL: str = "WARNING"
    LOG_FILE: Optional[str] = None

    # Enumeration guards for the brute-force oracles
    WREATH_GROUP_LIMIT: int = Field(default=10**6, gt=0)
    WREATH_SPACE_LIMIT: int = Field(default=10**6, gt=0)
    CONFIG_SEARCH_LIMIT: int = Field(default=10**7, gt=0)

    SIGMA_CACHE_SIZE: int = Field(default=4096, ge=0)
    DEFAULT_ORDER: int = Field(default=6, gt=0)

    @property
    def GUARDS(self) -> dict[str, int]:
        """Return the enumeration guards as a dictionary for reports."""
        return {
            "wreath_group": self.WREATH_GROUP_LIMIT,
            "wreath_space": self.WREATH_SPACE_LIMIT,
            "config_search": self.CONFIG_SEARCH_LIMIT,
        }


# Global settings instance
settings = Settings()
