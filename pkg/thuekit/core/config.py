from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Words longer than this are never expanded to dense strings
    DENSE_CAP: int = 1_000_000
    # Reverse schema redexes are searched for params <= PARAM_CAP
    PARAM_CAP: int = 64

    MAX_STEPS: int = 10_000
    RESOLVE_MAX_STEPS: int = 200
    CASE1_BUDGET_FACTOR: int = 8
    CASE1_BUDGET_SLACK: int = 16

    # Default BFS length cap is LENGTH_CAP_FACTOR * max(|u|, |v|) + LENGTH_CAP_SLACK
    LENGTH_CAP_FACTOR: int = 3
    LENGTH_CAP_SLACK: int = 4
    DIST_CAP: int = 64

    DEFAULT_SEED: int = 0
    RANDOM_RUNS: int = 50

    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None
    ENVIRONMENT: str = "development"

    model_config = {"env_file": ".env", "env_prefix": "THUEKIT_", "extra": "ignore"}

    def default_length_cap(self, *lengths: int) -> int:
        return self.LENGTH_CAP_FACTOR * max(lengths, default=0) + self.LENGTH_CAP_SLACK


settings = Settings()
