import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv

from src.middleware.errors import UsageError
from src.models.spins import SpinLabel

# Load environment variables
load_dotenv()

SPACES = ("plane", "mq2", "minkowski", "all")


@dataclass(frozen=True)
class SessionConfig:
    """Settings of one computation session (command invocation or test run)"""

    order: int = 8
    tol: float = 1e-9
    space: str = "plane"
    max_spin: SpinLabel = SpinLabel(6)
    mq2_max_spin: SpinLabel = SpinLabel(3)
    max_degree: int = 12
    seed: int = 20240607
    random_samples: int = 100
    workers: int = 4

    def with_overrides(self, **overrides) -> "SessionConfig":
        """Return a copy with every non-None override applied"""
        values = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **values)

    def validate(self) -> "SessionConfig":
        if self.order < 1:
            raise UsageError(f"order must be a positive integer, got {self.order}")
        if not self.tol > 0:
            raise UsageError(f"tol must be positive, got {self.tol}")
        if self.space not in SPACES:
            raise UsageError(f"unknown space '{self.space}', expected one of {', '.join(SPACES)}")
        if self.max_spin.two_j > self.max_degree:
            raise UsageError(
                f"max spin {self.max_spin} exceeds the degree cap 2j <= {self.max_degree}"
            )
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        return self

    @property
    def is_vacuous(self) -> bool:
        """Order 1 keeps only the classical limit, so deformation checks say nothing"""
        return self.order < 2

    @property
    def effective_mq2_spin(self) -> SpinLabel:
        return min(self.max_spin, self.mq2_max_spin)


class Config:
    """Base configuration class"""

    # Series arithmetic
    ORDER = int(os.environ.get("QSTAR_ORDER", 8))
    TOL = float(os.environ.get("QSTAR_TOL", 1e-9))

    # Verification bounds
    MAX_SPIN = os.environ.get("QSTAR_MAX_SPIN", "3")
    MQ2_MAX_SPIN = os.environ.get("QSTAR_MQ2_MAX_SPIN", "3/2")
    MAX_DEGREE = int(os.environ.get("QSTAR_MAX_DEGREE", 12))
    SPACE = os.environ.get("QSTAR_SPACE", "plane")

    # Randomized property inputs
    SEED = int(os.environ.get("QSTAR_SEED", 20240607))
    RANDOM_SAMPLES = int(os.environ.get("QSTAR_RANDOM_SAMPLES", 100))

    # Verify fan-out
    WORKERS = int(os.environ.get("QSTAR_WORKERS", 4))

    # Logging
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO")
    LOG_FILE = os.environ.get("LOG_FILE", "logs/qstar.log")
    LOG_TO_FILE = os.environ.get("LOG_TO_FILE", "True").lower() == "true"

    DEBUG = False

    @property
    def session_config(self) -> SessionConfig:
        """Session defaults built from this configuration"""
        return SessionConfig(
            order=self.ORDER,
            tol=self.TOL,
            space=self.SPACE,
            max_spin=SpinLabel.parse(self.MAX_SPIN),
            mq2_max_spin=SpinLabel.parse(self.MQ2_MAX_SPIN),
            max_degree=self.MAX_DEGREE,
            seed=self.SEED,
            random_samples=self.RANDOM_SAMPLES,
            workers=self.WORKERS,
        )


class DevelopmentConfig(Config):
    """Development configuration"""

    DEBUG = True


class ProductionConfig(Config):
    """Production configuration"""

    LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")


class TestingConfig(Config):
    """Testing configuration"""

    TESTING = True
    LOG_TO_FILE = False
    RANDOM_SAMPLES = 20
    WORKERS = 1


# Configuration dictionary
config = {
    "development": DevelopmentConfig,
    "production": ProductionConfig,
    "testing": TestingConfig,
    "default": DevelopmentConfig,
}
