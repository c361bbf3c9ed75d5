"""
Configuration Management Module
Centralized configuration for the valgen library and command line
"""

import os
import logging
from typing import Any, Dict, Optional
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()


class Config:
    """Base configuration class, read from VALGEN_* environment variables"""

    # Logging Configuration
    LOG_LEVEL = os.getenv("VALGEN_LOG_LEVEL", "WARNING")
    LOG_FORMAT = os.getenv(
        "VALGEN_LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    # Worker Configuration
    MAX_WORKERS = int(os.getenv("VALGEN_MAX_WORKERS", 4))
    BATCH_SIZE = int(os.getenv("VALGEN_BATCH_SIZE", 100))

    # Series Precision Configuration
    DEFAULT_PRECISION = int(os.getenv("VALGEN_DEFAULT_PRECISION", 17))
    PRECISION_CAP = int(os.getenv("VALGEN_PRECISION_CAP", 10000))

    # Corpus Configuration
    DEFAULT_SEED = int(os.getenv("VALGEN_DEFAULT_SEED", 0))
    RANDOM_SAMPLE_SIZE = int(os.getenv("VALGEN_RANDOM_SAMPLE_SIZE", 100))
    RANDOM_COEFF_BOUND = int(os.getenv("VALGEN_RANDOM_COEFF_BOUND", 3))

    # Checker Configuration
    GS3_VALUE_SLACK = int(os.getenv("VALGEN_GS3_VALUE_SLACK", 10))
    WITNESS_SEARCH_LIMIT = int(os.getenv("VALGEN_WITNESS_SEARCH_LIMIT", 256))

    # Output Configuration
    OUTPUT_FORMAT = os.getenv("VALGEN_OUTPUT_FORMAT", "text")

    @classmethod
    def validate(cls) -> bool:
        """
        Validate configuration

        Returns:
            True if valid, False otherwise
        """
        positive_fields = [
            "MAX_WORKERS",
            "BATCH_SIZE",
            "DEFAULT_PRECISION",
            "PRECISION_CAP",
            "RANDOM_SAMPLE_SIZE",
            "RANDOM_COEFF_BOUND",
            "GS3_VALUE_SLACK",
            "WITNESS_SEARCH_LIMIT",
        ]

        invalid_fields = []
        for field in positive_fields:
            value = getattr(cls, field, None)
            if not isinstance(value, int) or value <= 0:
                invalid_fields.append(field)

        if cls.PRECISION_CAP < cls.DEFAULT_PRECISION:
            invalid_fields.append("PRECISION_CAP")

        if cls.OUTPUT_FORMAT not in ("text", "json"):
            invalid_fields.append("OUTPUT_FORMAT")

        if invalid_fields:
            logger.warning(f"Invalid configuration fields: {invalid_fields}")
            return False

        logger.info("Configuration validated successfully")
        return True

    @classmethod
    def to_dict(cls) -> Dict[str, Any]:
        """
        Convert configuration to dictionary

        Returns:
            Dictionary of configuration values
        """
        config_dict = {}
        for key in dir(cls):
            if not key.startswith("_") and key.isupper():
                config_dict[key] = getattr(cls, key)

        return config_dict


class DefaultConfig(Config):
    """Literal defaults; the environment is ignored"""
    LOG_LEVEL = "WARNING"
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    MAX_WORKERS = 4
    BATCH_SIZE = 100
    DEFAULT_PRECISION = 17
    PRECISION_CAP = 10000
    DEFAULT_SEED = 0
    RANDOM_SAMPLE_SIZE = 100
    RANDOM_COEFF_BOUND = 3
    GS3_VALUE_SLACK = 10
    WITNESS_SEARCH_LIMIT = 256
    OUTPUT_FORMAT = "text"


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = "DEBUG"


class TestingConfig(DefaultConfig):
    """Testing configuration"""
    TESTING = True
    LOG_LEVEL = "DEBUG"
    MAX_WORKERS = 2
    BATCH_SIZE = 16


def get_config(env: Optional[str] = None) -> Config:
    """
    Get configuration based on environment

    Args:
        env: Environment name (default, development, testing, environment)

    Returns:
        Configuration object
    """
    if env is None:
        env = os.getenv("VALGEN_ENV", "environment")

    config_map = {
        "default": DefaultConfig,
        "development": DevelopmentConfig,
        "testing": TestingConfig,
        "environment": Config,
    }

    config_class = config_map.get(env, Config)
    logger.debug(f"Using {env} configuration")
    return config_class()


# Default configuration instance
config = get_config()


def apply_config(source: Config) -> None:
    """
    Copy every setting of `source` onto the shared config instance

    Args:
        source: Configuration whose values take over
    """
    for key, value in source.to_dict().items():
        setattr(config, key, value)
    logger.debug(f"Applied {type(source).__name__} settings")
