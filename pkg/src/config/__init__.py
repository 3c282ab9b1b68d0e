"""
Configuration Management Module
"""

from .configuration_manager import (
    resolve_instance_path,
    ConfigurationManager,
    GesConfig,
    RingConfig,
    RunConfig,
    PRESETS
)
from .config_validator import ConfigValidator, ges_validator, ring_validator

__all__ = [
    'resolve_instance_path',
    'ConfigurationManager',
    'GesConfig',
    'RingConfig',
    'RunConfig',
    'PRESETS',
    'ConfigValidator',
    'ges_validator',
    'ring_validator'
]
