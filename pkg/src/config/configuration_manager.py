"""
Configuration Manager Implementation
Kernel, ring and run settings loaded from YAML with named presets
"""

import os
import yaml
import logging
from typing import Dict, Any, Optional, List
from dataclasses import dataclass, field, asdict
from pathlib import Path

from dotenv import load_dotenv

from ..core.interfaces import IConfigurationManager

BENCHMARK_DIR_ENV = "GES_BENCHMARK_DIR"


@dataclass
class GesConfig:
    """Single-worker kernel configuration"""
    k_max: int = 3
    perturb_steps: int = 100
    z1_cap: Optional[int] = None      # outer iterations, None = unbounded
    z2_cap: Optional[int] = None      # inner iterations per outer iteration
    time_limit: float = 60.0          # seconds
    target_route_count: Optional[int] = None
    rng_seed: int = 0
    restore_initial_on_failure: bool = False
    squeeze_round_cap: int = 200
    warm_start: bool = False          # start from a packed solution instead of one route per request
    check_invariants: bool = False


@dataclass
class RingConfig:
    """Worker ring configuration"""
    workers: int = 4
    channel_capacity: int = 4
    poll_interval: float = 0.001      # seconds between drain polls
    watchdog_seconds: float = 30.0
    message_log: Optional[str] = None


@dataclass
class RunConfig:
    """One command-line run"""
    subcommand: str = "solve"
    instances: List[str] = field(default_factory=list)
    solution: Optional[str] = None
    out: Optional[str] = None
    report: Optional[str] = None
    sizes: List[int] = field(default_factory=lambda: [100, 200, 400, 800])
    worker_sweep: List[int] = field(default_factory=list)
    repetitions: int = 5
    log_level: str = "INFO"
    log_file: Optional[str] = None
    plot: bool = False
    ges: GesConfig = field(default_factory=GesConfig)
    ring: RingConfig = field(default_factory=RingConfig)


PRESETS: Dict[str, Dict[str, Dict[str, Any]]] = {
    'desk': {
        'ges': {'k_max': 3, 'perturb_steps': 100, 'time_limit': 60.0},
        'ring': {'workers': 4},
    },
    'benchmark': {
        'ges': {'k_max': 3, 'perturb_steps': 100, 'time_limit': 60.0},
        'ring': {'workers': 4, 'watchdog_seconds': 60.0},
    },
    'profile': {
        # fixed work per run: a packed start, 3 attempts of 40 inner iterations each
        'ges': {'k_max': 3, 'perturb_steps': 20, 'time_limit': 600.0, 'z1_cap': 3, 'z2_cap': 40,
                'warm_start': True},
        'ring': {'workers': 1},
    },
    'fidelity': {
        'ges': {'restore_initial_on_failure': True},
    },
}


class ConfigurationManager(IConfigurationManager):
    """
    Holds the raw YAML mapping (sections `ges`, `ring`, `run`) and builds the
    typed configs from it. Values pass through ConfigValidator on the way in.
    """

    def __init__(self, config_file: Optional[str] = None):
        self.logger = logging.getLogger(__name__)
        self.config_file = Path(config_file) if config_file else None
        self._config_data: Dict[str, Any] = {}
        self._ges_config: Optional[GesConfig] = None
        self._ring_config: Optional[RingConfig] = None

        load_dotenv()
        self.reload_config()

    def reload_config(self) -> None:
        """Reload configuration from source"""
        if self.config_file is None:
            self._config_data = {}
        elif self.config_file.exists():
            with open(self.config_file, 'r') as f:
                self._config_data = yaml.safe_load(f) or {}
            self.logger.info(f"Configuration loaded from {self.config_file}")
        else:
            self.logger.warning(f"Config file {self.config_file} not found, using defaults")
            self._config_data = {}
        if not isinstance(self._config_data, dict):
            raise ValueError(f"Config file {self.config_file} must contain a mapping")
        self._initialize_configs()

    def _initialize_configs(self) -> None:
        from .config_validator import ges_validator, ring_validator

        self._ges_config = ges_validator.create_safe_config(**self._config_data.get('ges', {}))
        self._ring_config = ring_validator.create_safe_config(**self._config_data.get('ring', {}))

    def get_config(self, key: str, default: Any = None) -> Any:
        """Get a value by dotted key, e.g. `ges.k_max`"""
        node: Any = self._config_data
        for part in key.split('.'):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def set_config(self, key: str, value: Any) -> None:
        """Set a value by dotted key and rebuild the typed configs"""
        parts = key.split('.')
        node = self._config_data
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
        self._initialize_configs()

    def get_ges_config(self) -> GesConfig:
        return self._ges_config

    def get_ring_config(self) -> RingConfig:
        return self._ring_config

    def get_run_section(self) -> Dict[str, Any]:
        return dict(self._config_data.get('run', {}))

    def load_config_preset(self, preset_name: str) -> None:
        """Load a configuration preset"""
        if preset_name not in PRESETS:
            self.logger.warning(f"Unknown preset: {preset_name}")
            return
        for section, values in PRESETS[preset_name].items():
            for key, value in values.items():
                self._config_data.setdefault(section, {})[key] = value
        self._initialize_configs()
        self.logger.info(f"Loaded {preset_name} configuration preset")

    def save_config(self, path: Optional[str] = None) -> None:
        """Write the current typed configs back out as YAML"""
        target = Path(path) if path else self.config_file
        if target is None:
            raise ValueError("No config file to save to")
        data = dict(self._config_data)
        data['ges'] = asdict(self._ges_config)
        data['ring'] = asdict(self._ring_config)
        with open(target, 'w') as f:
            yaml.dump(data, f, default_flow_style=False)
        self.logger.info(f"Configuration saved to {target}")


def benchmark_dir() -> Optional[Path]:
    """Default directory for relative instance paths, from the environment or .env"""
    load_dotenv()
    value = os.getenv(BENCHMARK_DIR_ENV)
    return Path(value) if value else None


def resolve_instance_path(path: str) -> Path:
    candidate = Path(path)
    if candidate.is_absolute() or candidate.exists():
        return candidate
    base = benchmark_dir()
    if base is not None and (base / candidate).exists():
        return base / candidate
    return candidate
