"""
Config Validator
Cleans raw configuration mappings and rejects out-of-range values
"""

import logging
from typing import Any, Dict, List, Type
from dataclasses import fields

from .configuration_manager import GesConfig, RingConfig


class ConfigValidator:
    """Validates GesConfig or RingConfig parameters and provides helpful error messages"""

    corrections = {
        'kmax': 'k_max',
        'k': 'k_max',
        'max_k': 'k_max',
        'I': 'perturb_steps',
        'perturb': 'perturb_steps',
        'perturbation_steps': 'perturb_steps',
        'z1': 'z1_cap',
        'max_outer_iterations': 'z1_cap',
        'z2': 'z2_cap',
        'inner_iteration_cap': 'z2_cap',
        'timeout': 'time_limit',
        'time_limit_seconds': 'time_limit',
        'target': 'target_route_count',
        'target_routes': 'target_route_count',
        'seed': 'rng_seed',
        'literal_line_31': 'restore_initial_on_failure',
        'squeeze_rounds': 'squeeze_round_cap',
        'packed_start': 'warm_start',
        'p': 'workers',
        'processes': 'workers',
        'capacity': 'channel_capacity',
        'poll': 'poll_interval',
        'watchdog': 'watchdog_seconds',
        'log': 'message_log',
    }

    def __init__(self, config_class: Type = GesConfig):
        self.logger = logging.getLogger(__name__)
        self.config_class = config_class
        self.valid_fields = {f.name for f in fields(config_class)}

    def validate_config_dict(self, config_dict: Dict[str, Any]) -> Dict[str, Any]:
        """
        Validate and clean configuration dictionary

        Args:
            config_dict: Dictionary of configuration parameters

        Returns:
            Cleaned configuration dictionary with valid parameters only

        Raises:
            ValueError: If a parameter value is out of range
        """
        cleaned_config = {}
        for key, value in config_dict.items():
            if key in self.valid_fields:
                cleaned_config[key] = value
                continue
            corrected_key = self._correct_parameter_name(key)
            if corrected_key:
                cleaned_config[corrected_key] = value
                self.logger.warning(f"Parameter '{key}' corrected to '{corrected_key}'")
            else:
                self.logger.warning(f"Unknown parameter '{key}' ignored")

        self._validate_parameter_values(cleaned_config)
        return cleaned_config

    def _correct_parameter_name(self, incorrect_name: str) -> str:
        corrected = self.corrections.get(incorrect_name, '')
        return corrected if corrected in self.valid_fields else ''

    @staticmethod
    def _is_int(value: Any) -> bool:
        return isinstance(value, int) and not isinstance(value, bool)

    @staticmethod
    def _is_number(value: Any) -> bool:
        return isinstance(value, (int, float)) and not isinstance(value, bool)

    def _validate_parameter_values(self, config_dict: Dict[str, Any]) -> None:
        if 'k_max' in config_dict:
            k_max = config_dict['k_max']
            if not self._is_int(k_max) or k_max < 1:
                raise ValueError(f"k_max must be an integer >= 1, got {k_max}")

        if 'perturb_steps' in config_dict:
            steps = config_dict['perturb_steps']
            if not self._is_int(steps) or steps < 0:
                raise ValueError(f"perturb_steps must be a nonnegative integer, got {steps}")

        for cap in ('z1_cap', 'z2_cap', 'target_route_count'):
            if config_dict.get(cap) is not None:
                value = config_dict[cap]
                if not self._is_int(value) or value < 0:
                    raise ValueError(f"{cap} must be a nonnegative integer or null, got {value}")

        if 'time_limit' in config_dict:
            limit = config_dict['time_limit']
            if not self._is_number(limit) or limit <= 0:
                raise ValueError(f"time_limit must be a positive number of seconds, got {limit}")

        if 'rng_seed' in config_dict:
            seed = config_dict['rng_seed']
            if not self._is_int(seed) or seed < 0:
                raise ValueError(f"rng_seed must be a nonnegative integer, got {seed}")

        for flag in ('restore_initial_on_failure', 'warm_start', 'check_invariants'):
            if flag in config_dict and not isinstance(config_dict[flag], bool):
                raise ValueError(f"{flag} must be a boolean, got {config_dict[flag]!r}")

        if 'squeeze_round_cap' in config_dict:
            rounds = config_dict['squeeze_round_cap']
            if not self._is_int(rounds) or rounds < 1:
                raise ValueError(f"squeeze_round_cap must be an integer >= 1, got {rounds}")

        if 'workers' in config_dict:
            workers = config_dict['workers']
            if not self._is_int(workers) or workers < 1 or workers > 256:
                raise ValueError(f"workers must be an integer between 1 and 256, got {workers}")

        if 'channel_capacity' in config_dict:
            capacity = config_dict['channel_capacity']
            if not self._is_int(capacity) or capacity < 1:
                raise ValueError(f"channel_capacity must be an integer >= 1, got {capacity}")

        for seconds in ('poll_interval', 'watchdog_seconds'):
            if seconds in config_dict:
                value = config_dict[seconds]
                if not self._is_number(value) or value <= 0:
                    raise ValueError(f"{seconds} must be a positive number, got {value}")

    def create_safe_config(self, **kwargs):
        """Create a config instance with validated parameters"""
        cleaned_params = self.validate_config_dict(kwargs)
        try:
            return self.config_class(**cleaned_params)
        except TypeError as e:
            error_msg = f"Failed to create {self.config_class.__name__}: {e}"
            self.logger.error(error_msg)
            raise ValueError(error_msg) from e

    def get_valid_parameters(self) -> List[str]:
        return sorted(self.valid_fields)

    def get_parameter_info(self) -> Dict[str, str]:
        """Get information about each parameter"""
        info = {
            'k_max': 'Largest ejection set size (int, >= 1)',
            'perturb_steps': 'Perturbation moves per call (int, >= 0)',
            'z1_cap': 'Outer iteration cap (int or null)',
            'z2_cap': 'Inner iteration cap per outer iteration (int or null)',
            'time_limit': 'Wall-clock limit in seconds (float, > 0)',
            'target_route_count': 'Stop once this many routes are reached (int or null)',
            'rng_seed': 'Global seed (int, >= 0)',
            'restore_initial_on_failure': 'Fall back to the initial solution after a failed attempt (bool)',
            'squeeze_round_cap': 'Repair rounds per squeeze (int, >= 1)',
            'warm_start': 'Start from a packed solution (bool)',
            'check_invariants': 'Verify pool, penalty and feasibility invariants every inner iteration (bool)',
            'workers': 'Workers in the ring (int, 1-256)',
            'channel_capacity': 'Messages buffered per channel (int, >= 1)',
            'poll_interval': 'Sleep between drain polls in seconds (float, > 0)',
            'watchdog_seconds': 'Drain loop watchdog in seconds (float, > 0)',
            'message_log': 'Cooperation message log path (str or null)',
        }
        return {key: text for key, text in info.items() if key in self.valid_fields}


# Global validator instances
ges_validator = ConfigValidator(GesConfig)
ring_validator = ConfigValidator(RingConfig)
