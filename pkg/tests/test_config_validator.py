"""
Tests for GesConfig/RingConfig Validator and the Configuration Manager
"""

import unittest
import sys
import os
import tempfile

import yaml

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.config.config_validator import ConfigValidator, ges_validator, ring_validator
from src.config.configuration_manager import ConfigurationManager, GesConfig, RingConfig


class TestConfigValidator(unittest.TestCase):
    """Test cases for ConfigValidator"""

    def setUp(self):
        self.validator = ConfigValidator()

    def test_valid_config_creation(self):
        config = ges_validator.create_safe_config(k_max=2, perturb_steps=50, rng_seed=7)

        self.assertIsInstance(config, GesConfig)
        self.assertEqual(config.k_max, 2)
        self.assertEqual(config.perturb_steps, 50)
        self.assertEqual(config.rng_seed, 7)
        self.assertFalse(config.restore_initial_on_failure)

    def test_parameter_name_correction(self):
        config_dict = {
            'kmax': 3,              # corrected to k_max
            'I': 10,                # corrected to perturb_steps
            'seed': 5,              # corrected to rng_seed
            'literal_line_31': True,
        }

        cleaned = ges_validator.validate_config_dict(config_dict)

        self.assertEqual(cleaned['k_max'], 3)
        self.assertEqual(cleaned['perturb_steps'], 10)
        self.assertEqual(cleaned['rng_seed'], 5)
        self.assertTrue(cleaned['restore_initial_on_failure'])
        for old in config_dict:
            self.assertNotIn(old, cleaned)

    def test_invalid_parameter_ignored(self):
        cleaned = ges_validator.validate_config_dict({'k_max': 2, 'invalid_param': 'x', 'workers': 4})

        self.assertIn('k_max', cleaned)
        self.assertNotIn('invalid_param', cleaned)
        # ring parameters are unknown to the kernel validator
        self.assertNotIn('workers', cleaned)

    def test_parameter_value_validation(self):
        with self.assertRaises(ValueError):
            ges_validator.validate_config_dict({'k_max': 0})
        with self.assertRaises(ValueError):
            ges_validator.validate_config_dict({'perturb_steps': -1})
        with self.assertRaises(ValueError):
            ges_validator.validate_config_dict({'time_limit': 0})
        with self.assertRaises(ValueError):
            ges_validator.validate_config_dict({'z2_cap': 1.5})
        with self.assertRaises(ValueError):
            ges_validator.validate_config_dict({'restore_initial_on_failure': 'yes'})
        with self.assertRaises(ValueError):
            ges_validator.validate_config_dict({'warm_start': 1})
        with self.assertRaises(ValueError):
            ges_validator.validate_config_dict({'k_max': True})

    def test_ring_validation(self):
        ring = ring_validator.create_safe_config(p=8, capacity=2)
        self.assertIsInstance(ring, RingConfig)
        self.assertEqual(ring.workers, 8)
        self.assertEqual(ring.channel_capacity, 2)

        with self.assertRaises(ValueError):
            ring_validator.validate_config_dict({'workers': 0})
        with self.assertRaises(ValueError):
            ring_validator.validate_config_dict({'watchdog_seconds': -3})

    def test_valid_parameters_list(self):
        valid_params = self.validator.get_valid_parameters()

        self.assertIn('k_max', valid_params)
        self.assertIn('perturb_steps', valid_params)
        self.assertIn('restore_initial_on_failure', valid_params)
        self.assertNotIn('workers', valid_params)

    def test_parameter_info(self):
        param_info = self.validator.get_parameter_info()

        self.assertIn('k_max', param_info)
        self.assertTrue(isinstance(param_info['time_limit'], str))
        self.assertNotIn('poll_interval', param_info)

    def test_edge_cases(self):
        config = ges_validator.create_safe_config(k_max=1, perturb_steps=0, z1_cap=0, z2_cap=0)
        self.assertEqual(config.z2_cap, 0)

        config = ges_validator.create_safe_config(z1_cap=None, target_route_count=None)
        self.assertIsNone(config.z1_cap)
        self.assertIsNone(config.target_route_count)


class TestConfigurationManager(unittest.TestCase):

    def test_defaults_without_file(self):
        manager = ConfigurationManager()
        self.assertEqual(manager.get_ges_config(), GesConfig())
        self.assertEqual(manager.get_ring_config(), RingConfig())

    def test_yaml_sections_and_dotted_keys(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'config.yaml')
            with open(path, 'w') as f:
                yaml.dump({'ges': {'k_max': 2, 'seed': 11}, 'ring': {'workers': 3},
                           'run': {'sizes': [50, 100, 200]}}, f)
            manager = ConfigurationManager(path)

            self.assertEqual(manager.get_ges_config().k_max, 2)
            self.assertEqual(manager.get_ges_config().rng_seed, 11)
            self.assertEqual(manager.get_ring_config().workers, 3)
            self.assertEqual(manager.get_config('run.sizes'), [50, 100, 200])
            self.assertIsNone(manager.get_config('run.missing'))

            manager.set_config('ges.perturb_steps', 7)
            self.assertEqual(manager.get_ges_config().perturb_steps, 7)

            saved = os.path.join(tmp, 'saved.yaml')
            manager.save_config(saved)
            reloaded = ConfigurationManager(saved)
            self.assertEqual(reloaded.get_ges_config(), manager.get_ges_config())

    def test_bad_yaml_value_rejected(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'config.yaml')
            with open(path, 'w') as f:
                yaml.dump({'ges': {'k_max': 0}}, f)
            with self.assertRaises(ValueError):
                ConfigurationManager(path)

    def test_presets(self):
        manager = ConfigurationManager()
        manager.load_config_preset('fidelity')
        self.assertTrue(manager.get_ges_config().restore_initial_on_failure)

        manager.load_config_preset('profile')
        self.assertEqual(manager.get_ring_config().workers, 1)
        profile = manager.get_ges_config()
        self.assertEqual((profile.z1_cap, profile.z2_cap), (3, 40))
        self.assertTrue(profile.warm_start)

        # unknown presets leave the config alone
        before = manager.get_ges_config()
        manager.load_config_preset('nonexistent')
        self.assertEqual(manager.get_ges_config(), before)


if __name__ == '__main__':
    unittest.main()
