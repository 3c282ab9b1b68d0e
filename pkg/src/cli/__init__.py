"""
Command-line surface and synthetic instance generation
"""

from .main import build_parser, main, setup_logging, status_line
from .synthetic import generate_synthetic_instance, tile_instance

__all__ = ['build_parser', 'main', 'setup_logging', 'status_line',
           'generate_synthetic_instance', 'tile_instance']
