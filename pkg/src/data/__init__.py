# Data module: benchmark instance and solution file I/O
from .instance_io import (SolutionFile, ValidationVerdict, parse_instance, parse_solution_body,
                          read_instance, read_solution, to_solution_file, validate_solution,
                          write_solution)

__all__ = ['SolutionFile', 'ValidationVerdict', 'parse_instance', 'parse_solution_body',
           'read_instance', 'read_solution', 'to_solution_file', 'validate_solution',
           'write_solution']
