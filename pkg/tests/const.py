"""Constants for tests."""

from importlib import metadata

version = metadata.version("conformalblock")

SKEW_WINDOW = 12
JACOBI_WINDOW = 8
HALF_SKEW_WINDOW = 6
VERTEX_WINDOW = 4
NOVIKOV_WINDOW = 10
RANDOM_COCHAINS = 50

TRIVIAL_BASIC_DIMS = {0: 1, 1: 0, 2: 0}
TRIVIAL_REDUCED_DIMS = {0: 1, 1: 0, 2: 1}
