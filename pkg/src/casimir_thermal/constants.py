"""CODATA 2018 constants (SI) used throughout the package.

Every derived number in the package goes through this table, so results are
reproducible bit for bit regardless of which SciPy release is installed.
"""

import math

HBAR = 1.054571817e-34  # J s
C = 2.99792458e8  # m / s
K_B = 1.380649e-23  # J / K
EPS_0 = 8.8541878128e-12  # F / m
E_CHARGE = 1.602176634e-19  # C
BOHR_RADIUS = 5.29177210903e-11  # m

# Riemann zeta values, 10 decimals.
ZETA_3 = 1.2020569032
ZETA_7_2 = 1.1267338673

PI = math.pi

physical_constants = {
    "reduced Planck constant": (HBAR, "J s"),
    "speed of light in vacuum": (C, "m s^-1"),
    "Boltzmann constant": (K_B, "J K^-1"),
    "vacuum electric permittivity": (EPS_0, "F m^-1"),
    "elementary charge": (E_CHARGE, "C"),
    "Bohr radius": (BOHR_RADIUS, "m"),
}
