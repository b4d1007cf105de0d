"""Physical constants and unit helpers.

All grid arithmetic is done in GHz (exact binary floats for the ITU values
193100, 100, 50, 25, 12.5) and converted to wavelength only at the edges.
"""

import math

SPEED_OF_LIGHT_M_S = 299792458.0

# lambda_nm = C_NM_GHZ / nu_GHz and vice versa
C_NM_GHZ = 299792458.0

TWO_PI = 2.0 * math.pi


def wavelength_nm_to_frequency_ghz(lam_nm):
    return C_NM_GHZ / lam_nm


def frequency_ghz_to_wavelength_nm(nu_ghz):
    return C_NM_GHZ / nu_ghz
