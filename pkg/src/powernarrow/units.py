"""Single conversion site between boundary units (ordinary MHz) and internal
angular frequencies (rad/ns).

Everything inside the package works in rad/ns.  The command line and all
output files speak ordinary frequency in MHz, so 1 MHz corresponds to
2*pi*1e-3 rad/ns.
"""

import math

RADNS_PER_MHZ = 2.0 * math.pi * 1.0e-3


def mhz_to_radns(f_mhz):
    """Ordinary frequency in MHz -> angular frequency in rad/ns."""
    return f_mhz * RADNS_PER_MHZ


def radns_to_mhz(omega_radns):
    """Angular frequency in rad/ns -> ordinary frequency in MHz."""
    return omega_radns / RADNS_PER_MHZ
