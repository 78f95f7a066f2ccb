"""Compiled time-stepping core for the two-level Schrödinger propagator.

Each step applies the exact 2x2 unitary of the Hamiltonian held constant over
the cell (zero-order hold):

    H = 0.5 * [[-delta, omega], [omega, delta]],   i dc/dt = H c

    U = exp(-i H h) = cos(theta) I - i sin(theta) (omega sx - delta sz)/eps,
    eps = sqrt(omega^2 + delta^2),  theta = eps h / 2.

The construction is unitary to round-off for any step size and exact for
piecewise-constant pulses.  The kernel releases the GIL so sweep engines can
run rows on a thread pool.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def evolve_cells(envelope, h, peak_rabis, deltas):
    """Propagate one cell column per (peak_rabi, delta) pair.

    Parameters
    ----------
    envelope : float64[:] — envelope samples f_k (zero-order hold, one per step)
    h : float — step length (ns)
    peak_rabis, deltas : float64[:] — per-column amplitude scale and detuning

    Returns
    -------
    complex128[2, ncols] — final amplitudes (c0, c1) starting from (1, 0).
    """
    ncols = deltas.shape[0]
    nsteps = envelope.shape[0]
    out = np.empty((2, ncols), dtype=np.complex128)
    half = 0.5 * h
    for j in range(ncols):
        d = deltas[j]
        w0 = peak_rabis[j]
        c0 = 1.0 + 0.0j
        c1 = 0.0 + 0.0j
        for k in range(nsteps):
            w = w0 * envelope[k]
            eps = np.sqrt(w * w + d * d)
            theta = eps * half
            co = np.cos(theta)
            if eps > 0.0:
                a = np.sin(theta) / eps
            else:
                a = half
            u00 = co + 1j * (a * d)
            u01 = -1j * (a * w)
            c0_new = u00 * c0 + u01 * c1
            c1 = u01 * c0 + np.conj(u00) * c1
            c0 = c0_new
        out[0, j] = c0
        out[1, j] = c1
    return out
