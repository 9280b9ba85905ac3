"""NumPy fallback for the hot Monte Carlo amplitude kernels.

Bit-compatibility contract with the compiled extension: both paths apply
the exact same IEEE operations in the same per-element order (square,
add, sqrt, multiply -- no transcendentals), so the compiled and fallback
kernels produce identical doubles for identical inputs.
"""

import numpy as np


def rician_amp(z1, z2, los, scale, out=None):
    """|h| for h = scale * ((los + z1) + i z2), standard-normal z1, z2.

    With los = sqrt(2 kappa) and scale = sqrt(g / (2 (kappa + 1))) this is
    one Rician amplitude draw with E|h|^2 = g.
    """
    r = scale * np.sqrt((z1 + los) ** 2 + z2 ** 2)
    if out is None:
        return r
    out[...] = r
    return out


def cascade_accum(z1, z2, z3, z4, los, scale_prod, out):
    """Accumulate one element's cascade product amplitude into ``out``:
    out += scale_prod * |h_a| * |h_b| with both factors unit-scale Rician."""
    a = np.sqrt((z1 + los) ** 2 + z2 ** 2)
    b = np.sqrt((z3 + los) ** 2 + z4 ** 2)
    out += scale_prod * (a * b)
