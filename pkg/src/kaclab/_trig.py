import numpy as np


def cos_sin_turns(x):
    """cos(2*pi*x) and sin(2*pi*x), exact at multiples of a quarter turn.

    The argument is split as ``q/4 + f`` with |f| <= 1/8; only ``f`` goes
    through the libm call and the quarter turns are applied by swapping and
    negating, so e.g. ``x = 1/2`` gives exactly (-1, 0).
    """
    x = np.asarray(x, dtype=float)
    q = np.rint(4.0 * x)
    f = x - 0.25 * q
    c = np.cos(2.0 * np.pi * f)
    s = np.sin(2.0 * np.pi * f)
    quadrant = np.mod(q, 4).astype(np.int64)
    cos_out = np.select([quadrant == 0, quadrant == 1, quadrant == 2], [c, -s, -c], s)
    sin_out = np.select([quadrant == 0, quadrant == 1, quadrant == 2], [s, c, -s], -c)
    return cos_out + 0.0, sin_out + 0.0


def unit_turns(x):
    c, s = cos_sin_turns(x)
    return c + 1j * s
