import numpy as np

from braidtrace.state import register


def all_keys(n, beta):
    return np.arange(1 << (n * beta), dtype=np.int64)


def partner_keys(keys, act, i, n, beta):
    mask = (1 << beta) - 1
    shift_a, shift_b = beta * (n - i), beta * (n - i - 1)
    out = keys & ~((mask << shift_a) | (mask << shift_b))
    return out | (act.reg_a.astype(np.int64) << shift_a) | (act.reg_b.astype(np.int64) << shift_b)


def check_crossing_elements(kernel, keys, labels, matrix, i, sign):
    """Compare one encoded crossing against ``matrix`` through the decode map.

    ``labels[x]`` is the basis index string ``x`` decodes to. Returns the
    largest deviation over unstuck strings.
    """
    n, beta = kernel.n, kernel.beta
    act = kernel(keys, i, sign)
    free = ~np.asarray(act.stuck, bool)
    p = labels[keys]
    dev = np.abs(act.stay[free] - matrix[p[free], p[free]]).max()
    moving = free & act.moves
    partners = partner_keys(keys, act, i, n, beta)
    q = labels[partners[moving]]
    dev = max(dev, np.abs(act.move[moving] - matrix[q, p[moving]]).max(initial=0.0))
    # partner of an unstuck string is unstuck and points back
    back = kernel(partners[moving], i, sign)
    assert not np.asarray(back.stuck, bool).any()
    assert np.array_equal(partner_keys(partners[moving], back, i, n, beta), keys[moving])
    # unstuck strings that do not move see no off-diagonal entry
    still = free & ~act.moves
    off = matrix[:, p[still]].copy()
    off[p[still], np.arange(len(p[still]))] = 0
    dev = max(dev, np.abs(off).max(initial=0.0))
    return dev
