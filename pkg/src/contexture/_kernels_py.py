"""Pure-Python consistent-assignment search.

Mirrors ``_kernels.pyx`` exactly: same variable order, same value order, same
node counting. Used when the compiled module is unavailable.
"""
import numpy as np


def search(ctx_vars, possible, check_ptr, check_ctx, fixed):
    """Depth-first search for a global assignment inside the support.

    Parameters
    ----------
    ctx_vars : int32 array, shape (n_contexts, n_sites)
        Variable id of each context's measurement at each site.
    possible : uint8 array, shape (n_contexts, 2**n_sites)
        Support table.
    check_ptr, check_ctx : int32 arrays
        CSR lists: contexts ``check_ctx[check_ptr[v]:check_ptr[v+1]]`` become
        fully decided when variable ``v`` is assigned.
    fixed : int8 array, shape (n_vars,)
        ``-1`` for free variables, otherwise the forced bit.

    Returns
    -------
    found : bool
    bits : uint8 array of the witness (meaningful only when found)
    nodes : int
        Number of (variable, value) assignments tried.
    """
    ctx_vars = np.asarray(ctx_vars).tolist()
    possible = [bytes(row) for row in np.asarray(possible, dtype=np.uint8)]
    check_ptr = np.asarray(check_ptr).tolist()
    check_ctx = np.asarray(check_ctx).tolist()
    fixed = np.asarray(fixed).tolist()
    n_vars = len(fixed)
    n_sites = len(ctx_vars[0]) if ctx_vars else 0
    shifts = [n_sites - 1 - s for s in range(n_sites)]
    checks = [
        [(possible[c], list(zip(ctx_vars[c], shifts))) for c in check_ctx[check_ptr[v]:check_ptr[v + 1]]]
        for v in range(n_vars)
    ]

    bits = [0] * n_vars
    tried = [0] * (n_vars + 1)
    nodes = 0
    d = 0
    while 0 <= d < n_vars:
        f = fixed[d]
        limit = 1 if f >= 0 else 2
        if tried[d] >= limit:
            tried[d] = 0
            d -= 1
            continue
        bits[d] = f if f >= 0 else tried[d]
        tried[d] += 1
        nodes += 1
        for row, pairs in checks[d]:
            idx = 0
            for var, sh in pairs:
                idx |= bits[var] << sh
            if not row[idx]:
                break
        else:
            d += 1
            tried[d] = 0
    found = d == n_vars
    return found, np.array(bits, dtype=np.uint8), nodes
