"""Hot path for tour construction.

Both backends implement the exact same roulette-wheel semantics: for each
ant, one uniform draw per city choice, a left-to-right prefix sum over the
unvisited weights, and the first city whose prefix strictly exceeds
``u * total`` is taken. Because float64 additions happen in the same order,
the numba and numpy backends produce bit-identical tours for the same draws.
"""

import os

import numpy as np

try:  # numba is optional; the numpy path is the reference fallback
    import numba
except ImportError:  # pragma: no cover
    numba = None


def _construct_tours_loop(weight, dist, starts, uniforms, perms, lengths):
    m = starts.shape[0]
    n = weight.shape[0]
    for a in range(m):
        visited = np.zeros(n, dtype=np.bool_)
        cur = starts[a]
        visited[cur] = True
        perms[a, 0] = cur
        total_len = np.int64(0)
        for step in range(1, n):
            row = weight[cur]
            total = 0.0
            for j in range(n):
                if not visited[j]:
                    total += row[j]
            if not total > 0.0:
                raise ValueError("zero total transition weight; "
                                 "pheromone floor violated")
            target = uniforms[a, step - 1] * total
            acc = 0.0
            nxt = -1
            for j in range(n):
                if not visited[j]:
                    acc += row[j]
                    if acc > target:
                        nxt = j
                        break
            if nxt < 0:  # u*total rounded up to the full sum
                for j in range(n - 1, -1, -1):
                    if not visited[j]:
                        nxt = j
                        break
            perms[a, step] = nxt
            total_len += dist[cur, nxt]
            visited[nxt] = True
            cur = nxt
        total_len += dist[cur, starts[a]]
        lengths[a] = total_len


def _construct_tours_numpy(weight, dist, starts, uniforms, perms, lengths):
    m = starts.shape[0]
    n = weight.shape[0]
    for a in range(m):
        visited = np.zeros(n, dtype=bool)
        cur = int(starts[a])
        visited[cur] = True
        perms[a, 0] = cur
        total_len = 0
        for step in range(1, n):
            w = np.where(visited, 0.0, weight[cur])
            prefix = np.cumsum(w)
            total = prefix[-1]
            if not total > 0.0:
                raise ValueError("zero total transition weight; "
                                 "pheromone floor violated")
            target = uniforms[a, step - 1] * total
            nxt = int(np.searchsorted(prefix, target, side="right"))
            if nxt >= n:
                nxt = int(np.flatnonzero(~visited)[-1])
            perms[a, step] = nxt
            total_len += int(dist[cur, nxt])
            visited[nxt] = True
            cur = nxt
        total_len += int(dist[cur, starts[a]])
        lengths[a] = total_len


if numba is not None and not os.environ.get("DYNANTS_NO_NUMBA"):
    _construct_tours_jit = numba.njit(cache=True)(_construct_tours_loop)
    _DEFAULT_BACKEND = "numba"
else:  # pragma: no cover
    _construct_tours_jit = None
    _DEFAULT_BACKEND = "numpy"


def construct_tours(weight, dist, starts, uniforms, backend=None):
    """Build one tour per ant; returns (perms, lengths).

    ``weight`` is the combined tau^alpha * eta^beta matrix, ``dist`` the
    integer distance matrix, ``starts`` the per-ant start cities and
    ``uniforms`` an (m, n-1) array of pre-drawn uniform deviates.
    """
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    uniforms = np.ascontiguousarray(uniforms, dtype=np.float64)
    weight = np.ascontiguousarray(weight, dtype=np.float64)
    dist = np.ascontiguousarray(dist, dtype=np.int64)
    m = starts.shape[0]
    n = weight.shape[0]
    perms = np.empty((m, n), dtype=np.int64)
    lengths = np.empty(m, dtype=np.int64)
    impl = backend or _DEFAULT_BACKEND
    if impl == "numba" and _construct_tours_jit is not None:
        _construct_tours_jit(weight, dist, starts, uniforms, perms, lengths)
    elif impl in ("numpy", "numba"):
        _construct_tours_numpy(weight, dist, starts, uniforms, perms, lengths)
    else:
        raise ValueError(f"unknown construction backend {impl!r}")
    return perms, lengths
