"""Integer kernels for the matching graph: pairwise compatibility and BFS.

Both kernels run on plain integer arrays; the exact geometry is done
beforehand in a segment-crossing table.  numba is used when importable
unless ``BIMATCH_DISABLE_NUMBA`` is set to a non-empty value other than "0".
"""
from __future__ import annotations

import os

import numpy as np

_disabled = os.environ.get("BIMATCH_DISABLE_NUMBA", "") not in ("", "0")

try:
    if _disabled:
        raise ImportError("disabled by BIMATCH_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# -- numpy versions -----------------------------------------------------------

def compat_matrix_numpy(assign: np.ndarray, crosses: np.ndarray) -> np.ndarray:
    """assign[i, r] is the blue matched to red r in matching i;
    crosses[r, b, r2, b2] tells whether segments (r, b) and (r2, b2) cross."""
    m, n = assign.shape
    reds = np.arange(n)
    out = np.zeros((m, m), dtype=np.bool_)
    for i in range(m):
        # bad[j, r, r2]: segment r of matching i crosses segment r2 of matching j
        bad = crosses[reds[None, :, None], assign[i][None, :, None],
                      reds[None, None, :], assign[:, None, :]]
        out[i] = ~bad.any(axis=(1, 2))
    np.fill_diagonal(out, False)
    return out


def bfs_all_numpy(adj: np.ndarray) -> np.ndarray:
    """Hop distances between all node pairs (-1 when unreachable)."""
    m = adj.shape[0]
    dist = np.full((m, m), -1, dtype=np.int64)
    if m == 0:
        return dist
    a = adj.astype(np.int64)
    reached = np.eye(m, dtype=np.bool_)
    frontier = reached.copy()
    np.fill_diagonal(dist, 0)
    d = 0
    while frontier.any():
        d += 1
        nxt = (frontier.astype(np.int64) @ a > 0) & ~reached
        dist[nxt] = d
        reached |= nxt
        frontier = nxt
    return dist


# -- numba versions -----------------------------------------------------------

if HAVE_NUMBA:
    @njit(cache=True)
    def _compat_matrix_jit(assign, crosses):
        m, n = assign.shape
        out = np.zeros((m, m), dtype=np.bool_)
        for i in range(m):
            for j in range(i + 1, m):
                ok = True
                for r in range(n):
                    b = assign[i, r]
                    for r2 in range(n):
                        if crosses[r, b, r2, assign[j, r2]]:
                            ok = False
                            break
                    if not ok:
                        break
                out[i, j] = ok
                out[j, i] = ok
        return out

    @njit(cache=True)
    def _bfs_all_jit(adj):
        m = adj.shape[0]
        dist = np.full((m, m), -1, dtype=np.int64)
        queue = np.empty(m, dtype=np.int64)
        for s in range(m):
            dist[s, s] = 0
            head = 0
            tail = 0
            queue[tail] = s
            tail += 1
            while head < tail:
                u = queue[head]
                head += 1
                for v in range(m):
                    if adj[u, v] and dist[s, v] < 0:
                        dist[s, v] = dist[s, u] + 1
                        queue[tail] = v
                        tail += 1
        return dist


def compat_matrix(assign: np.ndarray, crosses: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    assign = np.ascontiguousarray(assign, dtype=np.int64)
    crosses = np.ascontiguousarray(crosses, dtype=np.bool_)
    if (HAVE_NUMBA if use_numba is None else use_numba and HAVE_NUMBA):
        return _compat_matrix_jit(assign, crosses)
    return compat_matrix_numpy(assign, crosses)


def bfs_all(adj: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    adj = np.ascontiguousarray(adj, dtype=np.bool_)
    if (HAVE_NUMBA if use_numba is None else use_numba and HAVE_NUMBA):
        return _bfs_all_jit(adj)
    return bfs_all_numpy(adj)
