# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled neighbourhood toggles. Same contract as ``_kernels_py``."""

cdef int _H = 2


cdef inline void _toggle(dict adj, dict na, object a, object b):
    cdef dict nb = <dict>adj[b]
    if b in na:
        del na[b]
        del nb[a]
    else:
        na[b] = _H
        nb[a] = _H


def toggle_clique(dict adj, list vs):
    cdef Py_ssize_t n = len(vs), i, j
    cdef object a
    cdef dict na
    for i in range(n):
        a = vs[i]
        na = <dict>adj[a]
        for j in range(i + 1, n):
            _toggle(adj, na, a, vs[j])
    return n * (n - 1) // 2


def toggle_bipartite(dict adj, list xs, list ys):
    cdef object a, b
    cdef dict na
    for a in xs:
        na = <dict>adj[a]
        for b in ys:
            _toggle(adj, na, a, b)
    return len(xs) * len(ys)
