# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels: weighted Brandes betweenness and next-hop tables.

Mirrors ``pure.py`` (same tie tolerance, same accumulation structure); the
test suite asserts parity between the two backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef double TIE_RTOL = 1e-12
TIE_RTOL_PY = TIE_RTOL


cdef struct Heap:
    double* key
    int* node
    int size


cdef inline void heap_push(Heap* h, double key, int node) nogil:
    cdef int i = h.size
    cdef int parent
    h.key[i] = key
    h.node[i] = node
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if h.key[parent] <= h.key[i]:
            break
        h.key[parent], h.key[i] = h.key[i], h.key[parent]
        h.node[parent], h.node[i] = h.node[i], h.node[parent]
        i = parent


cdef inline int heap_pop(Heap* h, double* key_out) nogil:
    cdef int node = h.node[0]
    cdef int i = 0, child
    key_out[0] = h.key[0]
    h.size -= 1
    h.key[0] = h.key[h.size]
    h.node[0] = h.node[h.size]
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and h.key[child + 1] < h.key[child]:
            child += 1
        if h.key[i] <= h.key[child]:
            break
        h.key[i], h.key[child] = h.key[child], h.key[i]
        h.node[i], h.node[child] = h.node[child], h.node[i]
        i = child
    return node


def betweenness(const cnp.int32_t[::1] indptr, const cnp.int32_t[::1] nbr_nodes,
                const cnp.int32_t[::1] nbr_edges, const cnp.int32_t[::1] twin_slot,
                const cnp.float64_t[::1] weights, int n):
    """Per-node routing betweenness over ordered pairs; see pure.betweenness."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] b = b_arr
    cdef cnp.ndarray dist_a = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray sigma_a = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray delta_a = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray settled_a = np.empty(n, dtype=np.int8)
    cdef cnp.ndarray is_pred_a = np.zeros(nbr_nodes.shape[0], dtype=np.int8)
    cdef cnp.ndarray order_a = np.empty(n, dtype=np.int32)
    cdef double[::1] dist = dist_a
    cdef double[::1] sigma = sigma_a
    cdef double[::1] delta = delta_a
    cdef signed char[::1] settled = settled_a
    cdef signed char[::1] is_pred = is_pred_a
    cdef int[::1] order = order_a

    cdef int heap_cap = 2 * nbr_nodes.shape[0] + n + 2
    cdef cnp.ndarray hk_a = np.empty(heap_cap, dtype=np.float64)
    cdef cnp.ndarray hn_a = np.empty(heap_cap, dtype=np.int32)
    cdef double[::1] hk = hk_a
    cdef int[::1] hn = hn_a
    cdef Heap heap
    heap.key = &hk[0]
    heap.node = &hn[0]

    cdef int s, u, v, k, i, n_settled, w_node, lo, hi
    cdef double d_u, d_v, nd, tol, coeff, popped

    with nogil:
        for s in range(n):
            for i in range(n):
                dist[i] = 1e300
                sigma[i] = 0.0
                settled[i] = 0
            for i in range(nbr_nodes.shape[0]):
                is_pred[i] = 0
            dist[s] = 0.0
            sigma[s] = 1.0
            heap.size = 0
            heap_push(&heap, 0.0, s)
            n_settled = 0
            while heap.size > 0:
                u = heap_pop(&heap, &popped)
                if settled[u]:
                    continue
                settled[u] = 1
                order[n_settled] = u
                n_settled += 1
                d_u = dist[u]
                for k in range(indptr[u], indptr[u + 1]):
                    v = nbr_nodes[k]
                    if settled[v]:
                        continue
                    nd = d_u + weights[nbr_edges[k]]
                    d_v = dist[v]
                    tol = TIE_RTOL * (d_v if d_v > 1.0 else 1.0)
                    if nd < d_v - tol:
                        lo = indptr[v]
                        hi = indptr[v + 1]
                        for i in range(lo, hi):
                            is_pred[i] = 0
                        is_pred[twin_slot[k]] = 1
                        dist[v] = nd
                        sigma[v] = sigma[u]
                        heap_push(&heap, nd, v)
                    elif nd <= d_v + tol:
                        is_pred[twin_slot[k]] = 1
                        sigma[v] += sigma[u]
            for i in range(n):
                delta[i] = 0.0
            for i in range(n_settled - 1, 0, -1):
                w_node = order[i]
                coeff = (1.0 + delta[w_node]) / sigma[w_node]
                for k in range(indptr[w_node], indptr[w_node + 1]):
                    if is_pred[k]:
                        u = nbr_nodes[k]
                        delta[u] += sigma[u] * coeff
                b[w_node] += delta[w_node]
    return b_arr


def next_hop_table(const cnp.int32_t[::1] indptr, const cnp.int32_t[::1] nbr_nodes,
                   const cnp.int32_t[::1] nbr_edges, const cnp.float64_t[::1] weights, int n):
    """Routing table: table[u, t] = lowest-id next hop on a smallest-weight path."""
    cdef cnp.ndarray[cnp.int32_t, ndim=2] table_arr = np.full((n, n), -1, dtype=np.int32)
    cdef int[:, ::1] table = table_arr
    cdef cnp.ndarray dist_a = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray settled_a = np.empty(n, dtype=np.int8)
    cdef double[::1] dist = dist_a
    cdef signed char[::1] settled = settled_a

    cdef int heap_cap = 2 * nbr_nodes.shape[0] + n + 2
    cdef cnp.ndarray hk_a = np.empty(heap_cap, dtype=np.float64)
    cdef cnp.ndarray hn_a = np.empty(heap_cap, dtype=np.int32)
    cdef double[::1] hk = hk_a
    cdef int[::1] hn = hn_a
    cdef Heap heap
    heap.key = &hk[0]
    heap.node = &hn[0]

    cdef int t, u, v, k, i, best
    cdef double d_u, nd, tol, popped

    with nogil:
        for t in range(n):
            for i in range(n):
                dist[i] = 1e300
                settled[i] = 0
            dist[t] = 0.0
            heap.size = 0
            heap_push(&heap, 0.0, t)
            while heap.size > 0:
                u = heap_pop(&heap, &popped)
                if settled[u]:
                    continue
                settled[u] = 1
                d_u = dist[u]
                for k in range(indptr[u], indptr[u + 1]):
                    v = nbr_nodes[k]
                    if settled[v]:
                        continue
                    nd = d_u + weights[nbr_edges[k]]
                    if nd < dist[v]:
                        dist[v] = nd
                        heap_push(&heap, nd, v)
            for u in range(n):
                if u == t:
                    continue
                d_u = dist[u]
                tol = TIE_RTOL * (d_u if d_u > 1.0 else 1.0)
                best = -1
                for k in range(indptr[u], indptr[u + 1]):
                    v = nbr_nodes[k]
                    if fabs(weights[nbr_edges[k]] + dist[v] - d_u) <= tol:
                        best = v
                        break
                table[u, t] = best
    return table_arr
