"""Compiled kernels for regional-minima labeling and the flooding loop.

The flood pops pixels from a binary heap keyed on a packed
``(pixel value, insertion sequence, pixel index)`` int64, which realizes the
value-ordered, FIFO-tie-broken processing contract exactly and keeps the
whole loop integer-only (bit-identical across runs and platforms).

Index packing uses 27 bits, so images are capped at 2**27 pixels upstream.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_IDX_BITS = 27
_IDX_MASK = (1 << _IDX_BITS) - 1


@njit(cache=True, inline="always")
def _heap_push(heap, size, key):
    i = size
    heap[i] = key
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= heap[i]:
            break
        heap[parent], heap[i] = heap[i], heap[parent]
        i = parent
    return size + 1


@njit(cache=True, inline="always")
def _heap_pop(heap, size):
    top = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        small = left
        right = left + 1
        if right < size and heap[right] < heap[left]:
            small = right
        if heap[i] <= heap[small]:
            break
        heap[i], heap[small] = heap[small], heap[i]
        i = small
    return top, size


@njit(cache=True)
def label_minima(f, h, w, dr, dc):
    """Label regional minima 1..N in order of their smallest row-major pixel.

    A regional minimum is a maximal equal-value plateau with no strictly
    lower neighbor. Returns (component array, N); non-minimum pixels get 0.
    """
    n = h * w
    comp = np.zeros(n, np.int32)
    visited = np.zeros(n, np.uint8)
    queue = np.empty(n, np.int64)
    count = 0
    for start in range(n):
        if visited[start]:
            continue
        value = f[start]
        visited[start] = 1
        queue[0] = start
        head, tail = 0, 1
        has_lower = False
        while head < tail:
            p = queue[head]
            head += 1
            r = p // w
            c = p % w
            for k in range(dr.shape[0]):
                rr = r + dr[k]
                cc = c + dc[k]
                if rr < 0 or rr >= h or cc < 0 or cc >= w:
                    continue
                q = rr * w + cc
                if f[q] < value:
                    has_lower = True
                elif f[q] == value and visited[q] == 0:
                    visited[q] = 1
                    queue[tail] = q
                    tail += 1
        if not has_lower:
            count += 1
            for i in range(tail):
                comp[queue[i]] = count
    return comp, count


@njit(cache=True)
def flood(f, seeds, h, w, dr, dc, d2):
    """Priority-flood from seeded minima; returns a full label array.

    Pixels pop in increasing (value, insertion order). A popped pixel with
    strictly lower neighbors takes the label of its steepest descent
    (slopes compared exactly via cross-multiplied squared drops over squared
    step lengths); disagreeing or already-dammed steepest neighbors make it
    a dam (label 0). A popped plateau pixel (no lower neighbor) takes the
    unique basin label among its already-resolved equal-value neighbors --
    first-come flooding -- and becomes a dam where fronts meet.
    """
    n = h * w
    labels = np.full(n, -1, np.int32)
    in_queue = np.zeros(n, np.uint8)
    heap = np.empty(n, np.int64)
    size = 0
    seq = 0

    for idx in range(n):
        if seeds[idx] > 0:
            labels[idx] = seeds[idx]
            key = (np.int64(f[idx]) << 54) | (np.int64(seq) << _IDX_BITS) | np.int64(idx)
            size = _heap_push(heap, size, key)
            seq += 1
            in_queue[idx] = 1

    while size > 0:
        key, size = _heap_pop(heap, size)
        idx = key & _IDX_MASK
        r = idx // w
        c = idx % w
        value = f[idx]

        if labels[idx] < 0:
            best_num = np.int64(-1)
            best_d2 = np.int64(1)
            lab = np.int32(-2)
            for k in range(dr.shape[0]):
                rr = r + dr[k]
                cc = c + dc[k]
                if rr < 0 or rr >= h or cc < 0 or cc >= w:
                    continue
                q = rr * w + cc
                if f[q] < value:
                    drop = np.int64(value - f[q])
                    num = drop * drop
                    lhs = num * best_d2
                    rhs = best_num * d2[k]
                    if lhs > rhs:
                        best_num = num
                        best_d2 = d2[k]
                        lab = labels[q]
                    elif lhs == rhs and labels[q] != lab:
                        lab = 0
            if lab == np.int32(-2):
                # Plateau pixel: inherit from resolved equal-value neighbors,
                # ignoring dams so watershed lines stay thin.
                basin = np.int32(-1)
                for k in range(dr.shape[0]):
                    rr = r + dr[k]
                    cc = c + dc[k]
                    if rr < 0 or rr >= h or cc < 0 or cc >= w:
                        continue
                    q = rr * w + cc
                    if f[q] == value and labels[q] > 0:
                        if basin == np.int32(-1):
                            basin = labels[q]
                        elif labels[q] != basin:
                            basin = 0
                labels[idx] = basin if basin > 0 else 0
            else:
                labels[idx] = lab

        for k in range(dr.shape[0]):
            rr = r + dr[k]
            cc = c + dc[k]
            if rr < 0 or rr >= h or cc < 0 or cc >= w:
                continue
            q = rr * w + cc
            if in_queue[q] == 0:
                in_queue[q] = 1
                key = (np.int64(f[q]) << 54) | (np.int64(seq) << _IDX_BITS) | np.int64(q)
                size = _heap_push(heap, size, key)
                seq += 1

    return labels
