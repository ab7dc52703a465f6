# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled DP recursion and backtracking. Mirrors ``_slow.py`` exactly."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

DEF START = 0
DEF DIAG = 1
DEF UP = 2
DEF LEFT = 3


def accumulate(double[:, ::1] values, bint maximize):
    cdef Py_ssize_t nx = values.shape[0], ny = values.shape[1]
    cdef Py_ssize_t i, j
    cdef double d, u, l, best, sgn
    cdef signed char s
    acc_arr = np.empty((nx, ny), dtype=np.float64)
    steps_arr = np.zeros((nx, ny), dtype=np.int8)
    cdef double[:, ::1] acc = acc_arr
    cdef signed char[:, ::1] steps = steps_arr
    # maximize internally; a min problem is run on negated accumulations
    sgn = 1.0 if maximize else -1.0

    acc[0, 0] = values[0, 0]
    steps[0, 0] = START
    for j in range(1, ny):
        acc[0, j] = acc[0, j - 1] + values[0, j]
        steps[0, j] = LEFT
    for i in range(1, nx):
        acc[i, 0] = acc[i - 1, 0] + values[i, 0]
        steps[i, 0] = UP
        for j in range(1, ny):
            d = sgn * acc[i - 1, j - 1]
            u = sgn * acc[i - 1, j]
            l = sgn * acc[i, j - 1]
            if d >= u and d >= l:
                best = acc[i - 1, j - 1]
                s = DIAG
            elif u >= l:
                best = acc[i - 1, j]
                s = UP
            else:
                best = acc[i, j - 1]
                s = LEFT
            acc[i, j] = best + values[i, j]
            steps[i, j] = s
    return acc_arr, steps_arr


def backtrack(signed char[:, ::1] steps):
    cdef Py_ssize_t i = steps.shape[0] - 1, j = steps.shape[1] - 1
    cdef Py_ssize_t k = i + j + 1
    cdef signed char s
    px_arr = np.empty(k, dtype=np.int64)
    py_arr = np.empty(k, dtype=np.int64)
    cdef cnp.int64_t[::1] px = px_arr
    cdef cnp.int64_t[::1] py = py_arr
    while True:
        k -= 1
        px[k] = i + 1
        py[k] = j + 1
        s = steps[i, j]
        if s == START:
            break
        elif s == DIAG:
            i -= 1
            j -= 1
        elif s == UP:
            i -= 1
        else:
            j -= 1
    return px_arr[k:], py_arr[k:]
