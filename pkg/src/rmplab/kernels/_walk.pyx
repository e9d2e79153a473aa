# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled walk kernels; semantics match kernels.fallback exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log, sqrt

cnp.import_array()

DEF MAXD = 8

cdef double LOG_CAP = 16.0


cdef inline double _frob2(double* a, int d) nogil:
    cdef int i
    cdef double s = 0.0
    for i in range(d * d):
        s += a[i] * a[i]
    return s


def left_products(double[:, :, ::1] atoms, long[:, ::1] idx, long[::1] grid):
    return _products(atoms, idx, grid, 1)


def right_products(double[:, :, ::1] atoms, long[:, ::1] idx, long[::1] grid):
    return _products(atoms, idx, grid, 0)


def _products(double[:, :, ::1] atoms, long[:, ::1] idx, long[::1] grid, int left):
    cdef Py_ssize_t trials = idx.shape[0]
    cdef Py_ssize_t n = idx.shape[1]
    cdef int d = <int>atoms.shape[1]
    cdef Py_ssize_t ng = grid.shape[0]
    out = np.empty((trials, ng, d, d), dtype=np.float64)
    out_logs = np.empty((trials, ng), dtype=np.float64)
    cdef double[:, :, :, ::1] out_v = out
    cdef double[:, ::1] out_logs_v = out_logs
    cdef double prod[MAXD * MAXD]
    cdef double tmp[MAXD * MAXD]
    cdef double logs, nrm
    cdef Py_ssize_t t, s, gpos
    cdef int i, j, k, a
    with nogil:
        for t in range(trials):
            for i in range(d):
                for j in range(d):
                    prod[i * d + j] = 1.0 if i == j else 0.0
            logs = 0.0
            gpos = 0
            for s in range(n):
                a = <int>idx[t, s]
                if left:
                    for i in range(d):
                        for j in range(d):
                            nrm = 0.0
                            for k in range(d):
                                nrm += atoms[a, i, k] * prod[k * d + j]
                            tmp[i * d + j] = nrm
                else:
                    for i in range(d):
                        for j in range(d):
                            nrm = 0.0
                            for k in range(d):
                                nrm += prod[i * d + k] * atoms[a, k, j]
                            tmp[i * d + j] = nrm
                for i in range(d * d):
                    prod[i] = tmp[i]
                nrm = sqrt(_frob2(prod, d))
                if fabs(log(nrm)) > LOG_CAP:
                    for i in range(d * d):
                        prod[i] /= nrm
                    logs += log(nrm)
                while gpos < ng and grid[gpos] == s + 1:
                    for i in range(d):
                        for j in range(d):
                            out_v[t, gpos, i, j] = prod[i * d + j]
                    out_logs_v[t, gpos] = logs
                    gpos += 1
    return out, out_logs


def vector_left_walk(double[:, :, ::1] atoms, long[:, ::1] idx,
                     double[::1] x0, long[::1] grid):
    cdef Py_ssize_t trials = idx.shape[0]
    cdef Py_ssize_t n = idx.shape[1]
    cdef int d = <int>atoms.shape[1]
    cdef Py_ssize_t ng = grid.shape[0]
    out = np.empty((trials, ng, d), dtype=np.float64)
    out_logs = np.empty((trials, ng), dtype=np.float64)
    cdef double[:, :, ::1] out_v = out
    cdef double[:, ::1] out_logs_v = out_logs
    cdef double vec[MAXD]
    cdef double tmp[MAXD]
    cdef double logs, nrm
    cdef Py_ssize_t t, s, gpos
    cdef int i, k, a
    with nogil:
        for t in range(trials):
            for i in range(d):
                vec[i] = x0[i]
            logs = 0.0
            gpos = 0
            for s in range(n):
                a = <int>idx[t, s]
                for i in range(d):
                    nrm = 0.0
                    for k in range(d):
                        nrm += atoms[a, i, k] * vec[k]
                    tmp[i] = nrm
                for i in range(d):
                    vec[i] = tmp[i]
                nrm = 0.0
                for i in range(d):
                    nrm += vec[i] * vec[i]
                nrm = sqrt(nrm)
                if fabs(log(nrm)) > LOG_CAP:
                    for i in range(d):
                        vec[i] /= nrm
                    logs += log(nrm)
                while gpos < ng and grid[gpos] == s + 1:
                    for i in range(d):
                        out_v[t, gpos, i] = vec[i]
                    out_logs_v[t, gpos] = logs
                    gpos += 1
    return out, out_logs


def qr_deflation(double[:, :, ::1] atoms, long[:, ::1] idx, int every):
    cdef Py_ssize_t trials = idx.shape[0]
    cdef Py_ssize_t n = idx.shape[1]
    cdef int d = <int>atoms.shape[1]
    out = np.zeros((trials, d), dtype=np.float64)
    cdef double[:, ::1] out_v = out
    cdef double frame[MAXD * MAXD]
    cdef double tmp[MAXD * MAXD]
    cdef double r, proj
    cdef Py_ssize_t t, s
    cdef int i, j, k, l, a, since
    with nogil:
        for t in range(trials):
            for i in range(d):
                for j in range(d):
                    frame[i * d + j] = 1.0 if i == j else 0.0
            since = 0
            for s in range(n):
                a = <int>idx[t, s]
                for i in range(d):
                    for j in range(d):
                        r = 0.0
                        for k in range(d):
                            r += atoms[a, i, k] * frame[k * d + j]
                        tmp[i * d + j] = r
                for i in range(d * d):
                    frame[i] = tmp[i]
                since += 1
                if since == every or s == n - 1:
                    # modified Gram-Schmidt on columns, accumulating stretches
                    for j in range(d):
                        r = 0.0
                        for i in range(d):
                            r += frame[i * d + j] * frame[i * d + j]
                        r = sqrt(r)
                        out_v[t, j] += log(r)
                        for i in range(d):
                            frame[i * d + j] /= r
                        for l in range(j + 1, d):
                            proj = 0.0
                            for i in range(d):
                                proj += frame[i * d + j] * frame[i * d + l]
                            for i in range(d):
                                frame[i * d + l] -= proj * frame[i * d + j]
                    since = 0
    return out
