# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled solver and oracle inner loops.

Mirrors ``_pykernels.py`` operation for operation; keep the two in sync.
State layout: dense float64 x/g/last_dx, int64 FIFO ring queue with uint8
membership flags, imeta int64 [head, tail, pushes], fmeta float64 [work, l1].
"""

from libc.math cimport fabs, pow, INFINITY


cdef inline double _pw(double base, double exponent) noexcept nogil:
    if base == 0.0:
        return 0.0
    return pow(base, exponent)


cdef inline double _deriv(int kind, double q, double delta, double t) noexcept nogil:
    cdef double a = fabs(t)
    cdef double s = 1.0 if t > 0.0 else (-1.0 if t < 0.0 else 0.0)
    if kind == 0:
        return s * _pw(a, q - 1.0)
    if kind == 1:
        if a <= delta:
            return _pw(delta, q - 2.0) * t
        return s * _pw(a, q - 1.0)
    if a <= delta:
        return s * _pw(delta, 2.0 - q) * _pw(a, q - 1.0)
    return t


cdef inline double _residual_at(const long long[::1] indptr, const long long[::1] indices,
                                const double[::1] weights, const double[::1] deg,
                                const unsigned char[::1] seed, int kind, double q,
                                double delta, double gamma, double[::1] x,
                                long long i, double xi) noexcept nogil:
    cdef double acc = 0.0
    cdef long long ptr
    for ptr in range(indptr[i], indptr[i + 1]):
        acc += weights[ptr] * _deriv(kind, q, delta, xi - x[indices[ptr]])
    cdef double e = 1.0 if seed[i] else 0.0
    return -acc / gamma - deg[i] * _deriv(kind, q, delta, xi - e)


cdef double _push_impl(const long long[::1] indptr, const long long[::1] indices,
                       const double[::1] weights, const double[::1] deg,
                       const unsigned char[::1] seed, int kind, double q, double delta,
                       double gamma, double kappa, double rho, double eps,
                       int use_heuristic, double t0, long long i,
                       double[::1] x, double[::1] g, double[::1] last_dx,
                       long long[::1] queue, unsigned char[::1] inq,
                       long long[::1] imeta, double[::1] fmeta) noexcept nogil:
    cdef long long cap = queue.shape[0]
    cdef double target = rho * kappa * deg[i]
    cdef double hi_cap = 1.0 - x[i]
    cdef double lo = 0.0
    cdef double hi = hi_cap
    cdef double t, mid, dx, xi_old, l1, upd, gi_new
    cdef long long ptr, j

    if use_heuristic:
        t = last_dx[i] if last_dx[i] > 0.0 else t0
        if 0.0 < t < hi_cap:
            if _residual_at(indptr, indices, weights, deg, seed, kind, q, delta,
                            gamma, x, i, x[i] + t) <= target:
                hi = t
            else:
                lo = t
                hi = 10.0 * t
                while hi < hi_cap and _residual_at(indptr, indices, weights, deg, seed,
                                                   kind, q, delta, gamma, x, i,
                                                   x[i] + hi) > target:
                    lo = hi
                    hi = 10.0 * hi
                if hi >= hi_cap:
                    lo = 0.0
                    hi = hi_cap

    while hi - lo > eps:
        mid = 0.5 * (lo + hi)
        if _residual_at(indptr, indices, weights, deg, seed, kind, q, delta,
                        gamma, x, i, x[i] + mid) > target:
            lo = mid
        else:
            hi = mid
    dx = 0.5 * (lo + hi)

    xi_old = x[i]
    x[i] = xi_old + dx
    l1 = fmeta[1]
    for ptr in range(indptr[i], indptr[i + 1]):
        j = indices[ptr]
        upd = weights[ptr] * (_deriv(kind, q, delta, x[j] - xi_old)
                              - _deriv(kind, q, delta, x[j] - xi_old - dx)) / gamma
        g[j] = g[j] + upd
        l1 += upd
        if inq[j] == 0 and g[j] > kappa * deg[j]:
            queue[imeta[1]] = j
            imeta[1] = (imeta[1] + 1) % cap
            inq[j] = 1
    gi_new = _residual_at(indptr, indices, weights, deg, seed, kind, q, delta,
                          gamma, x, i, x[i])
    l1 += gi_new - g[i]
    g[i] = gi_new
    if inq[i] == 0 and gi_new > kappa * deg[i]:
        queue[imeta[1]] = i
        imeta[1] = (imeta[1] + 1) % cap
        inq[i] = 1
    last_dx[i] = dx
    fmeta[0] = fmeta[0] + deg[i]
    fmeta[1] = l1
    imeta[2] = imeta[2] + 1
    return dx


def push_once(const long long[::1] indptr, const long long[::1] indices,
              const double[::1] weights, const double[::1] deg,
              const unsigned char[::1] seed, int kind, double q, double delta,
              double gamma, double kappa, double rho, double eps,
              int use_heuristic, double t0, long long i,
              double[::1] x, double[::1] g, double[::1] last_dx,
              long long[::1] queue, unsigned char[::1] inq,
              long long[::1] imeta, double[::1] fmeta):
    """One push at node i; caller guarantees g[i] > kappa * deg[i]."""
    cdef double dx
    with nogil:
        dx = _push_impl(indptr, indices, weights, deg, seed, kind, q, delta,
                        gamma, kappa, rho, eps, use_heuristic, t0, i,
                        x, g, last_dx, queue, inq, imeta, fmeta)
    return dx


def drain(const long long[::1] indptr, const long long[::1] indices,
          const double[::1] weights, const double[::1] deg,
          const unsigned char[::1] seed, int kind, double q, double delta,
          double gamma, double kappa, double rho, double eps,
          int use_heuristic, double t0, long long max_pushes,
          double[::1] x, double[::1] g, double[::1] last_dx,
          long long[::1] queue, unsigned char[::1] inq,
          long long[::1] imeta, double[::1] fmeta):
    """Process the violation queue FIFO; 1 when drained, 0 on budget stop."""
    cdef long long cap = queue.shape[0]
    cdef long long i
    cdef int out = 1
    with nogil:
        while imeta[0] != imeta[1]:
            if imeta[2] >= max_pushes:
                out = 0
                break
            i = queue[imeta[0]]
            imeta[0] = (imeta[0] + 1) % cap
            inq[i] = 0
            if g[i] <= kappa * deg[i]:
                continue
            _push_impl(indptr, indices, weights, deg, seed, kind, q, delta,
                       gamma, kappa, rho, eps, use_heuristic, t0, i,
                       x, g, last_dx, queue, inq, imeta, fmeta)
    return out


cdef inline double _stationarity(const long long[::1] indptr, const long long[::1] indices,
                                 const double[::1] weights, const double[::1] deg,
                                 const unsigned char[::1] seed, int kind, double q,
                                 double delta, double gamma, double kappa,
                                 double[::1] x, long long i, double t) noexcept nogil:
    cdef double acc = 0.0
    cdef long long ptr
    for ptr in range(indptr[i], indptr[i + 1]):
        acc += weights[ptr] * _deriv(kind, q, delta, t - x[indices[ptr]])
    cdef double e = 1.0 if seed[i] else 0.0
    return acc + gamma * deg[i] * _deriv(kind, q, delta, t - e) + kappa * gamma * deg[i]


cdef double _oracle_viol(const long long[::1] indptr, const long long[::1] indices,
                         const double[::1] weights, const double[::1] deg,
                         const unsigned char[::1] seed, int kind, double q,
                         double delta, double gamma, double kappa,
                         double[::1] x) noexcept nogil:
    cdef long long n = deg.shape[0]
    cdef double viol = 0.0
    cdef double v
    cdef long long i
    for i in range(n):
        if x[i] == 0.0:
            v = -_stationarity(indptr, indices, weights, deg, seed, kind, q,
                               delta, gamma, kappa, x, i, 0.0) / gamma
            if v < 0.0:
                v = 0.0
        else:
            v = fabs(_stationarity(indptr, indices, weights, deg, seed, kind,
                                   q, delta, gamma, kappa, x, i, x[i])) / gamma
        if v > viol:
            viol = v
    return viol


def oracle_run(const long long[::1] indptr, const long long[::1] indices,
               const double[::1] weights, const double[::1] deg,
               const unsigned char[::1] seed, int kind, double q, double delta,
               double gamma, double kappa, double tol, double coord_tol,
               long long max_sweeps, double[::1] x, double[::1] out):
    """Cyclic exact coordinate minimization; writes [sweeps, converged, viol]."""
    cdef long long n = deg.shape[0]
    cdef double ftol = 0.5 * gamma * tol
    cdef double skip_tol = 0.25 * gamma * tol
    cdef long long sweeps = 0
    cdef int converged = 0
    cdef double viol = INFINITY
    cdef int stalled = 0
    cdef double max_move, move, fxi, f0, lo, hi, mid, fm, xi_new
    cdef long long i
    with nogil:
        while sweeps < max_sweeps:
            sweeps += 1
            max_move = 0.0
            for i in range(n):
                fxi = _stationarity(indptr, indices, weights, deg, seed, kind, q,
                                    delta, gamma, kappa, x, i, x[i])
                if x[i] == 0.0:
                    if fxi >= 0.0:
                        continue
                    f0 = fxi
                else:
                    if fabs(fxi) <= skip_tol:
                        continue
                    f0 = _stationarity(indptr, indices, weights, deg, seed, kind, q,
                                       delta, gamma, kappa, x, i, 0.0)
                if f0 >= 0.0:
                    xi_new = 0.0
                else:
                    lo = 0.0
                    hi = 1.0
                    while True:
                        mid = 0.5 * (lo + hi)
                        if mid <= lo or mid >= hi:
                            break
                        fm = _stationarity(indptr, indices, weights, deg, seed, kind,
                                           q, delta, gamma, kappa, x, i, mid)
                        if fm < 0.0:
                            lo = mid
                        else:
                            hi = mid
                        if hi - lo <= coord_tol and fabs(fm) <= ftol:
                            break
                    xi_new = 0.5 * (lo + hi)
                move = fabs(xi_new - x[i])
                x[i] = xi_new
                if move > max_move:
                    max_move = move
            if max_move <= coord_tol or sweeps % 16 == 0:
                viol = _oracle_viol(indptr, indices, weights, deg, seed, kind, q,
                                    delta, gamma, kappa, x)
                if viol <= tol:
                    converged = 1
                    break
            # bisection cannot move x further: precision floor, stop early
            if max_move <= coord_tol:
                stalled += 1
                if stalled >= 2 or max_move == 0.0:
                    break
            else:
                stalled = 0
        if converged == 0:
            viol = _oracle_viol(indptr, indices, weights, deg, seed, kind, q,
                                delta, gamma, kappa, x)
    out[0] = <double> sweeps
    out[1] = <double> converged
    out[2] = viol
