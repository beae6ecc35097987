"""Pure-Python fallback for the solver and oracle inner loops.

Mirrors ``_kernels.pyx`` operation for operation (same expressions, same
evaluation order) so both lanes agree bit-for-bit on typical inputs.  Used
automatically when the compiled extension is unavailable; force it with
the ``PUSHCUT_PURE`` environment variable.

State layout shared with the compiled lane:

* dense float64 arrays ``x`` (solution), ``g`` (residual), ``last_dx``
* FIFO ring buffer ``queue`` (int64, capacity n+1) + ``inq`` membership flags
* ``imeta`` int64 [head, tail, pushes]; ``fmeta`` float64 [work, l1 of g]
"""

from math import fabs, pow as _cpow


def _pw(base, exponent):
    if base == 0.0:
        return 0.0
    return _cpow(base, exponent)


def deriv(kind, q, delta, t):
    """Loss derivative; kind codes 0=qnorm, 1=qhuber, 2=berq."""
    a = fabs(t)
    s = 1.0 if t > 0.0 else (-1.0 if t < 0.0 else 0.0)
    if kind == 0:
        return s * _pw(a, q - 1.0)
    if kind == 1:
        if a <= delta:
            return _pw(delta, q - 2.0) * t
        return s * _pw(a, q - 1.0)
    if a <= delta:
        return s * _pw(delta, 2.0 - q) * _pw(a, q - 1.0)
    return t


def residual_at(indptr, indices, weights, deg, seed, kind, q, delta, gamma, x, i, xi):
    """Residual coordinate at node i if its solution value were xi."""
    acc = 0.0
    for ptr in range(indptr[i], indptr[i + 1]):
        acc += weights[ptr] * deriv(kind, q, delta, xi - x[indices[ptr]])
    e = 1.0 if seed[i] else 0.0
    return -acc / gamma - deg[i] * deriv(kind, q, delta, xi - e)


def _bracket(indptr, indices, weights, deg, seed, kind, q, delta, gamma,
             x, i, target, hi_cap, use_heuristic, t0, last_dx):
    """Initial binary-search bracket [lo, hi] with resid(lo) > target >= resid(hi)."""
    lo = 0.0
    hi = hi_cap
    if use_heuristic:
        t = last_dx[i] if last_dx[i] > 0.0 else t0
        if 0.0 < t < hi_cap:
            if residual_at(indptr, indices, weights, deg, seed, kind, q, delta,
                           gamma, x, i, x[i] + t) <= target:
                hi = t
            else:
                lo = t
                hi = 10.0 * t
                while hi < hi_cap and residual_at(indptr, indices, weights, deg, seed,
                                                  kind, q, delta, gamma, x, i,
                                                  x[i] + hi) > target:
                    lo = hi
                    hi = 10.0 * hi
                if hi >= hi_cap:
                    lo = 0.0
                    hi = hi_cap
    return lo, hi


def push_once(indptr, indices, weights, deg, seed, kind, q, delta,
              gamma, kappa, rho, eps, use_heuristic, t0, i,
              x, g, last_dx, queue, inq, imeta, fmeta):
    """One push at node i; caller guarantees g[i] > kappa * deg[i].

    Raises x[i] until its residual lands at rho*kappa*deg[i] (binary search,
    bracket width < eps, midpoint taken, residual then recomputed exactly).
    Neighbors whose residual crosses kappa*deg join the queue.  Returns dx.
    """
    cap = len(queue)
    target = rho * kappa * deg[i]
    hi_cap = 1.0 - x[i]

    lo, hi = _bracket(indptr, indices, weights, deg, seed, kind, q, delta, gamma,
                      x, i, target, hi_cap, use_heuristic, t0, last_dx)
    while hi - lo > eps:
        mid = 0.5 * (lo + hi)
        if residual_at(indptr, indices, weights, deg, seed, kind, q, delta,
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
        upd = weights[ptr] * (deriv(kind, q, delta, x[j] - xi_old)
                              - deriv(kind, q, delta, x[j] - xi_old - dx)) / gamma
        g[j] = g[j] + upd
        l1 += upd
        if not inq[j] and g[j] > kappa * deg[j]:
            queue[imeta[1]] = j
            imeta[1] = (imeta[1] + 1) % cap
            inq[j] = 1
    gi_new = residual_at(indptr, indices, weights, deg, seed, kind, q, delta,
                         gamma, x, i, x[i])
    l1 += gi_new - g[i]
    g[i] = gi_new
    if not inq[i] and gi_new > kappa * deg[i]:
        queue[imeta[1]] = i
        imeta[1] = (imeta[1] + 1) % cap
        inq[i] = 1
    last_dx[i] = dx
    fmeta[0] = fmeta[0] + deg[i]
    fmeta[1] = l1
    imeta[2] = imeta[2] + 1
    return dx


def drain(indptr, indices, weights, deg, seed, kind, q, delta,
          gamma, kappa, rho, eps, use_heuristic, t0, max_pushes,
          x, g, last_dx, queue, inq, imeta, fmeta):
    """Process the violation queue FIFO until empty or the push budget runs out.

    Returns 1 if the queue drained (solution satisfies the stopping rule),
    0 if max_pushes was reached first.
    """
    cap = len(queue)
    while imeta[0] != imeta[1]:
        if imeta[2] >= max_pushes:
            return 0
        i = queue[imeta[0]]
        imeta[0] = (imeta[0] + 1) % cap
        inq[i] = 0
        if g[i] <= kappa * deg[i]:
            continue
        push_once(indptr, indices, weights, deg, seed, kind, q, delta,
                  gamma, kappa, rho, eps, use_heuristic, t0, i,
                  x, g, last_dx, queue, inq, imeta, fmeta)
    return 1


def _stationarity(indptr, indices, weights, deg, seed, kind, q, delta,
                  gamma, kappa, x, i, t):
    """Increasing function of t whose root is the 1-D coordinate optimum."""
    acc = 0.0
    for ptr in range(indptr[i], indptr[i + 1]):
        acc += weights[ptr] * deriv(kind, q, delta, t - x[indices[ptr]])
    e = 1.0 if seed[i] else 0.0
    return acc + gamma * deg[i] * deriv(kind, q, delta, t - e) + kappa * gamma * deg[i]


def _oracle_viol(indptr, indices, weights, deg, seed, kind, q, delta,
                 gamma, kappa, x):
    """Worst first-order optimality violation of the current iterate."""
    n = len(deg)
    viol = 0.0
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


def oracle_run(indptr, indices, weights, deg, seed, kind, q, delta,
               gamma, kappa, tol, coord_tol, max_sweeps, x, out):
    """Cyclic exact coordinate minimization with per-coordinate bisection.

    Sweeps ascending node ids; each coordinate moves to the root of its
    stationarity condition (or to 0 when the root is outside).  Converges
    when the measured optimality violation is within tol; gives up early
    when the violation stops improving (double-precision floor).  Writes
    [sweeps, converged, violation] to out.
    """
    n = len(deg)
    ftol = 0.5 * gamma * tol
    skip_tol = 0.25 * gamma * tol
    sweeps = 0
    converged = 0
    viol = float("inf")
    stalled = 0
    while sweeps < max_sweeps:
        sweeps += 1
        max_move = 0.0
        for i in range(n):
            fxi = _stationarity(indptr, indices, weights, deg, seed, kind, q, delta,
                                gamma, kappa, x, i, x[i])
            if x[i] == 0.0:
                if fxi >= 0.0:
                    continue
                f0 = fxi
            else:
                if fabs(fxi) <= skip_tol:
                    continue
                f0 = _stationarity(indptr, indices, weights, deg, seed, kind, q, delta,
                                   gamma, kappa, x, i, 0.0)
            if f0 >= 0.0:
                xi_new = 0.0
            else:
                lo = 0.0
                hi = 1.0
                while True:
                    mid = 0.5 * (lo + hi)
                    if mid <= lo or mid >= hi:
                        break
                    fm = _stationarity(indptr, indices, weights, deg, seed, kind, q,
                                       delta, gamma, kappa, x, i, mid)
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
    if not converged:
        viol = _oracle_viol(indptr, indices, weights, deg, seed, kind, q,
                            delta, gamma, kappa, x)
    out[0] = float(sweeps)
    out[1] = float(converged)
    out[2] = viol
