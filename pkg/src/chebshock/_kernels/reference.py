"""Pure-numpy fallback for the hot evaluation kernels.

All three kernels are backward/stable recurrences vectorized over the
evaluation points; the compiled extension in ``_chebcore.pyx`` implements
the same loops in C. Either backend may be active, see ``_kernels.__init__``.
"""

import numpy as np


def cheb_eval(coeffs, x):
    """Evaluate sum_k c_k T_k(x) by the backward (Clenshaw) recurrence."""
    c = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(len(c) - 1, 0, -1):
        b1, b2 = c[k] + 2.0 * x * b1 - b2, b1
    return c[0] + x * b1 - b2


def cheb_der_eval_many(coeffs, x):
    """Evaluate rows of sum_{k>=1} C_{r,k} T'_k(x) for all r at once.

    Uses T'_k = k U_{k-1} and Clenshaw on the Chebyshev-U recurrence;
    for the U basis the recurrence tail is the result itself.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    x = np.asarray(x, dtype=float)
    nrows, ncoef = c.shape
    b1 = np.zeros((nrows,) + x.shape)
    b2 = np.zeros_like(b1)
    two_x = 2.0 * x
    for m in range(ncoef - 2, -1, -1):
        b1, b2 = (m + 1.0) * c[:, m + 1, None] + two_x * b1 - b2, b1
    return b1.reshape((nrows,) + x.shape)


def cheb_der_eval(coeffs, x):
    """Evaluate sum_{k>=1} c_k T'_k(x) for a single coefficient vector."""
    return cheb_der_eval_many(np.asarray(coeffs, dtype=float)[None, :], x)[0]


def hermite_rho(p, y):
    """Hermite-Gaussian mollifier profile rho_p(y).

    rho_p(y) = exp(-y^2) * sum_{j=0..p} gamma_j H_{2j}(y) with
    gamma_j = (-1)^j / (4^j j! sqrt(pi)). Evaluated through normalized
    Hermite functions so intermediate magnitudes stay bounded for large p.
    """
    y = np.asarray(y, dtype=float)
    envelope = np.exp(-0.5 * y * y)
    # normalized Hermite functions: h_0 = pi^{-1/4} e^{-y^2/2}
    h_prev = envelope / np.pi**0.25
    acc = h_prev / np.pi**0.25  # a_0 * h_0 with a_0 = pi^{-1/4}
    if p > 0:
        h_cur = np.sqrt(2.0) * y * h_prev
        a = 1.0 / np.pi**0.25
        m = 1
        for j in range(1, p + 1):
            # advance to h_{2j}
            while m < 2 * j:
                h_prev, h_cur = h_cur, (
                    np.sqrt(2.0 / (m + 1.0)) * y * h_cur
                    - np.sqrt(m / (m + 1.0)) * h_prev
                )
                m += 1
            a *= -np.sqrt((2.0 * j - 1.0) / (2.0 * j))
            acc = acc + a * h_cur
    return envelope * acc
