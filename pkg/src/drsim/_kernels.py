"""Numba kernels for the interaction-picture master-equation right-hand side.

The derivative is assembled as N + N^dag with N = -i A sigma (plus half of
the sandwich term c sigma c^dag folded in), valid because sigma stays
Hermitian between Hermitization guards.  ``coupling_pre`` produces the
cavity-local coupling product in one fused pass into a caller-owned buffer;
the qubit contraction is left to BLAS in the caller and ``assemble`` folds
everything together with the conjugate-transpose term, recomputing the
cavity-local drift on the fly from the Hermitian symmetry of sigma to avoid
a second large intermediate.

The remaining kernels fuse the hot vector passes of the embedded
Runge-Kutta step (stage combination, solution update plus error norm,
Hermitization) so each large array is streamed through memory once.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def coupling_pre(sigma, sq, u_l, shift, b_out):
    """b_out = (u_l c^dag + u_l^* c + shift) sigma, qubit factor applied later."""
    q = sigma.shape[0]
    nc = sigma.shape[1]
    u_lc = np.conj(u_l)
    for a in range(q):
        for i in range(nc):
            for b in range(q):
                for j in range(nc):
                    s = sigma[a, i, b, j]
                    if i > 0:
                        up = sq[i] * sigma[a, i - 1, b, j]
                    else:
                        up = 0.0 + 0.0j
                    if i < nc - 1:
                        dn = sq[i + 1] * sigma[a, i + 1, b, j]
                    else:
                        dn = 0.0 + 0.0j
                    b_out[a, i, b, j] = u_l * up + u_lc * dn + shift * s
    return b_out


@numba.njit(cache=True)
def assemble(sigma, m_arr, sq, mu_t, delta_p, kappa, out):
    """out = N + N^dag for Hermitian sigma, upper triangle mirrored.

    N = -i (delta_p n + mu_t c^dag + mu_t^* c) sigma + (kappa/2) c sigma c^dag
        - i m,
    where m is the qubit-contracted coupling product.  The transposed drift
    entries are recomputed from sigma's Hermitian symmetry, and the output
    is built exactly Hermitian so downstream real-coefficient stage algebra
    preserves Hermiticity to the last bit.
    """
    q = sigma.shape[0]
    nc = sigma.shape[1]
    mu_c = np.conj(mu_t)
    delta_c = np.conj(delta_p)
    for a in range(q):
        for i in range(nc):
            for b in range(a, q):
                j0 = i if b == a else 0
                for j in range(j0, nc):
                    s = sigma[a, i, b, j]
                    if i > 0:
                        up = sq[i] * sigma[a, i - 1, b, j]
                    else:
                        up = 0.0 + 0.0j
                    if i < nc - 1:
                        dn = sq[i + 1] * sigma[a, i + 1, b, j]
                    else:
                        dn = 0.0 + 0.0j
                    if i < nc - 1 and j < nc - 1:
                        sand = kappa * sq[i + 1] * sq[j + 1] * sigma[a, i + 1, b, j + 1]
                    else:
                        sand = 0.0 + 0.0j
                    g_ab = -1j * (delta_p * i * s + mu_t * up + mu_c * dn)
                    # conj(g_ba): sigma[b, j + d, a, i] = conj(sigma[a, i, b, j + d])
                    if j > 0:
                        up_t = sq[j] * sigma[a, i, b, j - 1]
                    else:
                        up_t = 0.0 + 0.0j
                    if j < nc - 1:
                        dn_t = sq[j + 1] * sigma[a, i, b, j + 1]
                    else:
                        dn_t = 0.0 + 0.0j
                    g_ba_c = 1j * (delta_c * j * s + mu_c * up_t + mu_t * dn_t)
                    val = (
                        g_ab
                        + g_ba_c
                        + sand
                        - 1j * m_arr[a, i, b, j]
                        + np.conj(-1j * m_arr[b, j, a, i])
                    )
                    out[a, i, b, j] = val
                    out[b, j, a, i] = np.conj(val)
    return out


@numba.njit(cache=True)
def scale_add(base, vec, h, out):
    """out = base + h * vec, one streamed pass."""
    n = base.size
    for i in range(n):
        out[i] = base[i] + h * vec[i]
    return out


@numba.njit(cache=True)
def finalize_step(sol, errc, y, h, atol, rtol, y_new):
    """y_new = y + h sol; returns weighted RMS of h errc against y, y_new."""
    n = y.size
    acc = 0.0
    h2 = h * h
    for i in range(n):
        yn = y[i] + h * sol[i]
        y_new[i] = yn
        a0 = y[i].real * y[i].real + y[i].imag * y[i].imag
        a1 = yn.real * yn.real + yn.imag * yn.imag
        big = a0 if a0 > a1 else a1
        e2 = errc[i].real * errc[i].real + errc[i].imag * errc[i].imag
        scale = atol + rtol * np.sqrt(big)
        acc += h2 * e2 / (scale * scale)
    return np.sqrt(acc / n)


@numba.njit(cache=True)
def hermitize(mat):
    """Symmetrize a square matrix in place; returns the Hermiticity defect."""
    n = mat.shape[0]
    defect = 0.0
    for p in range(n):
        for q in range(p, n):
            a = mat[p, q]
            b = np.conj(mat[q, p])
            d = abs(a - b)
            if d > defect:
                defect = d
            avg = 0.5 * (a + b)
            mat[p, q] = avg
            mat[q, p] = np.conj(avg)
    return defect


@numba.njit(cache=True)
def qubit_reduce(sigma, out_qq):
    """Partial trace over the cavity: out[a, b] = sum_i sigma[a, i, b, i]."""
    q = sigma.shape[0]
    nc = sigma.shape[1]
    for a in range(q):
        for b in range(q):
            acc = 0.0 + 0.0j
            for i in range(nc):
                acc += sigma[a, i, b, i]
            out_qq[a, b] = acc
    return out_qq


@numba.njit(cache=True)
def trace_c(sigma, sq):
    """Tr(sigma (I x c)) = sum_{a, i>=1} sqrt(i) sigma[a, i, a, i-1]."""
    q = sigma.shape[0]
    nc = sigma.shape[1]
    acc = 0.0 + 0.0j
    for a in range(q):
        for i in range(1, nc):
            acc += sq[i] * sigma[a, i, a, i - 1]
    return acc
