"""Independent numerical oracles.

Nothing here calls the closed-form moments or shift weights of the package.
Integrals are done by quadrature (trapezoid in angle, Gauss-Legendre in
radius) and kernels by direct summation.
"""

import math

import numpy as np


def evaluate(f, *z):
    """Sum of c * prod z_i^a_i conj(z_i)^b_i over the terms of f."""
    out = 0j
    for key, c in f.items():
        t = c
        for zi, (a, b) in zip(z, key):
            t = t * zi**a * np.conj(zi) ** b
        out = out + t
    return out


def polar_grid(rho, n_angle=32, n_radius=32):
    """Nodes and weights for  integral over {rho < |z| < 1} of g dA."""
    x, wx = np.polynomial.legendre.leggauss(n_radius)
    lo = rho
    r = lo + (1 - lo) * (x + 1) / 2
    wr = wx * (1 - lo) / 2
    theta = 2 * np.pi * np.arange(n_angle) / n_angle
    z = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
    w = (wr[:, None] * r[:, None] * np.full((1, n_angle), 2 * np.pi / n_angle)).ravel()
    return z, w


def quad_moment(rho, p, q, n_angle=32, n_radius=40):
    z, w = polar_grid(rho, n_angle, n_radius)
    return complex(np.sum(w * z**p * np.conj(z) ** q))


def factor_rho(factor):
    return 0.0 if factor.is_disk else factor.rho


def basis_columns(factor, indices, z, w):
    """Columns z^m normalised by quadrature, shape (points, len(indices))."""
    cols = np.stack([z**m for m in indices], axis=1)
    norms = np.sqrt(np.sum(w[:, None] * np.abs(cols) ** 2, axis=0))
    return cols / norms


def quad_toeplitz(f, window, n_angle=24, n_radius=24):
    """Toeplitz compression  <f e_m, e_n>  by tensor-product quadrature.

    The symbol is evaluated on the full product grid, so the integrand is not
    assumed to factor.  Supports one or two factors.
    """
    dom = f.domain
    grids, blocks = [], []
    for i, fac in enumerate(dom.factors):
        z, w = polar_grid(factor_rho(fac), n_angle, n_radius)
        idx = window.axis(i)
        e = basis_columns(fac, idx, z, w)
        grids.append(z)
        # A[g, n, m] = w_g conj(e_n(g)) e_m(g)
        blocks.append(w[:, None, None] * np.conj(e)[:, :, None] * e[:, None, :])
    if dom.n == 1:
        vals = evaluate(f, grids[0])
        return np.einsum("g,gnm->nm", vals, blocks[0])
    if dom.n == 2:
        z1, z2 = np.meshgrid(grids[0], grids[1], indexing="ij")
        vals = evaluate(f, z1, z2)
        out = np.einsum("gac,gh,hbd->abcd", blocks[0], vals, blocks[1], optimize=True)
        s1, s2 = window.shape
        return out.reshape(s1 * s2, s1 * s2)
    raise ValueError("quadrature oracle supports at most two factors")


def exact_moment(factor, p, q):
    """Direct textbook moment, written independently of the package."""
    if p != q:
        return 0.0
    if factor.is_disk:
        return math.pi / (p + 1)
    if p == -1:
        return -2 * math.pi * math.log(factor.rho)
    return math.pi * (1 - factor.rho ** (2 * p + 2)) / (p + 1)


def _project(factor, p, q):
    """Bergman projection of z^p conj(z)^q on one factor: (coefficient, power) or None."""
    k = p - q
    if factor.is_disk and k < 0:
        return None
    return exact_moment(factor, p, p) / exact_moment(factor, k, k), k


def _inner(dom, u, v):
    """<u, v> for u, v given as lists of (coeff, ((p_i, q_i), ...))."""
    total = 0j
    for cu, ku in u:
        for cv, kv in v:
            term = cu * np.conj(cv)
            for fac, (p, q), (pp, qq) in zip(dom.factors, ku, kv):
                # z^p zb^q conj(z^pp zb^qq) = z^(p+qq) zb^(q+pp)
                term *= exact_moment(fac, p + qq, q + pp)
                if term == 0:
                    break
            total += term
    return total


def _times_basis(dom, f, m):
    """f * e_m as a list of (coeff, exponent pairs)."""
    norm = 1.0
    for fac, mi in zip(dom.factors, m):
        norm /= math.sqrt(exact_moment(fac, mi, mi))
    out = []
    for key, c in f.items():
        out.append((c * norm, tuple((a + mi, b) for (a, b), mi in zip(key, m))))
    return out


def _projected(dom, u):
    out = []
    for c, key in u:
        coeff, pure = c, []
        for fac, (p, q) in zip(dom.factors, key):
            res = _project(fac, p, q)
            if res is None:
                coeff = 0
                break
            coeff *= res[0]
            pure.append((res[1], 0))
        if coeff != 0:
            out.append((coeff, tuple(pure)))
    return out


def gram_hankel(phi, psi, window):
    """<H_phi e_m, H_psi e_n>  =  <phi e_m, psi e_n> - <P phi e_m, P psi e_n>."""
    dom = phi.domain
    idx = window.indices()
    out = np.zeros((len(idx), len(idx)), dtype=complex)
    for c, m in enumerate(idx):
        u = _times_basis(dom, phi, m)
        pu = _projected(dom, u)
        for r, n in enumerate(idx):
            v = _times_basis(dom, psi, n)
            out[r, c] = _inner(dom, u, v) - _inner(dom, pu, _projected(dom, v))
    return out


def annulus_kernel_sum(rho, z, w, n_max=200):
    n = np.arange(-n_max, n_max + 1)
    mom = np.array([exact_moment_annulus(rho, k) for k in n])
    return complex(np.sum((z * np.conj(w)) ** n.astype(float) / mom))


def exact_moment_annulus(rho, n):
    if n == -1:
        return -2 * math.pi * math.log(rho)
    return math.pi * (1 - rho ** (2 * n + 2)) / (n + 1)


def _factor_kernel_sq(factor, grid, z):
    """|k_z(w)|^2 on one factor, from closed form (disk) or direct series (annulus)."""
    if factor.is_disk:
        kzz = 1 / (math.pi * (1 - abs(z) ** 2) ** 2)
        kwz = 1 / (math.pi * (1 - grid * np.conj(z)) ** 2)
        return np.abs(kwz) ** 2 / kzz
    n = np.arange(-120, 121)
    mom = np.array([exact_moment_annulus(factor.rho, k) for k in n])
    kzz = np.sum(abs(z) ** (2 * n.astype(float)) / mom)
    kwz = np.sum((grid[:, None] * np.conj(z)) ** n.astype(float)[None, :] / mom[None, :], axis=1)
    return np.abs(kwz) ** 2 / kzz


def quad_berezin_function(f, z, n_angle=48, n_radius=48):
    """integral of f |k_z|^2 dA by quadrature; one or two factors."""
    dom = f.domain
    grids, weights = [], []
    for fac, zi in zip(dom.factors, z):
        g, w = polar_grid(factor_rho(fac), n_angle, n_radius)
        grids.append(g)
        weights.append(w * _factor_kernel_sq(fac, g, zi))
    if dom.n == 1:
        return complex(np.sum(weights[0] * evaluate(f, grids[0])))
    z1, z2 = np.meshgrid(grids[0], grids[1], indexing="ij")
    return complex(weights[0] @ evaluate(f, z1, z2) @ weights[1])
