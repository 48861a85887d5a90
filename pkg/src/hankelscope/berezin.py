"""Normalized reproducing kernels and Berezin transforms.

The normalized kernel at a point of a product domain is a tensor product of
per-factor vectors, and every monomial operator is a tensor product of
per-factor weighted shifts (see :mod:`hankelscope.operators`).  The quadratic
form <T k_z, k_z> therefore splits into a sum, over pairs of symbol terms, of
products of one-dimensional sums.  That keeps kernel windows of thousands of
indices per factor cheap, which is where boundary behaviour is visible.

A dense route (``method="dense"``) assembles the Hankel-product matrix on the
kernel window and evaluates c^* M c directly; it exists for cross-checks on
small windows.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .domains import (FactorDomain, ProductDomain, _smallest_start, kernel_diagonal,
                      log_basis_norm_sq, negative_tail_bound, positive_tail_bound,
                      series_cutoffs)
from .errors import DomainError, KernelWindowCapError
from .operators import Window, hankel_product_matrix, shift_log_weights, toeplitz_matrix
from .symbols import LaurentSymbol

#: per-factor cap on kernel-window length (per side on annulus factors)
WINDOW_CAP = 20000
DEFAULT_TOL = 1e-8


# ---------------------------------------------------------------------------
# kernel vectors


@dataclass(frozen=True, eq=False)
class FactorKernel:
    """Truncated normalized kernel of one factor.

    c_m = conj(e_m(z)) / sqrt(K(z, z)) on the window, rescaled to unit norm.
    ``tail_bound`` bounds the mass of the untruncated kernel outside the window.
    """

    factor: FactorDomain
    z: complex
    lo: int
    hi: int
    log_abs: np.ndarray  # log |c_m|, m = lo..hi
    tail_bound: float
    capped: bool

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def coeffs(self) -> np.ndarray:
        m = self.indices
        return np.exp(self.log_abs) * np.exp(-1j * m * np.angle(self.z))


def _disk_tail(s: float, hi: int) -> float:
    # sum_{m > hi} (1 - s)^2 (m + 1) s^m
    big = hi + 1
    return s**big * (big + 1 - big * s)


def _unit_norm(log_abs: np.ndarray) -> np.ndarray:
    # rescale so the truncated vector has norm exactly 1
    top = float(np.max(log_abs))
    return log_abs - top - 0.5 * math.log(float(np.sum(np.exp(2.0 * (log_abs - top)))))


@functools.lru_cache(maxsize=4096)
def factor_kernel(factor: FactorDomain, z: complex, tol: float, cap: int = WINDOW_CAP,
                  extra: int = 0) -> FactorKernel:
    """Window and coefficients of the normalized kernel of one factor at ``z``.

    The window is the smallest one whose discarded mass is below ``tol``,
    widened by ``extra`` indices on each open side.  If that exceeds ``cap``
    the window is clamped and ``capped`` is set.
    """
    z = complex(z)
    if not factor.contains(z):
        raise DomainError(f"{z!r} is not interior to {factor}")
    s = abs(z) ** 2
    if factor.is_disk:
        if s == 0.0:
            return FactorKernel(factor, z, 0, 0, np.zeros(1), 0.0, False)
        hi = _smallest_start(lambda h: _disk_tail(s, h), tol, cap, first=0)
        capped = hi > cap - 1
        hi = min(hi + extra, cap - 1)
        m = np.arange(0, hi + 1)
        log_abs = math.log1p(-s) + 0.5 * np.log(m + 1.0) + m * math.log(abs(z))
        return FactorKernel(factor, z, 0, hi, _unit_norm(log_abs), _disk_tail(s, hi), capped)
    k_diag = kernel_diagonal(factor, z)
    lo, hi, tail, capped = series_cutoffs(factor, s, tol * k_diag, cap)
    if not capped:
        lo = max(lo - extra, -cap + 1)
        hi = min(hi + extra, cap)
        tail = positive_tail_bound(factor, hi + 1, s)
        tail += negative_tail_bound(factor, 1 - lo, s)
    m = np.arange(lo, hi + 1)
    log_abs = 0.5 * (log_basis_norm_sq(factor, m) + m * math.log(s) - math.log(k_diag))
    return FactorKernel(factor, z, lo, hi, _unit_norm(log_abs), tail / k_diag, capped)


@dataclass(frozen=True)
class KernelVector:
    """Normalized Bergman kernel at a point, truncated to a window.

    Stored in product form; :attr:`coeffs` expands it into the flat vector
    indexed by the window's lexicographic enumeration.
    """

    point: tuple[complex, ...]
    factors: tuple[FactorKernel, ...]

    @property
    def window(self) -> Window:
        return Window(tuple((fk.lo, fk.hi) for fk in self.factors))

    @property
    def tail_bound(self) -> float:
        """Upper bound on the normalized kernel's mass outside the window."""
        return float(-math.expm1(sum(math.log1p(-min(fk.tail_bound, 1.0)) for fk in self.factors)))

    @property
    def capped(self) -> bool:
        return any(fk.capped for fk in self.factors)

    @property
    def coeffs(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for fk in self.factors:
            out = np.kron(out, fk.coeffs)
        return out


def _as_point(domain: ProductDomain, z) -> tuple[complex, ...]:
    if np.ndim(z) == 0:
        z = (z,)
    z = tuple(complex(zi) for zi in z)
    if len(z) != domain.n:
        raise DomainError(f"point has {len(z)} coordinates, domain has {domain.n}")
    for f, zi in zip(domain.factors, z):
        if not f.contains(zi):
            raise DomainError(f"coordinate {zi!r} is not interior to {f}")
    return z


def _kernel(domain: ProductDomain, z, tol: float, cap: int, extra: int) -> KernelVector:
    z = _as_point(domain, z)
    if tol <= 0:
        raise DomainError("tol must be positive")
    per = tol / domain.n
    return KernelVector(z, tuple(factor_kernel(f, zi, per, cap, extra)
                                 for f, zi in zip(domain.factors, z)))


def kernel_vector(domain: ProductDomain, z, tol: float = DEFAULT_TOL, cap: int = WINDOW_CAP,
                  extra: int = 0) -> KernelVector:
    """Truncated normalized kernel at ``z`` with discarded mass below ``tol``.

    Raises :class:`KernelWindowCapError` (carrying the achievable bound) when
    ``z`` is too close to the boundary for ``tol`` under the window cap.
    """
    kv = _kernel(domain, z, tol, cap, extra)
    if kv.capped:
        raise KernelWindowCapError(
            f"kernel window cap {cap} reached at {kv.point}; achievable mass bound "
            f"{kv.tail_bound:.3g} > tol {tol:g}", achievable=kv.tail_bound)
    return kv


# ---------------------------------------------------------------------------
# one-factor quadratic forms


@functools.lru_cache(maxsize=65536)
def _form(fk: FactorKernel, steps: tuple[tuple[int, int], ...]) -> complex:
    """c^* X c on one factor for X = T_{steps[-1]} ... T_{steps[0]} (monomial shifts).

    Intermediate indices range over the full index set; only the input and
    output index are restricted to the kernel window.
    """
    m = fk.indices
    logw = np.zeros(m.shape)
    valid = np.ones(m.shape, dtype=bool)
    cur = m
    for a, b in steps:
        cur, lw, ok = shift_log_weights(fk.factor, a, b, cur)
        valid &= ok
        logw = logw + np.where(ok, lw, 0.0)
    d = int(sum(a - b for a, b in steps))
    pos = cur - fk.lo
    valid &= (pos >= 0) & (pos < m.size)
    if not np.any(valid):
        return 0j
    idx = np.nonzero(valid)[0]
    total = float(np.sum(np.exp(fk.log_abs[idx] + fk.log_abs[pos[idx]] + logw[idx])))
    return total * complex(np.exp(1j * d * np.angle(fk.z))) if d else complex(total)


def _product_form(kv: KernelVector, keys: Sequence[tuple]) -> complex:
    """prod_i c_i^* (T^i_{keys[-1]} ... T^i_{keys[0]}) c_i for monomial exponent keys."""
    out = 1.0 + 0j
    for i, fk in enumerate(kv.factors):
        out *= _form(fk, tuple(key[i] for key in keys))
        if out == 0:
            break
    return out


def _conj_key(key):
    return tuple((b, a) for a, b in key)


def _factored_hankel(phi: LaurentSymbol, psi: LaurentSymbol, kv: KernelVector) -> complex:
    total = 0j
    for ks, cs in phi.items():
        for kt, ct in psi.items():
            kt_bar = _conj_key(kt)
            prod_key = tuple((a1 + a2, b1 + b2) for (a1, b1), (a2, b2) in zip(ks, kt_bar))
            direct = _product_form(kv, [prod_key])
            chained = _product_form(kv, [ks, kt_bar])
            total += ct.conjugate() * cs * (direct - chained)
    return total


def _factored_toeplitz(f: LaurentSymbol, kv: KernelVector) -> complex:
    return sum((c * _product_form(kv, [k]) for k, c in f.items()), 0j)


# ---------------------------------------------------------------------------
# Berezin transforms


@dataclass(frozen=True)
class BerezinValue:
    value: complex
    tail_bound: float
    error_bound: float
    window: Window
    conclusive: bool


def _error_bound(norm_bound: float, tail: float) -> float:
    # the rescaled truncation u satisfies |u - k|^2 <= 2 * tail
    d = math.sqrt(2.0 * tail)
    return norm_bound * (2.0 * d + d * d)


def berezin_sample(phi: LaurentSymbol, psi: LaurentSymbol, z, tol: float = DEFAULT_TOL,
                   cap: int = WINDOW_CAP, method: str = "factored") -> BerezinValue:
    """B(H_psi^* H_phi)(z) with truncation data; never raises on the window cap."""
    if phi.domain != psi.domain:
        raise DomainError("phi and psi live on different domains")
    extra = max(phi.total_degree(), psi.total_degree())
    kv = _kernel(phi.domain, z, tol, cap, extra)
    if method == "factored":
        value = _factored_hankel(phi, psi, kv)
    elif method == "dense":
        c = kv.coeffs
        m = hankel_product_matrix(phi, psi, kv.window).entries
        value = complex(np.vdot(c, m @ c))
    else:
        raise ValueError(f"unknown method {method!r}")
    tail = kv.tail_bound
    return BerezinValue(value, tail, _error_bound(phi.sup_bound() * psi.sup_bound(), tail),
                        kv.window, not kv.capped)


def berezin_operator(phi: LaurentSymbol, psi: LaurentSymbol, z, tol: float = DEFAULT_TOL,
                     cap: int = WINDOW_CAP, method: str = "factored") -> complex:
    """Berezin transform of H_psi^* H_phi at ``z``.

    The absolute error is at most sup|phi| sup|psi| (2 sqrt(tol) + tol), with
    the sup norms bounded from the coefficients.
    """
    res = berezin_sample(phi, psi, z, tol, cap, method)
    if not res.conclusive:
        raise KernelWindowCapError(
            f"kernel window cap {cap} reached at {z}; achievable mass bound "
            f"{res.tail_bound:.3g}", achievable=res.tail_bound)
    return res.value


def berezin_function(f: LaurentSymbol, z, tol: float = DEFAULT_TOL, cap: int = WINDOW_CAP,
                     method: str = "factored") -> complex:
    """B(f)(z) = <T_f k_z, k_z> using the exact Toeplitz compression on the kernel window."""
    kv = kernel_vector(f.domain, z, tol, cap, extra=f.total_degree())
    if method == "dense":
        c = kv.coeffs
        return complex(np.vdot(c, toeplitz_matrix(f, kv.window).entries @ c))
    return _factored_toeplitz(f, kv)


# ---------------------------------------------------------------------------
# boundary profiles


@dataclass(frozen=True)
class PathSpec:
    """Straight radial approach toward the boundary.

    Factors with a nonzero entry in ``direction`` move along r_t * direction,
    r_t = 1 - 2^{-t} (outer circle); the others stay at ``anchor``.  On an
    annulus factor with ``inner`` set, the radius instead tends to rho.
    """

    anchor: tuple[complex, ...]
    direction: tuple[complex, ...]
    inner: tuple[bool, ...] | None = None

    def __post_init__(self):
        if len(self.anchor) != len(self.direction):
            raise DomainError("anchor and direction must have the same length")
        for d in self.direction:
            if d != 0 and abs(abs(d) - 1.0) > 1e-12:
                raise DomainError(f"directions must be 0 or unimodular, got {d!r}")
        if not any(d != 0 for d in self.direction):
            raise DomainError("path must move at least one coordinate")

    @classmethod
    def face(cls, domain: ProductDomain, j: int, anchor: Sequence[complex],
             xi: complex = 1.0) -> "PathSpec":
        """Approach the face z_j = xi (1-based ``j``) from ``anchor``."""
        direction = [0j] * domain.n
        direction[j - 1] = complex(xi)
        return cls(tuple(complex(a) for a in anchor), tuple(direction))

    @classmethod
    def distinguished(cls, domain: ProductDomain, xis: Sequence[complex]) -> "PathSpec":
        return cls(tuple(0j for _ in xis), tuple(complex(x) for x in xis))

    def radius(self, factor: FactorDomain, t: int, inner: bool = False) -> float:
        step = 2.0 ** (-t)
        if factor.is_disk:
            return 1.0 - step
        if inner:
            return factor.rho + (1.0 - factor.rho) * step / 2
        return 1.0 - (1.0 - factor.rho) * step / 2

    def point(self, domain: ProductDomain, t: int) -> tuple[complex, ...]:
        inner = self.inner or (False,) * domain.n
        return tuple(
            a if d == 0 else self.radius(f, t, inn) * d
            for f, a, d, inn in zip(domain.factors, self.anchor, self.direction, inner))

    def to_json(self) -> dict:
        out = {"anchor": [[a.real, a.imag] for a in map(complex, self.anchor)],
               "direction": [[d.real, d.imag] for d in map(complex, self.direction)]}
        if self.inner:
            out["inner"] = list(self.inner)
        return out


@dataclass(frozen=True)
class ProfileSample:
    t: int
    value: complex
    window: Window
    tail_bound: float
    error_bound: float
    conclusive: bool


@dataclass
class BerezinProfile:
    path: PathSpec
    tol: float
    samples: list[ProfileSample] = field(default_factory=list)

    def conclusive(self) -> list[ProfileSample]:
        return [s for s in self.samples if s.conclusive]

    def values(self, conclusive_only: bool = True) -> np.ndarray:
        src = self.conclusive() if conclusive_only else self.samples
        return np.array([s.value for s in src], dtype=complex)

    def to_csv(self, fmt: str = ".12g") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "re", "im", "tail_bound", "window", "conclusive"])
        for s in self.samples:
            w.writerow([s.t, format(s.value.real, fmt), format(s.value.imag, fmt),
                        format(s.tail_bound, fmt), "x".join(str(d) for d in s.window.shape),
                        int(s.conclusive)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "path": self.path.to_json(),
            "tol": self.tol,
            "samples": [{"t": s.t, "re": s.value.real, "im": s.value.imag,
                         "tail_bound": s.tail_bound, "error_bound": s.error_bound,
                         "window": list(s.window.shape), "conclusive": s.conclusive}
                        for s in self.samples],
        }


def boundary_profile(phi: LaurentSymbol, psi: LaurentSymbol, path: PathSpec, steps: int = 10,
                     tol: float = DEFAULT_TOL, cap: int = WINDOW_CAP) -> BerezinProfile:
    """Sample B(H_psi^* H_phi) at t = 1..steps along ``path``.

    Samples whose kernel window hit the cap are kept and flagged inconclusive.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    prof = BerezinProfile(path, tol)
    for t in range(1, steps + 1):
        z = path.point(phi.domain, t)
        r = berezin_sample(phi, psi, z, tol, cap)
        prof.samples.append(ProfileSample(t, r.value, r.window, r.tail_bound, r.error_bound,
                                          r.conclusive))
    return prof
