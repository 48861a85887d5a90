"""One-variable factor domains, their monomial bases and Bergman kernels.

Every factor has outer radius 1.  The disk uses the basis z^m, m >= 0; the
annulus {rho < |z| < 1} uses z^m for every integer m.  Monomials are mutually
orthogonal on both, so the only numbers needed are the diagonal moments

    mu(p) = int |z|^{2p} dV

which are available in closed form.  Everything downstream (Toeplitz entries,
Hankel products, Berezin transforms) is built from these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, SeriesCapError

DISK = "disk"
ANNULUS = "annulus"

#: default cap on the number of terms summed for an annulus kernel
KERNEL_TERM_CAP = 10**6


@dataclass(frozen=True)
class FactorDomain:
    """A factor of a product domain: the unit disk or the annulus rho < |z| < 1."""

    kind: str
    rho: float | None = None

    def __post_init__(self):
        if self.kind == DISK:
            if self.rho is not None:
                raise DomainError("disk factor takes no inner radius")
        elif self.kind == ANNULUS:
            if self.rho is None or not (0.0 < float(self.rho) < 1.0):
                raise DomainError(f"annulus requires 0 < rho < 1, got {self.rho!r}")
            object.__setattr__(self, "rho", float(self.rho))
        else:
            raise DomainError(f"unknown factor kind {self.kind!r}")

    @classmethod
    def disk(cls) -> "FactorDomain":
        return cls(DISK)

    @classmethod
    def annulus(cls, rho: float) -> "FactorDomain":
        return cls(ANNULUS, rho)

    @property
    def is_disk(self) -> bool:
        return self.kind == DISK

    @property
    def min_index(self) -> int | None:
        """Smallest basis index, or None when the index set is all of Z."""
        return 0 if self.is_disk else None

    def valid_index(self, m) -> bool | np.ndarray:
        if self.is_disk:
            return np.asarray(m) >= 0 if np.ndim(m) else m >= 0
        return np.ones(np.shape(m), dtype=bool) if np.ndim(m) else True

    def contains(self, z: complex) -> bool:
        r = abs(z)
        if self.is_disk:
            return r < 1.0
        return self.rho < r < 1.0

    def monomial_sup(self, power: int) -> float:
        """sup of |z|^power over the closed factor."""
        if self.is_disk:
            if power < 0:
                raise DomainError("negative power on a disk factor")
            return 1.0
        return max(1.0, self.rho**power)

    def to_json(self) -> dict:
        if self.is_disk:
            return {"type": DISK}
        return {"type": ANNULUS, "rho": self.rho}

    @classmethod
    def from_json(cls, obj: dict) -> "FactorDomain":
        if not isinstance(obj, dict) or "type" not in obj:
            raise DomainError(f"factor must be an object with a 'type' field, got {obj!r}")
        kind = obj["type"]
        if kind == DISK:
            return cls.disk()
        if kind == ANNULUS:
            if "rho" not in obj:
                raise DomainError("annulus factor needs 'rho'")
            return cls.annulus(obj["rho"])
        raise DomainError(f"unknown factor type {kind!r}")

    def __str__(self):
        return "D" if self.is_disk else f"A({self.rho:g})"


@dataclass(frozen=True)
class ProductDomain:
    """Ordered product of factor domains."""

    factors: tuple[FactorDomain, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if len(factors) < 1:
            raise DomainError("a product domain needs at least one factor")
        for f in factors:
            if not isinstance(f, FactorDomain):
                raise DomainError(f"not a factor domain: {f!r}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def polydisk(cls, n: int) -> "ProductDomain":
        return cls(tuple(FactorDomain.disk() for _ in range(n)))

    @classmethod
    def of(cls, *factors: FactorDomain) -> "ProductDomain":
        return cls(tuple(factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def is_polydisk(self) -> bool:
        return all(f.is_disk for f in self.factors)

    def contains(self, z: Sequence[complex]) -> bool:
        return len(z) == self.n and all(f.contains(zi) for f, zi in zip(self.factors, z))

    def drop(self, j: int) -> "ProductDomain | None":
        """Domain with the factor at 0-based position ``j`` removed (None if nothing is left)."""
        rest = self.factors[:j] + self.factors[j + 1:]
        return ProductDomain(rest) if rest else None

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, obj: dict) -> "ProductDomain":
        if not isinstance(obj, dict) or not isinstance(obj.get("factors"), list):
            raise DomainError("domain must be an object with a 'factors' list")
        return cls(tuple(FactorDomain.from_json(f) for f in obj["factors"]))

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)


# ---------------------------------------------------------------------------
# moments and norms


def _check_exponent(factor: FactorDomain, p: int):
    if factor.is_disk and p < 0:
        raise DomainError(f"negative exponent {p} on a disk factor")


def moment(factor: FactorDomain, p: int, q: int) -> float:
    """Exact value of the integral of z^p conj(z)^q over ``factor``."""
    p, q = int(p), int(q)
    _check_exponent(factor, p)
    _check_exponent(factor, q)
    if p != q:
        return 0.0
    if factor.is_disk:
        return math.pi / (p + 1)
    rho = factor.rho
    if p == -1:
        return -2.0 * math.pi * math.log(rho)
    return math.pi * (1.0 - rho ** (2 * p + 2)) / (p + 1)


def log_moment(factor: FactorDomain, p) -> np.ndarray:
    """log of the diagonal moment mu(p), vectorised over integer ``p``.

    Stays finite for annulus exponents far into the negative range, where
    mu(p) itself overflows.
    """
    p = np.asarray(p, dtype=np.int64)
    if factor.is_disk:
        if np.any(p < 0):
            raise DomainError("negative exponent on a disk factor")
        return math.log(math.pi) - np.log((p + 1).astype(float))
    lr = math.log(factor.rho)
    k = (p + 1).astype(float)
    out = np.empty(p.shape, dtype=float)
    pos = k > 0
    neg = k < 0
    zero = ~(pos | neg)
    # k > 0: pi (1 - rho^{2k}) / k
    out[pos] = math.log(math.pi) + np.log(-np.expm1(2 * k[pos] * lr)) - np.log(k[pos])
    # k < 0: pi (rho^{2k} - 1) / |k|, with rho^{2k} huge
    kn = k[neg]
    out[neg] = math.log(math.pi) + 2 * kn * lr + np.log(-np.expm1(-2 * kn * lr)) - np.log(-kn)
    out[zero] = math.log(-2.0 * math.pi * lr)
    return out


def basis_norm(factor: FactorDomain, m: int) -> float:
    """Normalising constant N_m with e_m = N_m z^m of unit norm."""
    return 1.0 / math.sqrt(moment(factor, m, m))


def log_basis_norm_sq(factor: FactorDomain, m) -> np.ndarray:
    """log N_m^2, vectorised."""
    return -log_moment(factor, m)


# ---------------------------------------------------------------------------
# series tails


def weighted_geometric_tail(start: int, x: float) -> float:
    """sum_{n >= start} n x^n for 0 <= x < 1 and start >= 0 (closed form)."""
    if x == 0.0:
        return 0.0 if start > 0 else 0.0
    return x**start * (start - (start - 1) * x) / (1.0 - x) ** 2


def positive_tail_bound(factor: FactorDomain, start: int, x: float) -> float:
    """Upper bound for sum_{n >= start} N_n^2 x^n (start >= 0, 0 <= x < 1)."""
    # N_n^2 = (n+1) / (pi (1 - rho^{2n+2})) <= (n+1) / (pi c) for n >= start
    c = 1.0 if factor.is_disk else -math.expm1((2 * start + 2) * math.log(factor.rho))
    # sum_{n>=start} (n+1) x^n = x^{-1} sum_{j >= start+1} j x^j
    if x == 0.0:
        return 0.0
    return weighted_geometric_tail(start + 1, x) / (x * math.pi * c)


def negative_tail_bound(factor: FactorDomain, start: int, x: float) -> float:
    """Upper bound for sum_{n <= -start} N_n^2 x^n on the annulus (start >= 2, rho^2 < x)."""
    rho2 = factor.rho**2
    q = rho2 / x
    # N_{-k}^2 x^{-k} = (k-1) rho^{2k-2} / (pi (1 - rho^{2k-2})) x^{-k}
    #                <= (k-1) q^k / (rho^2 pi c),  c = 1 - rho^{2 start - 2}
    c = -math.expm1((2 * start - 2) * math.log(factor.rho))
    # sum_{k >= start} (k-1) q^k = q sum_{j >= start-1} j q^j
    return q * weighted_geometric_tail(start - 1, q) / (rho2 * math.pi * c)


def series_cutoffs(factor: FactorDomain, x: float, tol: float, cap: int):
    """Smallest index range [-neg, pos] whose discarded kernel-series mass is below ``tol``.

    ``x`` is |z conj(w)|.  Returns (lo, hi, tail_bound, capped).  When the cap
    is reached the range is clamped and ``capped`` is True.
    """
    capped = False
    # positive side: smallest hi with tail(hi+1) < tol / 2
    budget = tol / 2 if not factor.is_disk else tol
    hi = _smallest_start(lambda s: positive_tail_bound(factor, s, x), budget, cap) - 1
    if hi + 1 > cap:
        hi = cap
        capped = True
    tail = positive_tail_bound(factor, hi + 1, x)
    if factor.is_disk:
        return 0, hi, tail, capped
    s = _smallest_start(lambda s: negative_tail_bound(factor, s, x), budget, cap, first=2)
    if s > cap:
        s = cap
        capped = True
    lo = -(s - 1)
    tail += negative_tail_bound(factor, s, x)
    return lo, hi, tail, capped


def _smallest_start(bound, budget, cap, first=1):
    """Smallest s >= first with bound(s) < budget, found by doubling then bisection; cap+1 if none."""
    if bound(first) < budget:
        return first
    lo, hi = first, first
    while bound(hi) >= budget:
        lo = hi
        hi = max(1, 2 * hi)
        if hi > cap:
            if bound(cap) >= budget:
                return cap + 1
            hi = cap
            break
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) < budget:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# kernels


def _check_interior(factor: FactorDomain, z: complex, name: str):
    if not factor.contains(z):
        raise DomainError(f"{name} = {z!r} is not interior to {factor}")


def kernel_eval(factor: FactorDomain, z: complex, w: complex, tol: float = 1e-12,
                max_terms: int = KERNEL_TERM_CAP) -> complex:
    """Bergman kernel K(z, w) = sum_n e_n(z) conj(e_n(w)) of a factor.

    The disk uses the closed form 1 / (pi (1 - z conj(w))^2).  The annulus sums
    the bilateral series until an explicit geometric tail bound drops below
    ``tol``; :class:`SeriesCapError` is raised if that needs more than
    ``max_terms`` terms.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    z, w = complex(z), complex(w)
    _check_interior(factor, z, "z")
    _check_interior(factor, w, "w")
    u = z * w.conjugate()
    if factor.is_disk:
        return 1.0 / (math.pi * (1.0 - u) ** 2)
    x = abs(u)
    lo, hi, tail, capped = series_cutoffs(factor, x, tol, max_terms)
    if capped or hi - lo + 1 > max_terms:
        raise SeriesCapError(
            f"annulus kernel needs more than {max_terms} terms for tol={tol:g}", achievable=tail)
    n = np.arange(lo, hi + 1)
    logs = log_basis_norm_sq(factor, n) + n * math.log(x)
    terms = np.exp(logs) * np.exp(1j * n * np.angle(u))
    return complex(np.sum(terms))


def kernel_diagonal(factor: FactorDomain, z: complex, tol: float = 1e-14) -> float:
    """K(z, z) for a single factor (relative accuracy roughly ``tol`` on the annulus)."""
    z = complex(z)
    _check_interior(factor, z, "z")
    if factor.is_disk:
        return 1.0 / (math.pi * (1.0 - abs(z) ** 2) ** 2)
    # scale the absolute tolerance by a lower bound of the smallest-index term
    base = math.exp(-float(log_moment(factor, np.array([0]))[0]))
    return kernel_eval(factor, z, z, tol=tol * base).real
