"""Finite-window matrices of Toeplitz operators and Hankel products.

On every factor the Toeplitz operator of a monomial z^a conj(z)^b is a
weighted shift of the orthonormal basis,

    T e_m = w(m) e_{m+a-b},   w(m) = N_m N_{m+a-b} mu(a+m),

with w(m) = 0 when m + a - b falls outside the index set (the Bergman
projection on the disk).  A monomial on a product domain acts as the tensor
product of its per-factor shifts, so every matrix here is assembled from
Kronecker products of exactly known 1-D blocks.

The Hankel product H_psi^* H_phi is built from the semicommutator identity
T_{conj(psi) phi} - T_{conj(psi)} T_phi.  The inner sum of the product runs
over an enlarged window; since T_phi shifts indices by at most the symbol
degree, the compressed entries equal those of the infinite operator.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .domains import FactorDomain, ProductDomain, log_basis_norm_sq, log_moment
from .errors import DomainError, MarginError
from .symbols import LaurentSymbol


@dataclass(frozen=True)
class Window:
    """Per-factor closed index ranges [lo_i, hi_i] of the monomial basis."""

    ranges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ranges = tuple((int(lo), int(hi)) for lo, hi in self.ranges)
        for lo, hi in ranges:
            if lo > hi:
                raise DomainError(f"empty window range [{lo}, {hi}]")
        object.__setattr__(self, "ranges", ranges)

    @classmethod
    def uniform(cls, domain: ProductDomain, size: int, lo: int = 0) -> "Window":
        """``size`` consecutive indices starting at ``lo`` in every factor."""
        return cls(tuple((lo, lo + size - 1) for _ in domain.factors))

    @classmethod
    def centered(cls, domain: ProductDomain, half: int) -> "Window":
        """[0, 2*half] on disk factors, [-half, half] on annulus factors."""
        return cls(tuple((0, 2 * half) if f.is_disk else (-half, half) for f in domain.factors))

    @property
    def n(self) -> int:
        return len(self.ranges)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(hi - lo + 1 for lo, hi in self.ranges)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def axis(self, i: int) -> np.ndarray:
        lo, hi = self.ranges[i]
        return np.arange(lo, hi + 1)

    def indices(self) -> list[tuple[int, ...]]:
        """Multi-indices in the fixed lexicographic order (last factor fastest)."""
        return list(itertools.product(*(range(lo, hi + 1) for lo, hi in self.ranges)))

    def validate(self, domain: ProductDomain):
        if self.n != domain.n:
            raise DomainError(f"window has {self.n} ranges, domain has {domain.n} factors")
        for f, (lo, _) in zip(domain.factors, self.ranges):
            if f.is_disk and lo < 0:
                raise DomainError("disk window ranges must start at index >= 0")

    def enlarge(self, margin: int, domain: ProductDomain) -> "Window":
        """Grow every range by ``margin`` on both sides, clamping disk factors at 0."""
        out = []
        for f, (lo, hi) in zip(domain.factors, self.ranges):
            nlo = lo - margin
            if f.is_disk:
                nlo = max(nlo, 0)
            out.append((nlo, hi + margin))
        return Window(tuple(out))

    def offsets_in(self, outer: "Window") -> list[np.ndarray]:
        """Per-factor positions of this window's indices inside ``outer``."""
        return [np.arange(lo, hi + 1) - olo
                for (lo, hi), (olo, _) in zip(self.ranges, outer.ranges)]

    def to_json(self) -> list:
        return [list(r) for r in self.ranges]


@dataclass
class OperatorMatrix:
    """Dense compression of an operator to a window of the monomial basis."""

    window: Window
    entries: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.window.size
        if self.entries.shape != (d, d):
            raise ValueError(f"entries have shape {self.entries.shape}, window needs {(d, d)}")

    @property
    def dim(self) -> int:
        return self.window.size

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def to_csv(self, fmt: str = ".12g") -> str:
        """Nonzero entries as ``row,col,re,im`` lines (row and column are flat indices)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        rows, cols = np.nonzero(self.entries)
        for r, c in zip(rows, cols):
            v = self.entries[r, c]
            w.writerow([int(r), int(c), format(float(v.real), fmt), format(float(v.imag), fmt)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "dim": self.dim,
            "meta": self.meta,
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorMatrix":
        window = Window(tuple(tuple(r) for r in obj["window"]))
        entries = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
        return cls(window, entries.reshape(window.size, window.size), dict(obj.get("meta", {})))


# ---------------------------------------------------------------------------
# per-factor weighted shifts


def shift_log_weights(factor: FactorDomain, a: int, b: int, m: np.ndarray):
    """Target index, log-weight and validity of T_{z^a conj(z)^b} e_m on one factor."""
    m = np.asarray(m, dtype=np.int64)
    n = m + (a - b)
    valid = np.ones(m.shape, dtype=bool)
    if factor.is_disk:
        valid &= (m >= 0) & (n >= 0)
    logw = np.full(m.shape, -np.inf)
    if np.any(valid):
        mv, nv = m[valid], n[valid]
        logw[valid] = (0.5 * log_basis_norm_sq(factor, mv) + 0.5 * log_basis_norm_sq(factor, nv)
                       + log_moment(factor, mv + a))
    return n, logw, valid


def factor_block(factor: FactorDomain, a: int, b: int,
                 rows: Sequence[int] | np.ndarray, cols: Sequence[int] | np.ndarray) -> np.ndarray:
    """Real matrix of T_{z^a conj(z)^b} between index ranges ``cols`` -> ``rows``."""
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    out = np.zeros((rows.size, cols.size))
    if rows.size == 0 or cols.size == 0:
        return out
    n, logw, valid = shift_log_weights(factor, a, b, cols)
    r0 = rows[0]
    ri = n - r0
    keep = valid & (ri >= 0) & (ri < rows.size)
    out[ri[keep], np.nonzero(keep)[0]] = np.exp(logw[keep])
    return out


def _toeplitz_block(f: LaurentSymbol, row_w: Window, col_w: Window) -> np.ndarray:
    dims = (row_w.size, col_w.size)
    out = np.zeros(dims, dtype=complex)
    for key, c in f.items():
        block = np.array([[1.0]])
        for i, (factor, (a, b)) in enumerate(zip(f.domain.factors, key)):
            block = np.kron(block, factor_block(factor, a, b, row_w.axis(i), col_w.axis(i)))
        out += c * block
    return out


def _check(f: LaurentSymbol, w: Window):
    w.validate(f.domain)


def toeplitz_matrix(f: LaurentSymbol, w: Window) -> OperatorMatrix:
    """Exact compression of T_f to the window ``w``."""
    _check(f, w)
    return OperatorMatrix(w, _toeplitz_block(f, w, w), {"kind": "toeplitz", "symbol": f.to_json()})


def required_margin(phi: LaurentSymbol, psi: LaurentSymbol) -> int:
    """Smallest margin accepted by :func:`hankel_product_matrix`."""
    return max(phi.total_degree(), psi.total_degree())


def _pair_blocks(factor: FactorDomain, s: tuple[int, int], t: tuple[int, int],
                 axis: np.ndarray, mid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One factor of T_{conj(s) t} and of T_{conj(s)} T_t for monomials s, t.

    Both are weighted shifts, so the product needs no summation; intermediate
    indices outside ``mid`` are dropped.
    """
    (a_s, b_s), (a_t, b_t) = s, t
    direct = factor_block(factor, b_s + a_t, a_s + b_t, axis, axis)
    prod = np.zeros_like(direct)
    j, lw1, v1 = shift_log_weights(factor, a_t, b_t, axis)
    v1 &= (j >= mid[0]) & (j <= mid[-1])
    n, lw2, v2 = shift_log_weights(factor, b_s, a_s, j)
    ri = n - axis[0]
    keep = v1 & v2 & (ri >= 0) & (ri < axis.size)
    cols = np.nonzero(keep)[0]
    prod[ri[keep], cols] = np.exp(lw1[keep]) * np.exp(lw2[keep])
    return direct, prod


def _kron_all(blocks: list[np.ndarray]) -> np.ndarray:
    out = blocks[0]
    for b in blocks[1:]:
        out = np.kron(out, b)
    return out


def hankel_product_matrix(phi: LaurentSymbol, psi: LaurentSymbol, w: Window,
                          margin: int | None = None) -> OperatorMatrix:
    """Compression of H_psi^* H_phi = T_{conj(psi) phi} - T_{conj(psi)} T_phi to ``w``.

    The identity is applied per pair of terms (s of psi, t of phi), where each
    side is a Kronecker product of one-factor weighted shifts.  Pair
    contributions are accumulated in an order that does not depend on which
    symbol plays which role, so swapping phi and psi yields exactly the
    conjugate transpose.
    """
    if phi.domain != psi.domain:
        raise DomainError("phi and psi live on different domains")
    _check(phi, w)
    need = required_margin(phi, psi)
    if margin is None:
        margin = need
    if margin < need:
        raise MarginError(f"margin {margin} too small; symbols need at least {need}", need)
    dom = phi.domain
    big = w.enlarge(margin, dom)
    axes = [w.axis(i) for i in range(dom.n)]
    mids = [big.axis(i) for i in range(dom.n)]

    groups: dict[tuple, list] = {}
    for s_key, c_s in psi.items():
        for t_key, c_t in phi.items():
            groups.setdefault(tuple(sorted((s_key, t_key))), []).append((s_key, c_s, t_key, c_t))

    out = np.zeros((w.size, w.size), dtype=complex)
    for gkey in sorted(groups):
        total = None
        for s_key, c_s, t_key, c_t in groups[gkey]:
            pairs = [_pair_blocks(f, s, t, ax, mid)
                     for f, s, t, ax, mid in zip(dom.factors, s_key, t_key, axes, mids)]
            diff = _kron_all([d for d, _ in pairs]) - _kron_all([p for _, p in pairs])
            term = (np.conj(c_s) * c_t) * diff
            # at most two members, and a 2-sum is order independent
            total = term if total is None else total + term
        out = out + total
    meta = {"kind": "hankel_product", "phi": phi.to_json(), "psi": psi.to_json(), "margin": margin}
    return OperatorMatrix(w, out, meta)


def singular_values(m) -> np.ndarray:
    """Singular values of a dense matrix (or :class:`OperatorMatrix`), descending."""
    a = m.entries if isinstance(m, OperatorMatrix) else np.asarray(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def matrix_report_json(m: OperatorMatrix) -> str:
    return json.dumps(m.to_json(), sort_keys=True)
