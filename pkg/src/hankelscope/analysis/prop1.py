"""Computations behind the rigidity statement for holomorphic symbols on the annulus.

Four independent checks:

* ``prop1_coeff_check`` -- conj(psi') phi' is rotation invariant exactly when
  all cross products a_n conj(b_m), n != m, vanish;
* ``berezin_fixed_point_residual`` -- how far |z|^{2m} is from being fixed by
  the Berezin transform of the annulus;
* ``eq1_residual`` -- the coefficient identity obtained from that fixed-point
  assumption, which fails for m != 0;
* ``fl_scan`` -- monotonicity of
  f_l(x) = (1 - xi^{l+x})(1 - xi^{l-x}) / (l^2 - x^2)  on [0, m].

Here xi is rho^2 (a real number in (0, 1)), unrelated to the slice parameter
used elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..berezin import berezin_function
from ..domains import FactorDomain, ProductDomain
from ..errors import DomainError
from ..symbols import HOLOMORPHIC, LaurentSymbol, radialize


@dataclass
class CoeffReport:
    product: LaurentSymbol
    radial: bool
    witnesses: list[tuple[int, int, complex]]
    predicted_radial: bool

    @property
    def radialize_agrees(self) -> bool:
        """The radialization route and the coefficient route give the same answer."""
        return self.radial == (not self.witnesses)

    @property
    def dichotomy_holds(self) -> bool:
        return self.radial == self.predicted_radial

    def to_json(self) -> dict:
        return {
            "product": self.product.to_json(),
            "radial": self.radial,
            "witnesses": [{"n": n, "m": m, "re": c.real, "im": c.imag}
                          for n, m, c in self.witnesses],
            "radialize_agrees": self.radialize_agrees,
            "dichotomy_holds": self.dichotomy_holds,
        }


def _single_annulus(f: LaurentSymbol, name: str):
    if f.domain.n != 1 or f.domain.factors[0].is_disk:
        raise DomainError(f"{name} must live on a single annulus factor")
    if not f.is_holomorphic():
        raise DomainError(f"{name} must be holomorphic")


def _laurent_coeffs(f: LaurentSymbol) -> dict[int, complex]:
    return {key[0][0]: c for key, c in f.items()}


def prop1_coeff_check(phi: LaurentSymbol, psi: LaurentSymbol) -> CoeffReport:
    _single_annulus(phi, "phi")
    _single_annulus(psi, "psi")
    if phi.domain != psi.domain:
        raise DomainError("phi and psi live on different annuli")
    dphi = phi.derivative(1, HOLOMORPHIC)
    dpsi = psi.derivative(1, HOLOMORPHIC)
    product = dpsi.conjugate() * dphi
    radial = radialize(product) == product

    a = _laurent_coeffs(dphi)
    b = _laurent_coeffs(dpsi)
    witnesses = [(n, m, an * bm.conjugate())
                 for n, an in sorted(a.items()) for m, bm in sorted(b.items()) if n != m]
    predicted = not a or not b or (len(a) == 1 and set(a) == set(b))
    return CoeffReport(product, radial, witnesses, predicted)


def default_grid(rho: float, points: int = 9) -> np.ndarray:
    """Interior radii rho + (1 - rho) * k / (points + 1), k = 1..points."""
    return rho + (1.0 - rho) * np.arange(1, points + 1) / (points + 1)


def berezin_fixed_point_residual(m: int, rho: float, grid=None, tol: float = 1e-12) -> float:
    """max over ``grid`` of |B(|z|^{2m})(w) - |w|^{2m}| on the annulus rho < |z| < 1.

    Both sides are rotation invariant, so real radii suffice.
    """
    dom = ProductDomain.of(FactorDomain.annulus(rho))
    grid = default_grid(rho) if grid is None else np.asarray(grid, dtype=float)
    f = LaurentSymbol.monomial(dom, [m], [m])
    worst = 0.0
    for w in grid:
        if not rho < w < 1.0:
            raise DomainError(f"grid radius {w} outside ({rho}, 1)")
        worst = max(worst, abs(berezin_function(f, complex(w), tol) - w ** (2 * m)))
    return worst


def eq1_residual(l: int, m: int, xi: float) -> float:
    """(l^2 - m^2)/l^2 - (1 - xi^{l+m})(1 - xi^{l-m}) / (1 - xi^l)^2."""
    if not 0.0 < xi < 1.0:
        raise ValueError("xi must lie in (0, 1)")
    if l == 0 or l == m:
        raise ValueError("need l != 0 and l != m")
    lhs = (l * l - m * m) / (l * l)
    rhs = (1.0 - xi ** (l + m)) * (1.0 - xi ** (l - m)) / (1.0 - xi**l) ** 2
    return lhs - rhs


def f_l(l: int, x, xi: float):
    x = np.asarray(x, dtype=float)
    return (1.0 - xi ** (l + x)) * (1.0 - xi ** (l - x)) / (l * l - x * x)


def log_derivative(l: int, x, xi: float):
    """(l^2 - x^2) f_l'(x) / f_l(x) in closed form."""
    x = np.asarray(x, dtype=float)
    lx = math.log(xi)
    core = xi**-x / (1.0 - xi ** (l - x)) - xi**x / (1.0 - xi ** (l + x))
    return (l * l - x * x) * xi**l * lx * core + 2.0 * x


@dataclass
class FlScan:
    l: int
    m: int
    xi: float
    x: np.ndarray
    values: np.ndarray
    f0_closed_form: float
    evenness_residual: float
    log_derivative: np.ndarray

    @property
    def f0(self) -> float:
        return float(self.values[0])

    @property
    def fm(self) -> float:
        return float(self.values[-1])

    @property
    def differences(self) -> np.ndarray:
        return np.diff(self.values)

    @property
    def increasing(self) -> bool:
        return bool(np.all(self.differences > 0))

    @property
    def log_derivative_positive(self) -> bool:
        return bool(np.all(self.log_derivative[self.x > 0] > 0))

    def to_json(self) -> dict:
        return {
            "l": self.l, "m": self.m, "xi": self.xi,
            "f0": self.f0, "fm": self.fm, "f0_closed_form": self.f0_closed_form,
            "differences": self.differences.tolist(),
            "increasing": self.increasing,
            "evenness_residual": self.evenness_residual,
            "log_derivative": self.log_derivative.tolist(),
            "log_derivative_positive": self.log_derivative_positive,
        }


def fl_scan(l: int, m: int, xi: float, samples: int = 50) -> FlScan:
    if not 0.0 < xi < 1.0:
        raise ValueError("xi must lie in (0, 1)")
    if not 0 < m < l:
        raise ValueError("need 0 < m < l")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    x = np.linspace(0.0, float(m), samples)
    vals = f_l(l, x, xi)
    even = float(np.max(np.abs(vals - f_l(l, -x, xi))))
    return FlScan(l, m, xi, x, vals, (1.0 - xi**l) ** 2 / l**2, even, log_derivative(l, x, xi))


def smallest_monotone_l(m: int, xi: float, samples: int = 50, l_max: int = 200) -> int | None:
    """Smallest l in (m, l_max] for which f_l increases on the sampled [0, m]."""
    for l in range(m + 1, l_max + 1):
        if fl_scan(l, m, xi, samples).increasing:
            return l
    return None
