"""Laurent-polynomial symbols in z and conj(z) on a product domain.

A symbol is a finite sum of terms  c * prod_i z_i^{a_i} conj(z_i)^{b_i}.  The
exponent key of a term is a tuple of per-factor pairs ``((a_1, b_1), ...)``.
Factor positions in the public API are 1-based, matching z_1, ..., z_n.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Mapping

import numpy as np

from .domains import ProductDomain
from .errors import DomainError

#: coefficients below this modulus are dropped after arithmetic
ZERO_TOL = 1e-15

HOLOMORPHIC = "holomorphic"
ANTIHOLOMORPHIC = "antiholomorphic"

Exponent = tuple  # tuple[tuple[int, int], ...]


def _canonical(terms: Mapping) -> dict:
    return {k: complex(c) for k, c in terms.items() if abs(c) >= ZERO_TOL}


_TERM_KEYS = {"hol", "antihol", "coeff", "re", "im"}


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _term_coeff(t: dict, loc: str) -> complex:
    """Coefficient from ``coeff`` (number, [re, im] or "a+bi") or from ``re``/``im``."""
    if "coeff" in t:
        if "re" in t or "im" in t:
            raise DomainError(f"{loc}: give either 'coeff' or 're'/'im', not both")
        c = t["coeff"]
        if _is_real(c):
            return complex(c)
        if isinstance(c, list) and len(c) == 2 and all(_is_real(x) for x in c):
            return complex(c[0], c[1])
        if isinstance(c, str):
            try:
                return complex(c.replace(" ", "").replace("i", "j"))
            except ValueError:
                pass
        raise DomainError(f"{loc}.coeff: expected a number, [re, im] or a string like '1-2i'")
    re, im = t.get("re", 0.0), t.get("im", 0.0)
    if not (_is_real(re) and _is_real(im)):
        raise DomainError(f"{loc}: 're'/'im' must be numbers")
    if "re" not in t and "im" not in t:
        raise DomainError(f"{loc}: missing coefficient ('coeff' or 're'/'im')")
    return complex(re, im)


class LaurentSymbol:
    """Finite linear combination of monomials z^a conj(z)^b on a product domain."""

    __slots__ = ("domain", "terms")

    def __init__(self, domain: ProductDomain, terms: Mapping | None = None):
        self.domain = domain
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple((int(a), int(b)) for a, b in key)
            if len(key) != domain.n:
                raise DomainError(f"exponent {key} does not match {domain.n} factors")
            for f, (a, b) in zip(domain.factors, key):
                if f.is_disk and (a < 0 or b < 0):
                    raise DomainError(f"negative exponent in {key} on a disk factor")
            clean[key] = clean.get(key, 0j) + complex(c)
        self.terms = _canonical(clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, domain: ProductDomain, c: complex = 1.0) -> "LaurentSymbol":
        return cls(domain, {((0, 0),) * domain.n: c})

    @classmethod
    def zero(cls, domain: ProductDomain) -> "LaurentSymbol":
        return cls(domain, {})

    @classmethod
    def monomial(cls, domain: ProductDomain, hol: Iterable[int], antihol: Iterable[int],
                 c: complex = 1.0) -> "LaurentSymbol":
        key = tuple(zip(hol, antihol))
        return cls(domain, {key: c})

    @classmethod
    def z(cls, domain: ProductDomain, k: int, power: int = 1) -> "LaurentSymbol":
        """The coordinate z_k (1-based) raised to ``power``."""
        hol = [0] * domain.n
        hol[_pos(domain, k)] = power
        return cls.monomial(domain, hol, [0] * domain.n)

    @classmethod
    def zbar(cls, domain: ProductDomain, k: int, power: int = 1) -> "LaurentSymbol":
        anti = [0] * domain.n
        anti[_pos(domain, k)] = power
        return cls.monomial(domain, [0] * domain.n, anti)

    # -- basic protocol ----------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def items(self):
        """Terms in canonical (sorted exponent) order."""
        return sorted(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = LaurentSymbol.constant(self.domain, other)
        if not isinstance(other, LaurentSymbol):
            return NotImplemented
        return self.domain == other.domain and self.terms == other.terms

    def __hash__(self):
        return hash((self.domain, tuple(self.items())))

    def allclose(self, other: "LaurentSymbol", atol: float = 1e-12) -> bool:
        return (self - other).max_coeff() <= atol

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def _coerce(self, other) -> "LaurentSymbol":
        if isinstance(other, LaurentSymbol):
            if other.domain != self.domain:
                raise DomainError("symbols live on different domains")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return LaurentSymbol.constant(self.domain, other)
        raise TypeError(f"cannot combine LaurentSymbol with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0j) + c
        return LaurentSymbol(self.domain, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSymbol(self.domain, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return LaurentSymbol(self.domain, {k: c * other for k, c in self.terms.items()})
        return symbol_multiply(self, other)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of symbols are not supported")
        out = LaurentSymbol.constant(self.domain)
        for _ in range(k):
            out = out * self
        return out

    # -- structure -----------------------------------------------------------

    def is_holomorphic(self) -> bool:
        return all(b == 0 for key in self.terms for _, b in key)

    def is_antiholomorphic(self) -> bool:
        return all(a == 0 for key in self.terms for a, _ in key)

    def is_balanced(self) -> bool:
        return all(a == b for key in self.terms for a, b in key)

    def is_separately_harmonic(self) -> bool:
        """True when no term mixes z_i and conj(z_i) in any single variable."""
        return all(a == 0 or b == 0 for key in self.terms for a, b in key)

    def shift_degree(self) -> int:
        """Largest per-factor index shift |a_i - b_i| over all terms."""
        return max((abs(a - b) for key in self.terms for a, b in key), default=0)

    def total_degree(self) -> int:
        """Largest per-factor degree |a_i| + |b_i| over all terms."""
        return max((abs(a) + abs(b) for key in self.terms for a, b in key), default=0)

    def depends_on(self, k: int) -> bool:
        i = _pos(self.domain, k)
        return any(key[i] != (0, 0) for key in self.terms)

    def sup_bound(self) -> float:
        """Coefficient bound on sup |f| over the closed domain."""
        total = 0.0
        for key, c in self.terms.items():
            s = abs(c)
            for f, (a, b) in zip(self.domain.factors, key):
                s *= f.monomial_sup(a + b)
            total += s
        return total

    # -- algebra -------------------------------------------------------------

    def conjugate(self) -> "LaurentSymbol":
        return symbol_conjugate(self)

    def derivative(self, k: int, which: str = HOLOMORPHIC) -> "LaurentSymbol":
        return symbol_derivative(self, k, which)

    def restrict(self, j: int, xi: complex):
        return restrict_slice(self, j, xi)

    def radialize(self) -> "LaurentSymbol":
        return radialize(self)

    def __call__(self, *z):
        """Evaluate at a point; coordinates may be numpy arrays of equal shape."""
        if len(z) == 1 and self.domain.n > 1:
            z = tuple(z[0])
        if len(z) != self.domain.n:
            raise DomainError(f"expected {self.domain.n} coordinates, got {len(z)}")
        z = [np.asarray(zi, dtype=complex) for zi in z]
        zc = [np.conj(zi) for zi in z]
        out = np.zeros(np.broadcast(*z).shape, dtype=complex) if z else 0j
        for key, c in self.terms.items():
            t = c
            for zi, zci, (a, b) in zip(z, zc, key):
                t = t * zi**a * zci**b
            out = out + t
        return out if np.ndim(out) else complex(out)

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> list:
        return [
            {"hol": [a for a, _ in key], "antihol": [b for _, b in key],
             "re": c.real, "im": c.imag}
            for key, c in self.items()
        ]

    @classmethod
    def from_json(cls, domain: ProductDomain, terms, where: str = "symbol") -> "LaurentSymbol":
        if not isinstance(terms, list):
            raise DomainError(f"{where}: expected a list of terms")
        out = {}
        for idx, t in enumerate(terms):
            loc = f"{where}[{idx}]"
            if not isinstance(t, dict):
                raise DomainError(f"{loc}: term must be an object")
            for field in ("hol", "antihol"):
                v = t.get(field)
                if not isinstance(v, list) or len(v) != domain.n or \
                        not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
                    raise DomainError(f"{loc}.{field}: expected {domain.n} integers")
            unknown = sorted(set(t) - _TERM_KEYS)
            if unknown:
                raise DomainError(f"{loc}: unknown field(s) {', '.join(unknown)}")
            key = tuple(zip(t["hol"], t["antihol"]))
            out[key] = out.get(key, 0j) + _term_coeff(t, loc)
        try:
            return cls(domain, out)
        except DomainError as exc:
            raise DomainError(f"{where}: {exc}") from None

    def __repr__(self):
        return f"LaurentSymbol({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.items():
            mono = []
            for i, (a, b) in enumerate(key, start=1):
                if a:
                    mono.append(f"z{i}" + (f"^{a}" if a != 1 else ""))
                if b:
                    mono.append(f"zb{i}" + (f"^{b}" if b != 1 else ""))
            parts.append(_fmt_coeff(c) + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)


def _fmt_coeff(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:.6g}"
    return f"({c.real:.6g}{c.imag:+.6g}j)"


def _pos(domain: ProductDomain, k: int) -> int:
    if not (1 <= k <= domain.n):
        raise DomainError(f"factor position {k} outside 1..{domain.n}")
    return k - 1


# ---------------------------------------------------------------------------
# operations


def symbol_multiply(f: LaurentSymbol, g: LaurentSymbol) -> LaurentSymbol:
    g = f._coerce(g)
    out: dict = {}
    for k1, c1 in f.terms.items():
        for k2, c2 in g.terms.items():
            key = tuple((a1 + a2, b1 + b2) for (a1, b1), (a2, b2) in zip(k1, k2))
            out[key] = out.get(key, 0j) + c1 * c2
    return LaurentSymbol(f.domain, out)


def symbol_conjugate(f: LaurentSymbol) -> LaurentSymbol:
    return LaurentSymbol(
        f.domain, {tuple((b, a) for a, b in key): c.conjugate() for key, c in f.terms.items()})


def symbol_derivative(f: LaurentSymbol, k: int, which: str = HOLOMORPHIC) -> LaurentSymbol:
    """Formal Wirtinger derivative d/dz_k (holomorphic) or d/dconj(z_k) (antiholomorphic)."""
    i = _pos(f.domain, k)
    if which not in (HOLOMORPHIC, ANTIHOLOMORPHIC):
        raise ValueError(f"unknown derivative kind {which!r}")
    out: dict = {}
    for key, c in f.terms.items():
        a, b = key[i]
        p = a if which == HOLOMORPHIC else b
        if p == 0:
            continue
        new = (a - 1, b) if which == HOLOMORPHIC else (a, b - 1)
        nkey = key[:i] + (new,) + key[i + 1:]
        out[nkey] = out.get(nkey, 0j) + p * c
    return LaurentSymbol(f.domain, out)


def radialize(f: LaurentSymbol) -> LaurentSymbol:
    """Angular average over z -> z e^{i theta}; keeps exactly the balanced terms."""
    if f.domain.n != 1:
        raise DomainError("radialization is defined for single-factor symbols only")
    return LaurentSymbol(f.domain, {k: c for k, c in f.terms.items() if k[0][0] == k[0][1]})


class SlicedSymbol:
    """Restriction of a symbol to z_j = xi with xi kept as a circle variable.

    Stored as a Laurent polynomial in xi whose coefficients are symbols on the
    reduced domain: ``coeffs[p]`` multiplies xi^p.  The relation xi conj(xi) = 1
    is already applied, so the zero test is exact.
    """

    __slots__ = ("j", "domain", "coeffs")

    def __init__(self, j: int, domain: ProductDomain, coeffs: Mapping[int, LaurentSymbol]):
        self.j = j
        self.domain = domain
        self.coeffs = {p: s for p, s in sorted(coeffs.items()) if not s.is_zero()}

    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self, k: int, which: str = ANTIHOLOMORPHIC) -> "SlicedSymbol":
        """Derivative in the reduced domain's factor position ``k`` (1-based)."""
        return SlicedSymbol(self.j, self.domain,
                            {p: s.derivative(k, which) for p, s in self.coeffs.items()})

    def is_separately_harmonic(self) -> bool:
        return all(s.is_separately_harmonic() for s in self.coeffs.values())

    def at(self, xi: complex) -> LaurentSymbol:
        out = LaurentSymbol.zero(self.domain)
        for p, s in self.coeffs.items():
            out = out + s * (complex(xi) ** p)
        return out

    def to_json(self) -> list:
        return [{"xi_power": p, "terms": s.to_json()} for p, s in self.coeffs.items()]

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"xi^{p}*({s})" for p, s in self.coeffs.items())

    __repr__ = __str__


def restrict_slice(f: LaurentSymbol, j: int, xi: complex | None = None):
    """Restrict ``f`` to the slice z_j = xi, |xi| = 1.

    With a numeric ``xi`` the result is a symbol on the remaining factors (a
    plain complex number when nothing remains).  With ``xi=None`` the circle
    variable stays symbolic and a :class:`SlicedSymbol` is returned.
    """
    i = _pos(f.domain, j)
    reduced = f.domain.drop(i)
    if xi is not None:
        xi = complex(xi)
        if abs(abs(xi) - 1.0) > 1e-12:
            raise DomainError(f"slice parameter must lie on the unit circle, got |xi| = {abs(xi)}")
    grouped: dict[int, dict] = {}
    for key, c in f.terms.items():
        a, b = key[i]
        rest = key[:i] + key[i + 1:]
        bucket = grouped.setdefault(a - b, {})
        bucket[rest] = bucket.get(rest, 0j) + c
    if xi is None:
        if reduced is None:
            raise DomainError("symbolic restriction needs at least two factors")
        return SlicedSymbol(j, reduced, {p: LaurentSymbol(reduced, t) for p, t in grouped.items()})
    if reduced is None:
        return sum((t[()] * xi**p for p, t in grouped.items()), 0j)
    out: dict = {}
    for p, t in grouped.items():
        w = xi**p
        for rest, c in t.items():
            out[rest] = out.get(rest, 0j) + c * w
    return LaurentSymbol(reduced, out)


def circle_point(angle: float) -> complex:
    """e^{i angle}, exact at multiples of pi/2."""
    q = angle / (math.pi / 2)
    if abs(q - round(q)) < 1e-15:
        return (1, 1j, -1, -1j)[int(round(q)) % 4]
    return cmath.exp(1j * angle)
