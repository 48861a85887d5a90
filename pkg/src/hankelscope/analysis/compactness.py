"""Numerical compactness classification of H_psi^* H_phi.

Evidence comes from two places:

* Berezin profiles along radial approaches to every face and to the
  distinguished boundary, from a small lattice of anchors and directions;
* singular values sigma_k of the compressed operator on growing windows.

Compressions of a compact operator converge in norm, so sigma_k(N) settles as
N grows.  A non-compact Hankel product keeps picking up new singular values
near its essential norm and the Berezin transform keeps a non-zero boundary
limit along some path.  None of this is a proof; the verdict is evidence with
explicit thresholds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..berezin import DEFAULT_TOL, WINDOW_CAP, BerezinProfile, PathSpec, boundary_profile
from ..domains import ProductDomain
from ..operators import Window, hankel_product_matrix, singular_values
from ..symbols import LaurentSymbol

DECAYING = "decaying"
NON_DECAYING = "non_decaying"
INCONCLUSIVE = "inconclusive"

DIRECTIONS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)
# per-factor window lengths for the singular-value scan, by number of factors
SV_WINDOWS = {1: (8, 16, 24), 2: (4, 8, 12), 3: (3, 5, 7)}


@dataclass(frozen=True)
class ClassifierConfig:
    decay_threshold: float = 1e-3
    floor: float = 1e-2
    steps: int = 10
    tol: float = DEFAULT_TOL
    cap: int = WINDOW_CAP
    disk_anchors: tuple[complex, ...] = (0j, 0.5 + 0j)
    directions: tuple[complex, ...] = DIRECTIONS
    sv_ks: tuple[int, ...] = (1, 5, 10)
    sv_windows: tuple[int, ...] | None = None

    def windows_for(self, n: int) -> tuple[int, ...]:
        if self.sv_windows is not None:
            return self.sv_windows
        return SV_WINDOWS.get(n, (2, 3, 4))


def _anchors(factor, config: ClassifierConfig):
    if factor.is_disk:
        return config.disk_anchors
    g = math.sqrt(factor.rho)
    return (complex(g), complex(0, g))


def path_family(domain: ProductDomain, config: ClassifierConfig = ClassifierConfig()) -> list[PathSpec]:
    """Radial approaches to each face (outer and, on annuli, inner) and to the distinguished boundary."""
    paths = []
    for j in range(domain.n):
        others = [(_anchors(f, config) if i != j else (0j,)) for i, f in enumerate(domain.factors)]
        inner_opts = (False,) if domain.factors[j].is_disk else (False, True)
        for anchor in itertools.product(*others):
            for xi in config.directions:
                for inner in inner_opts:
                    direction = tuple(xi if i == j else 0j for i in range(domain.n))
                    flags = tuple(inner if i == j else False for i in range(domain.n))
                    paths.append(PathSpec(tuple(anchor), direction, flags if inner else None))
    for xis in itertools.product(config.directions, repeat=domain.n):
        inner_sets = itertools.product(*[((False,) if f.is_disk else (False, True))
                                         for f in domain.factors])
        for flags in inner_sets:
            paths.append(PathSpec(tuple(0j for _ in xis), tuple(xis),
                                  tuple(flags) if any(flags) else None))
    return paths


@dataclass
class SingularValueScan:
    windows: tuple[int, ...]
    ks: tuple[int, ...]
    sigma: list[list[float]]  # sigma[window][k]

    def drift(self) -> list[float]:
        """|sigma_k(N_last) - sigma_k(N_prev)| for each k."""
        if len(self.sigma) < 2:
            return [math.inf] * len(self.ks)
        return [abs(a - b) for a, b in zip(self.sigma[-1], self.sigma[-2])]

    def to_json(self) -> dict:
        return {"windows": list(self.windows), "k": list(self.ks), "sigma": self.sigma,
                "drift": self.drift()}


def singular_value_scan(phi: LaurentSymbol, psi: LaurentSymbol,
                        config: ClassifierConfig = ClassifierConfig()) -> SingularValueScan:
    dom = phi.domain
    windows = config.windows_for(dom.n)
    rows = []
    for size in windows:
        half = size // 2
        w = Window(tuple((0, size - 1) if f.is_disk else (-half, size - 1 - half)
                         for f in dom.factors))
        sv = singular_values(hankel_product_matrix(phi, psi, w))
        rows.append([float(sv[k - 1]) if k <= sv.size else 0.0 for k in config.sv_ks])
    return SingularValueScan(tuple(windows), tuple(config.sv_ks), rows)


@dataclass
class CompactnessVerdict:
    verdict: str
    profiles: list[BerezinProfile]
    sv_scan: SingularValueScan
    witness: int | None = None
    notes: list[str] = field(default_factory=list)

    def terminal_values(self) -> list[float | None]:
        out = []
        for p in self.profiles:
            conc = p.conclusive()
            out.append(abs(conc[-1].value) if conc else None)
        return out

    def to_json(self, full_profiles: bool = False) -> dict:
        summary = []
        for p, term in zip(self.profiles, self.terminal_values()):
            conc = p.conclusive()
            last3 = [abs(s.value) for s in conc[-3:]]
            summary.append({"path": p.path.to_json(), "conclusive": len(conc),
                            "terminal": term, "last3_min": min(last3) if last3 else None})
        out = {
            "verdict": self.verdict,
            "profiles": summary,
            "singular_values": self.sv_scan.to_json(),
            "notes": self.notes,
        }
        if self.witness is not None:
            out["witness_profile"] = self.profiles[self.witness].to_json()
        if full_profiles:
            out["full_profiles"] = [p.to_json() for p in self.profiles]
        return out


def classify_compactness(phi: LaurentSymbol, psi: LaurentSymbol,
                         config: ClassifierConfig = ClassifierConfig()) -> CompactnessVerdict:
    """Classify the Berezin boundary behaviour of H_psi^* H_phi.

    ``non_decaying`` when some profile stays at or above ``floor`` over its last
    three conclusive samples; ``decaying`` when every profile's last conclusive
    sample is below ``decay_threshold`` and the singular values drift by less
    than ``decay_threshold`` between the two largest windows; otherwise
    ``inconclusive``.
    """
    profiles = [boundary_profile(phi, psi, p, config.steps, config.tol, config.cap)
                for p in path_family(phi.domain, config)]
    scan = singular_value_scan(phi, psi, config)
    notes = []

    for idx, prof in enumerate(profiles):
        conc = prof.conclusive()
        if len(conc) >= 3 and all(abs(s.value) >= config.floor for s in conc[-3:]):
            return CompactnessVerdict(NON_DECAYING, profiles, scan, witness=idx)

    terminals = [abs(p.conclusive()[-1].value) for p in profiles if p.conclusive()]
    n_empty = sum(1 for p in profiles if not p.conclusive())
    if n_empty:
        notes.append(f"{n_empty} profile(s) without conclusive samples")
    berezin_ok = bool(terminals) and n_empty == 0 and max(terminals) < config.decay_threshold
    drift = scan.drift()
    sv_ok = all(d < config.decay_threshold for d in drift)
    if berezin_ok and sv_ok:
        return CompactnessVerdict(DECAYING, profiles, scan, notes=notes)
    if berezin_ok:
        notes.append("Berezin profiles decay but singular values have not settled")
    elif terminals:
        notes.append(f"largest terminal Berezin value {max(terminals):.3g}")
    return CompactnessVerdict(INCONCLUSIVE, profiles, scan, notes=notes)
