"""Symbolic check of the boundary-slice holomorphy condition on the polydisk.

For every ordered pair (j, k), j != k, the symbols are restricted to the face
z_j = xi with xi left symbolic, and d/dconj(z_k) is applied.  The condition
holds for the pair when one of the two residuals vanishes identically.

Restricting to identical vanishing loses nothing: each residual is a Laurent
polynomial in xi with symbol coefficients, and a nonzero one vanishes for only
finitely many xi on the circle.  So "for every |xi| = 1, phi or psi is
holomorphic in z_k" is equivalent to "phi or psi has an identically vanishing
residual" for polynomial symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DomainError
from ..symbols import ANTIHOLOMORPHIC, LaurentSymbol, SlicedSymbol, restrict_slice

PHI_HOLOMORPHIC = "phi_holomorphic_on_slices"
PSI_HOLOMORPHIC = "psi_holomorphic_on_slices"
BOTH = "both"
VIOLATION = "violation"

JUSTIFICATION = (
    "Each residual is a Laurent polynomial in the circle variable xi with symbol "
    "coefficients; a nonzero one vanishes at finitely many points of |xi| = 1, so the "
    "per-xi disjunction is equivalent to identical vanishing of one residual."
)


@dataclass
class PairVerdict:
    j: int
    k: int
    verdict: str
    phi_residual: SlicedSymbol
    psi_residual: SlicedSymbol

    def to_json(self) -> dict:
        out = {"j": self.j, "k": self.k, "verdict": self.verdict}
        if not self.phi_residual.is_zero():
            out["phi_residual"] = self.phi_residual.to_json()
        if not self.psi_residual.is_zero():
            out["psi_residual"] = self.psi_residual.to_json()
        return out


@dataclass
class ComplianceReport:
    pairs: list[PairVerdict]
    hypothesis_warnings: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.verdict != VIOLATION for p in self.pairs)

    def verdict(self, j: int, k: int) -> str:
        for p in self.pairs:
            if (p.j, p.k) == (j, k):
                return p.verdict
        raise KeyError((j, k))

    def violations(self) -> list[PairVerdict]:
        return [p for p in self.pairs if p.verdict == VIOLATION]

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "pairs": [p.to_json() for p in self.pairs],
            "hypothesis_warnings": self.hypothesis_warnings,
            "justification": JUSTIFICATION,
        }


def _reduced_position(j: int, k: int) -> int:
    return k - 1 if k > j else k


def thm1_check(phi: LaurentSymbol, psi: LaurentSymbol) -> ComplianceReport:
    """Decide the slice condition for the pair (phi, psi) on the polydisk."""
    dom = phi.domain
    if psi.domain != dom:
        raise DomainError("phi and psi live on different domains")
    if not dom.is_polydisk:
        raise DomainError("the slice check is defined on the polydisk only")
    if dom.n < 2:
        raise DomainError("the slice check needs at least two factors")

    pairs = []
    warnings = []
    for j in range(1, dom.n + 1):
        rphi = restrict_slice(phi, j)
        rpsi = restrict_slice(psi, j)
        for name, r in (("phi", rphi), ("psi", rpsi)):
            if not r.is_separately_harmonic():
                warnings.append({"j": j, "symbol": name,
                                 "message": "restriction is not pluriharmonic on the slice",
                                 "restriction": r.to_json()})
        for k in range(1, dom.n + 1):
            if k == j:
                continue
            kk = _reduced_position(j, k)
            a = rphi.derivative(kk, ANTIHOLOMORPHIC)
            b = rpsi.derivative(kk, ANTIHOLOMORPHIC)
            if a.is_zero() and b.is_zero():
                v = BOTH
            elif a.is_zero():
                v = PHI_HOLOMORPHIC
            elif b.is_zero():
                v = PSI_HOLOMORPHIC
            else:
                v = VIOLATION
            pairs.append(PairVerdict(j, k, v, a, b))
    return ComplianceReport(pairs, warnings)
