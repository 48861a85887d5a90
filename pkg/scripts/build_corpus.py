"""Regenerate src/hankelscope/data/corpus.json."""

import json
from pathlib import Path

from hankelscope.domains import ProductDomain
from hankelscope.symbols import LaurentSymbol as L

OUT = Path(__file__).resolve().parents[1] / "src" / "hankelscope" / "data" / "corpus.json"


def coords(dom):
    return ([L.z(dom, k) for k in range(1, dom.n + 1)],
            [L.zbar(dom, k) for k in range(1, dom.n + 1)])


def bump(dom):
    """prod_i (1 - |z_i|^2): vanishes on the whole boundary of the polydisk."""
    out = L.constant(dom)
    for k in range(1, dom.n + 1):
        out = out * (1 - L.z(dom, k) * L.zbar(dom, k))
    return out


def main():
    B = ProductDomain.polydisk(2)
    T = ProductDomain.polydisk(3)
    (z1, z2), (w1, w2) = coords(B)
    chi = bump(B)
    (u1, u2, u3), (v1, v2, v3) = coords(T)
    chi3 = bump(T)

    pairs = [
        # compact
        ("separated_sum", B, w1 + z2, z1 + w2, "compact"),
        ("mixed_monomials", B, w1 * z2, z1 * w2, "compact"),
        ("bump_perturbed_mixed", B, chi + z1 * w2, chi + w1 * z2, "compact"),
        ("psi_holomorphic", B, w1 * w1, z1 * z2, "compact"),
        ("bump_only", B, chi, chi, "compact"),
        ("bump_times_conj", B, chi * w1, w2 + chi, "compact"),
        ("conj_plus_bump", B, w1 + 2 * chi, z2 + chi, "compact"),
        ("separate_conj", B, w1, w2, "compact"),
        ("conj_conj_vs_hol_bump", B, w1 * w2, z1 * z2 + chi, "compact"),
        ("weighted_mixed", B, 3 * w1 * w1 * z2, z1 * w2, "compact"),
        ("tridisk_mixed_pair", T, v1 * u2, u1 * v2, "compact"),
        ("tridisk_sums", T, v1 + u2 + u3, u1 + v2, "compact"),
        ("tridisk_bump_perturbed_mixed", T, chi3 + v1 * u2, chi3 + u1 * v2, "compact"),
        # non-compact
        ("conj_z1", B, w1, w1, "noncompact"),
        ("conj_product", B, w1 * w2, w1 * w2, "noncompact"),
        ("conj_vs_conj_plus_hol", B, w1, w1 + z2, "noncompact"),
        ("conj_z2_bump", B, w2 + chi, 2 * w2, "noncompact"),
        ("mixed_vs_conj", B, w1 * z2, w1, "noncompact"),
        ("conj_sum", B, w1 + w2, w1 + w2, "noncompact"),
        ("bump_plus_conj", B, chi + w1, w1, "noncompact"),
        ("complex_coeffs", B, 2 * w1 * z2 * z2, (1 + 1j) * w1 * z2, "noncompact"),
        ("tridisk_conj_z1", T, v1, v1, "noncompact"),
        ("tridisk_conj_product", T, v1 * v2, v1 * v2 + u3, "noncompact"),
        ("tridisk_mixed_self", T, v1 * u2, v1 * u2, "noncompact"),
        ("tridisk_conj_z3_bump", T, v3 + chi3, (0.5 - 0.5j) * v3, "noncompact"),
    ]
    data = [{"name": name, "domain": dom.to_json(), "phi": phi.to_json(), "psi": psi.to_json(),
             "expected": exp} for name, dom, phi, psi, exp in pairs]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {len(data)} pairs to {OUT}")


if __name__ == "__main__":
    main()
