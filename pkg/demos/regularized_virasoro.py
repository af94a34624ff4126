"""Shifting L(0) by zeta(-1)/2 turns the Virasoro central term (m^3 - m)/12 into m^3/12.

Every number printed below comes out of an exact commutator of Fock-space
matrices on a finite weight window, not out of the closed forms.
"""

import argparse
from fractions import Fraction

from zetareg.commutator_lab import check_central_monomial, fit_monomial, virasoro_relation
from zetareg.fock_rep import boson_correction, boson_correction_from_series
from zetareg.kernel import format_scalar
from zetareg.number_theory import zeta_neg

DEFAULT_WINDOW = 5


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    args = ap.parse_args()
    window = (0, args.window)

    print(f"zeta(-1) = {zeta_neg(1)}; half of it is the shift {boson_correction(0)}")
    print(f"same constant from the e^z/(e^z-1) subtraction: {boson_correction_from_series(0)}\n")

    plain, shifted = {}, {}
    print(f"{'m':>3}  {'[L(m),L(-m)] - 2m L(0)':>24}  {'... with Lbar(0)':>18}")
    for m in range(1, args.max_m + 1):
        a = virasoro_relation(m, window)
        b = virasoro_relation(m, window, corrected=True)
        plain[Fraction(m)], shifted[Fraction(m)] = a.defect, b.defect
        print(f"{m:>3}  {format_scalar(a.defect):>24}  {format_scalar(b.defect):>18}")

    print("\nexact fits through the measured scalars:")
    print("  plain   ", {p: str(c) for p, c in fit_monomial(plain).items()})
    print("  shifted ", {p: str(c) for p, c in fit_monomial(shifted).items()})

    # higher generators keep the pure-monomial shape
    rep = check_central_monomial("ss0", 1, 1, 2, window=(0, 4))
    print(f"\nL^(1) pair at m=2: measured {format_scalar(rep.defect)}, "
          f"closed form {format_scalar(rep.expected)}")


if __name__ == "__main__":
    main()
