"""Character-twisted quadratic operators mod N: Gauss sums, L-values, and their zero-mode constants.

The last block measures the central scalar of twisted pairs whose character
product is nontrivial. The values come out nonzero, so the zero-center check
is reported as failing.
"""

import argparse

from zetareg.commutator_lab import check_twisted_trivial_center
from zetareg.fock_rep import (twisted_correction, twisted_correction_as_printed,
                              twisted_correction_from_series)
from zetareg.kernel import format_scalar
from zetareg.number_theory import gauss_sum, l_value_neg, primitive_characters


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modulus", type=int, default=5)
    ap.add_argument("--window", type=int, default=3)
    args = ap.parse_args()
    N = args.modulus
    chars = primitive_characters(N)

    print(f"primitive characters mod {N}")
    for chi in chars:
        print(f"  {chi.label():8s} order {chi.order}  parity {chi.parity:+d}  "
              f"values {chi.table()}  g = {format_scalar(gauss_sum(chi))}")

    print("\nL(1-m, chi) for m = 1..4")
    for chi in chars:
        vals = [format_scalar(l_value_neg(chi, m)) for m in range(1, 5)]
        print(f"  {chi.label():8s} " + "  ".join(vals))

    print("\nzero-mode constant of L^(0,chi,mu)(0): closed form / series route / displayed")
    for chi in chars:
        for mu in chars:
            if (chi * mu).is_trivial:
                continue
            row = [twisted_correction(0, chi, mu), twisted_correction_from_series(0, chi, mu),
                   twisted_correction_as_printed(0, chi, mu)]
            flag = "" if row[0] == row[2] else "   <- differs (mu odd)"
            print(f"  ({chi.label()}, {mu.label()})  " + "  /  ".join(map(format_scalar, row)) + flag)

    print("\ncentral scalar of (L^(1,chi1,mu1)(1), L^(1,chi2,mu2)(-1)), claimed to vanish")
    shown = 0
    for a in chars:
        for b in chars:
            if (a * b * a * b).is_trivial or shown == 4:
                continue
            rep = check_twisted_trivial_center(1, 1, 1, a, b, a, b, window=(0, args.window))
            print(f"  ({a.label()},{b.label()},{a.label()},{b.label()})  "
                  f"scalar={rep.scalar}  value {format_scalar(rep.defect)}")
            shown += 1
    if not shown:
        print("  no admissible quadruple at this modulus")


if __name__ == "__main__":
    main()
