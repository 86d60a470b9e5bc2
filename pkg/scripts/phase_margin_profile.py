"""Profile the phase growth margin across the Euler integration variable.

The semi-infinite routes converge exactly when the phase's real part
clears the weight growth constant uniformly on the inner interval; this
prints that margin on a t grid for one parameter point, along with the
strip bounds, to make the convergence geometry visible.  Output is CSV
on stdout.

Run: python3 scripts/phase_margin_profile.py [--z X]
"""

import argparse
import sys

from kkseries import (
    KKParams,
    convergence_region,
    geometric_family,
    growth_constant,
    pt,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--z", type=float, default=-0.25)
    ap.add_argument("--points", type=int, default=31)
    args = ap.parse_args()

    p = KKParams(a=1.0, b=2.5, alpha=0.25, beta=0.5, zeta=1.0)
    kappa = geometric_family(0.5)
    region = convergence_region(kappa, p.zeta, "R")
    print(
        f"# strip: {region.strip_lo:.6f} < zeta*Re(z) < {region.strip_hi:.6f},"
        f" growth constant {growth_constant(p):.6f}",
        file=sys.stderr,
    )

    print("t,phase_re,growth_margin")
    for j in range(1, args.points + 1):
        t = j / (args.points + 1)
        ph = pt(p, args.z, t)
        print(f"{t:.17g},{ph.real_part:.17g},{ph.growth_margin:.17g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
