"""How CMC quantities transform under the similarity rescaling."""

import numpy as np

from cmclab import (
    GridSpec,
    br_energy,
    curvature_radius,
    gradient_lapse_estimate_check,
    k_ratio,
    rescale,
    sup_norm,
)
from cmclab.checks import random_state


def main():
    grid = GridSpec.cubic(16)
    rng = np.random.default_rng(11)
    s = random_state(grid, rng)
    print(f"base state at t = {s.t:.6f}")

    r = 2.5
    out = rescale(s, r)
    print(f"rescaled by r = {r}: t' = {out.t:.6f}")

    # tr K and |K| scale linearly in r, the lapse not at all.
    base_sup = sup_norm(s.K, s.g)
    out_sup = sup_norm(out.K, out.g)
    print(f"  |K'| / |K|    = {out_sup / base_sup:.12f}  (expect {r})")
    print(f"  N' is N:        {out.N is s.N}")

    # integrand scales as r^4, volume element as r^-3: net effect linear
    print(f"  E'_BR / E_BR  = {br_energy(out) / br_energy(s):.12f}  "
          f"(expect {r})")

    # lengths contract: the curvature radius picks up 1/r
    rc = curvature_radius(s)
    rc_out = curvature_radius(out)
    print(f"  r_c' / r_c    = {rc_out / rc:.12f}  (expect {1 / r})")

    # k_ratio is dimensionless and invariant
    print(f"  k' / k ratio  = {k_ratio(out) / k_ratio(s):.12f}  (expect 1)")

    # the gradient estimate: the left side is scale free, the right
    # side's fitted coefficient absorbs r^2
    lhs, rhs, c_fit = gradient_lapse_estimate_check(s, 2.0)
    lhs2, rhs2, c_fit2 = gradient_lapse_estimate_check(out, 2.0)
    print(f"  estimate lhs' / lhs = {lhs2 / lhs:.12f}  (expect 1)")
    print(f"  fitted c' / c       = {c_fit2 / c_fit:.12f}  (expect {r * r})")

    # applying the inverse factor undoes the map to rounding
    back = rescale(out, 1.0 / r)
    dev = max(
        float(np.max(np.abs(back.g.values - s.g.values))),
        float(np.max(np.abs(back.K.values - s.K.values))),
    )
    print(f"  involution deviation: {dev:.3e}")


if __name__ == "__main__":
    main()
