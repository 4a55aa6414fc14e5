"""Storage/latency tradeoff of the 3x3 network.

Walks the transmitter-cache axis at a few receiver-cache sizes and prints
the achievable NDT, both lower bounds, the gap and the closed-form region.
Everything is exact; decimals are for reading only.
"""

from fractions import Fraction as F

from cachendt import CachePoint, NetworkConfig, feasible_cache_point, ndt_report
from cachendt.regions import classify_3x3

cfg = NetworkConfig(3, 3, 3)

print(f"{'mu_r':>5} {'mu_t':>5} {'upper':>7} {'lower':>7} {'gap':>6} region  split")
for mu_r in (F(0), F(1, 6), F(1, 3), F(2, 3)):
    for k in range(0, 7):
        pt = CachePoint(mu_r, F(k, 6))
        if not feasible_cache_point(cfg, pt):
            continue
        rep = ndt_report(cfg, pt)
        split = ", ".join(f"a[{key}]={val}" for key, val in rep.ratios.items())
        print(f"{str(mu_r):>5} {str(pt.mu_t):>5} {float(rep.tau_upper):7.4f} "
              f"{float(rep.tau_lower_coded):7.4f} {float(rep.gap):6.3f} {str(classify_3x3(pt)):>6}  {split}")
    print()

# with no receiver cache, the upper bound is two line segments in mu_t
for mu_t in (F(1, 3), F(1, 2), F(2, 3), F(5, 6), F(1)):
    rep = ndt_report(cfg, CachePoint(0, mu_t))
    print(f"mu_t = {mu_t}: upper bound {rep.tau_upper}")
