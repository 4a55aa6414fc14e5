"""Numerical checks of the three precoder constructions.

For each (r, t) cell of the 3x3 network (plus one 2x4 cell), build the
scheme on random Gaussian channels and report the residual leakage,
the conditioning of each receiver's decoding matrix, the decode error
and the finite extension-length DoF next to its limit.
"""

from cachendt import NetworkConfig
from cachendt.dof import per_user_dof
from cachendt.phyverify import build_scheme, verify_scheme

cells = [(NetworkConfig(3, 3, 3), r, t) for r in range(3) for t in range(1, 4)]
cells.append((NetworkConfig(2, 4, 4), 0, 2))

print(f"{'net':>4} {'r':>2} {'t':>2} {'case':>8} {'S':>5} {'finite':>7} {'limit':>6} {'formula':>7} "
      f"{'residual':>9} {'rank':>8} {'decode':>8}")
for cfg, r, t in cells:
    rep = verify_scheme(build_scheme(cfg, r, t, n=1, seed=0))
    print(f"{cfg.n_tx}x{cfg.n_rx} {r:>2} {t:>2} {rep.case.value:>8} {rep.slots:>5} {str(rep.finite_dof):>7} "
          f"{str(rep.limit_dof):>6} {str(per_user_dof(cfg, r, t).per_user):>7} "
          f"{rep.max_residual:9.1e} {rep.min_rank_ratio:8.1e} {rep.max_decode_error:8.1e}"
          + ("" if rep.passed else f"  FAILED: {rep.failures}"))
