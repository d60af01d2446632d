import time

from ljmin import BasinHopOptions, basin_hop, multi_start
from ljmin.io import write_xyz

# Basin hopping for small clusters; a few hundred hops suffice up to N=8
for n in range(2, 9):
    t0 = time.perf_counter()
    report = basin_hop(BasinHopOptions(n_atoms=n, hops=200, restarts=2, seed=1))
    print(f"N={n:2d}  E={report.best_energy:12.6f}  accepted {report.accepted:4d}/"
          f"{report.hops_taken}  {time.perf_counter() - t0:5.1f} s")

# Plain multi-start is the cheap baseline; compare at N=7
ms = multi_start(7, restarts=200, seed=1)
print("multi-start N=7:", round(ms.best_energy, 6))

# The 13-atom icosahedron takes a few hundred hops
report = basin_hop(BasinHopOptions(n_atoms=13, hops=300, restarts=1, seed=1))
print("N=13:", round(report.best_energy, 6))
write_xyz("lj13.xyz", report.best_config, ["Ar"] * 13, f"LJ13 E={report.best_energy!r}")
print("wrote lj13.xyz")
