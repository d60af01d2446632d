import numpy as np

from ljmin import ConstraintSet, PerturbationVector, embed, triangle_violations
from ljmin.distgeom import complete_constraints

# Generate five points, keep only their pair distances, then recover them
rng = np.random.default_rng(3)
points = rng.uniform(0.0, 1.0, (5, 3))
s = complete_constraints(points)
res = embed(s, seed=0)


def dist(p):
    return np.linalg.norm(p[:, None] - p[None], axis=-1)


print("recovered stress:", res.stress)
print("max distance error:", np.max(np.abs(dist(res.positions) - dist(points))))

# Targets that no configuration can meet: 1 + 1 < 3
bad = ConstraintSet(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 3.0)])
print("triangle violations:", triangle_violations(bad))
res = embed(bad, restarts=50, seed=0)
print("best stress:", round(res.stress, 6), "feasible:", res.feasible)
for v in res.violations:
    print(f"  {v.i}-{v.j}: {v.distance:.4f} vs target {v.target}")

# With a small linear perturbation the search still stops at a stationary point
pert = embed(bad, eps=PerturbationVector.uniform(3, 1e-3), seed=0)
print("perturbed objective:", round(pert.objective, 6), "converged:", pert.converged)
