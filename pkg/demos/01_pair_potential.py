import numpy as np

from ljmin import ab_from_eps_sigma, hb_energy, hb_params_from_depth, lj_pair_energy
from ljmin.potential import WELL_FACTOR, PairPotentialParams, ab_energy

# The two landmarks of the reduced pair potential
print("V(1)        =", lj_pair_energy(1.0))
print("V(2^(1/6))  =", lj_pair_energy(WELL_FACTOR))

# Sweep r and locate the well numerically
r = np.linspace(0.95, 2.5, 3101)
v = lj_pair_energy(r)
print("grid argmin =", r[np.argmin(v)], " min =", v.min())

# Same curve written as A/r^12 - B/r^6 with physical parameters
params = PairPotentialParams(epsilon=0.2, sigma=3.4 / WELL_FACTOR)
ab = ab_from_eps_sigma(params)
print(f"A = {ab.a:.6g}, B = {ab.b:.6g}, minimum at {ab.r_min:.4f} A, depth {ab.depth:.3f}")
print("A/B form at 3.4 A:", ab_energy(3.4, ab), " LJ form:", lj_pair_energy(3.4, params))

# A 12-10 hydrogen-bond term with its minimum at 2.9 A
hb = hb_params_from_depth(depth=1.0, r_min=2.9)
for d in (2.6, 2.9, 3.2, 4.0):
    print(f"  hb({d}) = {hb_energy(d, hb):+.4f}")
