"""
Steric clash detection and contact classification.

For a pair with van der Waals radii ``ri`` and ``rj`` the optimal contact
distance is ``d* = ri + rj``, the well bottom of a Lennard-Jones pair whose
``sigma = d* / 2**(1/6)``.  Pairs are reported with 0-based atom indices,
always ``i < j``.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..potential import WELL_FACTOR
from .radii import vdw_radius

__all__ = ["Contact", "ContactReport", "DEFAULT_OVERLAP_TOL", "DEFAULT_WINDOW",
           "NEIGHBOR_CUTOFF", "find_clashes", "classify_contacts", "atom_radii",
           "pair_clashes"]

DEFAULT_OVERLAP_TOL = 0.4
DEFAULT_WINDOW = 0.1
NEIGHBOR_CUTOFF = 8.0


@dataclass(frozen=True)
class Contact:
    i: int
    j: int
    distance: float
    vdw_sum: float


@dataclass
class ContactReport:
    clashes: list = field(default_factory=list)
    optimal: list = field(default_factory=list)
    far: list = field(default_factory=list)
    thresholds: dict = field(default_factory=dict)

    def to_dict(self, structure=None):
        def rows(items):
            out = []
            for c in items:
                row = {"i": c.i, "j": c.j, "distance": c.distance, "vdw_sum": c.vdw_sum}
                if structure is not None:
                    row["serial_i"] = structure.atoms[c.i].serial
                    row["serial_j"] = structure.atoms[c.j].serial
                out.append(row)
            return out
        return {"clashes": rows(self.clashes), "optimal": rows(self.optimal),
                "far": rows(self.far), "thresholds": dict(self.thresholds)}


def atom_radii(structure, radii=None):
    return np.array([vdw_radius(a.element, radii) for a in structure.atoms])


def _candidate_pairs(structure, cutoff, exclude_same_residue):
    pos = structure.coordinates()
    if len(pos) < 2:
        return pos, np.zeros((0, 2), dtype=int)
    pairs = cKDTree(pos).query_pairs(cutoff, output_type="ndarray")
    if exclude_same_residue and len(pairs):
        keys = [a.residue_key for a in structure.atoms]
        keep = [keys[i] != keys[j] for i, j in pairs]
        pairs = pairs[np.array(keep, dtype=bool)]
    # canonical ordering keeps reports independent of traversal order
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))] if len(pairs) else pairs
    return pos, pairs.reshape(-1, 2)


def _distance(pos, i, j):
    return float(np.sqrt(np.sum((pos[i] - pos[j]) ** 2)))


def find_clashes(structure, overlap_tol=DEFAULT_OVERLAP_TOL, radii=None,
                 exclude_same_residue=True):
    """Pairs closer than the sum of their vdW radii minus ``overlap_tol``."""
    if overlap_tol < 0:
        raise ValueError("overlap_tol must be >= 0")
    rad = atom_radii(structure, radii)
    report = ContactReport(thresholds={"overlap_tol": overlap_tol})
    if len(rad) < 2:
        return report
    pos, pairs = _candidate_pairs(structure, 2.0 * rad.max(), exclude_same_residue)
    for i, j in pairs:
        i, j = int(i), int(j)
        d = _distance(pos, i, j)
        s = rad[i] + rad[j]
        if d < s - overlap_tol:
            report.clashes.append(Contact(i, j, d, s))
    return report


def pair_clashes(structure, pairs, overlap_tol=DEFAULT_OVERLAP_TOL, radii=None):
    """Clash test restricted to the given ``(i, j)`` index pairs."""
    pos = structure.coordinates()
    out = []
    for i, j in sorted({(min(p[0], p[1]), max(p[0], p[1])) for p in pairs}):
        s = (vdw_radius(structure.atoms[i].element, radii)
             + vdw_radius(structure.atoms[j].element, radii))
        d = _distance(pos, i, j)
        if d < s - overlap_tol:
            out.append(Contact(i, j, d, s))
    return out


def classify_contacts(structure, window=DEFAULT_WINDOW, overlap_slack=0.0, radii=None,
                      cutoff=NEIGHBOR_CUTOFF, exclude_same_residue=True):
    """Sort every pair within ``cutoff`` into clash, optimal or far.

    clash:   d < d* / 2**(1/6) - overlap_slack  (inside the zero-energy distance)
    optimal: |d - d*| <= window * d*
    far:     everything else within the cutoff
    """
    if not 0 < window < 1:
        raise ValueError("window must lie in (0, 1)")
    rad = atom_radii(structure, radii)
    report = ContactReport(thresholds={"window": window, "overlap_slack": overlap_slack,
                                       "cutoff": cutoff, "well_factor": WELL_FACTOR})
    if len(rad) < 2:
        return report
    pos, pairs = _candidate_pairs(structure, cutoff, exclude_same_residue)
    for i, j in pairs:
        i, j = int(i), int(j)
        d = _distance(pos, i, j)
        if d > cutoff:
            continue
        s = rad[i] + rad[j]
        if d < s / WELL_FACTOR - overlap_slack:
            report.clashes.append(Contact(i, j, d, s))
        elif abs(d - s) <= window * s:
            report.optimal.append(Contact(i, j, d, s))
        else:
            report.far.append(Contact(i, j, d, s))
    return report
