"""PDB input/output, van der Waals radii, contact analysis and clash relaxation."""
from .contacts import (
    Contact,
    ContactReport,
    classify_contacts,
    find_clashes,
    pair_clashes,
)
from .pdb import (
    Atom,
    FormatOverflowError,
    PDBParseError,
    Structure,
    parse_pdb,
    read_pdb,
    write_pdb,
)
from .radii import UnknownElementError, default_radii, load_radii, parse_radii, vdw_radius
from .relax import HBPair, RelaxResult, VdwPair, parse_pairs, read_pairs, relax_structure

__all__ = [
    "Atom", "Contact", "ContactReport", "FormatOverflowError", "HBPair", "PDBParseError",
    "RelaxResult", "Structure", "UnknownElementError", "VdwPair", "classify_contacts",
    "default_radii", "find_clashes", "load_radii", "pair_clashes", "parse_pairs",
    "parse_pdb", "parse_radii", "read_pairs", "read_pdb", "relax_structure",
    "vdw_radius", "write_pdb",
]
