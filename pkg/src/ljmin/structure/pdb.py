"""
Reading and writing the ATOM/HETATM subset of the PDB format.

Columns follow the v3.3 ATOM record (1-based, inclusive):

    1-6 record   7-11 serial   13-16 name   17 altLoc   18-20 resName
    22 chainID   23-26 resSeq  27 iCode     31-54 x, y, z (8.3f)
    55-60 occupancy   61-66 tempFactor   77-78 element

TER records are skipped, END stops reading, anything else is ignored and
counted.
"""
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

__all__ = ["PDBParseError", "FormatOverflowError", "Atom", "Structure", "parse_pdb",
           "write_pdb", "read_pdb"]

logger = logging.getLogger(__name__)


class PDBParseError(ValueError):
    def __init__(self, msg, lineno=None):
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)
        self.lineno = lineno


class FormatOverflowError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    serial: int
    name: str
    element: str
    residue_name: str
    chain: str
    residue_seq: int
    position: tuple
    occupancy: float = 1.0
    temp_factor: float = 0.0
    record: str = "ATOM"
    alt_loc: str = ""
    i_code: str = ""

    def __post_init__(self):
        if not self.element:
            raise ValueError(f"atom {self.serial} has no element")
        pos = tuple(float(c) for c in self.position)
        if len(pos) != 3 or not all(math.isfinite(c) for c in pos):
            raise ValueError(f"atom {self.serial} needs three finite coordinates")
        object.__setattr__(self, "position", pos)

    @property
    def residue_key(self):
        return (self.chain, self.residue_seq, self.i_code, self.residue_name)


@dataclass(frozen=True)
class Structure:
    atoms: tuple = ()
    source: str = "<string>"
    line_count: int = 0
    ignored_records: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def coordinates(self):
        if not self.atoms:
            return np.zeros((0, 3))
        return np.array([a.position for a in self.atoms], dtype=float)

    def with_coordinates(self, coords):
        coords = np.asarray(coords, dtype=float).reshape(len(self.atoms), 3)
        atoms = [replace(a, position=tuple(c)) for a, c in zip(self.atoms, coords)]
        return replace(self, atoms=tuple(atoms))

    def index_of_serial(self):
        return {a.serial: k for k, a in enumerate(self.atoms)}


def _field(line, start, stop):
    return line[start - 1:stop]


def _parse_atom(line, lineno):
    line = line.rstrip("\n").ljust(80)
    try:
        serial = int(_field(line, 7, 11))
    except ValueError:
        raise PDBParseError(f"bad serial {_field(line, 7, 11)!r}", lineno) from None
    coords = []
    for label, (a, b) in zip("xyz", ((31, 38), (39, 46), (47, 54))):
        text = _field(line, a, b)
        try:
            value = float(text)
        except ValueError:
            raise PDBParseError(f"bad {label} coordinate {text!r}", lineno) from None
        if not math.isfinite(value):
            raise PDBParseError(f"non-finite {label} coordinate", lineno)
        coords.append(value)
    seq_text = _field(line, 23, 26)
    try:
        residue_seq = int(seq_text) if seq_text.strip() else 0
    except ValueError:
        raise PDBParseError(f"bad residue number {seq_text!r}", lineno) from None
    floats = []
    for (a, b), default in (((55, 60), 1.0), ((61, 66), 0.0)):
        text = _field(line, a, b)
        try:
            floats.append(float(text) if text.strip() else default)
        except ValueError:
            raise PDBParseError(f"bad numeric field {text!r}", lineno) from None
    name = _field(line, 13, 16).strip()
    element = _field(line, 77, 78).strip()
    if not element:
        element = next((ch for ch in name if ch.isalpha()), "")
    if not element:
        raise PDBParseError("cannot determine element", lineno)
    return Atom(
        serial=serial,
        name=name,
        element=element.upper(),
        residue_name=_field(line, 18, 20).strip(),
        chain=_field(line, 22, 22).strip(),
        residue_seq=residue_seq,
        position=tuple(coords),
        occupancy=floats[0],
        temp_factor=floats[1],
        record=_field(line, 1, 6).strip(),
        alt_loc=_field(line, 17, 17).strip(),
        i_code=_field(line, 27, 27).strip(),
    )


def parse_pdb(text, source="<string>"):
    """Parse PDB text into a :class:`Structure`.

    Raises :class:`PDBParseError` naming the 1-based line on malformed
    numeric fields or duplicate serial numbers.
    """
    atoms = []
    serials = {}
    ignored = 0
    lines = text.splitlines()
    for lineno, line in enumerate(lines, 1):
        record = line[:6].strip()
        if record in ("ATOM", "HETATM"):
            atom = _parse_atom(line, lineno)
            if atom.serial in serials:
                raise PDBParseError(f"duplicate serial {atom.serial} "
                                    f"(first seen on line {serials[atom.serial]})", lineno)
            serials[atom.serial] = lineno
            atoms.append(atom)
        elif record == "TER":
            continue
        elif record == "END":
            break
        elif line.strip():
            ignored += 1
    if ignored:
        logger.warning("%s: ignored %d non-ATOM records", source, ignored)
    return Structure(atoms=tuple(atoms), source=source, line_count=len(lines),
                     ignored_records=ignored)


def read_pdb(path):
    with open(path) as fh:
        return parse_pdb(fh.read(), source=str(path))


def _fixed(value, width, fmt, what):
    text = format(value, fmt)
    if len(text) > width:
        raise FormatOverflowError(f"{what} {value!r} does not fit in {width} columns")
    return text.rjust(width)


def _atom_name(atom):
    name = atom.name
    if len(name) >= 4:
        return name[:4]
    # one-letter elements keep their symbol in column 14
    if len(atom.element) == 1 and name[:1].isalpha():
        return " " + name.ljust(3)
    return name.ljust(4)


def write_pdb(structure):
    """Render ATOM/HETATM records (input order) followed by END."""
    out = []
    for atom in structure.atoms:
        x, y, z = (_fixed(c, 8, ".3f", "coordinate") for c in atom.position)
        out.append(
            f"{atom.record:<6}{_fixed(atom.serial, 5, 'd', 'serial')} "
            f"{_atom_name(atom)}{atom.alt_loc:1}{atom.residue_name:>3} {atom.chain:1}"
            f"{_fixed(atom.residue_seq, 4, 'd', 'residue number')}{atom.i_code:1}   "
            f"{x}{y}{z}"
            f"{_fixed(atom.occupancy, 6, '.2f', 'occupancy')}"
            f"{_fixed(atom.temp_factor, 6, '.2f', 'temperature factor')}"
            f"          {atom.element:>2}"
        )
    out.append("END")
    return "\n".join(out) + "\n"
