"""
Plain-text formats: XYZ cluster files and distance-constraint files.

Floats are written with ``repr`` so a write/read cycle is lossless.
"""
import numpy as np

from .distgeom import Constraint, ConstraintSet
from .potential import Configuration

__all__ = ["FormatError", "parse_xyz", "format_xyz", "read_xyz", "write_xyz",
           "parse_constraints", "format_constraints", "read_constraints",
           "write_constraints"]


class FormatError(ValueError):
    def __init__(self, msg, lineno=None, source=None):
        where = f"{source or '<input>'}:{lineno}: " if lineno is not None else ""
        super().__init__(where + msg)
        self.lineno = lineno


def parse_xyz(text, source=None):
    """Return ``(elements, Configuration, comment)``."""
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty XYZ input", 1, source)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise FormatError(f"bad atom count {lines[0]!r}", 1, source) from None
    if n < 1:
        raise FormatError("atom count must be positive", 1, source)
    if len(lines) < n + 2:
        raise FormatError(f"expected {n} atom lines, found {max(len(lines) - 2, 0)}",
                          len(lines), source)
    comment = lines[1]
    elements, coords = [], []
    for k in range(n):
        lineno = k + 3
        parts = lines[k + 2].split()
        if len(parts) < 4:
            raise FormatError(f"expected 'El x y z', got {lines[k + 2]!r}", lineno, source)
        try:
            coords.append([float(v) for v in parts[1:4]])
        except ValueError:
            raise FormatError(f"bad coordinate in {lines[k + 2]!r}", lineno, source) from None
        elements.append(parts[0])
    return elements, Configuration(coords), comment


def format_xyz(config, elements=None, comment=""):
    pos = config.positions if isinstance(config, Configuration) else np.asarray(config).reshape(-1, 3)
    if elements is None:
        elements = ["X"] * len(pos)
    if len(elements) != len(pos):
        raise ValueError("one element symbol per atom required")
    out = [str(len(pos)), comment.replace("\n", " ")]
    out += [f"{el} {float(x)!r} {float(y)!r} {float(z)!r}" for el, (x, y, z) in zip(elements, pos)]
    return "\n".join(out) + "\n"


def read_xyz(path):
    with open(path) as fh:
        return parse_xyz(fh.read(), source=str(path))


def write_xyz(path, config, elements=None, comment=""):
    with open(path, "w") as fh:
        fh.write(format_xyz(config, elements, comment))


def parse_constraints(text, source=None):
    """Parse ``atoms N`` followed by ``i j r_ij [w_ij]`` lines (0-based indices)."""
    n_atoms = None
    entries = []
    header_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if parts[0].lower() == "atoms":
            if n_atoms is not None:
                raise FormatError("repeated 'atoms' header", lineno, source)
            if len(parts) != 2:
                raise FormatError("header must read 'atoms N'", lineno, source)
            try:
                n_atoms = int(parts[1])
            except ValueError:
                raise FormatError(f"bad atom count {parts[1]!r}", lineno, source) from None
            header_line = lineno
            continue
        if n_atoms is None:
            raise FormatError("constraint before the 'atoms N' header", lineno, source)
        if len(parts) not in (3, 4):
            raise FormatError(f"expected 'i j r_ij [w_ij]', got {raw.strip()!r}", lineno, source)
        try:
            i, j = int(parts[0]), int(parts[1])
            r = float(parts[2])
            w = float(parts[3]) if len(parts) == 4 else 1.0
        except ValueError:
            raise FormatError(f"bad number in {raw.strip()!r}", lineno, source) from None
        entries.append((lineno, Constraint(i, j, r, w)))
    if n_atoms is None:
        raise FormatError("missing 'atoms N' header", 1, source)
    try:
        return ConstraintSet(n_atoms, [c for _, c in entries])
    except (ValueError, IndexError) as exc:
        error = exc
    # locate the first offending entry so the message carries its line
    for k, (lineno, _) in enumerate(entries):
        try:
            ConstraintSet(n_atoms, [c for _, c in entries[:k + 1]])
        except (ValueError, IndexError) as exc:
            raise FormatError(str(exc), lineno, source) from None
    raise FormatError(str(error), header_line, source)


def format_constraints(s):
    out = [f"atoms {s.n_atoms}"]
    out += [f"{c.i} {c.j} {c.r!r} {c.w!r}" for c in s.entries]
    return "\n".join(out) + "\n"


def read_constraints(path):
    with open(path) as fh:
        return parse_constraints(fh.read(), source=str(path))


def write_constraints(path, s):
    with open(path, "w") as fh:
        fh.write(format_constraints(s))
