"""van der Waals radii lookup backed by a shipped data file."""
from functools import lru_cache
from importlib import resources

__all__ = ["UnknownElementError", "parse_radii", "load_radii", "default_radii", "vdw_radius"]

RADII_FILE = "bondi_radii.dat"


class UnknownElementError(KeyError):
    def __init__(self, element):
        super().__init__(element)
        self.element = element

    def __str__(self):
        return f"no van der Waals radius for element {self.element!r}"


def parse_radii(text, source="<radii>"):
    """Parse ``El radius`` lines (``#`` comments) into an uppercase-keyed dict."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{source}:{lineno}: expected 'element radius', got {raw!r}")
        try:
            r = float(parts[1])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: bad radius {parts[1]!r}") from None
        if not r > 0:
            raise ValueError(f"{source}:{lineno}: radius must be positive")
        table[parts[0].upper()] = r
    return table


def load_radii(path):
    with open(path) as fh:
        return parse_radii(fh.read(), source=str(path))


@lru_cache(maxsize=None)
def _default():
    text = resources.files("ljmin.data").joinpath(RADII_FILE).read_text()
    return parse_radii(text, source=RADII_FILE)


def default_radii():
    return dict(_default())


def vdw_radius(element, overrides=None):
    """Radius in Angstrom; ``overrides`` entries take precedence over the table."""
    key = element.strip().upper()
    if overrides:
        for k, v in overrides.items():
            if k.upper() == key:
                return float(v)
    try:
        return _default()[key]
    except KeyError:
        raise UnknownElementError(element) from None
