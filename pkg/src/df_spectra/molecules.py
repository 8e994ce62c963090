"""Spectroscopic constants of diatomic molecules.

Ten molecules are built in. Additional molecules can be read from a plain
comma-separated file::

    name,re_angstrom,alpha_per_angstrom,mu_amu,De_per_cm
    # comment lines start with '#'
    CO,1.1282,2.2994,6.860586,87471.42567
"""

import csv
import io
import math
import os
from dataclasses import dataclass

from .errors import InvalidInput, ParseError

HEADER = ("name", "re_angstrom", "alpha_per_angstrom", "mu_amu", "De_per_cm")

ENV_VAR = "DF_SPECTRA_MOLECULES"


@dataclass(frozen=True)
class MoleculeParams:
    """Constants of one diatomic molecule.

    Attributes
    ----------
    name : str
        Identifier, subscripts written as digits ("I2").
    r_e : float
        Equilibrium bond length in Angstrom.
    alpha : float
        Screening parameter in 1/Angstrom.
    mu : float
        Reduced mass in amu.
    d_e : float
        Dissociation energy in cm^-1.
    """

    name: str
    r_e: float
    alpha: float
    mu: float
    d_e: float

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise InvalidInput("molecule name must be nonempty")
        for field in ("r_e", "alpha", "mu", "d_e"):
            value = getattr(self, field)
            if not (math.isfinite(value) and value > 0):
                raise InvalidInput(f"{self.name}: {field} must be positive and finite, got {value!r}")

    @property
    def key(self):
        return normalize_name(self.name)

    def replace(self, **changes):
        values = dict(name=self.name, r_e=self.r_e, alpha=self.alpha, mu=self.mu, d_e=self.d_e)
        values.update(changes)
        return MoleculeParams(**values)


def normalize_name(name):
    return name.strip().casefold()


_BUILTIN = (
    MoleculeParams("NO", 1.1508, 2.7534, 7.468441, 64877.06229),
    MoleculeParams("CO", 1.1282, 2.2994, 6.860586, 87471.42567),
    MoleculeParams("I2", 2.6620, 1.8643, 63.452235, 12758.0129),
    MoleculeParams("N2", 1.0940, 2.6989, 7.00335, 96288.03528),
    MoleculeParams("O2", 1.2070, 2.6636, 7.997457504, 41591.26201),
    MoleculeParams("H2", 0.7416, 1.9426, 0.50391, 38267.78314),
    MoleculeParams("HF", 0.9170, 2.2266, 0.96367, 49382.0),
    MoleculeParams("LiH", 1.5956, 1.1280, 0.8801221, 20287.13295),
    MoleculeParams("ScH", 1.7080, 1.5068, 10.682771, 36778.8836),
    MoleculeParams("HCl", 1.2746, 1.8677, 0.9801045, 37255.24414),
)


def builtin_molecules():
    """Return the ten built-in molecules in their canonical order."""
    return list(_BUILTIN)


def parse_molecules(text, path=None, extra_columns=()):
    """Parse molecule records from CSV text.

    ``extra_columns`` names leading columns that precede the standard five
    (used by the reference-table constants file). Returns a list of
    ``(extras, MoleculeParams)`` pairs when extras are requested, otherwise a
    list of ``MoleculeParams``.
    """
    expected = tuple(extra_columns) + HEADER
    records = []
    seen = {}
    header_seen = False
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        if not row or not "".join(row).strip():
            continue
        if row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            if tuple(cells) != expected:
                raise ParseError(f"expected header {','.join(expected)!r}, got {','.join(cells)!r}", lineno, path)
            header_seen = True
            continue
        if len(cells) != len(expected):
            raise ParseError(f"expected {len(expected)} fields, got {len(cells)}", lineno, path)
        extras = cells[: len(extra_columns)]
        name, *numbers = cells[len(extra_columns):]
        try:
            values = [float(x) for x in numbers]
        except ValueError as exc:
            raise ParseError(f"bad number: {exc}", lineno, path) from None
        try:
            mol = MoleculeParams(name, *values)
        except InvalidInput as exc:
            raise ParseError(str(exc), lineno, path) from None
        dup_key = tuple(extras) + (mol.key,)
        if dup_key in seen:
            raise ParseError(f"duplicate molecule {name!r} (first on line {seen[dup_key]})", lineno, path)
        seen[dup_key] = lineno
        records.append((extras, mol) if extra_columns else mol)
    if not header_seen:
        raise ParseError("missing header line", None, path)
    return records


def load_molecules(path):
    """Read molecules from a file in the molecule CSV format.

    Raises
    ------
    OSError
        If the file cannot be opened.
    ParseError
        On a malformed row, a non-positive value or a duplicate name.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_molecules(text, path=str(path))


def format_molecules(molecules):
    """Serialize molecules to the CSV format (LF line endings)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for m in molecules:
        writer.writerow([m.name, repr(m.r_e), repr(m.alpha), repr(m.mu), repr(m.d_e)])
    return out.getvalue()


class MoleculeDatabase:
    """Immutable name -> MoleculeParams mapping with case-insensitive lookup."""

    def __init__(self, molecules):
        self._by_key = {}
        for m in molecules:
            self._by_key[m.key] = m

    @classmethod
    def default(cls, extra_path=None):
        """Builtins, overridden by ``extra_path`` or the file named in $DF_SPECTRA_MOLECULES."""
        mols = builtin_molecules()
        path = extra_path or os.environ.get(ENV_VAR)
        if path:
            mols = merge_molecules(mols, load_molecules(path))
        return cls(mols)

    def get(self, name):
        try:
            return self._by_key[normalize_name(name)]
        except KeyError:
            raise KeyError(f"unknown molecule {name!r}") from None

    def __contains__(self, name):
        return normalize_name(name) in self._by_key

    def __iter__(self):
        return iter(self._by_key.values())

    def __len__(self):
        return len(self._by_key)

    def names(self):
        return [m.name for m in self]


def merge_molecules(base, extra):
    """Records of ``extra`` replace same-named records of ``base``; new ones are appended."""
    merged = {m.key: m for m in base}
    for m in extra:
        merged[m.key] = m
    return list(merged.values())
