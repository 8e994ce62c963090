"""Published energy tables embedded as data, plus verification and the gamma scan.

``data/reference_tables.csv`` holds every value as printed. Shifted-potential
tables print ``-E``; rows keep the printed number and :attr:`ReferenceRow.expected`
negates it. ``data/table_constants.csv`` records, per table, the molecular
constants the printed numbers were evidently computed with where these
differ from the built-in records.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DFSpectraError, InvalidInput, NoBoundState
from .gfd import FractionalConfig, q_factor
from .molecules import MoleculeDatabase, normalize_name, parse_molecules
from .nu import PotentialSpec, QuantumState, Variant, energy, energy_on_q_grid

REFERENCE_HEADER = ("table_id", "molecule", "variant", "n", "l", "dim", "delta", "value")

CAPTIONS = {
    "dfp-co": "Deng-Fan energies, CO: fractional orders at N=3 and dimensions 3-6 at delta=1",
    "dfp-i2": "Deng-Fan energies, I2: fractional orders at N=3 and dimensions 3-6 at delta=1",
    "dfp-no": "Deng-Fan energies, NO: fractional orders at N=3 and dimensions 3-6 at delta=1",
    "dfp-n2": "Deng-Fan energies, N2: fractional orders at N=3 and dimensions 3-6 at delta=1",
    "sdfp-co": "shifted Deng-Fan -E, CO: fractional orders and dimensions",
    "sdfp-i2": "shifted Deng-Fan -E, I2: fractional orders and dimensions",
    "sdfp-no": "shifted Deng-Fan -E, NO: fractional orders and dimensions",
    "sdfp-n2": "shifted Deng-Fan -E, N2: fractional orders and dimensions",
    "cmp-dfp-lih-sch": "Deng-Fan energies at delta=1, LiH and ScH",
    "cmp-dfp-hcl-co": "Deng-Fan energies at delta=1, HCl and CO",
    "cmp-dfp-hf-o2-h2": "Deng-Fan energies at delta=1, HF, O2 and H2",
    "cmp-sdfp-co-hcl": "shifted Deng-Fan -E at delta=1, CO and HCl",
    "cmp-sdfp-lih-sch": "shifted Deng-Fan -E at delta=1, LiH and ScH",
    "cmp-sdfp-h2-i2": "shifted Deng-Fan -E at delta=1, H2 and I2",
}


@dataclass(frozen=True)
class ReferenceRow:
    table_id: str
    molecule: str
    variant: Variant
    n: int
    l: int
    dim: int
    delta: float
    printed: str

    @property
    def expected(self):
        """Reference energy in eV (sign restored for shifted tables)."""
        value = float(self.printed)
        return -value if self.variant is Variant.SHIFTED_DENG_FAN else value

    @property
    def state(self):
        return QuantumState(self.n, self.l, self.dim)


@dataclass(frozen=True)
class ReferenceTable:
    table_id: str
    caption: str
    rows: tuple
    constants: dict = field(default_factory=dict)

    def molecule(self, name, db=None):
        """Constants used for ``name`` in this table."""
        key = normalize_name(name)
        if key in self.constants:
            return self.constants[key]
        return (db or MoleculeDatabase.default()).get(name)

    def spec(self, row, db=None):
        return PotentialSpec.from_variant(self.molecule(row.molecule, db), row.variant)

    def deltas(self):
        return sorted({r.delta for r in self.rows})

    def rows_at(self, delta):
        return [r for r in self.rows if r.delta == delta]


def _read_data(name):
    return resources.files("df_spectra").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def parse_reference_rows(text, path=None):
    rows = []
    reader = csv.reader(io.StringIO(text))
    header_seen = False
    for lineno, cells in enumerate(reader, start=1):
        if not cells or cells[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in cells]
        if not header_seen:
            if tuple(cells) != REFERENCE_HEADER:
                raise InvalidInput(f"{path or 'reference'}:{lineno}: unexpected header {cells!r}")
            header_seen = True
            continue
        tid, mol, variant, n, l, dim, delta, value = cells
        float(value)  # reject malformed numbers early
        rows.append(ReferenceRow(tid, mol, Variant(variant), int(n), int(l), int(dim), float(delta), value))
    return rows


def load_reference_tables():
    """All embedded tables keyed by id, in file order."""
    rows = parse_reference_rows(_read_data("reference_tables.csv"), "reference_tables.csv")
    constants = {}
    for (tid,), mol in parse_molecules(_read_data("table_constants.csv"), "table_constants.csv",
                                       extra_columns=("table_id",)):
        constants.setdefault(tid, {})[mol.key] = mol
    grouped = {}
    for r in rows:
        grouped.setdefault(r.table_id, []).append(r)
    return {
        tid: ReferenceTable(tid, CAPTIONS.get(tid, tid), tuple(rs), constants.get(tid, {}))
        for tid, rs in grouped.items()
    }


def select_tables(ids=None):
    tables = load_reference_tables()
    if not ids or ids == "all" or list(ids) == ["all"]:
        return tables
    if isinstance(ids, str):
        ids = [i for i in ids.split(",") if i]
    missing = [i for i in ids if i not in tables]
    if missing:
        raise KeyError(f"unknown table id(s): {', '.join(missing)}")
    return {i: tables[i] for i in ids}


def compute_row(table, row, gamma_param=1.0, db=None):
    cfg = FractionalConfig(row.delta, gamma_param)
    return energy(table.spec(row, db), row.state, cfg).e_ev


@dataclass
class RowCheck:
    row: ReferenceRow
    computed: float
    error: str = ""

    @property
    def deviation(self):
        return abs(self.computed - self.row.expected) if not self.error else math.inf


@dataclass
class TableCheck:
    table_id: str
    checks: list
    tol: float

    def _max(self, fractional):
        devs = [c.deviation for c in self.checks if (c.row.delta != 1.0) == fractional]
        return max(devs) if devs else None

    @property
    def max_dev_classical(self):
        return self._max(False)

    @property
    def max_dev_fractional(self):
        return self._max(True)

    def passed(self, strict=False):
        for c in self.checks:
            if (strict or c.row.delta == 1.0) and not c.deviation <= self.tol:
                return False
        return True


def verify_table(table, tol=1e-6, gamma_param=1.0, include_fractional=True, db=None):
    checks = []
    for row in table.rows:
        if row.delta != 1.0 and not include_fractional:
            continue
        try:
            checks.append(RowCheck(row, compute_row(table, row, gamma_param, db)))
        except DFSpectraError as exc:
            checks.append(RowCheck(row, math.nan, str(exc)))
    return TableCheck(table.table_id, checks, tol)


def shift_check(table, gamma_param=1.0, db=None):
    """Largest |E_sdf - (E_df - D_e)| over the table's states, computed both ways."""
    worst = 0.0
    for row in table.rows:
        mol = table.molecule(row.molecule, db)
        cfg = FractionalConfig(row.delta, gamma_param)
        df = PotentialSpec.deng_fan(mol)
        sdf = PotentialSpec.shifted(mol)
        try:
            e_df = energy(df, row.state, cfg).e_ev
            e_sdf = energy(sdf, row.state, cfg).e_ev
        except NoBoundState:
            continue
        worst = max(worst, abs(e_sdf - (e_df - df.d_e_ev)))
    return worst


@dataclass(frozen=True)
class CalibrationResult:
    table_id: str
    delta: float
    gamma_star: float
    rms_star: float
    rms_gamma_one: float
    rows: int

    @property
    def gamma_one_within_2x(self):
        return self.rms_gamma_one <= 2.0 * self.rms_star


def _rms_on_q(table, rows, delta, q, db=None):
    q = np.atleast_1d(np.asarray(q, dtype=float))
    sq = np.zeros_like(q)
    for row in rows:
        e = energy_on_q_grid(table.spec(row, db), row.state, delta, q)
        sq += (e - row.expected) ** 2
    out = np.sqrt(sq / len(rows))
    return np.where(np.isnan(out), np.inf, out)


def gamma_grid(gamma_min=0.05, gamma_max=5.0, step=1e-3):
    if not (0 < gamma_min < gamma_max and step > 0):
        raise InvalidInput("need 0 < gamma_min < gamma_max and step > 0")
    count = int(math.floor((gamma_max - gamma_min) / step + 1e-9)) + 1
    return gamma_min + step * np.arange(count)


def calibrate(table, delta, gamma_min=0.05, gamma_max=5.0, step=1e-3, db=None):
    """Find the gamma whose Q best reproduces the table's column at ``delta``.

    A uniform scan locates the best grid point; golden-section search on the
    neighbouring bracket refines it.

    Raises
    ------
    KeyError
        If the table has no rows at ``delta``.
    """
    rows = table.rows_at(delta)
    if not rows:
        raise KeyError(f"table {table.table_id!r} has no rows at delta={delta!r}")
    grid = gamma_grid(gamma_min, gamma_max, step)
    grid = grid[grid - delta + 1.0 > 0]

    def q_of(g):
        return FractionalConfig(delta, g).q

    q = np.array([q_of(g) for g in grid])
    rms = _rms_on_q(table, rows, delta, q, db)
    i = int(np.argmin(rms))
    g_star, r_star = float(grid[i]), float(rms[i])
    if 0 < i < len(grid) - 1 and np.isfinite(r_star) and delta != 1.0:
        res = minimize_scalar(
            lambda g: float(_rms_on_q(table, rows, delta, q_of(g), db)[0]),
            bracket=(float(grid[i - 1]), g_star, float(grid[i + 1])),
            method="golden",
        )
        if res.fun < r_star and grid[i - 1] <= res.x <= grid[i + 1]:
            g_star, r_star = float(res.x), float(res.fun)
    rms_one = float(_rms_on_q(table, rows, delta, q_of(1.0), db)[0])
    return CalibrationResult(table.table_id, float(delta), g_star, r_star, rms_one, len(rows))


def fractional_columns(tables=None):
    """(table, delta) pairs for every fractional column."""
    tables = tables or load_reference_tables()
    return [(t, d) for t in tables.values() for d in t.deltas() if d != 1.0]


def q_of_gamma(delta, gamma_param):
    return q_factor(delta, gamma_param)
