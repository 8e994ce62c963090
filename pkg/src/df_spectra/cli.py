"""Command-line interface: ``df-spectra <command> [flags]``.

Exit codes: 0 success, 2 data or lookup failure, 3 no bound state, 64 usage.
All CSV output is comma separated with a header row and LF line endings.
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import DFSpectraError, InvalidInput, NoBoundState, ParseError
from .fd_oracle import GridSpec, compare_with_closed_form
from .gfd import FractionalConfig
from .molecules import MoleculeDatabase, format_molecules
from .nu import PotentialSpec, QuantumState, Variant, energy, potential_eval
from .reference import calibrate, fractional_columns, select_tables, shift_check, verify_table
from .wavefunction import build_wavefunction

EXIT_OK = 0
EXIT_DATA = 2
EXIT_UNBOUND = 3
EXIT_USAGE = 64

SIG_DIGITS = 12


class UsageError(Exception):
    """Raised for flag values argparse cannot reject by itself."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sig(x):
    """Round to SIG_DIGITS significant digits (NaN and inf pass through)."""
    return float(format(x, f".{SIG_DIGITS}g")) if math.isfinite(x) else x


def _fmt(x):
    return format(x, f".{SIG_DIGITS}g")


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def _float_list(text):
    if text is None:
        return []
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _name_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _database(args):
    return MoleculeDatabase.default(getattr(args, "molecules_file", None))


def _spec(args, molecule=None):
    mol = molecule or _database(args).get(args.molecule)
    if args.potential == Variant.GENERAL.value and args.v0 is None:
        raise UsageError("--potential general needs --v0")
    if args.potential != Variant.GENERAL.value and args.v0 is not None:
        raise UsageError("--v0 only applies to --potential general")
    return PotentialSpec.from_variant(mol, args.potential, args.v0)


def _add_state_flags(p, with_state=True):
    p.add_argument("--molecule", required=True, help="molecule name (case-insensitive)")
    p.add_argument("--potential", choices=[v.value for v in Variant], default="df")
    p.add_argument("--v0", type=float, help="energy offset in eV (general potential only)")
    if with_state:
        p.add_argument("--n", type=int, required=True, help="vibrational quantum number")
        p.add_argument("--l", type=int, required=True, help="angular momentum quantum number")
        p.add_argument("--dim", type=int, default=3, help="spatial dimension N (default 3)")
        p.add_argument("--delta", type=float, default=1.0, help="fractional order in (0, 1]")
        p.add_argument("--gamma", type=float, default=1.0, help="GFD parameter (default 1)")


def cmd_energy(args, out):
    spec = _spec(args)
    cfg = FractionalConfig(args.delta, args.gamma)
    res = energy(spec, QuantumState(args.n, args.l, args.dim), cfg)
    record = {
        "molecule": spec.molecule.name,
        "potential": spec.variant.value,
        "v0": _sig(spec.v0),
        "n": args.n,
        "l": args.l,
        "dim": args.dim,
        "delta": args.delta,
        "gamma": args.gamma,
        "e_ev": _sig(res.e_ev),
        "epsilon": _sig(res.epsilon),
        "sqrt_s": _sig(res.sqrt_s),
        "root": _sig(res.root),
    }
    if args.format == "text":
        out.write(f"{res.e_ev:.8f}\n")
    elif args.format == "json":
        out.write(json.dumps(record) + "\n")
    else:
        w = _writer(out)
        w.writerow(record.keys())
        w.writerow(_fmt(v) if isinstance(v, float) else v for v in record.values())
    return EXIT_OK


def cmd_table(args, out):
    if not args.deltas:
        raise UsageError("--deltas must list at least one value")
    if not args.dims:
        raise UsageError("--dims must list at least one value")
    db = _database(args)
    mols = [db.get(name) for name in args.molecules]
    w = _writer(out)
    w.writerow(["molecule", "potential", "n", "l", "dim", "delta", "gamma", "e_ev"])
    cfgs = {d: FractionalConfig(d, args.gamma) for d in args.deltas}
    for mol in mols:
        spec = _spec(args, mol)
        for n in range(args.n_max + 1):
            for l in range(min(n, args.l_max) + 1):
                for dim in args.dims:
                    for d in args.deltas:
                        try:
                            e = _fmt(energy(spec, QuantumState(n, l, dim), cfgs[d]).e_ev)
                        except NoBoundState:
                            if not args.skip_unbound:
                                raise
                            e = ""
                        w.writerow([mol.name, spec.variant.value, n, l, dim, _fmt(d), _fmt(args.gamma), e])
    return EXIT_OK


def cmd_verify(args, out):
    tables = select_tables(args.tables)
    include_fractional = args.all_deltas or args.strict
    w = _writer(out)
    w.writerow(["table_id", "rows", "max_dev_delta1", "max_dev_fractional", "shift_dev", "failed_rows", "status"])
    ok = True
    for tid, table in tables.items():
        check = verify_table(table, args.tol, include_fractional=include_fractional)
        passed = check.passed(strict=args.strict)
        ok = ok and passed
        failed = sum(1 for c in check.checks if not c.deviation <= args.tol)
        frac = check.max_dev_fractional
        w.writerow([
            tid,
            len(check.checks),
            _fmt(check.max_dev_classical) if check.max_dev_classical is not None else "",
            _fmt(frac) if frac is not None else "",
            _fmt(shift_check(table)),
            failed,
            "PASS" if passed else "FAIL",
        ])
        for c in check.checks:
            if c.error:
                print(f"{tid}: {c.row.molecule} n={c.row.n} l={c.row.l} N={c.row.dim} "
                      f"delta={c.row.delta}: {c.error}", file=sys.stderr)
    print(f"verify: {'PASS' if ok else 'FAIL'} ({len(tables)} tables, tol {args.tol:g} eV)", file=sys.stderr)
    return EXIT_OK if ok else 1


CALIBRATION_HEADER = [
    "table_id", "delta", "rows", "gamma_star", "rms_star", "rms_gamma_one", "gamma_one_within_2x",
]


def cmd_calibrate(args, out):
    if args.all:
        pairs = fractional_columns(select_tables())
    else:
        if args.table is None or args.delta is None:
            raise UsageError("give --table and --delta, or --all")
        pairs = [(select_tables([args.table])[args.table], args.delta)]
    results = [calibrate(t, d, args.gamma_min, args.gamma_max, args.step) for t, d in pairs]
    w = _writer(out)
    w.writerow(CALIBRATION_HEADER)
    for r in results:
        w.writerow([
            r.table_id, _fmt(r.delta), r.rows, _fmt(r.gamma_star), _fmt(r.rms_star),
            _fmt(r.rms_gamma_one), str(r.gamma_one_within_2x).lower(),
        ])
    return EXIT_OK


def _radii(args, mol, default_lo, default_hi, include=()):
    lo = default_lo if args.r_min is None else args.r_min
    hi = default_hi if args.r_max is None else args.r_max
    if not 0 < lo < hi:
        raise UsageError(f"need 0 < r-min < r-max, got {lo!r}, {hi!r}")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    r = np.linspace(lo, hi, args.samples)
    extra = [x for x in include if lo <= x <= hi]
    return np.unique(np.concatenate([r, extra])) if extra else r


def cmd_wavefunction(args, out):
    spec = _spec(args)
    mol = spec.molecule
    wf = build_wavefunction(spec, QuantumState(args.n, args.l, args.dim), FractionalConfig(args.delta, args.gamma))
    if wf.experimental:
        print("note: fractional-order eigenfunction (delta < 1) is experimental", file=sys.stderr)
    r = _radii(args, mol, 0.5 * mol.r_e, mol.r_e + 10.0 / mol.alpha)
    phi, f, rho = wf(r), wf.radial_f(r), wf.rho(r)
    w = _writer(out)
    w.writerow(["r_angstrom", "phi", "F", "rho"])
    for row in zip(r, phi, f, rho):
        w.writerow(_fmt(x) for x in row)
    return EXIT_OK


def cmd_potential(args, out):
    spec = _spec(args)
    mol = spec.molecule
    r = _radii(args, mol, 0.5 * mol.r_e, mol.r_e + 20.0 / mol.alpha, include=(mol.r_e,))
    v = potential_eval(spec, r)
    w = _writer(out)
    w.writerow(["molecule", "potential", "r_angstrom", "v_ev"])
    for ri, vi in zip(r, v):
        w.writerow([mol.name, spec.variant.value, _fmt(ri), _fmt(vi)])
    return EXIT_OK


def cmd_oracle(args, out):
    spec = _spec(args)
    grid = GridSpec.default(spec.molecule, args.points)
    rows = compare_with_closed_form(spec, args.l, args.dim, range(args.n_max + 1), grid)
    w = _writer(out)
    w.writerow(["molecule", "n", "l", "dim", "e_closed", "e_fd_pekeris", "e_fd_exact",
                "delta_pekeris", "delta_exact", "estimated_error"])
    for r in rows:
        w.writerow([spec.molecule.name, r.n, r.l, r.dim] + [_fmt(x) for x in (
            r.e_closed, r.e_fd_pekeris, r.e_fd_exact, r.delta_pekeris, r.delta_exact, r.estimated_error)])
    return EXIT_OK


def cmd_molecules(args, out):
    out.write(format_molecules(list(_database(args))))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="df-spectra", description="Deng-Fan bound-state spectra.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--molecules-file", help="extra molecule CSV (overrides $DF_SPECTRA_MOLECULES)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("energy", help="single energy level")
    _add_state_flags(p)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("table", help="grid of energies as CSV")
    p.add_argument("--molecules", type=_name_list, default=["CO"], help="comma-separated names")
    p.add_argument("--potential", choices=[v.value for v in Variant], default="df")
    p.add_argument("--v0", type=float)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--l-max", type=int, default=3, help="l runs over 0..min(n, l-max)")
    p.add_argument("--dims", type=_int_list, default=[3])
    p.add_argument("--deltas", type=_float_list, default=[1.0])
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--skip-unbound", action="store_true", help="leave e_ev blank instead of failing")
    p.add_argument("--output", "-o", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="recompute the embedded reference tables")
    p.add_argument("--tables", type=_name_list, default=["all"], help="'all' or comma-separated ids")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--delta-one-only", dest="all_deltas", action="store_false", default=False,
                       help="check only delta=1 rows (default)")
    group.add_argument("--all-deltas", dest="all_deltas", action="store_true",
                       help="also report fractional rows (non-fatal)")
    p.add_argument("--strict", action="store_true", help="fractional rows must pass too")
    p.add_argument("--tol", type=float, default=1e-6, help="absolute tolerance in eV")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("calibrate", help="fit gamma to a fractional reference column")
    p.add_argument("--table")
    p.add_argument("--delta", type=float)
    p.add_argument("--all", action="store_true", help="every fractional column of every table")
    p.add_argument("--gamma-min", type=float, default=0.05)
    p.add_argument("--gamma-max", type=float, default=5.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("wavefunction", help="sample a normalized eigenfunction")
    _add_state_flags(p)
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("potential", help="sample V(r)")
    _add_state_flags(p, with_state=False)
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("oracle", help="closed form against finite differences")
    _add_state_flags(p, with_state=False)
    p.add_argument("--l", type=_int_list, default=[0], help="comma-separated l values")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--points", type=int, default=20000)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("molecules", help="list the molecule database as CSV")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_molecules)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, close = _open_output(getattr(args, "output", None))
    except OSError as exc:
        print(f"df-spectra: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"df-spectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoBoundState as exc:
        print(f"df-spectra: no bound state: {exc}", file=sys.stderr)
        return EXIT_UNBOUND
    except InvalidInput as exc:
        print(f"df-spectra: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ParseError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"df-spectra: {msg}", file=sys.stderr)
        return EXIT_DATA
    except DFSpectraError as exc:
        print(f"df-spectra: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
