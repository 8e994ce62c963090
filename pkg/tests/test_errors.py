import pytest

import df_spectra
from df_spectra.errors import (
    ConvergenceError,
    DFSpectraError,
    InvalidInput,
    NoBoundState,
    NumericalError,
    ParseError,
    PoleError,
)


def test_hierarchy():
    assert issubclass(PoleError, InvalidInput)
    assert issubclass(InvalidInput, ValueError) and issubclass(InvalidInput, DFSpectraError)
    assert issubclass(ConvergenceError, NumericalError)
    assert issubclass(NumericalError, ArithmeticError)
    for cls in (ParseError, NoBoundState, NumericalError):
        assert issubclass(cls, DFSpectraError)


def test_parse_error_location():
    err = ParseError("bad number", line=4, path="m.csv")
    assert err.line == 4 and err.path == "m.csv"
    assert str(err).startswith("m.csv:4:")
    assert str(ParseError("plain")) == "plain"


def test_no_bound_state_reason():
    err = NoBoundState("discriminant", "S < 0")
    assert err.reason == "discriminant"
    assert "S < 0" in str(err)


def test_public_api():
    spec = df_spectra.PotentialSpec.deng_fan(df_spectra.MoleculeDatabase.default().get("CO"))
    res = df_spectra.energy(spec, df_spectra.QuantumState(0, 0, 3))
    assert res.e_ev == pytest.approx(0.14236930, abs=1e-8)
    assert df_spectra.__version__
