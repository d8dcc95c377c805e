"""Schema validation of the CSV reader."""

import numpy as np
import pytest

from conftest import ORBIT_COLS, write_csv
from figplots import SchemaError, read_dataset


def test_reads_valid_orbit(data_dir):
    ds = read_dataset(data_dir / "fig4_orbit.csv", "orbit")
    assert ds.schema == "orbit"
    assert ds.header["mu"] == "0.14"
    assert len(ds) == 200
    assert ds["rho"].dtype == float
    assert set(ds["zone"]) <= {"R1", "S", "R2"}


def test_missing_file(data_dir):
    with pytest.raises(SchemaError, match="not found"):
        read_dataset(data_dir / "nope.csv")


def test_wrong_schema_name(data_dir):
    with pytest.raises(SchemaError, match="expected schema"):
        read_dataset(data_dir / "fig4_orbit.csv", "trajectory")


def test_missing_schema_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(SchemaError, match="schema"):
        read_dataset(p)


def test_unsupported_version(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# schema=orbit/2\n" + ",".join(ORBIT_COLS) + "\n"
                 + ",".join(["0"] * 7) + "\n")
    with pytest.raises(SchemaError, match="version"):
        read_dataset(p)


def test_missing_column_named(tmp_path):
    p = tmp_path / "bad.csv"
    cols = [c for c in ORBIT_COLS if c != "kappa"]
    p.write_text("# schema=orbit/1\n" + ",".join(cols) + "\n"
                 + ",".join(["0"] * len(cols)) + "\n")
    with pytest.raises(SchemaError, match="column 'kappa'"):
        read_dataset(p)


def test_empty_data_rejected(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("# schema=trajectory/1\nt,x,y,rho,kappa,zone\n")
    with pytest.raises(SchemaError, match="no data rows"):
        read_dataset(p)


def test_non_numeric_value_named(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# schema=exchange_profile/1\nrho,kappa\n0.1,oops\n")
    with pytest.raises(SchemaError, match="column 'kappa'"):
        read_dataset(p)


def test_unknown_column_access(data_dir):
    ds = read_dataset(data_dir / "fig4_orbit.csv")
    with pytest.raises(SchemaError, match="column 'missing'"):
        ds["missing"]
