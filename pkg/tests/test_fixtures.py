import json
import shutil

import pytest

from drgcert.fixtures import FIXTURE_DIR, FixtureError, bundled_fixtures, load_fixture
from drgcert.graph import build_named, distance_data


def test_bundled_names():
    assert bundled_fixtures() == ["hoffman", "perkel"]


def test_perkel_loads_and_validates(perkel):
    assert (perkel.n, perkel.e) == (57, 171)
    assert set(perkel.degrees.tolist()) == {6}


def test_hoffman_loads_and_validates(hoffman):
    assert (hoffman.n, hoffman.e) == (16, 32)
    assert distance_data(hoffman).bipartite


def test_fixture_family_and_path(tmp_path):
    assert build_named("fixture", "perkel") == load_fixture(FIXTURE_DIR / "perkel.el")
    assert load_fixture("hoffman.el").n == 16


def test_missing_fixture(tmp_path):
    with pytest.raises(FixtureError, match="fixture missing"):
        load_fixture("perkel", directory=tmp_path)


def test_validation_catches_wrong_graph(tmp_path):
    # a Q4 edge list under Hoffman's metadata passes cospectrality but is distance-regular
    from drgcert.graph import format_edge_list, hypercube
    (tmp_path / "hoffman.el").write_text(format_edge_list(hypercube(4)))
    shutil.copy(FIXTURE_DIR / "hoffman.meta.json", tmp_path / "hoffman.meta.json")
    with pytest.raises(FixtureError, match="distance_regular"):
        load_fixture("hoffman", directory=tmp_path)
    assert load_fixture("hoffman", directory=tmp_path, validate=False).n == 16


def test_validation_catches_wrong_counts(tmp_path):
    shutil.copy(FIXTURE_DIR / "perkel.el", tmp_path / "perkel.el")
    meta = json.loads((FIXTURE_DIR / "perkel.meta.json").read_text())
    meta["e"] = 170
    (tmp_path / "perkel.meta.json").write_text(json.dumps(meta))
    with pytest.raises(FixtureError, match="e: expected 170"):
        load_fixture("perkel", directory=tmp_path)


def test_malformed_fixture(tmp_path):
    (tmp_path / "bad.el").write_text("3\n0 5\n")
    with pytest.raises(FixtureError, match="out of range"):
        load_fixture("bad", directory=tmp_path)
