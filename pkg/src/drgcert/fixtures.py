"""Bundled edge-list graphs, each validated against its sidecar metadata.

A fixture ``NAME`` lives in ``data/fixtures/NAME.el`` next to
``NAME.meta.json``, which records the expected vertex and edge counts and a
``validation`` block. Supported validation keys:

``cospectral_with``  ``[family, [params...]]``; clustered spectra must agree
``bipartite``        expected bipartiteness
``distance_regular`` expected oracle verdict
``intersection_array`` ``[[b...], [c...]]`` expected from the oracle
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from .graph import Graph, GraphFormatError, build_named, distance_data, parse_edge_list

FIXTURE_DIR = Path(__file__).parent / "data" / "fixtures"


class FixtureError(ValueError):
    pass


def bundled_fixtures(directory: Optional[Path] = None) -> list[str]:
    directory = FIXTURE_DIR if directory is None else Path(directory)
    return sorted(p.stem for p in directory.glob("*.el"))


def resolve_fixture(name_or_path: Union[str, Path], directory: Optional[Path] = None) -> Path:
    """A path to an existing file, or the stem of a fixture in ``directory``."""
    p = Path(name_or_path)
    if p.is_file():
        return p
    directory = FIXTURE_DIR if directory is None else Path(directory)
    stem = p.name[:-3] if p.name.endswith(".el") else p.name
    candidate = directory / f"{stem}.el"
    if candidate.is_file():
        return candidate
    raise FixtureError(f"fixture missing: {str(name_or_path)!r} not found in {directory}")


def load_meta(path: Path) -> Optional[dict]:
    meta = path.with_suffix(".meta.json")
    if not meta.is_file():
        return None
    try:
        return json.loads(meta.read_text())
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{meta}: invalid JSON ({exc})") from None


def validate_fixture(G: Graph, meta: dict) -> list[str]:
    """Return the list of validation failures (empty when the fixture is sound)."""
    from .criteria import oracle_drg
    from .spectral import ToleranceConfig, spectrum_of

    problems = []
    for key, actual in (("n", G.n), ("e", G.e)):
        if key in meta and meta[key] != actual:
            problems.append(f"{key}: expected {meta[key]}, found {actual}")
    checks = meta.get("validation", {})
    DD = distance_data(G)
    if "bipartite" in checks and DD.bipartite != checks["bipartite"]:
        problems.append(f"bipartite: expected {checks['bipartite']}")
    if "cospectral_with" in checks:
        family, params = checks["cospectral_with"]
        tol = ToleranceConfig()
        ref = spectrum_of(build_named(family, *params), tol)
        if not spectrum_of(G, tol).same_as(ref, tol.eq_band):
            problems.append(f"not cospectral with {family}{tuple(params)}")
    if "distance_regular" in checks or "intersection_array" in checks:
        verdict = oracle_drg(G, DD)
        if "distance_regular" in checks and verdict.is_drg != checks["distance_regular"]:
            problems.append(f"distance_regular: expected {checks['distance_regular']}")
        if "intersection_array" in checks:
            want = tuple(tuple(x) for x in checks["intersection_array"])
            if verdict.intersection_array != want:
                problems.append(f"intersection array {verdict.intersection_array} != {want}")
    return problems


def load_fixture(name_or_path: Union[str, Path], validate: bool = True,
                 directory: Optional[Path] = None) -> Graph:
    path = resolve_fixture(name_or_path, directory)
    try:
        G = parse_edge_list(path.read_text(), label=path.stem)
    except GraphFormatError as exc:
        raise FixtureError(f"{path}: {exc}") from None
    meta = load_meta(path)
    if validate and meta is not None:
        problems = validate_fixture(G, meta)
        if problems:
            raise FixtureError(f"{path}: validation failed: " + "; ".join(problems))
    return G
