from __future__ import annotations

from fractions import Fraction

import pytest

from floercone.complex import Window
from floercone.io import bundle_from_json, bundle_to_json, load_example
from floercone.knot import (PROBE_DEPTH, BundleError, Flip, build_symmetry_flip, check_alexander_symmetry,
                            check_flip, flip_map, shift_table_of, tensor_bundle, validate_bundle)
from floercone.homology import check_filtered_quasi_iso
from floercone.rational_surgery import simple_knot_bundle
from floercone.upoly import UPoly

from conftest import EXAMPLES


@pytest.mark.parametrize("name", EXAMPLES)
def test_examples_are_valid(bundles, name):
    assert validate_bundle(bundles[name]).ok


@pytest.mark.parametrize("name", EXAMPLES)
def test_flip_quasi_iso_on_probe_window(bundles, name):
    b = bundles[name]
    for q_ in range(b.d):
        s = b.flip(q_).anchor
        probe = (Window.make(j=(s - PROBE_DEPTH, s)), Window.make(i=(-PROBE_DEPTH, 0)))
        assert check_filtered_quasi_iso(flip_map(b, q_, s), [probe]).ok


def test_flip_rescaling():
    fl = load_example("trefoil").flip(0)
    assert fl.at(fl.anchor + 2)["a"]["c"] == UPoly([3])
    with pytest.raises(ValueError):
        fl.at(Fraction(1, 2))


def test_wrong_flip_is_rejected():
    b = load_example("trefoil")
    doc = bundle_to_json(b)
    doc["flips"][0]["entries"] = [e for e in doc["flips"][0]["entries"] if e["from"] != "b"]
    with pytest.raises(BundleError) as err:
        bundle_from_json(doc)
    assert err.value.violations


def test_naive_flip_on_dual_complex_is_wrong():
    """b -> b style matching on the -1 dual of the trefoil sends q to q;
    the correct flip swaps q and r, and the naive one fails the chain test."""
    b = load_example("dual_trefoil_m1")
    naive = Flip(0, 0, Fraction(0), {x: {x: UPoly.monomial(0)} for x in ("q", "r", "s")}
                 | {"p": {"t": UPoly([1])}, "t": {"p": UPoly([-1])}})
    trial = bundle_from_json(bundle_to_json(b), validate=False)
    trial.flips = [naive]
    assert not check_flip(trial, 0).ok


def test_symmetry_flip_search_recovers_trefoil_flip():
    b = load_example("trefoil")
    found = build_symmetry_flip(b)
    assert found.entries == b.flip(0).entries


def test_symmetry_flip_needs_lspace():
    with pytest.raises(BundleError):
        build_symmetry_flip(load_example("dual_trefoil_m1"))


@pytest.mark.parametrize("name", EXAMPLES)
def test_examples_symmetric(bundles, name):
    assert check_alexander_symmetry(bundles[name])


def test_trivial_tensor_is_identity(bundles):
    for name in EXAMPLES:
        b = bundles[name]
        t = tensor_bundle(b, [(0, 0)])
        assert bundle_to_json(t)["sectors"] == [
            dict(sec, basis=[dict(g, sector=str(i)) for g in sec["basis"]])
            for i, sec in enumerate(bundle_to_json(b)["sectors"])]
        assert [f.entries for f in t.flips] == [f.entries for f in b.flips]


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_tensor_with_symmetric_factor_stays_symmetric(bundles, n):
    table = shift_table_of(simple_knot_bundle(n))
    for name in ("unknot", "trefoil", "figure_eight"):
        t = tensor_bundle(bundles[name], table)
        assert validate_bundle(t).ok
        assert check_alexander_symmetry(t)


def test_tensor_rejects_non_coprime():
    b = tensor_bundle(load_example("unknot"), shift_table_of(simple_knot_bundle(2)))
    with pytest.raises(BundleError):
        tensor_bundle(b, shift_table_of(simple_knot_bundle(2)))


def test_shift_table_rank_one_only(bundles):
    with pytest.raises(BundleError):
        shift_table_of(bundles["trefoil"])


def test_bundle_errors():
    doc = bundle_to_json(load_example("trefoil"))
    with pytest.raises(BundleError):
        bundle_from_json(dict(doc, k=0))
    with pytest.raises(BundleError):
        bundle_from_json(dict(doc, d=2))
