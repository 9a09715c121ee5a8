from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from punctel import oracle
from punctel.errors import DistanceContradiction, OutOfRange
from punctel.oracle import (
    STANDARD,
    SWAPPED,
    Branch,
    build_table,
    exact_branch_error,
    exact_joint_error,
    joint_success,
    mc_logical_error,
    operational_distance,
    oracle_report,
    resolve_convention,
    success_indicator,
    within_sigmas,
)
from punctel.purification import PauliChannel, purify, to_channel, werner
from punctel.reliability import branch_success, logical_error


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def brute_lookup_ok(code, branch, convention):
    """Decoder success per error pattern, from first principles."""
    check, harmless = oracle.branch_matrices(code, branch, convention)
    t = oracle.branch_radius(code, branch)
    n = code.n
    span = {0}
    for row in harmless.rows:
        span |= {s ^ row for s in span}

    def syn(e):
        return tuple(parity(e & row) for row in check.rows)

    correctable = [e for e in range(1 << n) if bin(e).count("1") <= t]
    ok = np.zeros(1 << n, dtype=bool)
    for e in range(1 << n):
        s = syn(e)
        ok[e] = any(syn(c) == s and (c ^ e) in span for c in correctable)
    return ok


def brute_joint_success(ok_x, ok_z, ch, n):
    table = {(0, 0): ch.pI, (0, 1): ch.pZ, (1, 0): ch.pX, (1, 1): ch.pY}
    total = 0.0
    for x, z in itertools.product(range(1 << n), repeat=2):
        if ok_x[x] and ok_z[z]:
            p = 1.0
            for j in range(n):
                p *= table[(x >> j) & 1, (z >> j) & 1]
            total += p
    return total


@pytest.fixture(scope="module")
def resolution(registry):
    return resolve_convention(registry)


def test_convention_resolution(resolution):
    assert resolution.convention == SWAPPED
    assert resolution.swapped
    assert any("punct-13" in line for line in resolution.diagnosis)


def test_contradiction_names_the_pair(registry):
    code = registry.get("punct-13")
    with pytest.raises(DistanceContradiction) as info:
        for branch in Branch:
            build_table(code, branch, STANDARD)
    assert info.value.code_id == "punct-13"
    first, second = info.value.pair
    assert first != second and first in str(info.value) and second in str(info.value)


def test_table_sizes(registry, resolution):
    table = build_table(registry.get("punct-8"), Branch.X, resolution.convention)
    assert table.radius == 1
    assert table.errors_enumerated == len(table.map) == 9
    for branch in Branch:
        assert build_table(registry.get("base-17"), branch, resolution.convention).errors_enumerated == 154


def test_steane_weight_one_syndromes(registry):
    for branch in Branch:
        table = build_table(registry.get("steane-7"), branch)
        nonzero = [s for s, rep in table.map.items() if rep]
        assert len(nonzero) == 7 and 0 not in nonzero


def test_table_representatives_reproduce_their_syndrome(registry, resolution):
    table = build_table(registry.get("punct-13"), Branch.Z, resolution.convention)
    for s, rep in table.map.items():
        assert oracle.syndrome_bits(table.check.rows, rep) == s


@pytest.mark.parametrize("code_id", ["uncoded", "steane-7", "punct-8"])
def test_lookup_decoder_against_brute_force(registry, resolution, code_id):
    code = registry.get(code_id)
    for branch in Branch:
        expected = brute_lookup_ok(code, branch, resolution.convention)
        got = success_indicator(code, branch, "lookup", resolution.convention)
        assert np.array_equal(got, expected)


def test_joint_contraction_against_brute_force(registry, resolution):
    code = registry.get("steane-7")
    ch = to_channel(purify(0.8, 1))
    ok_x = success_indicator(code, Branch.X, "lookup", resolution.convention)
    ok_z = success_indicator(code, Branch.Z, "lookup", resolution.convention)
    assert joint_success(ok_x, ok_z, ch, code.n) == pytest.approx(
        brute_joint_success(ok_x, ok_z, ch, code.n), abs=1e-13
    )


@pytest.mark.parametrize("q", [0.01, 0.05, 0.1])
def test_threshold_enumeration_equals_binomial(registry, q):
    for code in registry:
        for branch in Branch:
            t = oracle.branch_radius(code, branch)
            got = exact_branch_error(code, branch, q, "threshold")
            assert abs(got - (1 - branch_success(code.n, t, q))) <= 1e-12


def test_zero_noise(registry, resolution):
    for code in registry:
        for mode in ("threshold", "lookup"):
            assert exact_branch_error(code, Branch.X, 0.0, mode, resolution.convention) == 0.0


@pytest.mark.parametrize("q", [0.001, 0.05, 0.2, 0.45])
def test_lookup_never_worse_than_threshold(registry, resolution, q):
    for code in registry:
        for branch in Branch:
            lookup = exact_branch_error(code, branch, q, "lookup", resolution.convention)
            threshold = exact_branch_error(code, branch, q, "threshold", resolution.convention)
            assert lookup <= threshold + 1e-15


def test_unknown_mode(registry):
    with pytest.raises(ValueError):
        exact_branch_error(registry.get("steane-7"), Branch.X, 0.1, "ml")


def test_operational_distances(registry, resolution):
    for code in registry:
        for branch in Branch:
            measured = operational_distance(code, branch, resolution.convention, max_weight=5)
            assert measured == oracle.branch_label(code, branch)


def test_standard_convention_mislabels_punct_13(registry):
    code = registry.get("punct-13")
    measured = {b: operational_distance(code, b, STANDARD) for b in Branch}
    labels = {b: oracle.branch_label(code, b) for b in Branch}
    assert measured != labels
    assert sorted(measured.values()) == sorted(labels.values())


def test_report_consistency(registry, resolution):
    ch = to_channel(purify(0.9, 1))
    for code in registry:
        rep = oracle_report(code, ch, 0.9, 1, convention=resolution.convention)
        assert abs(rep.exact_threshold - rep.analytic) <= 1e-12
        assert rep.exact_lookup <= rep.exact_threshold_joint + 1e-15
        assert rep.exact_lookup_branchwise <= rep.exact_threshold + 1e-15
        assert rep.mc is None and rep.samples == 0
        assert len(oracle.report_row(rep)) == len(oracle.REPORT_COLUMNS)


def test_mc_perfect_channel(registry, resolution):
    est = mc_logical_error(registry.get("base-17"), PauliChannel.perfect(), 10_000, 3, resolution.convention)
    assert est.failures == 0 and est.mean == 0.0 and est.stderr == 0.0


def test_mc_is_deterministic(registry, resolution):
    code = registry.get("punct-8")
    ch = to_channel(purify(0.9, 0))
    a = mc_logical_error(code, ch, 50_000, 11, resolution.convention, workers=3)
    b = mc_logical_error(code, ch, 50_000, 11, resolution.convention, workers=3)
    c = mc_logical_error(code, ch, 50_000, 12, resolution.convention, workers=3)
    assert a == b
    assert a.failures != c.failures


def test_mc_guards(registry):
    with pytest.raises(OutOfRange):
        mc_logical_error(registry.get("steane-7"), PauliChannel.perfect(), 0, 1)
    with pytest.raises(OutOfRange):
        mc_logical_error(registry.get("steane-7"), PauliChannel.perfect(), 10, 1, workers=0)


def test_mc_full_depolarizing(registry, resolution):
    code = registry.get("steane-7")
    ch = to_channel(werner(0.25))
    exact = exact_joint_error(code, ch, "lookup", resolution.convention)
    assert exact > 0.7
    est = mc_logical_error(code, ch, 100_000, 1, resolution.convention)
    assert within_sigmas(est, exact)


@pytest.mark.slow
def test_mc_punct_8_ten_million(registry, resolution):
    code = registry.get("punct-8")
    ch = to_channel(purify(0.95, 3))
    exact = exact_joint_error(code, ch, "lookup", resolution.convention)
    est = mc_logical_error(code, ch, 10**7, 1, resolution.convention, workers=4)
    assert within_sigmas(est, exact)


def test_within_sigmas():
    est = oracle.McEstimate(failures=100, samples=10_000, seed=0, workers=1)
    spread = math.sqrt(0.01 * 0.99 / 10_000)
    assert within_sigmas(est, 0.01 + 2.9 * spread)
    assert not within_sigmas(est, 0.01 + 3.5 * spread)


def test_analytic_and_exact_agree_for_symmetric_codes(registry):
    ch = to_channel(purify(0.95, 2))
    for code_id in ("steane-7", "base-17"):
        code = registry.get(code_id)
        rep = oracle_report(code, ch, 0.95, 2, convention=STANDARD)
        assert rep.exact_threshold == pytest.approx(logical_error(code, ch), abs=1e-12)
