from __future__ import annotations

import csv
import io
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from punctel.css import builtin_registry
from punctel.errors import NoCrossing, OutOfRange
from punctel.purification import PauliChannel, purify, to_channel
from punctel.reliability import (
    CSV_COLUMNS,
    branch_failure,
    branch_success,
    evaluate,
    fidelity_grid,
    find_crossing,
    logical_error,
    select_code,
    sweep,
    uncoded_gap,
    write_sweep_csv,
)


def exact_success(n: int, t: int, q: Fraction) -> Fraction:
    return sum(math.comb(n, i) * q**i * (1 - q) ** (n - i) for i in range(t + 1))


def test_branch_success_examples():
    assert branch_success(7, 1, 0.0) == 1.0
    assert branch_success(7, 1, 0.1) == pytest.approx(0.8503056, abs=1e-12)
    assert branch_success(5, 5, 0.7) == 1.0
    assert branch_failure(7, 1, 0.1) == pytest.approx(1 - 0.8503056, abs=1e-12)


@pytest.mark.parametrize("n, t", [(1, 0), (7, 1), (8, 1), (13, 2), (17, 2)])
@pytest.mark.parametrize("q", [Fraction(1, 1000), Fraction(1, 30), Fraction(1, 3)])
def test_branch_success_matches_rationals(n, t, q):
    assert branch_success(n, t, float(q)) == pytest.approx(float(exact_success(n, t, q)), abs=1e-15)
    assert branch_failure(n, t, float(q)) == pytest.approx(float(1 - exact_success(n, t, q)), rel=1e-12)


def test_branch_success_guards():
    with pytest.raises(OutOfRange):
        branch_success(7, 1, 1.5)
    with pytest.raises(OutOfRange):
        branch_success(7, 8, 0.1)


def test_uncoded_at_0_9(registry):
    p = evaluate(registry.get("uncoded"), 0.9, 0)
    assert p.pL == pytest.approx(1 - (14 / 15) ** 2, abs=1e-15)
    assert p.pL == pytest.approx(0.12889, abs=1e-5)


def test_base_code_at_0_95(registry):
    q = Fraction(1, 30)
    success = exact_success(17, 2, q)
    expected = 1 - success * success
    assert evaluate(registry.get("base-17"), 0.95, 0).pL == pytest.approx(float(expected), rel=1e-12)


def test_perfect_channel_gives_zero(registry):
    for code in registry:
        assert logical_error(code, PauliChannel.perfect()) == 0.0


def test_ordering_at_high_fidelity(registry):
    pl = {c.id: evaluate(c, 0.95, 0).pL for c in registry}
    assert pl["base-17"] < pl["punct-8"] < pl["uncoded"]


@given(
    st.integers(1, 20).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n), st.integers(0, n))),
    st.floats(0.0, 1.0),
)
def test_larger_radius_never_hurts(shape, q):
    n, t1, t2 = shape
    lo, hi = sorted((t1, t2))
    assert branch_success(n, hi, q) >= branch_success(n, lo, q) - 1e-15


@given(st.floats(0.0, 1.0), st.integers(0, 5))
def test_logical_error_is_a_probability(f0, r):
    for code in builtin_registry():
        p = evaluate(code, f0, r).pL
        assert 0.0 <= p <= 1.0


def test_fidelity_grid():
    grid = fidelity_grid(0.8, 1.0, 0.001)
    assert len(grid) == 201
    assert grid[0] == 0.8 and grid[-1] == 1.0 and grid[150] == 0.95
    assert fidelity_grid(0.9, 0.9, 0.01) == [0.9]
    with pytest.raises(OutOfRange):
        fidelity_grid(0.9, 0.8, 0.01)


@pytest.fixture(scope="module")
def full_sweep(registry):
    return sweep(registry, fidelity_grid(0.8, 1.0, 0.001), range(4))


def test_sweep_size_and_order(full_sweep, registry):
    assert len(full_sweep) == 5 * 4 * 201
    keys = [(p.code_id, p.r, p.f0) for p in full_sweep]
    order = {cid: i for i, cid in enumerate(registry.ids)}
    assert keys == sorted(keys, key=lambda k: (order[k[0]], k[1], k[2]))


def test_sweep_is_monotone_in_fidelity(full_sweep):
    series: dict[tuple[str, int], list[float]] = {}
    for p in full_sweep:
        series.setdefault((p.code_id, p.r), []).append(p.pL)
    for values in series.values():
        assert all(b <= a for a, b in zip(values, values[1:]))


def test_punct_13_beats_base_after_one_round(full_sweep):
    pl = {(p.code_id, p.f0): p.pL for p in full_sweep if p.r == 1}
    above = [f0 for (cid, f0) in pl if cid == "base-17" and 0.80 <= f0 <= 0.99]
    assert above
    assert all(pl["punct-13", f0] < pl["base-17", f0] for f0 in above)


def test_crossings(registry):
    base = find_crossing(registry.get("base-17"), 3, 1e-6)
    p8 = find_crossing(registry.get("punct-8"), 3, 1e-6)
    assert 0.89 <= base <= 0.91
    assert 0.93 <= p8 <= 0.95
    assert evaluate(registry.get("base-17"), base, 3).pL <= 1e-6
    assert evaluate(registry.get("base-17"), base - 2e-5, 3).pL > 1e-6


def test_crossing_edges(registry):
    assert find_crossing(registry.get("base-17"), 0, 1.0) == 0.8
    with pytest.raises(NoCrossing):
        find_crossing(registry.get("uncoded"), 0, 1e-6, (0.8, 0.99))


def test_select_examples(registry):
    assert select_code(registry, 1.0, 0, 1e-3).chosen == "uncoded"
    none = select_code(registry, 0.5, 0, 1e-6)
    assert none.chosen is None and none.feasible == ()
    assert select_code(registry, 0.95, 3, 1e-6).chosen == "steane-7"
    punctured = select_code(registry, 0.95, 3, 1e-6, family="punctured")
    assert punctured.chosen == "punct-8" and punctured.chosen_n == 8
    assert "steane-7" not in punctured.feasible
    with pytest.raises(ValueError):
        select_code(registry, 0.95, 3, 1e-6, family="odd")


def test_uncoded_gap_is_the_y_cross_term():
    ch = to_channel(purify(0.9, 1))
    factorized, exact = uncoded_gap(0.9, 1)
    assert factorized - exact == pytest.approx(ch.pY - ch.qX * ch.qZ, abs=1e-15)


def test_csv_layout(registry):
    points = sweep(registry.subset(["punct-8"]), [0.9, 0.95], [0, 1])
    buf = io.StringIO()
    assert write_sweep_csv(points, buf) == 4
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1][:4] == ["punct-8", "8", "0", "0.9"]
    assert float(rows[1][6]) == points[0].pL
    again = io.StringIO()
    write_sweep_csv(sweep(registry.subset(["punct-8"]), [0.9, 0.95], [0, 1]), again)
    assert again.getvalue() == buf.getvalue()
