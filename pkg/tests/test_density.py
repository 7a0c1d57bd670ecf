from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypercomb.density import (
    DensityReport, banach_density, best_window_density, density_summary, schnirelmann,
    upper_density, windowed_report,
)
from hypercomb.errors import UnsupportedSetError
from hypercomb.intsets import BlockFamily, EventuallyPeriodic, Explicit, WindowSample, window

import oracles
from strategies import bit_windows, eventually_periodic

EVENS = EventuallyPeriodic(2, {0})
ODDS = EventuallyPeriodic(2, {1})
FULL = EventuallyPeriodic(1, {0})
P5 = EventuallyPeriodic(5, {0, 2})
POW4 = BlockFamily("pow4")


def test_schnirelmann_examples():
    assert schnirelmann(EVENS) == DensityReport(Fraction(0), 1)
    assert schnirelmann(ODDS) == DensityReport(Fraction(1, 2), 2)
    assert schnirelmann(FULL).value == 1


def test_schnirelmann_unattained():
    # 1, 2 and then the multiples of 3: ratios stay above 1/3 and tend to it
    s = EventuallyPeriodic(3, {0}, 3, {1, 2})
    assert schnirelmann(s) == DensityReport(Fraction(1, 3), None)


def test_schnirelmann_rejects():
    with pytest.raises(UnsupportedSetError):
        schnirelmann(POW4)
    with pytest.raises(ValueError):
        schnirelmann(Explicit((-1, 1)))
    with pytest.raises(ValueError):
        schnirelmann(EventuallyPeriodic(2, {1}, -5))


def test_explicit_sets():
    assert schnirelmann(Explicit((2, 3))) == DensityReport(Fraction(0), 1)
    assert schnirelmann(Explicit((1, 2, 3))) == DensityReport(Fraction(0), None)
    assert upper_density(Explicit((1, 5))).value == 0
    assert banach_density(Explicit((1, 5))).value == 0


def test_upper_and_banach_examples():
    assert upper_density(EVENS).value == Fraction(1, 2)
    assert upper_density(P5).value == Fraction(2, 5)
    assert banach_density(EVENS).value == Fraction(1, 2)
    assert banach_density(P5).value == Fraction(2, 5)
    assert banach_density(POW4) == DensityReport(Fraction(1), (4**10, 4**10 + 9))
    with pytest.raises(UnsupportedSetError):
        upper_density(POW4)


def test_summary_marks_unsupported():
    summary = density_summary(POW4)
    assert summary["schnirelmann"] is None and summary["upper_density"] is None
    assert summary["banach_density"].value == 1


def test_report_json():
    assert DensityReport(Fraction(1, 2), 2).to_json() == {
        "value": {"num": 1, "den": 2}, "witness": 2, "method": "exact"}
    with pytest.raises(ValueError):
        DensityReport(Fraction(3, 2))


@settings(max_examples=300)
@given(eventually_periodic())
def test_schnirelmann_against_prefix_scan(s):
    # past the transient every residue class of prefix ratios is monotone, so
    # the infimum is the least ratio seen on a long prefix or the limit density
    horizon = s.threshold + 40 * s.period + 200
    ratios = oracles.prefix_ratios(lambda n: n in s, horizon)
    expected = min(min(ratios), s.density)
    rep = schnirelmann(s)
    assert rep.value == expected
    if rep.witness is None:
        assert expected not in ratios
    else:
        assert rep.witness == ratios.index(expected) + 1


@given(eventually_periodic())
def test_chain(s):
    bd, ud, sd = banach_density(s).value, upper_density(s).value, schnirelmann(s).value
    assert bd >= ud >= sd
    assert (sd == 1) == all(n in s for n in range(1, s.threshold + s.period + 1))


def test_best_window_examples():
    assert best_window_density(window(EVENS, 1, 10), 4)[1] == Fraction(1, 2)
    assert best_window_density(window(POW4, 1, 70), 3) == (63, Fraction(1))
    assert best_window_density(WindowSample(1, 5, bytes(5)), 2) == (0, Fraction(0))
    with pytest.raises(ValueError):
        best_window_density(window(EVENS, 1, 10), 11)


@given(bit_windows, st.data())
def test_best_window_against_scan(data, draw):
    lo, bits = data
    w = WindowSample(lo, lo + len(bits) - 1, bytes(bits))
    L = draw.draw(st.integers(1, len(bits)))
    counts = [sum(bits[i:i + L]) for i in range(len(bits) - L + 1)]
    best = max(counts)
    x, value = best_window_density(w, L)
    assert value == Fraction(best, L)
    assert x == lo + counts.index(best) - 1
    assert windowed_report(w, L).witness == (x + 1, x + L)


@given(eventually_periodic(max_period=15), st.integers(0, 50))
def test_window_density_converges(s, lo):
    L = 20 * s.period
    w = window(s, lo, lo + 3 * L)
    _, value = best_window_density(w, L)
    assert abs(value - banach_density(s).value) <= Fraction(1, 10)
