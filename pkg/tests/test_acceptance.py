"""Runs every acceptance criterion at its stated tolerance.

Each case prints one PASS/FAIL line so the outcome is readable in the
plain pytest log as well as in the assertion summary.
"""
import pytest

from coordlat.suites import CRITERIA, run_case


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid, capsys):
    case = run_case(cid)
    with capsys.disabled():
        print(f"\ncriterion {cid:>2}: {'PASS' if case['ok'] else 'FAIL'}  {case['title']} ({case['seconds']:.2f}s)")
    assert case["ok"], case["details"]
