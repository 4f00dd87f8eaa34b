"""The acceptance gate.

One test per criterion, each printing a single pass/fail verdict line;
the details of a failing criterion surface in the assertion message.
Criterion 11 drives the installed command line twice and compares the
reports byte for byte.
"""

import subprocess
import sys

from ttkit import verify


def _report(result):
    print(f"criterion {result.number} ({result.title}): "
          f"{'PASS' if result.passed else 'FAIL'}")
    assert result.passed, "\n".join(result.lines)


def test_criterion_01_membership_matches_the_linear_oracle():
    _report(verify.criterion_1())


def test_criterion_02_invariant_rings_match_the_molien_series():
    _report(verify.criterion_2())


def test_criterion_03_canonical_decompositions_match_the_character_oracle():
    _report(verify.criterion_3())


def test_criterion_04_witnesses_are_nonzero_and_fixed():
    _report(verify.criterion_4())


def test_criterion_05_towers_terminate_with_shrinking_supports():
    _report(verify.criterion_5())


def test_criterion_06_projection_formula_dimensions_agree():
    _report(verify.criterion_6())


def test_criterion_07_support_axioms_hold_on_the_random_corpus():
    _report(verify.criterion_7(verify.DEFAULT_SEED))


def test_criterion_08_classification_bijection_is_exhaustive():
    _report(verify.criterion_8(verify.DEFAULT_SEED))


def test_criterion_09_odd_line_spectrum_is_the_declared_space():
    _report(verify.criterion_9())


def test_criterion_10_induced_spectrum_maps_are_bijective_and_closed():
    _report(verify.criterion_10())


def test_criterion_11_reports_are_byte_identical():
    cmd = [sys.executable, "-m", "ttkit.cli", "verify-all",
           "--seed", str(verify.DEFAULT_SEED)]
    first = subprocess.run(cmd, capture_output=True, text=True)
    second = subprocess.run(cmd, capture_output=True, text=True)
    passed = (first.returncode == 0 and second.returncode == 0
              and first.stdout == second.stdout and first.stdout)
    print(f"criterion 11 (same-seed reports are byte-identical): "
          f"{'PASS' if passed else 'FAIL'}")
    assert first.returncode == 0, first.stdout + first.stderr
    assert second.returncode == 0, second.stdout + second.stderr
    assert first.stdout == second.stdout
