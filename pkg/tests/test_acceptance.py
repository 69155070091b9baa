"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import subprocess
import sys

import pytest

from lgallee import verify


def report(capsys, label, passed, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if passed else 'FAIL'}] {label}: {detail}")


@pytest.mark.parametrize("index", range(len(verify.CHECKS)), ids=[
    "c1_triple_point", "c2_jacobian_degeneracy", "c3_a1_bound", "c4_codim2_certificates",
    "c5_codim3_certificates", "c6_stability_probe", "c7_cusp_structure", "c8_taylor_jet",
])
def test_criterion(index, capsys):
    check = verify.CHECKS[index]()
    report(capsys, f"criterion {check.criterion} {check.name} ({check.elapsed:.2f}s)",
           check.passed, check.detail)
    assert check.passed, check.detail


def test_criterion_9_determinism(tmp_path, capsys):
    outputs = []
    for run in ("first", "second"):
        out_dir = tmp_path / run
        subprocess.run([sys.executable, "-m", "lgallee.cli", "verify", "--out-dir", str(out_dir)],
                       capture_output=True, check=False)
        outputs.append({p.name: p.read_bytes() for p in sorted(out_dir.iterdir())})
    same = outputs[0] == outputs[1] and set(outputs[0]) == {"verify_report.csv", "verify_summary.json"}
    report(capsys, "criterion 9 determinism", same, f"artifacts={sorted(outputs[0])}")
    assert same
