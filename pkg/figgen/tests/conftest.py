import subprocess
import sys

import pytest


@pytest.fixture(scope="session")
def results_dir(tmp_path_factory):
    """Seeded 100-drop simulator run providing all three CSV kinds."""
    out = tmp_path_factory.mktemp("results")
    for scenario in ("cnc", "shared"):
        subprocess.run(
            [sys.executable, "-m", "uavcellsim", scenario, "--drops", "100",
             "--seed", "5", "--mode", "fixed", "--out", str(out)],
            check=True, capture_output=True)
    return out
