# The command line drives the same machinery from JSON configs; here a small k sweep.
import csv
import json
import tempfile
from pathlib import Path

from superint.cli import main

with tempfile.TemporaryDirectory() as tmp:
    cfg = {
        "system": {"family": "Vck", "g": 1.0, "k": "1", "ka": 1.0, "kb": 0.3},
        "invariants": ["H", "J2", "ReKk", "ImKk"],
        "grid": {"k": ["1", "2", "1/2", "5/3"]},
        "n_ics": 2,
        "integrator": {"t_end": 20.0},
    }
    path = Path(tmp) / "sweep.json"
    path.write_text(json.dumps(cfg))
    code = main(["sweep", "--config", str(path), "--out", tmp])
    print("exit code", code)
    with open(Path(tmp) / "sweep.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            print(f"k={row['k']:4s} ic={row['ic_index']} {row['termination']}"
                  f"  drift {float(row['max_drift']):.1e}  bracket {float(row['max_bracket']):.1e}  rank {row['rank']}")

    code = main(["verify", "--preset", "pw-k1", "--out", tmp])
    report = json.loads((Path(tmp) / "report.json").read_text())
    print("verify pw-k1 exit", code, "passed" if report["passed"] else "failed")
