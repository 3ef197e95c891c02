#!/usr/bin/env python3
"""Regenerate the frontend contract fixtures from the engine.

Writes, under frontend/tests/fixtures/:
  presets.json           the /api/presets payload
  radar_parity.json      3-design goal reports + the batch radar.csv scores
  validation_cases.json  designs with the server's diagnostic messages

Run from the repository root after any change to the preset table, the
radar rule, or the design validation messages:

    python3 scripts/gen_frontend_fixtures.py
"""

import csv
import json
import tempfile
from pathlib import Path

from wealthsim.report import RunConfig, run
from wealthsim.tax import PRESET_DESIGNS, design_diagnostics

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

THREE_DESIGNS = [
    {"base": "net", "exemption_percentile": 90, "rates": [0.01, 0.03, 0.05], "label": "net-hr"},
    {"base": "fip", "exemption_percentile": 90, "rates": [0.01, 0.03, 0.05], "label": "fip-hr"},
    {"base": "property", "exemption_percentile": 90, "rates": [0.01, 0.03, 0.05], "label": "prop-hr"},
]

VALIDATION_CASES = [
    {"base": "net", "exemption_percentile": 90, "rates": [0.01, 0.02, 0.03], "label": "ok"},
    {"base": "net", "exemption_percentile": 90, "rates": [0.05, 0.01, 0.03], "label": "decreasing"},
    {"base": "net", "exemption_percentile": 95, "rates": [0.01, 0.02, 0.03], "label": "p95-rate"},
    {"base": "gold", "exemption_percentile": 90, "rates": [0.01, 0.02, 0.03], "label": "bad-base"},
    {"base": "fip", "exemption_percentile": 92, "rates": [0.01, 0.02, 0.03], "label": "bad-exemption"},
    {"base": "fip", "exemption_percentile": 90, "rates": [0.01, 0.02], "label": "two-rates"},
    {"base": "fip", "exemption_percentile": 90, "rates": [0.01, 0.02, 1.5], "label": "rate-range"},
    {"base": "property", "exemption_percentile": 95, "rates": [0.0, 0.02, 0.03], "label": "ok-p95"},
]


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)

    presets = [d.to_dict() for d in PRESET_DESIGNS]
    (FIXTURE_DIR / "presets.json").write_text(json.dumps(presets, indent=2) + "\n")

    with tempfile.TemporaryDirectory() as tmp:
        cfg = RunConfig.from_dict(
            {
                "seed": 2024,
                "input": {
                    "synthetic": {
                        "n_households": 6000,
                        "body_mu": 11.0,
                        "body_sigma": 1.0,
                        "tail_alpha": 2.0,
                        "tail_w_min": 1e6,
                        "tail_fraction": 0.05,
                    }
                },
                "designs": THREE_DESIGNS,
                "output_dir": tmp,
            }
        )
        run(cfg)
        summary = json.loads((Path(tmp) / "summary.json").read_text())
        with open(Path(tmp) / "radar.csv", newline="") as fh:
            radar_rows = list(csv.DictReader(fh))

    parity = {
        "reports": [
            {"label": entry["label"], "report": entry["report"]}
            for entry in summary["designs"]
        ],
        "radar_csv": [
            {
                "design": row["design"],
                **{k: float(v) for k, v in row.items() if k != "design"},
            }
            for row in radar_rows
        ],
        "flagged_criteria": summary["radar"]["flagged_criteria"],
    }
    (FIXTURE_DIR / "radar_parity.json").write_text(json.dumps(parity, indent=2) + "\n")

    cases = []
    for case in VALIDATION_CASES:
        problems = design_diagnostics(
            case["base"], case["exemption_percentile"], case["rates"]
        )
        cases.append(
            {
                "design": case,
                "messages": [message for _, message in problems],
                "paths": [path for path, _ in problems],
            }
        )
    (FIXTURE_DIR / "validation_cases.json").write_text(json.dumps(cases, indent=2) + "\n")
    print(f"fixtures written to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
