#!/usr/bin/env python3
# Copyright 2026 The bapcac Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solve exported LP models with HiGHS and record or check the objectives.

Record the golden files (needs a built `bapcac` binary):

    tools/crosscheck_lp.py --record tests/golden --bapcac build/bapcac

Re-solve the recorded models and compare with the stored objectives:

    tools/crosscheck_lp.py --check tests/golden
"""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

import highspy

TOLERANCE = 1e-6


def solve(lp_path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(str(lp_path)) != highspy.HighsStatus.kOk:
        raise RuntimeError(f"HiGHS could not read {lp_path}")
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    return status, h.getInfo().objective_function_value


def record(golden, bapcac):
    golden.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([bapcac, "suite", tmp], check=True, stdout=subprocess.DEVNULL)
        names = sorted(p.name[: -len(".spec.json")] for p in pathlib.Path(tmp).glob("*.spec.json"))
        results = {}
        for name in names:
            lp = golden / f"{name}.lp"
            subprocess.run([bapcac, "export-lp", str(pathlib.Path(tmp) / f"{name}.json"), "-o", str(lp)],
                           check=True, stdout=subprocess.DEVNULL)
            status, obj = solve(lp)
            results[name] = {"status": status, "objective": round(obj, 9)}
            print(f"{name}: {status} {obj:.9f}")
    meta = {
        "solver": f"HiGHS {highspy.Highs().version()} (highspy)",
        "tolerance": TOLERANCE,
        "instances": results,
    }
    (golden / "external_crosscheck.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def check(golden):
    meta = json.loads((golden / "external_crosscheck.json").read_text())
    failed = 0
    for name, rec in sorted(meta["instances"].items()):
        status, obj = solve(golden / f"{name}.lp")
        ok = status == "Optimal" and abs(obj - rec["objective"]) <= TOLERANCE
        failed += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {status} {obj:.9f} (recorded {rec['objective']})")
    return 1 if failed else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    mode = ap.add_mutually_exclusive_group(required=True)
    mode.add_argument("--record", type=pathlib.Path, metavar="DIR")
    mode.add_argument("--check", type=pathlib.Path, metavar="DIR")
    ap.add_argument("--bapcac", default="build/bapcac", help="path to the bapcac binary")
    args = ap.parse_args()
    if args.record:
        record(args.record, args.bapcac)
        return 0
    return check(args.check)


if __name__ == "__main__":
    sys.exit(main())
