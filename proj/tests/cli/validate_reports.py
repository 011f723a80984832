#
# Copyright © 2026 The turf Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Runs every turf subcommand and validates its output against schemas/."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

TURF, ROOT = Path(sys.argv[1]), Path(sys.argv[2])
SCHEMAS = ROOT / "schemas"
failures = []


def schema(name):
    s = json.loads((SCHEMAS / name).read_text())
    jsonschema.Draft202012Validator.check_schema(s)
    return s


def check(label, doc, name):
    try:
        jsonschema.validate(doc, schema(name), cls=jsonschema.Draft202012Validator)
        print(f"ok   {label}")
    except jsonschema.ValidationError as e:
        failures.append(label)
        print(f"FAIL {label}: {e.message} at {list(e.absolute_path)}")


def turf(*args, expect=0):
    r = subprocess.run([str(TURF), *map(str, args)], capture_output=True, text=True)
    if r.returncode != expect:
        failures.append(" ".join(map(str, args)))
        print(f"FAIL turf {' '.join(map(str, args))}: exit {r.returncode}, expected {expect}\n{r.stderr}")
    return r


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    for model in sorted((ROOT / "models").glob("*.json")):
        check(f"models/{model.name}", json.loads(model.read_text()), "model.schema.json")
    check("config/stratixv.json", json.loads((ROOT / "config/stratixv.json").read_text()), "platform.schema.json")
    check("config/calibration.json", json.loads((ROOT / "config/calibration.json").read_text()),
          "calibration.schema.json")
    for cfg in ["stacked_fm_cm.json", "port_mismatch.json"]:
        check(f"config/{cfg}", json.loads((ROOT / "config" / cfg).read_text()), "fused_config.schema.json")
    check("config/layer_winograd.json", json.loads((ROOT / "config/layer_winograd.json").read_text()),
          "layer_config.schema.json")

    vgg = ROOT / "models/vgg16.json"
    stacked = ROOT / "models/stacked_block.json"
    for name in ["vgg16", "resnet50", "mobilenetv1", "mobilenetv2"]:
        r = turf("model", "show", ROOT / f"models/{name}.json")
        check(f"model show {name}", json.loads(r.stdout), "model_show.schema.json")
    r = turf("model", "show", vgg, "--format", "csv")
    if not r.stdout.startswith("index,label,category"):
        failures.append("model show csv")
    turf("model", "export", "vgg16", "--replace", "4", "--out", tmp / "vgg16_1.json")
    check("model export", json.loads((tmp / "vgg16_1.json").read_text()), "model.schema.json")

    r = turf("hw", "describe", vgg, "--layer", "1", "--config", ROOT / "config/layer_winograd.json")
    check("hw describe", json.loads(r.stdout), "hw_describe.schema.json")

    r = turf("simulate", stacked, "--block", "0", "--config", ROOT / "config/stacked_fm_cm.json",
             "--trace", tmp / "trace.json", "--enumerate-seqs")
    check("simulate", json.loads(r.stdout), "simulate.schema.json")
    check("simulate trace", json.loads((tmp / "trace.json").read_text()), "trace.schema.json")
    r = turf("simulate", stacked, "--block", "0", "--config", ROOT / "config/port_mismatch.json", expect=1)
    if not r.stderr.startswith("PortMismatch"):
        failures.append("PortMismatch on stderr")
        print(f"FAIL port mismatch stderr: {r.stderr!r}")

    for model in ["vgg16", "resnet50", "mobilenetv2"]:
        turf("dse", ROOT / f"models/{model}.json", "--platform", ROOT / "config/stratixv.json",
             "--calibration", ROOT / "config/calibration.json", "--out", tmp / "dse.json", "--csv", tmp / "dse.csv")
        doc = json.loads((tmp / "dse.json").read_text())
        check(f"dse {model}", doc, "dse_report.schema.json")
        if doc["summary"]["resources"]["dsp"] > 1963:
            failures.append(f"dse {model} DSP budget")
    turf("dse", stacked, "--block", "0", "--out", tmp / "dse_block.json")
    check("dse --block", json.loads((tmp / "dse_block.json").read_text()), "dse_report.schema.json")

    turf("explore", "--model", vgg, "--min-acc", "0.899", "--min-gops", "400", "--out", tmp / "ex.json")
    check("explore", json.loads((tmp / "ex.json").read_text()), "explore_result.schema.json")
    (tmp / "acc.csv").write_text("replaced,accuracy\n0,0.71\n1,0.70\n2,0.69\n3,0.60\n4,0.5\n5,0.4\n")
    turf("explore", "--model", vgg, "--min-acc", "0.65", "--max-latency-ms", "100",
         "--oracle", f"table:{tmp / 'acc.csv'}", "--out", tmp / "ex_table.json")
    check("explore table", json.loads((tmp / "ex_table.json").read_text()), "explore_result.schema.json")
    turf("explore", "--model", vgg, "--min-acc", "0.99", "--out", tmp / "ex_none.json", expect=1)
    check("explore NoSolution", json.loads((tmp / "ex_none.json").read_text()), "explore_result.schema.json")

    r = turf("winograd-check", "--m", "4", "--r", "3", "--trials", "20", "--seed", "3",
             "--fixtures", tmp / "fx")
    check("winograd-check", json.loads(r.stdout), "winograd_check.schema.json")

    turf("no-such-command", expect=2)
    turf("dse", expect=2)
    turf("explore", "--model", vgg, "--min-gops", "1", "--max-latency-ms", "1", expect=2)
    turf("model", "show", tmp / "missing.json", expect=1)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
