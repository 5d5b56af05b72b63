"""
Certificates that survive the trip to disk
==========================================

Run the CLI, write the result, check it again from the file alone, then
tamper with it and watch verification fail.
"""

import json
import tempfile
from pathlib import Path

from edmonds.cli import main

here = Path(__file__).resolve().parent / "instances"
tmp = Path(tempfile.mkdtemp())

for name in ("skew3", "e11", "zero"):
    out = tmp / f"{name}.result.json"
    main(["ncrank", str(here / f"{name}.json"), "--json-out", str(out), "--seed", "3"])
    doc = json.loads(out.read_text())
    print(f"\n{name}: ncrk {doc['ncrk']}, witness {doc['witness']['kind']}")
    print("verify exit code:", main(["verify", str(here / f"{name}.json"), str(out)]))

# inflate the shrink of the E11 witness: U = <e2> cannot lose two dimensions
doc = json.loads((tmp / "e11.result.json").read_text())
doc["witness"]["c"] = 2
doc["ncrk"] = 0
bad = tmp / "e11.tampered.json"
bad.write_text(json.dumps(doc))
print("\ntampered verify exit code:", main(["verify", str(here / "e11.json"), str(bad)]))
