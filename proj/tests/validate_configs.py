"""Checks every sample config against the published JSON schema."""
import glob
import json
import os
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(0)

schema = json.load(open(sys.argv[1]))
bad = 0
for path in sorted(glob.glob(os.path.join(sys.argv[2], "*.json"))):
    try:
        jsonschema.validate(json.load(open(path)), schema)
        print("ok", os.path.basename(path))
    except jsonschema.ValidationError as e:
        print("INVALID", os.path.basename(path), e.message)
        bad += 1
sys.exit(1 if bad else 0)
