"""Converter round trip: exports -> gluing files -> certikraw parses them.

Usage: test_converter.py <certikraw binary> <repo root>
"""

import json
import os
import subprocess
import sys
import tempfile
import unittest

TOOL = sys.argv[1] if len(sys.argv) > 1 else "certikraw"
ROOT = sys.argv[2] if len(sys.argv) > 2 else os.path.join(os.path.dirname(__file__), "..", "..")
sys.path.insert(0, os.path.join(ROOT, "tools"))

import snappea_to_gluing as conv  # noqa: E402

EXPORTS = os.path.join(ROOT, "data", "exports")


def exports():
    for name in sorted(os.listdir(EXPORTS)):
        if name.endswith(".export.json"):
            yield name[: -len(".export.json")], os.path.join(EXPORTS, name)


class ConverterTest(unittest.TestCase):
    def test_bundled_files_are_converter_output(self):
        for stem, path in exports():
            with open(path) as fh:
                text = conv.dumps(conv.convert(json.load(fh)))
            with open(os.path.join(ROOT, "data", stem + ".gluing.json")) as fh:
                self.assertEqual(text, fh.read(), stem)

    def test_output_parses(self):
        for stem, path in exports():
            with open(path) as fh:
                text = conv.dumps(conv.convert(json.load(fh)))
            with tempfile.TemporaryDirectory() as tmp:
                out = os.path.join(tmp, stem + ".gluing.json")
                with open(out, "w") as fh:
                    fh.write(text)
                proc = subprocess.run([TOOL, "verify", out, "-o", os.path.join(tmp, "c.json")],
                                      capture_output=True, text=True)
                self.assertIn(proc.returncode, (0, 1), stem + ": " + proc.stderr)

    def test_layout_is_interleaved(self):
        out = conv.convert({"matrix": [[2, 1, 0, 2, 1, 0], [0, 1, 2, 0, 1, 2], [1, 0, 0, 0, 0, -1],
                                       [1, 1, 1, 1, -1, -3]], "fillings": [[5, 1]]})
        self.assertEqual(out["rows"][2], {"kind": "meridian", "cusp": 0, "a": [1, 0], "b": [0, 0], "c": [0, -1]})
        self.assertEqual((out["k"], out["h"]), (0, 1))
        self.assertNotIn("approx_solution", out)

    def test_seed_is_bit_exact(self):
        x = 0.12953101131545244
        out = conv.convert({"matrix": [[2, 2, 2], [1, 0, 1], [0, -1, -1]], "shapes": [[x, 0.5]]})
        self.assertEqual(float.fromhex(out["approx_solution"][0][0]), x)

    def test_rejects_bad_shapes(self):
        with self.assertRaises(ValueError):
            conv.convert({"matrix": [[1, 2]]})
        with self.assertRaises(ValueError):
            conv.convert({"matrix": [[2, 2, 2], [1, 0, 1]]})

    @unittest.skipUnless(__import__("importlib").util.find_spec("snappy"), "snappy not installed")
    def test_snappy_export_matches_bundle(self):
        live = conv.export_from_snappy("4_1(5,1)")
        with open(os.path.join(EXPORTS, "4_1_5_1.export.json")) as fh:
            saved = json.load(fh)
        self.assertEqual(live["matrix"], saved["matrix"])
        self.assertEqual([list(f) for f in live["fillings"]], saved["fillings"])


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
