#!/usr/bin/env python3
"""Convert SnapPea-style gluing-equation exports into certikraw gluing files.

An export is a JSON object

    {"name": "m003(-3,1)",
     "matrix": [[a_1, b_1, c_1, ..., a_n, b_n, c_n], ...],
     "fillings": [[p, q], ...],          # one pair per cusp, [0, 0] = unfilled
     "shapes": [[re, im], ...]}          # optional approximate solution

whose matrix rows are the n edge equations followed by a (meridian,
longitude) pair per cusp -- the layout of SnapPy's
``M.gluing_equations()`` on the unfilled manifold.  With ``--snappy NAME``
the export is produced on the fly (requires the snappy package).
"""

import argparse
import json
import sys


def convert(export):
    matrix = [list(map(int, row)) for row in export["matrix"]]
    fillings = [tuple(map(int, f)) for f in export.get("fillings", [])]
    if not matrix or len(matrix[0]) % 3:
        raise ValueError("matrix rows must have 3n entries")
    n = len(matrix[0]) // 3
    cusps = (len(matrix) - n) // 2
    if len(matrix) != n + 2 * cusps:
        raise ValueError("expected n edge rows plus two rows per cusp")
    if len(fillings) not in (0, cusps):
        raise ValueError("need one filling per cusp")
    fillings = fillings or [(0, 0)] * cusps

    def row(kind, coeffs, cusp=None):
        return {"kind": kind, "cusp": cusp, "a": coeffs[0::3], "b": coeffs[1::3], "c": coeffs[2::3]}

    rows = [row("edge", r) for r in matrix[:n]]
    for t in range(cusps):
        rows.append(row("meridian", matrix[n + 2 * t], t))
        rows.append(row("longitude", matrix[n + 2 * t + 1], t))

    filled = [{"cusp": t, "p": p, "q": q} for t, (p, q) in enumerate(fillings) if (p, q) != (0, 0)]
    out = {
        "name": export.get("name", ""),
        "n": n,
        "k": cusps - len(filled),
        "h": len(filled),
        "rows": rows,
        "fillings": filled,
    }
    if export.get("shapes") is not None:
        # Hex floats keep the seed bit-exact.
        out["approx_solution"] = [[float(re).hex(), float(im).hex()] for re, im in export["shapes"]]
    return out


def dumps(gluing):
    """JSON text with one row, filling or shape per line."""
    def line(obj):
        return json.dumps(obj, separators=(", ", ": "))

    head = ",\n".join(f"  {json.dumps(k)}: {json.dumps(gluing[k])}" for k in ("name", "n", "k", "h"))
    parts = [head]
    for key in ("rows", "fillings", "approx_solution"):
        if key in gluing:
            items = ",\n".join("    " + line(x) for x in gluing[key])
            parts.append(f'  "{key}": [\n{items}\n  ]' if items else f'  "{key}": []')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def export_from_snappy(name):
    import snappy

    manifold = snappy.Manifold(name)
    unfilled = manifold.copy()
    unfilled.dehn_fill([(0, 0)] * manifold.num_cusps())
    eqs = unfilled.gluing_equations()
    rows, cols = eqs.shape
    matrix = [[int(eqs[i, j]) for j in range(cols)] for i in range(rows)]
    fillings = [tuple(int(round(x)) for x in info["filling"]) for info in manifold.cusp_info()]
    shapes = [(complex(z).real, complex(z).imag) for z in manifold.tetrahedra_shapes("rect")]
    return {"name": name, "matrix": matrix, "fillings": fillings, "shapes": shapes}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("export", nargs="?", help="export JSON file ('-' for stdin)")
    src.add_argument("--snappy", metavar="NAME", help="build the export with snappy")
    parser.add_argument("-o", "--output", help="output path (default stdout)")
    args = parser.parse_args(argv)

    if args.snappy:
        export = export_from_snappy(args.snappy)
    elif args.export == "-":
        export = json.load(sys.stdin)
    else:
        with open(args.export) as fh:
            export = json.load(fh)

    text = dumps(convert(export))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
