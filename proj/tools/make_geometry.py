#!/usr/bin/env python3
"""Build data/world.json from the Natural Earth 1:110m admin-0 shapefile.

The shapefile ships inside the geopandas 0.14 wheel
(geopandas/datasets/naturalearth_lowres). Natural Earth data is public domain.

    pip download geopandas==0.14.4 --no-deps -d /tmp/gp
    unzip /tmp/gp/*.whl 'geopandas/datasets/naturalearth_lowres/*' -d /tmp/ne
    pip install pyshp pycountry
    python3 tools/make_geometry.py /tmp/ne/geopandas/datasets/naturalearth_lowres/naturalearth_lowres.shp data/world.json
"""

import json
import sys

import pycountry
import shapefile

EXTRA_A3 = {"-99": "XK"}  # Kosovo


def main(src, dst):
    reader = shapefile.Reader(src)
    out = {}
    for shape, rec in zip(reader.shapes(), reader.records()):
        a3 = rec["iso_a3"]
        code = EXTRA_A3.get(a3)
        if code is None:
            country = pycountry.countries.get(alpha_3=a3)
            if country is None:
                print(f"skipping {rec['name']} ({a3})", file=sys.stderr)
                continue
            code = country.alpha_2
        parts = list(shape.parts) + [len(shape.points)]
        rings = []
        for a, b in zip(parts[:-1], parts[1:]):
            ring = [[round(x, 2), round(y, 2)] for x, y in shape.points[a:b]]
            if len(ring) >= 4:
                rings.append(ring)
        out.setdefault(code, {"name": rec["name"], "rings": []})["rings"].extend(rings)
    doc = {
        "source": "Natural Earth 1:110m admin 0 countries (public domain)",
        "projection": "equirectangular",
        "countries": dict(sorted(out.items())),
    }
    with open(dst, "w") as f:
        json.dump(doc, f, separators=(",", ":"))
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
