#!/usr/bin/env python3
"""Generate the synthetic 54-location "coronavirus" fixture.

Writes Trends-style exports under data/fixtures/coronavirus/:
  time/<GEO>.csv      daily interest over time, 2020-01-01..2020-03-31
  region/wNN.csv      interest by region, 7-day windows 2020-01-01..2020-04-12
  manifest.json
and a replay copy of the global series under data/fixtures/replay/.

The series are synthetic: each location mixes a regional wave with the
global wave plus noise. The global series first reaches 1 on 2020-01-20.

    python3 tools/make_fixture.py data/fixtures
"""

import datetime as dt
import json
import math
import os
import random
import sys

KEYWORD = "coronavirus"
START = dt.date(2020, 1, 1)
END = dt.date(2020, 3, 31)
REGION_END = dt.date(2020, 4, 12)
SEED = 20200120

# (geo, display name, region)
LOCATIONS = [
    ("CN", "China", "asia"), ("HK", "Hong Kong", "asia"), ("TW", "Taiwan", "asia"),
    ("SG", "Singapore", "singapore"), ("MY", "Malaysia", "asia"), ("PH", "Philippines", "asia"),
    ("TH", "Thailand", "asia"), ("VN", "Vietnam", "asia"), ("ID", "Indonesia", "asia"),
    ("JP", "Japan", "asia"), ("KR", "South Korea", "asia"), ("IN", "India", "asia"),
    ("PK", "Pakistan", "asia"), ("LK", "Sri Lanka", "asia"), ("BD", "Bangladesh", "asia"),
    ("AE", "United Arab Emirates", "mideast"), ("SA", "Saudi Arabia", "mideast"),
    ("QA", "Qatar", "mideast"), ("KW", "Kuwait", "mideast"), ("IL", "Israel", "mideast"),
    ("IR", "Iran", "mideast"), ("AU", "Australia", "mideast"), ("NZ", "New Zealand", "mideast"),
    ("TR", "Turkey", "mideast"), ("EG", "Egypt", "mideast"),
    ("IT", "Italy", "europe"), ("ES", "Spain", "europe"), ("PT", "Portugal", "europe"),
    ("FR", "France", "europe"), ("DE", "Germany", "europe"), ("AT", "Austria", "europe"),
    ("CH", "Switzerland", "europe"), ("GB", "United Kingdom", "europe"), ("IE", "Ireland", "europe"),
    ("NL", "Netherlands", "europe"), ("BE", "Belgium", "europe"), ("GR", "Greece", "europe"),
    ("RO", "Romania", "europe"), ("PL", "Poland", "europe"), ("SE", "Sweden", "europe"),
    ("NO", "Norway", "europe"), ("DK", "Denmark", "europe"),
    ("BR", "Brazil", "americas"), ("AR", "Argentina", "americas"), ("CL", "Chile", "americas"),
    ("PE", "Peru", "americas"), ("CO", "Colombia", "americas"), ("EC", "Ecuador", "americas"),
    ("VE", "Venezuela", "americas"), ("UY", "Uruguay", "americas"), ("PY", "Paraguay", "americas"),
    ("BO", "Bolivia", "americas"), ("MX", "Mexico", "americas"), ("US", "United States", "americas"),
]


def bump(t, centre, width, height):
    return height * math.exp(-0.5 * ((t - centre) / width) ** 2)


def ramp(t, onset, rate):
    return 0.0 if t < onset else 1.0 - math.exp(-(t - onset) / rate)


# t = days since 2020-01-01
def global_wave(t):
    if t < 19:
        return 0.0
    return bump(t, 28, 5, 22) + bump(t, 74, 9, 100) + 6 * ramp(t, 19, 4)


def regional_wave(region, t):
    if region == "asia":
        return bump(t, 27, 5, 100) + bump(t, 45, 10, 35) + bump(t, 74, 8, 60) + 8 * ramp(t, 18, 3)
    if region == "mideast":
        return bump(t, 28, 4, 30) + bump(t, 53, 5, 70) + bump(t, 76, 7, 100) + 5 * ramp(t, 18, 3)
    if region == "europe":
        return bump(t, 28, 4, 25) + bump(t, 55, 3, 45) + bump(t, 72, 6, 100) + 4 * ramp(t, 18, 3)
    if region == "americas":
        return bump(t, 29, 4, 22) + bump(t, 78, 6, 100) + 3 * ramp(t, 18, 3)
    # singapore: early and sustained
    return bump(t, 24, 3, 100) + 60 * ramp(t, 25, 2) - bump(t, 70, 12, 15)


def export_cell(v):
    if v <= 0:
        return "0"
    if v < 1:
        return "<1"
    return str(int(round(v)))


def write_time_csv(path, geo_header, values):
    with open(path, "w") as f:
        f.write("Category: All categories\n\n")
        f.write(f"Day,{KEYWORD}: ({geo_header})\n")
        for i, v in enumerate(values):
            day = START + dt.timedelta(days=i)
            f.write(f"{day.isoformat()},{export_cell(v)}\n")


def scale_to_100(raw):
    peak = max(raw)
    return [100.0 * r / peak for r in raw]


def main(root):
    rng = random.Random(SEED)
    out = os.path.join(root, "coronavirus")
    os.makedirs(os.path.join(out, "time"), exist_ok=True)
    os.makedirs(os.path.join(out, "region"), exist_ok=True)
    os.makedirs(os.path.join(root, "replay"), exist_ok=True)

    ndays = (END - START).days + 1
    region_days = (REGION_END - START).days + 1

    glob = scale_to_100([global_wave(t) for t in range(ndays)])
    # Pre-onset: a scatter of "<1" cells; 2020-01-20 is the first day >= 1.
    for t in range(19):
        glob[t] = 0.5 if rng.random() < 0.3 else 0.0
    glob[19] = max(glob[19], 1.0)
    assert all(g < 1 for g in glob[:19]) and glob[19] >= 1
    write_time_csv(os.path.join(out, "time", "WORLD.csv"), "Worldwide", glob)
    replay_name = f"{KEYWORD}.WORLD.{START.isoformat()}.{END.isoformat()}.day.csv"
    write_time_csv(os.path.join(root, "replay", replay_name), "Worldwide", glob)

    absolute = {}
    for geo, _, region in LOCATIONS:
        shift = rng.uniform(-1.5, 1.5)
        mix = rng.uniform(0.1, 0.3)
        volume = rng.uniform(0.2, 1.0)
        series = []
        for t in range(region_days):
            base = (1 - mix) * regional_wave(region, t + shift) + mix * global_wave(t + shift)
            noise = rng.gauss(0, 2.5) if t >= 18 else rng.uniform(0, 0.8)
            series.append(max(0.0, base + noise))
        absolute[geo] = [volume * s for s in series]
        write_time_csv(os.path.join(out, "time", f"{geo}.csv"), geo, scale_to_100(series[:ndays]))

    windows = []
    start = 0
    while start < region_days:
        end = min(start + 6, region_days - 1)
        windows.append((start, end))
        start += 7
    region_files = []
    for k, (a, b) in enumerate(windows):
        sums = {geo: sum(absolute[geo][a:b + 1]) for geo, _, _ in LOCATIONS}
        peak = max(sums.values())
        wa = START + dt.timedelta(days=a)
        wb = START + dt.timedelta(days=b)
        name = f"w{k:02d}.csv"
        with open(os.path.join(out, "region", name), "w") as f:
            f.write("Category: All categories\n\n")
            f.write(f"Country,{KEYWORD}: ({wa.month}/{wa.day}/{wa.year % 100} - "
                    f"{wb.month}/{wb.day}/{wb.year % 100})\n")
            ranked = sorted(LOCATIONS, key=lambda loc: (-sums[loc[0]], loc[1]))
            for geo, display, _ in ranked:
                f.write(f"{display},{export_cell(100.0 * sums[geo] / peak)}\n")
        region_files.append({"start": wa.isoformat(), "end": wb.isoformat(),
                             "path": f"region/{name}"})

    manifest = {
        "keyword": KEYWORD,
        "time_files": [{"geo": "WORLD", "path": "time/WORLD.csv"}]
        + [{"geo": geo, "path": f"time/{geo}.csv"} for geo, _, _ in sorted(LOCATIONS)],
        "region_files": region_files,
        "onset_threshold": 1.0,
        "notes": "Synthetic 54-location fixture; regional waves plus noise. Not real Trends data.",
    }
    with open(os.path.join(out, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/fixtures")
