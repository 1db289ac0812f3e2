#!/usr/bin/env python3
"""Regenerate src/region_table.inc (region display name -> ISO 3166-1 alpha-2).

    pip install pycountry
    python3 tools/make_region_table.py > src/region_table.inc

Names come from pycountry (official, common and short names) plus the
spellings the Trends web export uses. A name that maps to more than one code
is emitted with an empty code so lookups report it as ambiguous.
"""

import pycountry

# Spellings seen in Trends exports that differ from the ISO names.
ALIASES = {
    "Bolivia": "BO",
    "Brunei": "BN",
    "Cape Verde": "CV",
    "Congo - Brazzaville": "CG",
    "Congo - Kinshasa": "CD",
    "Côte d’Ivoire": "CI",
    "Czechia": "CZ",
    "Czech Republic": "CZ",
    "Hong Kong": "HK",
    "Iran": "IR",
    "Kosovo": "XK",
    "Laos": "LA",
    "Macau": "MO",
    "Macao": "MO",
    "Micronesia": "FM",
    "Moldova": "MD",
    "Myanmar (Burma)": "MM",
    "North Korea": "KP",
    "Palestine": "PS",
    "Russia": "RU",
    "South Korea": "KR",
    "Syria": "SY",
    "Taiwan": "TW",
    "Tanzania": "TZ",
    "Turkey": "TR",
    "United Kingdom": "GB",
    "United States": "US",
    "Vatican City": "VA",
    "Venezuela": "VE",
    "Vietnam": "VN",
}

# Names that genuinely refer to more than one country.
AMBIGUOUS = ["Congo", "Korea", "Virgin Islands"]


def main():
    table = {}

    def add(name, code):
        key = name.strip()
        if key in table and table[key] != code:
            table[key] = ""
        else:
            table[key] = code

    for c in pycountry.countries:
        add(c.name, c.alpha_2)
        for attr in ("common_name", "official_name"):
            value = getattr(c, attr, None)
            if value:
                add(value, c.alpha_2)
    for name, code in ALIASES.items():
        table[name] = code
    for name in AMBIGUOUS:
        table[name] = ""

    print("// Generated by tools/make_region_table.py. Do not edit.")
    for name in sorted(table):
        escaped = name.replace("\\", "\\\\").replace('"', '\\"')
        print(f'{{"{escaped}", "{table[name]}"}},')


if __name__ == "__main__":
    main()
