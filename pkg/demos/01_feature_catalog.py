"""Tour of the fixed 85-predictor catalog and the chronological split.

Run from the repo root:  python3 demos/01_feature_catalog.py
"""

from hydrocast import (
    CATALOG,
    PRESSURE_LEVELS_MB,
    REFERENCE_POINTS,
    SplitSpec,
    feature_from_catalog_index,
    parse_feature_name,
    split,
)
from hydrocast.synthetic import generate_synthetic

print("The catalog holds", len(CATALOG), "predictors: seven reanalysis variables")
print("measured on up to seventeen pressure levels (millibars):")
print(" ", PRESSURE_LEVELS_MB)

print("\nBlock layout (catalog index ranges per variable):")
for variable in ("air", "hgt", "rhum", "shum", "slp", "uwnd", "vwnd"):
    ids = [f.catalog_index for f in CATALOG if f.variable == variable]
    print(f"  {variable:>5}: {ids[0]:>2} .. {ids[-1]:>2}  ({len(ids)} levels)")

print("\nNames are `<var>_lNN`; a few lookups:")
for idx in (1, 17, 35, 51, 85):
    fid = feature_from_catalog_index(idx)
    print(f"  catalog index {idx:>2} -> {fid.name}  ({fid.variable} at {fid.level.millibars} mb)")
print("  parse_feature_name('vwnd_l17').catalog_index =",
      parse_feature_name("vwnd_l17").catalog_index)

print("\nThe thirteen bundled index points (lon, lat, elev):")
for p in REFERENCE_POINTS:
    print(f"  {p.id}: ({p.lon:>5}, {p.lat:>5}, {p.elev:>7})")

data, _ = generate_synthetic(444, ["air_l01"], noise_sigma=0.5, seed=1)
train, test = split(data, SplitSpec(train_fraction=0.9))
print(f"\nA 37-year monthly record has {len(data)} samples "
      f"({data.timestamps[0]} .. {data.timestamps[-1]}).")
print(f"The default 90/10 chronological split keeps the first {len(train)} months")
print(f"for training and holds out the last {len(test)} "
      f"({test.timestamps[0]} .. {test.timestamps[-1]}).")
