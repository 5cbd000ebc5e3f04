#!/usr/bin/env python3
"""Regenerate knot_table.json from spherogram/SnapPy.

PD codes come from spherogram's bundled tables (KnotAtlas convention, shifted
to 1-based arcs). Braid words are short representatives; each one is checked
by identifying the exterior of its closure against the census, so a typo in
the list below fails loudly instead of landing in the asset.

    pip install snappy
    python3 derive_knot_table.py > knot_table.json
"""
import json
import warnings

warnings.filterwarnings("ignore")

import snappy  # noqa: E402
import spherogram  # noqa: E402

BRAIDS = {
    "3_1": [1, 1, 1],
    "4_1": [1, -2, 1, -2],
    "5_1": [1, 1, 1, 1, 1],
    "5_2": [1, 1, 1, 2, -1, 2],
    "6_1": [1, 1, 2, -1, -3, 2, -3],
    "6_2": [1, 1, 1, -2, 1, -2],
    "6_3": [1, 1, -2, 1, -2, -2],
    "7_4": [1, 1, 2, -1, 2, 2, 3, -2, 3],
    "7_7": [1, -2, 1, -2, 3, -2, 3],
    "8_8": [1, 1, 1, 2, -1, -3, 2, -3, -3],
    "8_9": [1, 1, 1, -2, 1, -2, -2, -2],
    "8_20": [1, 1, 1, -2, -1, -1, -1, -2],
    "9_46": [-1, 2, -3, -2, -2, -1, 2, -3, 2],
    "granny": [1, 1, 1, 2, 2, 2],
    "square": [1, 1, 1, -2, -2, -2],
}

# Torus and composite knots are not hyperbolic; their words are the
# standard ones and are checked through the Alexander polynomial instead.
NON_HYPERBOLIC = {"3_1", "5_1", "granny", "square"}


def link_for(name):
    if name == "granny":
        t = snappy.Link("3_1")
        return t.connected_sum(snappy.Link("3_1"))
    if name == "square":
        t = snappy.Link("3_1")
        return t.connected_sum(snappy.Link("3_1").mirror())
    return snappy.Link(name)


def check_braid(name, word):
    closure = spherogram.ClosedBraid(word)
    assert len(closure.link_components) == 1, name
    if name in NON_HYPERBOLIC:
        return
    ids = [str(m).split("(")[0] for m in closure.exterior().identify()]
    assert name in ids, (name, ids)


def main():
    knots = []
    for name, word in BRAIDS.items():
        check_braid(name, word)
        link = link_for(name)
        pd = [[a + 1 for a in x] for x in link.PD_code()]
        k = max(abs(g) for g in word) + 1
        knots.append(
            {
                "name": name,
                "pd": pd,
                "braid": {"k": k, "word": word},
                "bridge_n": int(link.bridge_upper_bound()),
            }
        )
    print(json.dumps({"version": 1, "knots": knots}, indent=1))


if __name__ == "__main__":
    main()
