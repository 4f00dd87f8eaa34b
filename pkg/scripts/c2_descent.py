#!/usr/bin/env python3
"""Descend from the C2 line to its quotient and print the induced spectrum map.

The involution x -> -x on the affine line has invariant ring k[x^2]. This
script prints the invariant dimensions against the Molien series, the site
map induced by the invariant generators, and the verdicts of the induced
map on spectra (bijective, closed, orbit sites to quotient points).
"""

from ttkit.balmer import induced_site_map, induced_spc_map
from ttkit.corpus import c2_descent_model
from ttkit.equivariant import molien_dimensions


def main() -> int:
    model = c2_descent_model()
    pres = model.pres
    print(f"action: {model.name} on {model.act.ring.describe()}")
    print(f"invariant generators: "
          f"{', '.join(str(g) for g in pres.generators)}")
    dims = molien_dimensions(model.act, upto=6)
    print(f"invariant dims, degrees 0..6: {[int(d) for d in dims]}")
    print()

    site_map = induced_site_map(model.space_x, model.space_y,
                                list(pres.generators))
    for upstairs in model.space_x.labels():
        print(f"site {upstairs!r} -> {site_map[upstairs]!r}")
    if site_map != model.expected_site_map:
        print("site map disagrees with the orbit map")
        return 1
    print()

    report = induced_spc_map(site_map, model.datum_x, model.datum_y,
                             model.pullbacks, model.towers)
    print(report.describe())
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
