"""
Relabelings and facet classes
=============================

Outcome flips, setting swaps and party exchanges map facets to facets.
"""

from bellpoly import BellScenario, build_catalog, symmetry_group
from bellpoly.facets import group_order, orbit

scenario = BellScenario((2, 2, 1))
gens = symmetry_group(scenario)
print(len(gens), "generators, group order", group_order(scenario))

catalog = build_catalog(scenario)
facets = set(catalog.facets)

# every generator permutes the facet list
print("catalog invariant:", all({g.apply(f) for f in facets} == facets for g in gens))

# orbit of one nontrivial facet = its class
(cls,) = catalog.nontrivial_classes
print("orbit size:", len(orbit(cls.representative, gens)))
