"""
Facets of a small local polytope
================================

Enumerate the deterministic strategies of the scenario where two parties
measure two settings and a third measures one, then convert that vertex list
to facets with exact double description.
"""

from bellpoly import BellScenario, build_catalog, enumerate_vertices, to_correlator_form

scenario = BellScenario((2, 2, 1))
print("scenario", scenario, "dimension", scenario.dimension)

# each vertex is a 0/1 vector of marginal and joint probabilities
vertices = enumerate_vertices(scenario)
print(len(vertices), "vertices; last:", [int(c) for c in vertices[-1].coordinates])

# facets, grouped into symmetry classes
catalog = build_catalog(scenario)
print(catalog.summary())

# a nontrivial facet written with correlators
(cls,) = catalog.nontrivial_classes

print("class representative:", to_correlator_form(cls.representative).integer_folded())

# adding single-setting parties doubles the count each time
for settings in [(2, 2, 1, 1), (2, 2, 1, 1, 1)]:
    print(build_catalog(BellScenario(settings)).summary())
