"""
Maximal violations by see-saw
=============================

For fixed state the expectation is affine in each Bloch vector, so we can
update one party at a time exactly.  Many random starts guard against local
optima.
"""

from bellpoly import best_of, make_state, multistart_max, named_inequality

facet = [named_inequality(n) for n in ("I1", "I2", "I3")]

res = multistart_max(named_inequality("I3"), make_state("w"), restarts=32, seed=0)
print(f"W state, I3: {res.value:.4f} after {res.iterations} sweeps")

for spec in ["ghz", "ghz-class", "wclass-a", "wclass-b"]:
    b = best_of(facet, make_state(spec), restarts=32)
    print(f"{spec:10s} best={b.value:.4f} via {b.argmax}")

# only one inequality sees the entangled pair of a biseparable state
b = best_of(facet, make_state("bisep:pair=23"), restarts=16)
print("bisep23:", {k: round(v, 4) for k, v in b.values.items()})
