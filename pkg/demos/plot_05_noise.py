"""
Noise thresholds
================

Mix a pure state with noise and find the smallest weight ``p`` of the pure
part that still violates.  For white noise the answer is ``bound / max``.
"""

from bellpoly import NoiseFamily, make_state, named_inequality, noise_threshold

facet = [named_inequality(n) for n in ("I1", "I2", "I3")]
mermin = named_inequality("Mermin")

for name, noise in [("ghz", "white"), ("w", "white"), ("ghz", "colored")]:
    fam = NoiseFamily(make_state(name), noise)
    a = noise_threshold(fam, facet, restarts=8)
    b = noise_threshold(fam, mermin, restarts=8)
    print(f"{name}/{noise}: facet p*={a.p:.3f}  Mermin p*={b.p:.3f}")
