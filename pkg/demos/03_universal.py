"""A universal type space for a random family.

Draws three type spaces over the same two states, builds the type space
that every member maps into, and prints each member's morphism together
with the search that certifies it is the only one.
"""
import random

from typeframes import random_typespace, universal_typespace, validate_typespace

rng = random.Random(2024)
fam = [random_typespace(rng, 2, [rng.randint(1, 2), rng.randint(1, 2)], discrete_states=True)
       for _ in range(3)]
res = universal_typespace(fam[0].states, fam)

print("universal space:", [len(t) for t in res.space.types], "types per agent;",
      "valid:", validate_typespace(res.space).ok)
for k, (mor, rep, cert) in enumerate(zip(res.morphisms, res.reports, res.uniqueness_certificates)):
    print(f"member {k}: verified={rep.ok}; {cert.describe()}")
    for i, fi in enumerate(mor.maps, 1):
        print(f"   agent {i}: " + ", ".join(f"{u} -> {len(v)}-world class" for u, v in fi.items()))
