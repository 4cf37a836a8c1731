"""From type spaces to models and back.

A type space becomes a model whose worlds are its product points; factoring
the model recovers the type space.  A second model shows the factoring
refusing when a coarse threshold set leaves a type's belief undetermined.
"""
from pathlib import Path

from typeframes import (
    DENSE,
    NonUniqueBeliefExtension,
    description_partition,
    interpreted_to_model,
    model_to_typespace,
    read_document,
    round_trip,
)

DATA = Path(__file__).parent / "data"

its = read_document(DATA / "example_space.json").value
m = interpreted_to_model(its)
print("worlds of the induced model:", m.worlds.carrier)

rt = round_trip(its)
print("round trip is a bijective type morphism:", rt.bijective)
print("morphism:", rt.morphism.maps)

doc = read_document(DATA / "ambiguous.json")
dp = description_partition(doc.value, doc.thresholds)
print("\nclasses under", doc.thresholds, ":", [list(b) for b in dp.full.blocks])
try:
    model_to_typespace(doc.value, doc.thresholds)
except NonUniqueBeliefExtension as exc:
    print("refused:", exc)
fts = model_to_typespace(doc.value, DENSE)
print("with dense thresholds: states", fts.space.states.carrier, "types", fts.space.types[0].carrier)
