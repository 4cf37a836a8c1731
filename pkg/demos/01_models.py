"""Graded belief in a small model.

Loads a two-world model where the agent is undecided between the worlds,
evaluates a few formulas, and shows why a model whose beliefs point away
from themselves fails the introspection check.
"""
from pathlib import Path

from typeframes import parse_formula, read_document, truth_set, validate_frame

DATA = Path(__file__).parent / "data"

m = read_document(DATA / "two_world.json").value
for text in ["p", "B{1,1/2} p", "B{1,3/4} p", "B{1,1} (p | !p)", "B{1,1/2} p -> B{1,1} B{1,1/2} p"]:
    f = parse_formula(text)
    print(f"{text:34} holds at {sorted(truth_set(m, f).points)}")

swapped = read_document(DATA / "swapped.json").value
report = validate_frame(swapped.frame)
print("\nswapped model validates:", report.ok)
for v in report.violations:
    print("  ", v)
