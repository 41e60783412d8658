import sys

from nanoshuttle.schemas import BoxGeometry
from nanoshuttle.spectrum import enumerate_levels

cutoff = float(sys.argv[1]) if len(sys.argv) > 1 else 450.0
table = enumerate_levels(BoxGeometry(), cutoff)

print(f"{'E (meV)':>10}  {'g':>2}  {'N':>4}  states")
for level in table:
    n = level.occupation_N if level.occupation_N is not None else "mix"
    print(f"{level.energy:>10.3f}  {level.degeneracy:>2}  {n!s:>4}  {level.label}")
print(f"\n{len(table)} niveles hasta {cutoff:g} meV")
