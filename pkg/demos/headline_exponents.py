"""Walk the graph lattice for four classes in R^7 and show where 10/3 comes from."""

from simplexcount.exponents import compute_bound
from simplexcount.graphs import key_string

res = compute_bound(4, 7, "unit")
print(f"bound for k=4, d=7: {res.value}")
print(f"empty graph inherits it: {res.headline_entry.note or res.headline_entry.provenance}")
print()
print("per-graph entries (graph key, exponent, provenance, maximising profile):")
for e in res.table.rows(4, 7, "unit"):
    print(f"  {key_string(e.graph):16s} {str(e.exponent):>5s}  {e.provenance:20s} {e.profile}")

diam = compute_bound(3, 5, "diameter")
print()
print(f"diameter-1 bound for k=3, d=5: {diam.value}")
