"""
Type-1 bounds on a small diagnosis network
==========================================

Two root causes F and B have only interval probabilities. Every other node
carries a single conditional table. The type-1 extension looks at every
combination of extreme points of the local credal sets.
"""

from qbnet import Query, load_example
from qbnet.infer import requisite_nodes, type1_bounds

model = load_example("fig1")
print("nodes in topological order:", model.order())
print("credal nodes:", model.credal_nodes())

# p(d | l): F and B each contribute two extreme points, so four joints are visited
query = Query(("D", "d"), {"L": "l"})
res = type1_bounds(model, query)
print(f"p(d | l) in [{float(res.lower):.5f}, {float(res.upper):.5f}]  exact: {res.lower}, {res.upper}")
print("combinations visited:", res.info["combinations"])
print("lower bound reached at:", res.info["argmin"])

# only the tables that can influence the answer are varied
print("requisite nodes for p(l | f):", sorted(requisite_nodes(model, "L", {"F"})))
print("p(l | f):", type1_bounds(model, Query(("L", "l"), {"F": "f"})).lower)
