"""
Writing a network file
======================

Networks are JSON documents. Local specifications can be point tables,
vertex lists, intervals or linear constraints. Validation reports every
broken invariant before any solving happens.
"""

from qbnet import Query
from qbnet.errors import UnsupportedSpecification, ValidationError
from qbnet.infer import natural_bounds, type1_bounds
from qbnet.model import network_from_dict, serialize_network

doc = {
    "variables": [
        {"name": "Rain", "values": ["yes", "no"]},
        {"name": "Sprinkler", "values": ["on", "off"]},
        {"name": "Wet", "values": ["wet", "dry"]},
    ],
    "edges": [["Rain", "Wet"], ["Sprinkler", "Wet"]],
    "local": {
        "Rain": {"type": "interval", "rows": {"": {"lower": ["1/5", "3/5"], "upper": ["2/5", "4/5"]}}},
        "Sprinkler": {"type": "vertices", "rows": {"": [[0.3, 0.7], [0.5, 0.5]]}},
        "Wet": {"type": "point", "rows": {
            "Rain=yes,Sprinkler=on": [0.99, 0.01], "Rain=yes,Sprinkler=off": [0.9, 0.1],
            "Rain=no,Sprinkler=on": [0.8, 0.2], "Rain=no,Sprinkler=off": [0.05, 0.95]}},
    },
    "irrelevance": "nondescendants",
}
model = network_from_dict(doc)
q = Query(("Rain", "yes"), {"Wet": "wet"})
t1 = type1_bounds(model, q)
print(f"type-1 p(rain | wet) in [{float(t1.lower):.4f}, {float(t1.upper):.4f}]")
try:
    natural_bounds(model, q)
except UnsupportedSpecification as exc:  # vertex-list records have no row form
    print("natural extension:", type(exc).__name__, exc)

print(serialize_network(model)[:200], "...")

doc["local"]["Wet"]["rows"]["Rain=no,Sprinkler=off"] = [0.5, 0.6]
try:
    network_from_dict(doc)
except ValidationError as exc:
    for d in exc.diagnostics:
        print("diagnostic:", d.to_dict())
