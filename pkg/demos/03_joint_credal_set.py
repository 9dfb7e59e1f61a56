"""
Vertices of a joint credal set
==============================

Under the nondescendants policy the joint credal set of the two roots is
a polytope in the 4-atom simplex. Besides the four product distributions
it has extra vertices that the type-1 extension never visits, which is
why the natural extension is wider.
"""

from fractions import Fraction

from qbnet import Query, load_example
from qbnet.geometry import enumerate_vertices
from qbnet.infer import generate_constraints, reduce_theorem2

model = load_example("fig1")
system = generate_constraints(model, "nondescendants", ["F", "B"])
vertices = enumerate_vertices(system.polytope())

print("atoms:", system.indexer.labels())
red = reduce_theorem2(model, Query(("D", "d"), {"L": "l"}))
for v in vertices:
    pf = v[0] + v[1]
    pb = v[0] + v[2]
    product = v[0] == pf * pb
    ratio = sum(c * x for c, x in zip(red.numerator, v)) / sum(d * x for d, x in zip(red.denominator, v))
    print(f"{[str(x) for x in v]!s:42} product={product!s:5} p(d|l)={float(ratio):.4f}")

# floating mode gives the same set up to rounding
approx = enumerate_vertices(system.polytope(), exact=False)
assert len(approx) == len(vertices)
assert max(abs(a - float(b)) for p, q in zip(approx, vertices) for a, b in zip(p, q)) < 1e-12
print("interior point check:", system.polytope().contains((Fraction(1, 4),) * 4))
