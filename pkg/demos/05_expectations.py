"""
Lower and upper expectations
============================

Bounds on the expectation of a function of one variable, for example a
payoff of +1 when D holds and -1 otherwise. Both extensions are shown.
"""

from qbnet import load_example
from qbnet.infer import expectation_bounds

model = load_example("fig1")
payoff = {"d": 1, "dc": -1}

for method in ("type1", "natural"):
    res = expectation_bounds(model, "D", payoff, {"L": "l"}, method=method)
    print(f"{method:8} E[payoff | l] in [{float(res.lower):+.6f}, {float(res.upper):+.6f}]")

# without irrelevance the answer is the range of the payoff
res = expectation_bounds(model, "D", payoff, {"L": "l"}, policy="none")
print("policy none:", res.lower, res.upper)
