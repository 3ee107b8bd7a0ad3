"""Two scenarios where worst-case elicitation does not equal the worst scenario value.

Squared error elicits the mean. Under the min-over-scenarios expected score, the
minimizer picks whichever scenario has the smaller variance around ``y``, which
need not be the scenario with the largest loss.
"""

from riskcomb import FiniteProbSpace, SquaredError, elicit, worst_case_elicitation

space = FiniteProbSpace.uniform(2)
X = space.position([0.0, 10.0])
Q1 = space.scenario([0.5, 0.5])
Q2 = space.scenario([0.1, 0.9])

S = SquaredError()
per = [elicit(S, X, Q) for Q in (Q1, Q2)]
wc = worst_case_elicitation(S, X, [Q1, Q2])
print(f"per scenario:        {per}")
print(f"max over scenarios:  {max(per)}")
print(f"worst-case elicited: {wc.value:.6f}  (argmin y = {wc.argmin:.6f}, branch {wc.branch})")
print(f"agree: {wc.agrees}")
