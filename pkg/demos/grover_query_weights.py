"""Per-query weight accounting for the amplitude-rotation loop.

Runs the search iteration at a few domain sizes, prints how the squared
amplitude on the marked branch grows query by query, and checks the exact
identity between the simulated average per-query cost and its closed form.
"""

import numpy as np

from vtsearch import (CostProfile, OracleSpec, average_query_cost,
                      closed_form_weights, lagrange_cos_sum, query_weights)


def main():
    for n in (4, 16, 64):
        oracle = OracleSpec(size=n, marked=frozenset({0}))
        table = query_weights(oracle)
        closed = closed_form_weights(n, 0)
        print(f"\nN = {n}: {table.num_queries} queries")
        print(f"  marked-branch weights: "
              f"{np.array2string(table.q[0], precision=4)}")
        print(f"  column-sum residual:   {table.column_sum_residual():.2e}")
        print(f"  closed-form residual:  {np.max(np.abs(table.q - closed)):.2e}")

        # a lopsided cost profile: the marked input is expensive to check
        times = np.ones(n)
        times[0] = 10.0
        acc = average_query_cost(oracle, CostProfile.deterministic(times))
        print(f"  avg cost/query: {acc.numeric:.6f} "
              f"(midpoint {acc.midpoint:.4f} + correction {acc.correction:+.4f})")
        print(f"  identity residual: {abs(acc.numeric - acc.closed_form):.2e}")

        if n >= 16:
            s, cap = lagrange_cos_sum(n)
            print(f"  oscillatory sum {s:+.4f} within bound {cap:.4f}")


if __name__ == "__main__":
    main()
