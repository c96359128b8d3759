"""With-replacement samplers, and why picking ROOT edges by raw weight is wrong.

The demo graph has three equally weighted dependency trees: two attach ROOT
to word A, one attaches ROOT to C.  A sampler that picks the ROOT edge by
raw weight splits 50/50 between A and C, so it under-samples the A-trees.
Sampling the ROOT edge from its exact marginal (2/3 vs 1/3) fixes this, as
does rejection from the unconstrained spanning-tree proposal.
"""

from collections import Counter

import numpy as np

from treesample import WilsonSampler, bias_demo_graph, colbourn_sample, enumerate_trees, initial_state

g = bias_demo_graph()
dist = enumerate_trees(g)
print("dependency trees and exact probabilities:")
for heads, p in sorted(dist.dependency_table().items()):
    print(f"  heads={list(heads)}  p={p:.4f}")

rng = np.random.default_rng(7)
sampler = WilsonSampler(g)
n = 60_000

print(f"\nempirical tree frequencies over {n} draws:")
print(f"{'tree':>12} {'exact':>7} {'rc(biased)':>11} {'marginal':>9} {'reject':>7} {'colbourn':>9}")
runs = {
    "rc(biased)": lambda: sampler.rc(rng).heads,
    "marginal": lambda: sampler.marginal(rng).heads,
    "reject": lambda: sampler.reject(rng).heads,
    "colbourn": lambda: colbourn_sample(g, rng, initial=init),
}
init = initial_state(g)
counts = {name: Counter(tuple(int(h) for h in draw()) for _ in range(n)) for name, draw in runs.items()}
for heads, p in sorted(dist.dependency_table().items()):
    row = " ".join(f"{counts[name][heads] / n:>{w}.4f}" for name, w in
                   [("rc(biased)", 11), ("marginal", 9), ("reject", 7), ("colbourn", 9)])
    print(f"{str(list(heads)):>12} {p:>7.4f} {row}")

print("\nthe biased sampler puts ~1/4 on each A-tree instead of 1/3;")
print("both unbiased samplers and the ancestral sampler match the exact column.")

attempts = [sampler.reject(rng).attempts for _ in range(20_000)]
print(f"\nrejection sampler attempts: mean {np.mean(attempts):.3f} "
      f"(exact Z_T/Z_D = {dist.Z_T / dist.Z_D:.3f})")
