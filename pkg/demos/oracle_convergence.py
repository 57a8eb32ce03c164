"""How close is the epsilon-net to the exact distance?

The net only walks between samples on edges, so it over-estimates; halving
epsilon nests the samples and the estimate can only go down. The kernel
distance from the shortest path map is the limit.
"""

import numpy as np

from cat0 import Vertex, build_spm
from cat0.oracle import EpsilonNet, generate_instance
from cat0.query import distance

K = generate_instance("curved", 100, seed=4)
diam = K.edge_graph_diameter()
src = Vertex(0)
targets = [Vertex(v) for v in (10, 40, 70, 99)]
m = build_spm(K, src)
exact = np.array([distance(m, t) for t in targets])
print("kernel distances:", np.round(exact, 6))

for f in (1, 2, 4, 8, 16):
    eps = 0.01 * diam / f
    net = EpsilonNet(K, eps)
    d = net.distances([src], targets)[0]
    print("eps = %.5f  samples %6d  worst relative gap %.2e" % (eps, net.n_samples, ((d - exact) / exact).max()))
