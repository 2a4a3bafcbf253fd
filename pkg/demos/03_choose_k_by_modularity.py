"""Choose the number of latent classes by maximizing averaged modularity.

Each layer's Gram matrix is a weighted network on the subjects; a candidate
partition earns the layer-averaged Newman-Girvan-style modularity. Sweeping
the class count and keeping the argmax recovers K without supervision.
"""

from multilca import (
    population_response,
    sample_item_params,
    sample_partition,
    sample_responses,
    select_k,
    stream,
)

SEED = 33
N, J, K_TRUE, L, M, RHO = 600, 120, 3, 10, 5, 0.2

truth = sample_partition(N, K_TRUE, stream(SEED, "partition"))
thetas = sample_item_params(J, K_TRUE, L, RHO, M, stream(SEED, "items"))
tensor = sample_responses(population_response(truth, thetas), M, stream(SEED, "responses"))

for method in ("LCA-DSoG", "LCA-SoG"):
    curve = select_k(tensor, method, k_min=1, k_max=6, rng=stream(SEED, "select", method))
    print(f"{method}: modularity curve")
    for k, q in zip(curve.k_values, curve.q_values):
        marker = "  <-- selected" if k == curve.k_star else ""
        print(f"  k={k}: Q = {q:+.5f}{marker}")
    print(f"  true K = {K_TRUE}, selected = {curve.k_star}\n")
