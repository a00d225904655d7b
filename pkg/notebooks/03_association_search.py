# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Association search
#
# Exhaustive search, successive refinement, the nearest-user rule and a
# random draw on the reference deployment.

# %%
import time

import numpy as np

from irsassoc import (
    SinrEvaluator,
    SystemDims,
    build_arc_scenario,
    codebook,
    exhaustive_search,
    nearest_rule,
    random_assignment,
    successive_refinement,
)

# %% [markdown]
# The codebook for two users and two IRSs, in enumeration order.

# %%
for m in codebook(2, 2):
    print(m.lam, "\n")

# %%
scn = build_arc_scenario(SystemDims(M=16, N_x=4, N_z=4, L=8, K=4))
ev = SinrEvaluator(scn)

t0 = time.perf_counter()
ex = exhaustive_search(scn, evaluator=ev)
print(f"exhaustive: {ex.evaluations} candidates in {time.perf_counter() - t0:.1f} s")

sr = successive_refinement(scn, evaluator=ev)
near = nearest_rule(scn)
rand = random_assignment(4, 8, seed=7)

for name, users in [("exhaustive", ex.assoc.users), ("SR", sr.assoc.users), ("nearest", near.users), ("random", rand.users)]:
    g = ev(users)
    print(f"{name:10s} {users.tolist()}  min SINR {10 * np.log10(g.min()):7.3f} dB")

# %% [markdown]
# SR starts at the nearest rule and moves one IRS per round towards the
# bottleneck user; the minimum SINR rises every round.

# %%
print(np.round(10 * np.log10(sr.trajectory), 3))
