# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Parameter sweeps
#
# Runs the bundled presets through the experiment runner and plots the
# bottleneck SINR. Equivalent command line:
# `simulate --preset deployment --out results/deployment`.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from irsassoc.cli import emit, load_preset, run_experiment

# %% [markdown]
# ## Noise sweep with bounds

# %%
bounds_sweep = run_experiment(load_preset("bounds_sweep"))
x = [r.value for r in bounds_sweep.rows]
k = bounds_sweep.rows[0].min_user
fig, ax = plt.subplots()
for field, label in (("gamma", "average"), ("low", "lower bound"), ("up", "upper bound")):
    ax.plot(x, [10 * np.log10(getattr(r, field)[k]) for r in bounds_sweep.rows], marker="o", label=label)
ax.set_xlabel("noise power (dBm)")
ax.set_ylabel(f"SINR of user {k} (dB)")
ax.legend()
fig.savefig("bounds.png", dpi=120)

# %% [markdown]
# ## Distributed against co-located surfaces
#
# Sixteen IRSs either spread over the arc or stacked at a single site.

# %%
deployment = run_experiment(load_preset("deployment"))
for value in (16, 32, 64):
    d = deployment.select(value=value, deployment="distributed")[0].min_sinr
    c = deployment.select(value=value, deployment="centralized")[0].min_sinr
    print(f"N={value:3d}: distributed {10 * np.log10(d):7.2f} dB, centralized {10 * np.log10(c):7.2f} dB, ratio {d / c:.2f}")

print(emit(deployment, "deployment_out", ("csv",)))
